// Copyright 2026 The eprsynth Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eprsynth/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "eprsynth/error.hpp"

namespace eprsynth::fitting {

namespace {

using gaussian::Branch;
constexpr double kPi = std::numbers::pi;

constexpr std::size_t kMinBins = 8;
constexpr std::size_t kMaxIterations = 1000;
constexpr double kGradientTol = 1e-8;
constexpr double kDegenerateTol = 1e-10;

// Abscissae are mapped to tau = (t - t_mid) / t_scale in [-1, 1] so the
// frequency parameter is O(1) whatever the sample-index scale.
struct Problem {
    Model model = Model::SingleMode;
    std::vector<double> tau;
    std::vector<double> value;
    std::vector<double> sign; ///< +1 difference, -1 sum, 0 single-mode
    double t_mid = 0.0;
    double t_scale = 1.0;
};

// Optimizer coordinates: softplus^-1(zeta), logit(eta), phase at tau = 0,
// phase advance per unit tau.
using Params = Eigen::Vector4d;

double softplus(double a) { return a > 30.0 ? a : std::log1p(std::exp(a)); }
double logistic(double b) { return 1.0 / (1.0 + std::exp(-b)); }
double inv_softplus(double z) { return z > 30.0 ? z : std::log(std::expm1(z)); }
double logit(double e) { return std::log(e / (1.0 - e)); }

struct Natural {
    double zeta, eta, phase, omega;
};

Natural natural(const Params &q) {
    return {softplus(q(0)), logistic(q(1)), q(2), q(3)};
}

// Value and derivatives w.r.t. (zeta, eta, phase, omega) at one point.
double point_model(Model model, double sign, const Natural &n, double tau,
                   Eigen::Vector4d *grad) {
    const double c = std::cosh(2 * n.zeta);
    const double s = std::sinh(2 * n.zeta);
    const double th = n.phase + n.omega * tau;
    if (model == Model::SingleMode) {
        const double cs = std::cos(2 * th);
        if (grad != nullptr) {
            const double dth = n.eta * s * std::sin(2 * th);
            *grad << n.eta * (s - cs * c), 0.5 * (c - cs * s) - 0.5, dth, dth * tau;
        }
        return 0.5 * n.eta * (c - cs * s) + 0.5 * (1.0 - n.eta);
    }
    const double cs = std::cos(th);
    if (grad != nullptr) {
        const double dth = -0.5 * n.eta * sign * std::sin(th) * s;
        *grad << n.eta * (s + sign * cs * c), 0.5 * (c + sign * cs * s) - 0.5, dth,
            dth * tau;
    }
    return 0.5 * n.eta * (c + sign * cs * s) + 0.5 * (1.0 - n.eta);
}

// Residuals and Jacobian in optimizer coordinates.
double evaluate(const Problem &p, const Params &q, Eigen::VectorXd &r,
                Eigen::MatrixXd *jac, bool natural_jacobian = false) {
    const Natural n = natural(q);
    const auto m = static_cast<Eigen::Index>(p.tau.size());
    r.resize(m);
    if (jac != nullptr) {
        jac->resize(m, 4);
    }
    const double dz = logistic(q(0));
    const double de = n.eta * (1.0 - n.eta);
    Eigen::Vector4d g;
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double v = point_model(p.model, p.sign[k], n, p.tau[k],
                                     jac != nullptr ? &g : nullptr);
        r(i) = v - p.value[k];
        if (jac != nullptr) {
            if (!natural_jacobian) {
                g(0) *= dz;
                g(1) *= de;
            }
            jac->row(i) = g.transpose();
        }
    }
    return r.squaredNorm();
}

Problem make_problem(Model model, const homodyne::VarianceTrace &a,
                     const homodyne::VarianceTrace *b) {
    Problem p;
    p.model = model;
    const auto &bins = a.bins;
    const double t_min = bins.front().center_index;
    const double t_max = bins.back().center_index;
    p.t_mid = 0.5 * (t_min + t_max);
    p.t_scale = 0.5 * (t_max - t_min);
    if (!(p.t_scale > 0.0)) {
        fail(ErrorKind::IllPosedFit, "trace bins do not span a range of phases");
    }
    auto push = [&](const homodyne::VarianceTrace &tr, double sign) {
        for (const auto &bin : tr.bins) {
            require(std::isfinite(bin.variance) && std::isfinite(bin.center_index),
                    "trace contains non-finite values");
            p.tau.push_back((bin.center_index - p.t_mid) / p.t_scale);
            p.value.push_back(bin.variance);
            p.sign.push_back(sign);
        }
    };
    if (model == Model::SingleMode) {
        push(a, 0.0);
    } else {
        push(a, -1.0); // sum
        push(*b, 1.0); // difference
    }
    return p;
}

// Best harmonic c + sign (a cos(w tau) + b sin(w tau)) at a fixed angular
// frequency, by linear least squares. Single-mode points use sign +1.
struct Harmonic {
    double mean = 0.0;
    double a = 0.0;
    double b = 0.0;
    double rss = 0.0;
};

Harmonic fit_harmonic(const Problem &p, double omega) {
    const auto m = static_cast<Eigen::Index>(p.tau.size());
    Eigen::MatrixXd design(m, 3);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double sg = p.model == Model::SingleMode ? 1.0 : p.sign[k];
        design(i, 0) = 1.0;
        design(i, 1) = sg * std::cos(omega * p.tau[k]);
        design(i, 2) = sg * std::sin(omega * p.tau[k]);
        y(i) = p.value[k];
    }
    const Eigen::Vector3d c = design.colPivHouseholderQr().solve(y);
    return {c(0), c(1), c(2), (design * c - y).squaredNorm()};
}

// Frequency with the smallest harmonic residual: coarse grid up to the
// Nyquist limit of the bin spacing, then golden-section refinement.
double best_frequency(const Problem &p, std::size_t n_grid_points) {
    const double n = static_cast<double>(n_grid_points);
    const double lo = 0.25 * kPi;
    const double hi = 0.5 * kPi * (n - 1.0);
    const double step = kPi / 16.0;
    double best = lo;
    double best_rss = std::numeric_limits<double>::infinity();
    for (double w = lo; w <= hi; w += step) {
        const double r = fit_harmonic(p, w).rss;
        if (r < best_rss) {
            best_rss = r;
            best = w;
        }
    }
    double a = std::max(lo, best - step);
    double b = best + step;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80; ++it) {
        const double c = b - gr * (b - a);
        const double d = a + gr * (b - a);
        if (fit_harmonic(p, c).rss < fit_harmonic(p, d).rss) {
            b = d;
        } else {
            a = c;
        }
    }
    return 0.5 * (a + b);
}

struct Initial {
    Params q;
    double amplitude = 0.0;
    double mean = 0.0;
};

// mean = (eta (cosh 2z - 1) + 1)/2 and amplitude = eta sinh(2z)/2 fix
// tanh(z) = (2 mean - 1) / (2 amplitude).
Initial initial_guess(const Problem &p, std::size_t bins_per_trace) {
    const double omega_obs = best_frequency(p, bins_per_trace);
    const Harmonic h = fit_harmonic(p, omega_obs);

    Initial init;
    init.mean = h.mean;
    init.amplitude = std::hypot(h.a, h.b);
    if (init.amplitude <= 1e-12 * std::max(1.0, std::abs(init.mean))) {
        init.amplitude = 0.0;
        return init;
    }
    if (omega_obs * 2.0 < 2.0 * kPi * 0.95) {
        fail(ErrorKind::IllPosedFit,
             "trace covers less than one full period of the variance oscillation");
    }

    double ratio = (2.0 * init.mean - 1.0) / (2.0 * init.amplitude);
    ratio = std::clamp(ratio, 0.05, 0.99);
    const double zeta = std::atanh(ratio);
    const double eta = std::clamp(2.0 * init.amplitude / std::sinh(2.0 * zeta), 0.01, 0.99);
    double phase = 0.0;
    double omega = 0.0;
    if (p.model == Model::SingleMode) {
        // mean - A cos(w tau + 2 phase) = mean - A cos(2 phase) cos(w tau) + A sin(2 phase) sin(w tau).
        phase = 0.5 * std::atan2(h.b, -h.a);
        omega = 0.5 * omega_obs;
    } else {
        // Difference branch: mean + A cos(w tau + phase).
        phase = std::atan2(-h.b, h.a);
        omega = omega_obs;
    }
    init.q << inv_softplus(zeta), logit(eta), phase, omega;
    return init;
}

struct LmOutcome {
    Params q;
    double rss = 0.0;
    double gradient = 0.0;
    std::size_t iterations = 0;
};

LmOutcome levenberg_marquardt(const Problem &p, Params q) {
    Eigen::VectorXd r;
    Eigen::MatrixXd j;
    double rss = evaluate(p, q, r, &j);
    double lambda = 1e-3;
    LmOutcome out;
    for (; out.iterations < kMaxIterations; ++out.iterations) {
        const Eigen::Vector4d g = j.transpose() * r;
        out.gradient = g.cwiseAbs().maxCoeff();
        if (out.gradient <= 1e-14) {
            break;
        }
        const Eigen::Matrix4d a = j.transpose() * j;
        Eigen::Vector4d diag = a.diagonal().cwiseMax(1e-12);
        bool improved = false;
        while (lambda < 1e16) {
            Eigen::Matrix4d damped = a;
            damped.diagonal() += lambda * diag;
            const Eigen::Vector4d step = damped.ldlt().solve(-g);
            const Params trial = q + step;
            Eigen::VectorXd r_trial;
            const double rss_trial = evaluate(p, trial, r_trial, nullptr);
            if (std::isfinite(rss_trial) && rss_trial < rss) {
                const double drop = rss - rss_trial;
                q = trial;
                rss = evaluate(p, q, r, &j);
                lambda = std::max(lambda / 3.0, 1e-15);
                improved = true;
                if (drop <= 1e-16 * rss && step.cwiseAbs().maxCoeff() <= 1e-13) {
                    lambda = 1e16; // stalled at rounding level
                }
                break;
            }
            lambda *= 4.0;
        }
        if (!improved || lambda >= 1e16) {
            const Eigen::Vector4d g_final = j.transpose() * r;
            out.gradient = g_final.cwiseAbs().maxCoeff();
            break;
        }
    }
    out.q = q;
    out.rss = rss;
    return out;
}

bool is_degenerate(const Problem &p, const Params &q) {
    Eigen::VectorXd r;
    Eigen::MatrixXd j;
    evaluate(p, q, r, &j, true);
    Eigen::Vector4d norms = j.colwise().norm().transpose();
    const double scale = std::sqrt(static_cast<double>(j.rows()));
    if ((norms.array() <= kDegenerateTol * scale).any()) {
        return true;
    }
    const Eigen::MatrixXd unit = j * norms.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(unit.transpose() * unit);
    return es.eigenvalues()(0) <= kDegenerateTol * es.eigenvalues()(3);
}

double wrap(double angle, double period) {
    double w = std::fmod(angle, period);
    if (w < 0.0) {
        w += period;
    }
    if (w >= period) {
        w = 0.0;
    }
    return w;
}

FitResult finalize(const Problem &p, const LmOutcome &lm,
                   const homodyne::VarianceTrace &first,
                   const homodyne::VarianceTrace *second) {
    const Natural n = natural(lm.q);
    FitResult fit;
    fit.model = p.model;
    fit.zeta = n.zeta;
    fit.eta = n.eta;
    double rate = n.omega / p.t_scale;
    double theta0 = n.phase - rate * p.t_mid;
    if (rate < 0.0) {
        rate = -rate;
        theta0 = -theta0;
    }
    fit.rate = rate;
    fit.theta0 = wrap(theta0, p.model == Model::SingleMode ? kPi : 2.0 * kPi);
    fit.iterations = lm.iterations;
    fit.degenerate = is_degenerate(p, lm.q);
    fit.converged = lm.gradient <= kGradientTol && !fit.degenerate;
    if (p.model == Model::SingleMode) {
        fit.rss = residual_sum(fit, first);
    } else {
        fit.rss = residual_sum(fit, first, Branch::Sum) +
                  residual_sum(fit, *second, Branch::Difference);
    }
    return fit;
}

FitResult flat_result(Model model, const Problem &p,
                      const homodyne::VarianceTrace &first,
                      const homodyne::VarianceTrace *second) {
    (void)p;
    FitResult fit;
    fit.model = model;
    fit.zeta = 0.0;
    fit.eta = 1.0;
    fit.degenerate = true;
    fit.converged = false;
    fit.rss = residual_sum(fit, first, Branch::Sum);
    if (second != nullptr) {
        fit.rss += residual_sum(fit, *second, Branch::Difference);
    }
    return fit;
}

FitResult run(Model model, const homodyne::VarianceTrace &first,
              const homodyne::VarianceTrace *second) {
    const Problem p = make_problem(model, first, second);
    const Initial init = initial_guess(p, first.bins.size());
    if (init.amplitude <= 1e-12 * std::max(1.0, std::abs(init.mean))) {
        return flat_result(model, p, first, second);
    }
    const LmOutcome lm = levenberg_marquardt(p, init.q);
    return finalize(p, lm, first, second);
}

} // namespace

FitResult fit_single(const homodyne::VarianceTrace &trace) {
    if (trace.bins.size() < kMinBins) {
        fail(ErrorKind::IllPosedFit, "single-mode fit needs at least 8 bins");
    }
    return run(Model::SingleMode, trace, nullptr);
}

FitResult fit_epr(const homodyne::VarianceTrace &trace_sum,
                  const homodyne::VarianceTrace &trace_diff) {
    require(trace_sum.bins.size() == trace_diff.bins.size(),
            "sum and difference traces have different binning");
    for (std::size_t i = 0; i < trace_sum.bins.size(); ++i) {
        require(trace_sum.bins[i].center_index == trace_diff.bins[i].center_index,
                "sum and difference traces have different binning");
    }
    if (trace_sum.bins.size() < kMinBins) {
        fail(ErrorKind::IllPosedFit, "EPR fit needs at least 8 bins per trace");
    }
    return run(Model::Epr, trace_sum, &trace_diff);
}

double model_value(const FitResult &fit, double t, Branch branch) {
    const double theta = fit.theta0 + fit.rate * t;
    if (fit.model == Model::SingleMode) {
        return gaussian::closed_form::single_mode_variance(fit.zeta, fit.eta, theta);
    }
    return gaussian::closed_form::epr_variance(fit.zeta, fit.eta, theta, branch);
}

double residual_sum(const FitResult &fit, const homodyne::VarianceTrace &trace,
                    Branch branch) {
    double rss = 0.0;
    for (const auto &bin : trace.bins) {
        const double d = model_value(fit, bin.center_index, branch) - bin.variance;
        rss += d * d;
    }
    return rss;
}

Extrema model_extrema(const FitResult &fit) {
    const double e2 = std::exp(2.0 * fit.zeta);
    const double lo = 0.5 * fit.eta / e2 + 0.5 * (1.0 - fit.eta);
    const double hi = 0.5 * fit.eta * e2 + 0.5 * (1.0 - fit.eta);
    return {lo, hi};
}

double squeezing_db(double variance) {
    require(variance > 0.0 && std::isfinite(variance),
            "squeezing in dB needs a positive variance");
    return -10.0 * std::log10(variance / gaussian::kVacuumVariance);
}

std::string to_string(Model model) {
    return model == Model::SingleMode ? "single" : "epr";
}

} // namespace eprsynth::fitting
