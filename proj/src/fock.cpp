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

#include "eprsynth/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "eprsynth/error.hpp"

namespace eprsynth::fock {

namespace detail {
struct FockAccess {
    static FockDensityMatrix make(std::size_t n_modes, std::size_t cutoff,
                                  Eigen::MatrixXcd entries) {
        return FockDensityMatrix(n_modes, cutoff, std::move(entries));
    }
};
} // namespace detail

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kPositivityTol = 1e-10;
constexpr double kFamilyTol = 1e-9;
// Working cutoffs used when the truncated state is built from an exact
// construction; past these the tail is reported instead of resolved.
constexpr std::size_t kMaxWorkingCutoffOneMode = 200;
constexpr std::size_t kMaxWorkingCutoffTwoModes = 40;
constexpr double kWorkingTail = 1e-18;

using detail::FockAccess;

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd &m) {
    return 0.5 * (m + m.adjoint());
}

void check_mode(const FockDensityMatrix &rho, std::size_t mode) {
    if (mode >= rho.n_modes()) {
        fail(ErrorKind::InvalidArgument,
             "mode index " + std::to_string(mode) + " out of range for a " +
                 std::to_string(rho.n_modes()) + "-mode density matrix");
    }
}

// sqrt(C(n, k)) for n, k <= size via Pascal's triangle.
std::vector<std::vector<double>> sqrt_binomials(std::size_t size) {
    std::vector<std::vector<double>> c(size + 1);
    for (std::size_t n = 0; n <= size; ++n) {
        c[n].assign(n + 1, 1.0);
        for (std::size_t k = 1; k < n; ++k) {
            c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
        }
    }
    for (auto &row : c) {
        for (auto &v : row) {
            v = std::sqrt(v);
        }
    }
    return c;
}

// Photon number of `mode` for each flat basis index.
std::vector<std::size_t> occupation(std::size_t n_modes, std::size_t cutoff,
                                    std::size_t mode) {
    const std::size_t d = cutoff + 1;
    const std::size_t dim = basis_size(n_modes, cutoff);
    std::vector<std::size_t> occ(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        occ[i] = (n_modes == 1 || mode == 1) ? i % d : i / d;
    }
    return occ;
}

Eigen::MatrixXcd truncate(const Eigen::MatrixXcd &m, std::size_t n_modes,
                          std::size_t from_cutoff, std::size_t to_cutoff) {
    if (from_cutoff == to_cutoff) {
        return m;
    }
    const std::size_t dim = basis_size(n_modes, to_cutoff);
    std::vector<Eigen::Index> keep(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (n_modes == 1) {
            keep[i] = static_cast<Eigen::Index>(i);
        } else {
            const std::size_t n1 = i / (to_cutoff + 1);
            const std::size_t n2 = i % (to_cutoff + 1);
            keep[i] = static_cast<Eigen::Index>(n1 * (from_cutoff + 1) + n2);
        }
    }
    return m(keep, keep);
}

Eigen::VectorXd squeezed_amplitudes(double zeta, std::size_t cutoff) {
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cutoff + 1));
    const double t = std::tanh(zeta);
    double c = 1.0 / std::sqrt(std::cosh(zeta));
    psi(0) = c;
    for (std::size_t k = 1; 2 * k <= cutoff; ++k) {
        c *= -t * std::sqrt(static_cast<double>(2 * k - 1) / static_cast<double>(2 * k));
        psi(static_cast<Eigen::Index>(2 * k)) = c;
    }
    return psi;
}

Eigen::VectorXd tmsv_amplitudes(double zeta, std::size_t cutoff) {
    const std::size_t d = cutoff + 1;
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d * d));
    const double lambda = -std::tanh(zeta);
    double c = 1.0 / std::cosh(zeta);
    for (std::size_t n = 0; n <= cutoff; ++n) {
        psi(static_cast<Eigen::Index>(n * d + n)) = c;
        c *= lambda;
    }
    return psi;
}

FockDensityMatrix pure(std::size_t n_modes, std::size_t cutoff,
                       const Eigen::VectorXd &psi) {
    const Eigen::VectorXcd v = psi.cast<cplx>();
    return FockAccess::make(n_modes, cutoff, v * v.adjoint());
}

void check_zeta(double zeta) {
    require(std::isfinite(zeta) && zeta >= 0.0,
            "squeezing parameter must be finite and >= 0");
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

struct SingleModeFamily {
    double zeta = 0.0;
    double eta = 1.0;
    double angle = 0.0;
};

// Matches a 2x2 block to R(angle) [lossy x-squeezed vacuum] R(angle)^T.
SingleModeFamily match_single_mode(const Eigen::Matrix2d &block) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(block);
    const double vmin = es.eigenvalues()(0);
    const double vmax = es.eigenvalues()(1);
    const double s = vmin + vmax - 1.0;
    const double d = vmax - vmin;
    SingleModeFamily fam;
    if (d <= kFamilyTol) {
        if (std::abs(s) > kFamilyTol) {
            fail(ErrorKind::UnsupportedState,
                 "single-mode block is thermal, not a lossy squeezed vacuum");
        }
        return fam;
    }
    if (s >= d) {
        fail(ErrorKind::UnsupportedState,
             "single-mode block has no quadrature below vacuum noise");
    }
    fam.zeta = std::atanh(std::max(s, 0.0) / d);
    fam.eta = fam.zeta > 0.0 ? d / std::sinh(2.0 * fam.zeta) : 1.0;
    const Eigen::Vector2d u = es.eigenvectors().col(0);
    fam.angle = std::atan2(u(1), u(0));
    return fam;
}

gaussian::GaussianState single_mode_model(const SingleModeFamily &f) {
    auto g = gaussian::squeeze(gaussian::vacuum(1), 0, {f.zeta, 0.0});
    g = gaussian::loss(g, 0, {std::min(f.eta, 1.0)});
    return gaussian::phase_shift(g, 0, f.angle);
}

SingleModeFamily match_verified(const Eigen::Matrix2d &block) {
    const SingleModeFamily f = match_single_mode(block);
    if (f.eta > 1.0 + kFamilyTol ||
        (single_mode_model(f).cov() - block).cwiseAbs().maxCoeff() >
            kFamilyTol * (1.0 + block.cwiseAbs().maxCoeff())) {
        fail(ErrorKind::UnsupportedState,
             "single-mode block is not a lossy squeezed vacuum");
    }
    return f;
}

// Populations fall off like decay^n: tanh(zeta) per photon for a squeezed
// vacuum (even terms only), tanh(zeta)^2 for the two-mode squeezed vacuum.
std::size_t working_cutoff(double decay, std::size_t cutoff, std::size_t cap) {
    std::size_t n = cutoff;
    if (decay > 0.0) {
        // Smallest n with decay^(n+1) below the working tail.
        const double need = std::log(kWorkingTail) / std::log(decay) - 1.0;
        n = std::max(n, static_cast<std::size_t>(std::ceil(std::max(need, 0.0))));
    }
    return std::max(cutoff, std::min(n, cap));
}

double tail_bound(double decay, std::size_t working) {
    return std::pow(decay, static_cast<double>(working + 1));
}

std::pair<FockDensityMatrix, TruncationReport>
finish(const FockDensityMatrix &work, std::size_t cutoff, double tail_beyond) {
    const auto n_modes = work.n_modes();
    Eigen::MatrixXcd kept = truncate(work.entries(), n_modes, work.cutoff(), cutoff);
    TruncationReport report;
    report.trace_deficit = std::max(0.0, 1.0 - kept.trace().real());
    double largest = tail_beyond;
    for (std::size_t i = 0; i < work.dim(); ++i) {
        const std::size_t n1 = n_modes == 1 ? i : i / (work.cutoff() + 1);
        const std::size_t n2 = n_modes == 1 ? 0 : i % (work.cutoff() + 1);
        if (n1 > cutoff || n2 > cutoff) {
            largest = std::max(largest, work.entries()(static_cast<Eigen::Index>(i),
                                                       static_cast<Eigen::Index>(i))
                                            .real());
        }
    }
    report.largest_discarded_population = largest;
    return {FockAccess::make(n_modes, cutoff, std::move(kept)), report};
}

} // namespace

std::size_t basis_size(std::size_t n_modes, std::size_t cutoff) {
    const std::size_t d = cutoff + 1;
    return n_modes == 1 ? d : d * d;
}

FockDensityMatrix FockDensityMatrix::from_matrix(std::size_t n_modes,
                                                 std::size_t cutoff,
                                                 Eigen::MatrixXcd entries,
                                                 double tail_tol) {
    require(n_modes == 1 || n_modes == 2, "density matrices cover 1 or 2 modes");
    require(cutoff >= 1, "cutoff must be at least 1");
    const auto dim = static_cast<Eigen::Index>(basis_size(n_modes, cutoff));
    require(entries.rows() == dim && entries.cols() == dim,
            "density matrix size does not match n_modes and cutoff");
    require(entries.allFinite(), "density matrix entries must be finite");
    const double herm = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    require(herm <= kHermitianTol, "density matrix is not Hermitian");
    entries = hermitian_part(entries);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries,
                                                       Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -kPositivityTol,
            "density matrix has a negative eigenvalue");
    const double tr = entries.trace().real();
    require(tr <= 1.0 + kHermitianTol && tr >= 1.0 - tail_tol,
            "density matrix trace " + std::to_string(tr) +
                " outside the truncation budget");
    return FockDensityMatrix(n_modes, cutoff, std::move(entries));
}

std::size_t FockDensityMatrix::index(std::size_t n1, std::size_t n2) const {
    require(n1 <= cutoff_ && n2 <= cutoff_ && (n_modes_ == 2 || n2 == 0),
            "photon number beyond the cutoff");
    return n_modes_ == 1 ? n1 : n1 * (cutoff_ + 1) + n2;
}

double FockDensityMatrix::population(std::size_t n1, std::size_t n2) const {
    const auto i = static_cast<Eigen::Index>(index(n1, n2));
    return entries_(i, i).real();
}

FockDensityMatrix vacuum_fock(std::size_t n_modes, std::size_t cutoff) {
    require(n_modes == 1 || n_modes == 2, "density matrices cover 1 or 2 modes");
    require(cutoff >= 1, "cutoff must be at least 1");
    const auto dim = static_cast<Eigen::Index>(basis_size(n_modes, cutoff));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    m(0, 0) = 1.0;
    return FockAccess::make(n_modes, cutoff, std::move(m));
}

FockDensityMatrix number_state(std::size_t n, std::size_t cutoff) {
    require(n <= cutoff, "number state beyond the cutoff");
    const auto dim = static_cast<Eigen::Index>(cutoff + 1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = 1.0;
    return FockAccess::make(1, cutoff, std::move(m));
}

FockDensityMatrix squeezed_vacuum_fock(double zeta, std::size_t cutoff) {
    check_zeta(zeta);
    require(cutoff >= 2, "squeezed vacuum needs a cutoff of at least 2");
    return pure(1, cutoff, squeezed_amplitudes(zeta, cutoff));
}

FockDensityMatrix tmsv_fock(double zeta, std::size_t cutoff) {
    check_zeta(zeta);
    require(cutoff >= 2, "two-mode squeezed vacuum needs a cutoff of at least 2");
    return pure(2, cutoff, tmsv_amplitudes(zeta, cutoff));
}

FockDensityMatrix loss_fock(const FockDensityMatrix &rho, std::size_t mode,
                            double eta) {
    check_mode(rho, mode);
    require(eta >= 0.0 && eta <= 1.0,
            "transmissivity must lie in [0, 1], got " + std::to_string(eta));
    if (eta == 1.0) {
        return rho;
    }
    const std::size_t n_cut = rho.cutoff();
    const auto binom = sqrt_binomials(n_cut);
    const auto occ = occupation(rho.n_modes(), n_cut, mode);
    // Flat-index step that raises `mode` by one photon.
    const std::size_t step = (rho.n_modes() == 1 || mode == 1) ? 1 : n_cut + 1;
    std::vector<double> eta_half(2 * n_cut + 1);
    for (std::size_t k = 0; k < eta_half.size(); ++k) {
        eta_half[k] = std::pow(eta, 0.5 * static_cast<double>(k));
    }
    std::vector<double> loss_pow(n_cut + 1);
    for (std::size_t k = 0; k <= n_cut; ++k) {
        loss_pow[k] = std::pow(1.0 - eta, static_cast<double>(k));
    }

    const auto &in = rho.entries();
    const std::size_t dim = rho.dim();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(in.rows(), in.cols());
    for (std::size_t j = 0; j < dim; ++j) {
        const std::size_t n = occ[j];
        for (std::size_t i = 0; i < dim; ++i) {
            const std::size_t m = occ[i];
            cplx acc = 0.0;
            for (std::size_t k = 0; m + k <= n_cut && n + k <= n_cut; ++k) {
                const double w = binom[m + k][k] * binom[n + k][k] * loss_pow[k];
                acc += w * in(static_cast<Eigen::Index>(i + k * step),
                              static_cast<Eigen::Index>(j + k * step));
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                eta_half[m + n] * acc;
        }
    }
    return FockAccess::make(rho.n_modes(), n_cut, hermitian_part(out));
}

FockDensityMatrix phase_rotate(const FockDensityMatrix &rho, std::size_t mode,
                               double phi) {
    check_mode(rho, mode);
    const auto occ = occupation(rho.n_modes(), rho.cutoff(), mode);
    Eigen::MatrixXcd out = rho.entries();
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            const double dn = static_cast<double>(occ[i]) - static_cast<double>(occ[j]);
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *=
                std::polar(1.0, phi * dn);
        }
    }
    return FockAccess::make(rho.n_modes(), rho.cutoff(), std::move(out));
}

double mean_photon(const FockDensityMatrix &rho, std::size_t mode) {
    check_mode(rho, mode);
    const auto occ = occupation(rho.n_modes(), rho.cutoff(), mode);
    double n = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        n += static_cast<double>(occ[i]) * rho.entries()(ii, ii).real();
    }
    return n;
}

double purity(const FockDensityMatrix &rho) {
    return (rho.entries() * rho.entries()).trace().real();
}

double fidelity(const FockDensityMatrix &rho, const FockDensityMatrix &sigma) {
    require(rho.n_modes() == sigma.n_modes() && rho.cutoff() == sigma.cutoff(),
            "fidelity needs density matrices of equal dimensions");
    // Truncated states carry a small trace deficit; compare their normalized
    // versions so that F(rho, rho) = 1.
    const double tr_rho = rho.trace();
    const double tr_sigma = sigma.trace();
    require(tr_rho > 0.0 && tr_sigma > 0.0, "fidelity needs non-zero traces");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(rho.entries()) /
                                                       tr_rho);
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd sqrt_rho =
        es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    const Eigen::MatrixXcd inner =
        hermitian_part(sqrt_rho * sigma.entries() * sqrt_rho) / tr_sigma;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> inner_es(inner,
                                                             Eigen::EigenvaluesOnly);
    const double root_trace = inner_es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(root_trace * root_trace, 0.0, 1.0);
}

FockDensityMatrix partial_trace(const FockDensityMatrix &rho, std::size_t keep) {
    require(rho.n_modes() == 2, "partial trace needs a two-mode matrix");
    require(keep < 2, "mode index out of range");
    const std::size_t d = rho.cutoff() + 1;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                                  static_cast<Eigen::Index>(d));
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            cplx acc = 0.0;
            for (std::size_t t = 0; t < d; ++t) {
                const std::size_t i = keep == 0 ? a * d + t : t * d + a;
                const std::size_t j = keep == 0 ? b * d + t : t * d + b;
                acc += rho.entries()(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(j));
            }
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
    }
    return FockAccess::make(1, rho.cutoff(), std::move(out));
}

std::pair<FockDensityMatrix, TruncationReport>
gaussian_to_fock(const gaussian::GaussianState &state, std::size_t cutoff) {
    require(cutoff >= 2, "cutoff must be at least 2");
    const auto &cov = state.cov();
    if (state.n_modes() == 1) {
        const SingleModeFamily f = match_verified(cov);
        const double decay = std::tanh(f.zeta);
        const std::size_t nw = working_cutoff(decay, cutoff, kMaxWorkingCutoffOneMode);
        auto work = squeezed_vacuum_fock(f.zeta, nw);
        work = loss_fock(work, 0, std::min(f.eta, 1.0));
        work = phase_rotate(work, 0, f.angle);
        return finish(work, cutoff, tail_bound(decay, nw));
    }
    if (state.n_modes() != 2) {
        fail(ErrorKind::UnsupportedState,
             "Fock conversion covers one- and two-mode states only");
    }

    const Eigen::Matrix2d a = cov.block<2, 2>(0, 0);
    const Eigen::Matrix2d b = cov.block<2, 2>(2, 2);
    const Eigen::Matrix2d c = cov.block<2, 2>(0, 2);

    if (c.cwiseAbs().maxCoeff() <= kFamilyTol) {
        const SingleModeFamily fa = match_verified(a);
        const SingleModeFamily fb = match_verified(b);
        const double decay = std::tanh(std::max(fa.zeta, fb.zeta));
        const std::size_t nw = working_cutoff(decay, cutoff, kMaxWorkingCutoffTwoModes);
        auto ra = phase_rotate(
            loss_fock(squeezed_vacuum_fock(fa.zeta, nw), 0, std::min(fa.eta, 1.0)),
            0, fa.angle);
        auto rb = phase_rotate(
            loss_fock(squeezed_vacuum_fock(fb.zeta, nw), 0, std::min(fb.eta, 1.0)),
            0, fb.angle);
        auto work = FockAccess::make(2, nw, kron(ra.entries(), rb.entries()));
        return finish(work, cutoff, tail_bound(decay, nw));
    }

    // Lossy two-mode squeezed vacuum, possibly with a phase on mode 0:
    // A = alpha' I, B = beta' I, C = -c R(phi) Z.
    const double a_iso = 0.5 * a.trace();
    const double b_iso = 0.5 * b.trace();
    const double alpha = a_iso - 0.5;
    const double beta = b_iso - 0.5;
    const double c2 = -c.determinant();
    if (alpha <= 0.0 || beta <= 0.0 || c2 <= 0.0 || c2 <= alpha * beta) {
        fail(ErrorKind::UnsupportedState,
             "two-mode covariance is not a lossy two-mode squeezed vacuum");
    }
    const double u = 2.0 / (c2 / (alpha * beta) - 1.0); // cosh(2 zeta) - 1
    const double zeta = 0.5 * std::acosh(1.0 + u);
    const double eta1 = 2.0 * alpha / u;
    const double eta2 = 2.0 * beta / u;
    if (eta1 > 1.0 + kFamilyTol || eta2 > 1.0 + kFamilyTol) {
        fail(ErrorKind::UnsupportedState,
             "two-mode covariance would need a transmissivity above 1");
    }
    const double cc = std::sqrt(c2);
    const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
    const Eigen::Matrix2d rot = -c * z / cc;
    const double phi = std::atan2(rot(1, 0), rot(0, 0));

    gaussian::PipelineConfig ideal;
    ideal.zeta = zeta;
    auto model = gaussian::epr_pipeline(ideal);
    model = gaussian::loss(model, 0, {std::min(eta1, 1.0)});
    model = gaussian::loss(model, 1, {std::min(eta2, 1.0)});
    model = gaussian::phase_shift(model, 0, phi);
    if ((model.cov() - cov).cwiseAbs().maxCoeff() > kFamilyTol * (1.0 + cov.cwiseAbs().maxCoeff())) {
        fail(ErrorKind::UnsupportedState,
             "two-mode covariance is not a lossy two-mode squeezed vacuum");
    }

    const double decay = std::tanh(zeta) * std::tanh(zeta);
    const std::size_t nw = working_cutoff(decay, cutoff, kMaxWorkingCutoffTwoModes);
    auto work = tmsv_fock(zeta, nw);
    work = loss_fock(work, 0, std::min(eta1, 1.0));
    work = loss_fock(work, 1, std::min(eta2, 1.0));
    work = phase_rotate(work, 0, phi);
    return finish(work, cutoff, tail_bound(decay, nw));
}

Eigen::MatrixXd quadrature_covariance(const FockDensityMatrix &rho) {
    const std::size_t d = rho.cutoff() + 1;
    const auto di = static_cast<Eigen::Index>(d);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(di, di);
    for (std::size_t n = 1; n < d; ++n) {
        a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) =
            std::sqrt(static_cast<double>(n));
    }
    const double h = 1.0 / std::sqrt(2.0);
    const Eigen::MatrixXcd x = h * (a + a.adjoint());
    const Eigen::MatrixXcd p = cplx(0.0, -h) * (a - a.adjoint());
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(di, di);

    std::vector<Eigen::MatrixXcd> ops;
    if (rho.n_modes() == 1) {
        ops = {x, p};
    } else {
        ops = {kron(x, id), kron(p, id), kron(id, x), kron(id, p)};
    }
    const auto n = static_cast<Eigen::Index>(ops.size());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Eigen::MatrixXcd sym = 0.5 * (ops[i] * ops[j] + ops[j] * ops[i]);
            cov(i, j) = (rho.entries() * sym).trace().real();
        }
    }
    return cov;
}

} // namespace eprsynth::fock
