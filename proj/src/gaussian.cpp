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

#include "eprsynth/gaussian.hpp"

#include <cmath>
#include <string>

#include "eprsynth/error.hpp"

namespace eprsynth::gaussian {

namespace detail {
struct StateAccess {
    static GaussianState make(Eigen::MatrixXd cov) {
        return GaussianState(std::move(cov));
    }
};
} // namespace detail

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPhysicalityTol = 1e-10;

void check_mode(const GaussianState &state, std::size_t mode) {
    if (mode >= state.n_modes()) {
        fail(ErrorKind::InvalidArgument,
             "mode index " + std::to_string(mode) + " out of range for a " +
                 std::to_string(state.n_modes()) + "-mode state");
    }
}

Eigen::Matrix2d rotation(double phi) {
    Eigen::Matrix2d r;
    r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return r;
}

// Writes a 2x2 single-mode block into an identity of the full size.
Eigen::MatrixXd embed(std::size_t n_modes, std::size_t mode,
                      const Eigen::Matrix2d &block) {
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(dim, dim);
    const auto i = static_cast<Eigen::Index>(x_index(mode));
    s.block<2, 2>(i, i) = block;
    return s;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd &m) {
    return 0.5 * (m + m.transpose());
}

} // namespace

GaussianState GaussianState::vacuum(std::size_t n_modes) {
    require(n_modes >= 1, "a Gaussian state needs at least one mode");
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    return GaussianState(kVacuumVariance * Eigen::MatrixXd::Identity(dim, dim));
}

GaussianState GaussianState::from_covariance(Eigen::MatrixXd cov) {
    require(cov.rows() == cov.cols() && cov.rows() >= 2 && cov.rows() % 2 == 0,
            "covariance must be a square matrix of even size >= 2");
    require(cov.allFinite(), "covariance entries must be finite");
    const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
    require(asym <= kSymmetryTol,
            "covariance is not symmetric (max |C - C^T| = " +
                std::to_string(asym) + ")");
    cov = symmetrized(cov);
    const double margin = physicality_margin(cov);
    require(margin >= -kPhysicalityTol,
            "covariance violates the uncertainty principle (min eigenvalue of "
            "cov + i/2 Omega = " + std::to_string(margin) + ")");
    return GaussianState(std::move(cov));
}

GaussianState vacuum(std::size_t n_modes) {
    return GaussianState::vacuum(n_modes);
}

namespace symplectic {

Eigen::MatrixXd form(std::size_t n_modes) {
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t k = 0; k < n_modes; ++k) {
        const auto i = static_cast<Eigen::Index>(x_index(k));
        omega(i, i + 1) = 1.0;
        omega(i + 1, i) = -1.0;
    }
    return omega;
}

Eigen::MatrixXd squeeze(std::size_t n_modes, std::size_t mode,
                        SqueezeParams params) {
    const Eigen::Matrix2d r = rotation(params.angle);
    const Eigen::Matrix2d d =
        Eigen::Vector2d(std::exp(-params.zeta), std::exp(params.zeta))
            .asDiagonal();
    return embed(n_modes, mode, r * d * r.transpose());
}

Eigen::MatrixXd phase_shift(std::size_t n_modes, std::size_t mode, double phi) {
    return embed(n_modes, mode, rotation(phi));
}

Eigen::MatrixXd beamsplit(std::size_t n_modes, std::size_t mode_a,
                          std::size_t mode_b) {
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(dim, dim);
    const double h = 1.0 / std::sqrt(2.0);
    for (Eigen::Index q = 0; q < 2; ++q) {
        const auto a = static_cast<Eigen::Index>(x_index(mode_a)) + q;
        const auto b = static_cast<Eigen::Index>(x_index(mode_b)) + q;
        s(a, a) = h;
        s(a, b) = -h;
        s(b, a) = h;
        s(b, b) = h;
    }
    return s;
}

} // namespace symplectic

GaussianState apply_symplectic(const GaussianState &state,
                               const Eigen::MatrixXd &s) {
    require(s.rows() == state.cov().rows() && s.cols() == state.cov().cols(),
            "symplectic matrix size does not match the state");
    return detail::StateAccess::make(
        symmetrized(s * state.cov() * s.transpose()));
}

GaussianState squeeze(const GaussianState &state, std::size_t mode,
                      SqueezeParams params) {
    check_mode(state, mode);
    require(std::isfinite(params.zeta) && std::isfinite(params.angle),
            "squeeze parameters must be finite");
    return apply_symplectic(state,
                            symplectic::squeeze(state.n_modes(), mode, params));
}

GaussianState phase_shift(const GaussianState &state, std::size_t mode,
                          double phi) {
    check_mode(state, mode);
    require(std::isfinite(phi), "phase must be finite");
    return apply_symplectic(state,
                            symplectic::phase_shift(state.n_modes(), mode, phi));
}

GaussianState beamsplit(const GaussianState &state, std::size_t mode_a,
                        std::size_t mode_b) {
    check_mode(state, mode_a);
    check_mode(state, mode_b);
    require(mode_a != mode_b, "beam splitter needs two distinct modes");
    return apply_symplectic(
        state, symplectic::beamsplit(state.n_modes(), mode_a, mode_b));
}

GaussianState loss(const GaussianState &state, std::size_t mode,
                   LossChannel channel) {
    check_mode(state, mode);
    require(channel.eta >= 0.0 && channel.eta <= 1.0,
            "transmissivity must lie in [0, 1], got " +
                std::to_string(channel.eta));
    const auto dim = state.cov().rows();
    const auto i = static_cast<Eigen::Index>(x_index(mode));
    Eigen::VectorXd g = Eigen::VectorXd::Ones(dim);
    g(i) = g(i + 1) = std::sqrt(channel.eta);
    Eigen::MatrixXd cov = g.asDiagonal() * state.cov() * g.asDiagonal();
    cov(i, i) += (1.0 - channel.eta) * kVacuumVariance;
    cov(i + 1, i + 1) += (1.0 - channel.eta) * kVacuumVariance;
    return detail::StateAccess::make(symmetrized(cov));
}

Eigen::MatrixXd rotated_covariance(const GaussianState &state,
                                   std::span<const double> thetas) {
    require(!thetas.empty() && thetas.size() <= state.n_modes(),
            "need one phase per measured mode");
    const auto k = static_cast<Eigen::Index>(thetas.size());
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(state.cov().rows(), k);
    for (Eigen::Index m = 0; m < k; ++m) {
        const auto i = static_cast<Eigen::Index>(x_index(m));
        u(i, m) = std::cos(thetas[m]);
        u(i + 1, m) = std::sin(thetas[m]);
    }
    return u.transpose() * state.cov() * u;
}

double quad_variance(const GaussianState &state, std::size_t mode,
                     double theta) {
    check_mode(state, mode);
    const auto i = static_cast<Eigen::Index>(x_index(mode));
    const Eigen::Vector2d u(std::cos(theta), std::sin(theta));
    return u.dot(state.cov().block<2, 2>(i, i) * u);
}

double joint_quad_variance(const GaussianState &state, double theta1,
                           double theta2, Branch branch) {
    require(state.n_modes() >= 2, "joint variance needs at least two modes");
    const std::array<double, 2> thetas{theta1, theta2};
    const Eigen::MatrixXd c = rotated_covariance(state, thetas);
    const double sign = branch == Branch::Sum ? 1.0 : -1.0;
    return 0.5 * (c(0, 0) + c(1, 1) + 2.0 * sign * c(0, 1));
}

GaussianState epr_pipeline(const PipelineConfig &config) {
    require(config.zeta >= 0.0 && std::isfinite(config.zeta),
            "squeezing parameter must be finite and >= 0");
    require(config.mismatch >= 0.0 && config.mismatch <= 1.0,
            "mismatch must lie in [0, 1]");
    GaussianState state = vacuum(2);
    state = squeeze(state, 0, {config.zeta, 0.0});
    state = squeeze(state, 1, {config.zeta, 0.0});
    state = phase_shift(state, 1, config.relative_phase);
    // Vacuum admixture on the first input only; a symmetric admixture would
    // leave the reduced single-mode variances phase independent.
    state = loss(state, 0, {1.0 - config.mismatch});
    state = beamsplit(state, 0, 1);
    state = loss(state, 0, {config.eta});
    state = loss(state, 1, {config.eta});
    return state;
}

std::vector<double>
joint_position_pdf(const GaussianState &state,
                   std::span<const std::array<double, 2>> grid) {
    require(state.n_modes() == 2, "joint position density needs two modes");
    Eigen::Matrix2d sub;
    sub << state.cov()(0, 0), state.cov()(0, 2), state.cov()(2, 0),
        state.cov()(2, 2);
    const double det = sub.determinant();
    if (!(det > 0.0) || !(sub(0, 0) > 0.0)) {
        fail(ErrorKind::Internal,
             "position covariance is not positive definite");
    }
    const Eigen::Matrix2d inv = sub.inverse();
    const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));
    std::vector<double> out;
    out.reserve(grid.size());
    for (const auto &pt : grid) {
        const Eigen::Vector2d v(pt[0], pt[1]);
        out.push_back(norm * std::exp(-0.5 * v.dot(inv * v)));
    }
    return out;
}

double position_correlation(const GaussianState &state) {
    require(state.n_modes() >= 2, "correlation needs two modes");
    const auto &c = state.cov();
    return c(0, 2) / std::sqrt(c(0, 0) * c(2, 2));
}

double physicality_margin(const Eigen::MatrixXd &cov) {
    const auto n = static_cast<std::size_t>(cov.rows() / 2);
    const Eigen::MatrixXcd h =
        cov.cast<std::complex<double>>() +
        std::complex<double>(0.0, 0.5) *
            symplectic::form(n).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

namespace closed_form {

double single_mode_variance(double zeta, double eta, double theta) {
    return 0.5 * eta *
               (std::cosh(2 * zeta) - std::cos(2 * theta) * std::sinh(2 * zeta)) +
           0.5 * (1.0 - eta);
}

double epr_variance(double zeta, double eta, double phase_sum, Branch branch) {
    // The difference combination carries the + sign on the cosine.
    const double sign = branch == Branch::Difference ? 1.0 : -1.0;
    return 0.5 * eta *
               (std::cosh(2 * zeta) +
                sign * std::cos(phase_sum) * std::sinh(2 * zeta)) +
           0.5 * (1.0 - eta);
}

double thermal_variance(double zeta, double eta) {
    return 0.5 * eta * std::cosh(2 * zeta) + 0.5 * (1.0 - eta);
}

} // namespace closed_form

} // namespace eprsynth::gaussian
