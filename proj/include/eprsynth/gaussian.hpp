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

/**
 * @file
 * Zero-mean multimode Gaussian states in the covariance-matrix picture.
 *
 * Conventions used throughout the library:
 *  - x = (a + a^dagger)/sqrt(2), so the vacuum quadrature variance is 0.5.
 *  - Quadratures are ordered (x_1, p_1, x_2, p_2, ...).
 *  - The rotated quadrature is X_theta = x cos(theta) + p sin(theta);
 *    theta = 0 is the squeezed quadrature for a squeezer with angle 0.
 *  - The beam splitter maps (X_a, X_b) -> ((X_a - X_b)/sqrt2, (X_a + X_b)/sqrt2)
 *    on the x and the p quadratures alike.
 */

#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace eprsynth::gaussian {

inline constexpr double kVacuumVariance = 0.5;
inline constexpr const char *kConventionTag = "vacuum=0.5";

inline constexpr std::size_t x_index(std::size_t mode) { return 2 * mode; }
inline constexpr std::size_t p_index(std::size_t mode) { return 2 * mode + 1; }

struct SqueezeParams {
    double zeta = 0.0;
    double angle = 0.0; ///< orientation of the squeezed quadrature, radians
};

struct LossChannel {
    double eta = 1.0; ///< transmissivity in [0, 1]
};

struct PipelineConfig {
    double zeta = 0.44;
    double relative_phase = std::numbers::pi / 2;
    double eta = 1.0;
    double mismatch = 0.0; ///< 0 = perfect interference
};

namespace detail {
struct StateAccess;
}

/// Immutable covariance-matrix state. Construction validates symmetry and
/// the uncertainty principle, so every instance is physical.
class GaussianState {
  public:
    static GaussianState vacuum(std::size_t n_modes);

    /// Validating constructor for externally supplied covariances.
    static GaussianState from_covariance(Eigen::MatrixXd cov);

    [[nodiscard]] std::size_t n_modes() const noexcept {
        return static_cast<std::size_t>(cov_.rows() / 2);
    }
    [[nodiscard]] const Eigen::MatrixXd &cov() const noexcept { return cov_; }

  private:
    explicit GaussianState(Eigen::MatrixXd cov) : cov_(std::move(cov)) {}
    friend struct detail::StateAccess;

    Eigen::MatrixXd cov_;
};

/// Which combination (X_1 +/- X_2)/sqrt2 a joint variance refers to.
enum class Branch { Sum, Difference };

GaussianState vacuum(std::size_t n_modes);

GaussianState squeeze(const GaussianState &state, std::size_t mode,
                      SqueezeParams params);
GaussianState phase_shift(const GaussianState &state, std::size_t mode,
                          double phi);
GaussianState beamsplit(const GaussianState &state, std::size_t mode_a,
                        std::size_t mode_b);
GaussianState loss(const GaussianState &state, std::size_t mode,
                   LossChannel channel);

/// Congruence cov -> S cov S^T. S must be symplectic; not re-checked.
GaussianState apply_symplectic(const GaussianState &state,
                               const Eigen::MatrixXd &s);

double quad_variance(const GaussianState &state, std::size_t mode,
                     double theta);

/// Variance of (X_{1,theta1} -/+ X_{2,theta2})/sqrt2 over modes 0 and 1.
double joint_quad_variance(const GaussianState &state, double theta1,
                           double theta2, Branch branch);

/// Covariance of the rotated quadratures (X_{0,thetas[0]}, X_{1,thetas[1]}, ...).
Eigen::MatrixXd rotated_covariance(const GaussianState &state,
                                   std::span<const double> thetas);

/// Two squeezed vacua, relative phase, mismatch admixture, 50:50
/// interference and per-mode loss.
GaussianState epr_pipeline(const PipelineConfig &config);

/// Bivariate density of (x_1, x_2) for a two-mode state.
std::vector<double> joint_position_pdf(const GaussianState &state,
                                       std::span<const std::array<double, 2>> grid);

/// Correlation coefficient of (x_1, x_2).
double position_correlation(const GaussianState &state);

// Full-size symplectic matrices, exposed for property checks.
namespace symplectic {
Eigen::MatrixXd form(std::size_t n_modes);
Eigen::MatrixXd squeeze(std::size_t n_modes, std::size_t mode,
                        SqueezeParams params);
Eigen::MatrixXd phase_shift(std::size_t n_modes, std::size_t mode, double phi);
Eigen::MatrixXd beamsplit(std::size_t n_modes, std::size_t mode_a,
                          std::size_t mode_b);
} // namespace symplectic

/// Smallest eigenvalue of cov + (i/2) Omega. Physical states give >= 0.
double physicality_margin(const Eigen::MatrixXd &cov);

// Closed-form variances of the lossy squeezed vacuum and of the lossy EPR
// state. These are evaluated directly, independent of the covariance route.
namespace closed_form {
double single_mode_variance(double zeta, double eta, double theta);
double epr_variance(double zeta, double eta, double phase_sum, Branch branch);
/// theta-independent reduced variance of one EPR mode.
double thermal_variance(double zeta, double eta);
} // namespace closed_form

} // namespace eprsynth::gaussian
