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
 * Truncated Fock-basis density matrices for one or two modes.
 *
 * Two-mode basis states |n1 n2> are ordered lexicographically, i.e. the flat
 * index is n1 * (cutoff + 1) + n2. Squeezed states use real amplitudes with
 * alternating sign, which is the state exp[(zeta/2)(a^2 - a^dagger^2)]|0>:
 * x is squeezed for zeta > 0, matching the theta = 0 convention of
 * gaussian.hpp. The two-mode squeezed vacuum is
 * exp[zeta (a1 a2 - a1^dagger a2^dagger)]|00>, i.e. amplitudes
 * (-tanh zeta)^n / cosh zeta on |n n>, which is the state epr_pipeline()
 * prepares for eta = 1 and a relative phase of pi/2.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <utility>

#include <Eigen/Dense>

#include "eprsynth/gaussian.hpp"

namespace eprsynth::fock {

using cplx = std::complex<double>;

inline constexpr double kDefaultTailTolerance = 1e-3;
inline constexpr std::size_t kDefaultCutoff = 5;

std::size_t basis_size(std::size_t n_modes, std::size_t cutoff);

namespace detail {
struct FockAccess;
}

class FockDensityMatrix {
  public:
    /// Validates hermiticity, positivity and the trace budget.
    static FockDensityMatrix from_matrix(std::size_t n_modes, std::size_t cutoff,
                                         Eigen::MatrixXcd entries,
                                         double tail_tol = kDefaultTailTolerance);

    [[nodiscard]] std::size_t n_modes() const noexcept { return n_modes_; }
    [[nodiscard]] std::size_t cutoff() const noexcept { return cutoff_; }
    [[nodiscard]] const Eigen::MatrixXcd &entries() const noexcept {
        return entries_;
    }
    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(entries_.rows());
    }

    [[nodiscard]] double trace() const { return entries_.trace().real(); }
    /// Flat basis index of |n1> or |n1 n2>.
    [[nodiscard]] std::size_t index(std::size_t n1, std::size_t n2 = 0) const;
    /// Diagonal element <n1 n2|rho|n1 n2>.
    [[nodiscard]] double population(std::size_t n1, std::size_t n2 = 0) const;

  private:
    FockDensityMatrix(std::size_t n_modes, std::size_t cutoff,
                      Eigen::MatrixXcd entries)
        : n_modes_(n_modes), cutoff_(cutoff), entries_(std::move(entries)) {}
    friend struct detail::FockAccess;

    std::size_t n_modes_;
    std::size_t cutoff_;
    Eigen::MatrixXcd entries_;
};

struct TruncationReport {
    double trace_deficit = 0.0;
    double largest_discarded_population = 0.0;
};

FockDensityMatrix vacuum_fock(std::size_t n_modes, std::size_t cutoff);
/// |n><n| for one mode.
FockDensityMatrix number_state(std::size_t n, std::size_t cutoff);

FockDensityMatrix squeezed_vacuum_fock(double zeta, std::size_t cutoff);
FockDensityMatrix tmsv_fock(double zeta, std::size_t cutoff);

/// Pure-loss channel with transmissivity eta on one mode.
FockDensityMatrix loss_fock(const FockDensityMatrix &rho, std::size_t mode,
                            double eta);
/// rho -> exp(i phi n) rho exp(-i phi n) on one mode; the Fock-space twin of
/// gaussian::phase_shift.
FockDensityMatrix phase_rotate(const FockDensityMatrix &rho, std::size_t mode,
                               double phi);

double mean_photon(const FockDensityMatrix &rho, std::size_t mode);
double purity(const FockDensityMatrix &rho);
/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 of the unit-trace
/// normalized arguments.
double fidelity(const FockDensityMatrix &rho, const FockDensityMatrix &sigma);
/// Reduced single-mode state of a two-mode matrix.
FockDensityMatrix partial_trace(const FockDensityMatrix &rho, std::size_t keep);

/// Converts states of the pipeline family (rotated, lossy squeezed vacua and
/// their products; lossy two-mode squeezed vacua with a local phase) into the
/// truncated Fock basis. Other covariances raise ErrorKind::UnsupportedState.
std::pair<FockDensityMatrix, TruncationReport>
gaussian_to_fock(const gaussian::GaussianState &state,
                 std::size_t cutoff = kDefaultCutoff);

/// Symmetrized quadrature covariance computed with truncated x and p
/// operators, in the same (x1, p1, x2, p2) ordering as GaussianState.
Eigen::MatrixXd quadrature_covariance(const FockDensityMatrix &rho);

} // namespace eprsynth::fock
