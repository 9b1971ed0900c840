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
 * Iterative maximum-likelihood homodyne tomography.
 *
 * Each record (theta, x) is the projector |theta,x><theta,x| with
 * <n|theta,x> = exp(i n theta) psi_n(x). The estimate is iterated as
 * rho <- T rho T / Tr(T rho T) with T = (1 - d) I + d R(rho) and
 * R(rho) = (1/M) sum_j Pi_j / Tr(rho Pi_j). The dilution d starts at the
 * configured value and is halved whenever a step would lower the
 * log-likelihood, so accepted steps never decrease it.
 */

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "eprsynth/fock.hpp"
#include "eprsynth/homodyne.hpp"

namespace eprsynth::tomography {

struct TomographyConfig {
    std::size_t cutoff = 4;
    std::size_t max_iterations = 2000;
    double stop_tol = 1e-8; ///< relative log-likelihood change
    double dilution = 1.0;  ///< in (0, 1]; 1 is the undiluted R rho R map
    /// Worker threads for the per-iteration sums; 0 picks the hardware
    /// count. Results do not depend on this value.
    std::size_t threads = 0;
};

struct Diagnostics {
    std::size_t iterations = 0;
    double loglik = 0.0;
    bool phase_deficient = false;
    bool converged = false;
    std::size_t rejected_steps = 0;
    std::vector<double> loglik_history; ///< after each accepted iteration
};

struct Reconstruction {
    fock::FockDensityMatrix rho;
    Diagnostics diagnostics;
};

/// Hermite-Gauss wavefunction psi_n(x) in the vacuum-variance-0.5 convention.
double quad_wavefunction(std::size_t n, double x);

/// psi_0(x) ... psi_cutoff(x) by upward recurrence.
Eigen::VectorXd quad_wavefunctions(std::size_t cutoff, double x);

/// Overlaps <n|theta,x> for n = 0..cutoff.
Eigen::VectorXcd projector_overlaps(double theta, double x, std::size_t cutoff);

/// Overlap vectors of every record, one column per record; two-mode records
/// store the Kronecker product of the per-mode vectors. Memory grows as
/// records * (cutoff+1)^n_modes complex numbers.
class ProjectorCache {
  public:
    ProjectorCache(const homodyne::QuadratureDataset &data, std::size_t cutoff);

    [[nodiscard]] std::size_t n_modes() const noexcept { return n_modes_; }
    [[nodiscard]] std::size_t cutoff() const noexcept { return cutoff_; }
    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(columns_.cols());
    }
    [[nodiscard]] const Eigen::MatrixXcd &columns() const noexcept {
        return columns_;
    }
    /// Upper bound on the squared norm of any cached column,
    /// ((cutoff+1)/sqrt(pi))^n_modes, from |psi_n(x)| <= pi^(-1/4).
    [[nodiscard]] double norm_bound() const noexcept;

  private:
    std::size_t n_modes_;
    std::size_t cutoff_;
    Eigen::MatrixXcd columns_;
};

/// Sum over records of log Tr(rho Pi_j).
double log_likelihood(const fock::FockDensityMatrix &rho,
                      const ProjectorCache &cache);

/// True when some mode has fewer than 3 distinct phases in the data.
bool phase_deficient(const homodyne::QuadratureDataset &data);

Reconstruction reconstruct(const homodyne::QuadratureDataset &data,
                           const TomographyConfig &config);

} // namespace eprsynth::tomography
