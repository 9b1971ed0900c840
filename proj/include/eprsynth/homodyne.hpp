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
 * Synthetic homodyne data under swept local-oscillator phases, and binned
 * variance traces computed from it.
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "eprsynth/gaussian.hpp"

namespace eprsynth::homodyne {

/// Local-oscillator phase of one mode: theta0 + rate * sample_index.
/// A fixed phase is a sweep with rate 0.
struct PhaseSweep {
    double theta0 = 0.0;
    double rate = 0.0; ///< radians per sample

    [[nodiscard]] double at(std::uint64_t index) const noexcept {
        return theta0 + rate * static_cast<double>(index);
    }
    static PhaseSweep fixed(double theta) { return {theta, 0.0}; }
};

struct SweepConfig {
    std::vector<PhaseSweep> mode_phases; ///< one entry per measured mode
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Column-oriented dataset. Entries for mode 2 are unused for one mode.
struct QuadratureDataset {
    std::size_t n_modes = 1;
    std::vector<std::uint64_t> index;
    std::vector<std::array<double, 2>> theta;
    std::vector<std::array<double, 2>> x;

    [[nodiscard]] std::size_t size() const noexcept { return index.size(); }
};

enum class Target { Mode1, Mode2, Sum, Difference };

struct VarianceBin {
    double center_index = 0.0;
    std::array<double, 2> theta_center{};
    double variance = 0.0;
    std::size_t count = 0;
};

struct VarianceTrace {
    std::size_t n_modes = 1;
    std::vector<VarianceBin> bins;
};

/// Draws one record per sample index from the zero-mean Gaussian of the
/// rotated quadratures. Deterministic in (state, config).
QuadratureDataset sample(const gaussian::GaussianState &state,
                         const SweepConfig &config);

/// Unbiased per-bin variance of the selected combination; sum and
/// difference are (x1 +/- x2)/sqrt2. A trailing partial bin is dropped.
VarianceTrace binned_variance(const QuadratureDataset &data, std::size_t window,
                              Target target);

} // namespace eprsynth::homodyne
