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

#include "eprsynth/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eprsynth/error.hpp"
#include "eprsynth/rng.hpp"

namespace eprsynth::homodyne {

QuadratureDataset sample(const gaussian::GaussianState &state,
                         const SweepConfig &config) {
    const std::size_t n_modes = config.mode_phases.size();
    require(n_modes == state.n_modes(),
            "sweep configures " + std::to_string(n_modes) +
                " modes but the state has " + std::to_string(state.n_modes()));
    require(n_modes == 1 || n_modes == 2, "homodyne sampling covers 1 or 2 modes");
    require(config.n_samples >= 1, "need at least one sample");
    for (const auto &ph : config.mode_phases) {
        require(std::isfinite(ph.theta0) && std::isfinite(ph.rate),
                "sweep phases and rates must be finite");
    }

    const auto &c = state.cov();
    const SplitMixCounter rng(config.seed);
    QuadratureDataset data;
    data.n_modes = n_modes;
    data.index.resize(config.n_samples);
    data.theta.resize(config.n_samples);
    data.x.resize(config.n_samples);

    for (std::size_t i = 0; i < config.n_samples; ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        const std::array<double, 2> z = rng.normal_pair(idx);
        std::array<double, 2> th{};
        std::array<double, 2> u{};  // cos
        std::array<double, 2> v{};  // sin
        for (std::size_t m = 0; m < n_modes; ++m) {
            th[m] = config.mode_phases[m].at(idx);
            u[m] = std::cos(th[m]);
            v[m] = std::sin(th[m]);
        }
        // Rotated-quadrature covariance entries, then a 2x2 Cholesky factor.
        const double c00 = u[0] * u[0] * c(0, 0) + 2 * u[0] * v[0] * c(0, 1) +
                           v[0] * v[0] * c(1, 1);
        const double l00 = std::sqrt(c00);
        std::array<double, 2> x{l00 * z[0], 0.0};
        if (n_modes == 2) {
            const double c11 = u[1] * u[1] * c(2, 2) + 2 * u[1] * v[1] * c(2, 3) +
                               v[1] * v[1] * c(3, 3);
            const double c01 = u[0] * u[1] * c(0, 2) + u[0] * v[1] * c(0, 3) +
                               v[0] * u[1] * c(1, 2) + v[0] * v[1] * c(1, 3);
            const double l10 = c01 / l00;
            const double l11 = std::sqrt(std::max(c11 - l10 * l10, 0.0));
            x[1] = l10 * z[0] + l11 * z[1];
        }
        data.index[i] = idx;
        data.theta[i] = th;
        data.x[i] = x;
    }
    return data;
}

VarianceTrace binned_variance(const QuadratureDataset &data, std::size_t window,
                              Target target) {
    require(window >= 2, "variance window must hold at least 2 samples");
    const bool two_mode_target = target != Target::Mode1;
    require(!two_mode_target || data.n_modes == 2,
            "mode-2, sum and difference traces need a two-mode dataset");

    const double h = 1.0 / std::sqrt(2.0);
    auto value = [&](std::size_t i) {
        const auto &x = data.x[i];
        switch (target) {
        case Target::Mode1:
            return x[0];
        case Target::Mode2:
            return x[1];
        case Target::Sum:
            return h * (x[0] + x[1]);
        case Target::Difference:
            return h * (x[0] - x[1]);
        }
        return x[0];
    };

    VarianceTrace trace;
    trace.n_modes = data.n_modes;
    const std::size_t n_bins = data.size() / window;
    trace.bins.reserve(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        const std::size_t begin = b * window;
        double mean = 0.0;
        std::array<double, 2> theta{};
        double center = 0.0;
        for (std::size_t i = begin; i < begin + window; ++i) {
            mean += value(i);
            theta[0] += data.theta[i][0];
            theta[1] += data.theta[i][1];
            center += static_cast<double>(data.index[i]);
        }
        const auto w = static_cast<double>(window);
        mean /= w;
        double ss = 0.0;
        for (std::size_t i = begin; i < begin + window; ++i) {
            const double d = value(i) - mean;
            ss += d * d;
        }
        VarianceBin bin;
        bin.center_index = center / w;
        bin.theta_center = {theta[0] / w, theta[1] / w};
        bin.variance = ss / (w - 1.0);
        bin.count = window;
        trace.bins.push_back(bin);
    }
    return trace;
}

} // namespace eprsynth::homodyne
