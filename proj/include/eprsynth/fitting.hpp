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
 * Least-squares extraction of (zeta, eta, theta0, rate) from variance traces.
 *
 * Single-mode traces follow the lossy squeezed-vacuum variance with
 * theta = theta0 + rate * t; two-mode traces follow the lossy EPR variances
 * with theta1 + theta2 = theta0 + rate * t. In both cases t is the bin
 * center in sample-index units. Reported parameters are canonical: rate >= 0,
 * theta0 in [0, pi) for single-mode fits and [0, 2 pi) for EPR fits.
 */

#pragma once

#include <cstddef>
#include <string>

#include "eprsynth/gaussian.hpp"
#include "eprsynth/homodyne.hpp"

namespace eprsynth::fitting {

enum class Model { SingleMode, Epr };

struct FitResult {
    Model model = Model::SingleMode;
    double zeta = 0.0;
    double eta = 1.0;
    double theta0 = 0.0;
    double rate = 0.0; ///< radians per sample
    double rss = 0.0;
    bool converged = false;
    /// eta (and with it the phase) cannot be identified, e.g. zeta = 0.
    bool degenerate = false;
    std::size_t iterations = 0;
};

FitResult fit_single(const homodyne::VarianceTrace &trace);

/// Joint fit of the sum and difference traces with shared parameters.
FitResult fit_epr(const homodyne::VarianceTrace &trace_sum,
                  const homodyne::VarianceTrace &trace_diff);

/// Model value at bin center t. `branch` is ignored for single-mode results.
double model_value(const FitResult &fit, double t,
                   gaussian::Branch branch = gaussian::Branch::Difference);

/// Residual sum of squares of `fit` against the trace(s) it was fitted to.
double residual_sum(const FitResult &fit, const homodyne::VarianceTrace &trace,
                    gaussian::Branch branch = gaussian::Branch::Difference);

struct Extrema {
    double min = 0.0;
    double max = 0.0;
};

/// Closed-form minimum and maximum of the fitted curve.
Extrema model_extrema(const FitResult &fit);

/// -10 log10(variance / 0.5); positive below vacuum noise.
double squeezing_db(double variance);

std::string to_string(Model model);

} // namespace eprsynth::fitting
