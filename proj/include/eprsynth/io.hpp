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
 * File formats.
 *
 *  - Dataset CSV: `index,theta1,x1[,theta2,x2]`
 *  - Trace CSV:   `bin_center_index,theta1_center[,theta2_center],variance,count`
 *  - Gaussian state JSON: {n_modes, convention: "vacuum=0.5", cov: [[...]]}
 *  - Density matrix JSON: {n_modes, cutoff, basis, entries: [[re, im], ...]}
 *    with entries in row-major order.
 *
 * CSV numbers are written with 17 significant digits and LF line endings;
 * JSON numbers use the shortest text that round-trips the double exactly.
 * Read errors raise ErrorKind::DataFormat and name the offending line.
 */

#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "eprsynth/fitting.hpp"
#include "eprsynth/fock.hpp"
#include "eprsynth/gaussian.hpp"
#include "eprsynth/homodyne.hpp"
#include "eprsynth/tomography.hpp"

namespace eprsynth::io {

using nlohmann::json;

inline constexpr const char *kFockBasisTag = "fock |n1 n2> lexicographic";

std::string format_double(double value);

json to_json(const gaussian::GaussianState &state);
gaussian::GaussianState gaussian_from_json(const json &j);

json to_json(const fock::FockDensityMatrix &rho);
fock::FockDensityMatrix fock_from_json(const json &j);

json to_json(const fitting::FitResult &fit);
fitting::FitResult fit_from_json(const json &j);

/// {iterations, loglik, phase_deficient}
json to_json(const tomography::Diagnostics &diag);

void write_dataset_csv(std::ostream &out, const homodyne::QuadratureDataset &data);
homodyne::QuadratureDataset read_dataset_csv(std::istream &in);

void write_trace_csv(std::ostream &out, const homodyne::VarianceTrace &trace);
homodyne::VarianceTrace read_trace_csv(std::istream &in);

} // namespace eprsynth::io
