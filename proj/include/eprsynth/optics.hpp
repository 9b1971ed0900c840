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
 * Beam geometry and pump/signal walk-off arithmetic. All lengths are in
 * meters; velocities are fractions of c.
 */

#pragma once

#include <string_view>

namespace eprsynth::optics {

struct BeamParams {
    double w0 = 0.0;         ///< waist radius
    double wavelength = 0.0;
};

struct WalkoffParams {
    double crystal_length = 0.0;
    double v_pump = 1.0;
    double v_signal = 1.0;
};

/// Group velocities of the 390 nm pump and 780 nm signal in PPKTP.
inline constexpr WalkoffParams ppktp_preset(double crystal_length) {
    return {crystal_length, 0.41, 0.52};
}

/// pi w0^2 / lambda.
double rayleigh_range(const BeamParams &beam);

/// w0 sqrt(1 + (z / z_R)^2).
double beam_radius(double z, const BeamParams &beam);

/// Free-space path delay L (c/v_pump - c/v_signal) accumulated in one crystal.
double walkoff_path(const WalkoffParams &params);

/// Birefringent crystal length that produces `target_delay` given the group
/// index difference between its two polarizations.
double compensation_length(double target_delay, double group_index_difference);

/// Parses a length such as "12.4um", "0.72mm", "390nm" or "1e-3" (meters)
/// into meters. Suffixes: m, mm, um, nm. The scale is applied to the decimal
/// text before conversion, so "12.4um" yields exactly the double 12.4e-6.
double parse_length(std::string_view token);

} // namespace eprsynth::optics
