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

#include "eprsynth/optics.hpp"

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "eprsynth/error.hpp"

namespace eprsynth::optics {

namespace {

void check_beam(const BeamParams &beam) {
    require(beam.w0 > 0.0 && std::isfinite(beam.w0), "beam waist must be positive");
    require(beam.wavelength > 0.0 && std::isfinite(beam.wavelength),
            "wavelength must be positive");
}

void check_walkoff(const WalkoffParams &p) {
    require(p.crystal_length >= 0.0 && std::isfinite(p.crystal_length),
            "crystal length must be non-negative");
    require(p.v_pump > 0.0 && p.v_pump <= 1.0, "pump velocity must lie in (0, 1] c");
    require(p.v_signal > 0.0 && p.v_signal <= 1.0,
            "signal velocity must lie in (0, 1] c");
}

} // namespace

double rayleigh_range(const BeamParams &beam) {
    check_beam(beam);
    return std::numbers::pi * beam.w0 * beam.w0 / beam.wavelength;
}

double beam_radius(double z, const BeamParams &beam) {
    const double zr = rayleigh_range(beam);
    const double u = z / zr;
    return beam.w0 * std::sqrt(1.0 + u * u);
}

double walkoff_path(const WalkoffParams &params) {
    check_walkoff(params);
    return params.crystal_length * (1.0 / params.v_pump - 1.0 / params.v_signal);
}

double compensation_length(double target_delay, double group_index_difference) {
    require(group_index_difference != 0.0 && std::isfinite(group_index_difference),
            "group index difference must be non-zero");
    require(std::isfinite(target_delay), "target delay must be finite");
    return target_delay / group_index_difference;
}

double parse_length(std::string_view token) {
    static constexpr std::array<std::pair<std::string_view, int>, 4> kSuffixes{{
        {"mm", -3},
        {"um", -6},
        {"nm", -9},
        {"m", 0},
    }};
    std::string number(token);
    int exponent = 0;
    for (const auto &[suffix, exp10] : kSuffixes) {
        if (token.size() > suffix.size() && token.ends_with(suffix)) {
            number = std::string(token.substr(0, token.size() - suffix.size()));
            exponent = exp10;
            break;
        }
    }
    if (number.empty() || number.find_first_not_of("0123456789.+-eE") != std::string::npos) {
        fail(ErrorKind::InvalidArgument,
             "cannot parse length '" + std::string(token) + "'");
    }
    // Shift the decimal exponent in text so strtod rounds only once.
    std::string text = number;
    const auto e_pos = text.find_first_of("eE");
    int mantissa_exp = 0;
    if (e_pos != std::string::npos) {
        try {
            std::size_t used = 0;
            mantissa_exp = std::stoi(text.substr(e_pos + 1), &used);
            if (used != text.size() - e_pos - 1) {
                throw std::invalid_argument("trailing");
            }
        } catch (const std::exception &) {
            fail(ErrorKind::InvalidArgument,
                 "cannot parse length '" + std::string(token) + "'");
        }
        text = text.substr(0, e_pos);
    }
    text += "e" + std::to_string(mantissa_exp + exponent);
    errno = 0;
    char *end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(value)) {
        fail(ErrorKind::InvalidArgument,
             "cannot parse length '" + std::string(token) + "'");
    }
    return value;
}

} // namespace eprsynth::optics
