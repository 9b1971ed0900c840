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

// Subcommand implementations. Each command computes all of its outputs in
// memory and returns them; nothing touches the file system until every
// parameter has been validated and every result computed.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace eprsynth::cli {

using nlohmann::json;

inline constexpr const char *kVersion = "eprsynth 0.1.0";

struct OutputFile {
    std::string name; ///< relative to the output directory
    std::string contents;
};

struct SingleSweepParams {
    double zeta = 0.44;
    double eta = 0.52;
    double theta0 = 0.0;
    double rate = 0.0; ///< radians per sample
    std::size_t samples = 1000000;
    std::size_t window = 10000;
    std::uint64_t seed = 1;
    bool write_dataset = false;
};

struct EprSweepParams {
    double zeta = 0.44;
    double eta = 0.50;
    double relative_phase = 1.5707963267948966;
    double mismatch = 0.0;
    double theta1 = 0.0;
    double rate1 = 0.0;
    double theta2 = 0.0;
    double rate2 = 0.0;
    std::size_t samples = 1000000;
    std::size_t window = 10000;
    std::uint64_t seed = 1;
    bool write_dataset = false;
};

struct TomographyParams {
    std::string input;
    std::size_t cutoff = 4;
    double stop_tol = 1e-8;
    std::size_t max_iterations = 2000;
    double dilution = 1.0;
    std::size_t threads = 0;
    std::optional<double> ref_zeta;
    std::optional<double> ref_eta;
    double ref_phase = 1.5707963267948966;
};

struct FitParams {
    std::string model = "single";
    std::string trace;
    std::string sum;
    std::string difference;
};

struct DesignParams {
    std::string quantity;
    std::string w0 = "12.4um";
    std::string wavelength = "390nm";
    std::string z = "0.72mm";
    std::string length = "1mm";
    std::string preset = "ppktp";
    std::optional<double> v_pump;
    std::optional<double> v_signal;
    std::string delay = "0.58mm";
    std::optional<double> group_index_difference;
};

/// Default sweep rate when none is given: two full turns over the run.
double default_rate(std::size_t samples);

std::vector<OutputFile> run_single_sweep(const SingleSweepParams &p);
std::vector<OutputFile> run_epr_sweep(const EprSweepParams &p);
std::vector<OutputFile> run_tomography(const TomographyParams &p, bool serial);
std::vector<OutputFile> run_fit(const FitParams &p);
std::vector<OutputFile> run_design(const DesignParams &p);

json to_json(const SingleSweepParams &p);
json to_json(const EprSweepParams &p);
json to_json(const TomographyParams &p);
json to_json(const FitParams &p);
json to_json(const DesignParams &p);

void from_json(const json &j, SingleSweepParams &p);
void from_json(const json &j, EprSweepParams &p);
void from_json(const json &j, TomographyParams &p);
void from_json(const json &j, FitParams &p);
void from_json(const json &j, DesignParams &p);

/// Manifest describing one run; replaying it reproduces every output.
json make_manifest(const std::string &subcommand, const json &params,
                   const std::string &out_dir, const std::vector<OutputFile> &outputs);

/// Name of the manifest file written next to the outputs of a run.
std::string manifest_name(const std::string &subcommand, const json &params);

/// Runs the subcommand recorded in `manifest` and returns its outputs.
std::vector<OutputFile> replay(const json &manifest, bool serial);

/// Writes outputs plus manifest under `out_dir`, creating it if needed.
void write_outputs(const std::string &out_dir, const std::vector<OutputFile> &outputs,
                   const std::string &subcommand, const json &params);

} // namespace eprsynth::cli
