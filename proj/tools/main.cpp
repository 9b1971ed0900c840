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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "eprsynth/error.hpp"

using namespace eprsynth;
using namespace eprsynth::cli;

namespace {

enum Exit { kOk = 0, kUsage = 2, kDataFormat = 3, kNumerical = 4 };

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument:
        return kUsage;
    case ErrorKind::DataFormat:
    case ErrorKind::Io:
        return kDataFormat;
    default:
        return kNumerical;
    }
}

std::string default_out_dir() {
    const char *env = std::getenv("EPRSYNTH_OUT_DIR");
    return env != nullptr && *env != '\0' ? env : ".";
}

json read_manifest(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::Io, "cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        fail(ErrorKind::DataFormat, path + ": " + e.what());
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Gaussian EPR-state synthesis: simulation, tomography, fitting and "
                 "optics design"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string out_dir = default_out_dir();
    std::string replay_path;
    bool serial = false;
    app.add_option("--out,-o", out_dir,
                   "Output directory (default: $EPRSYNTH_OUT_DIR or the current directory)");
    app.add_option("--replay", replay_path, "Re-run the subcommand recorded in a manifest");
    app.add_flag("--serial", serial, "Use the single-threaded reference path everywhere");

    SingleSweepParams single;
    auto *cmd_single = app.add_subcommand("single-sweep", "Sweep one lossy squeezed vacuum");
    cmd_single->add_option("--zeta", single.zeta, "Squeezing parameter")->capture_default_str();
    cmd_single->add_option("--eta", single.eta, "Detection efficiency")->capture_default_str();
    cmd_single->add_option("--theta0", single.theta0, "Initial LO phase (rad)")->capture_default_str();
    auto *single_rate = cmd_single->add_option(
        "--rate", single.rate, "LO phase step per sample (rad; default two turns per run)");
    cmd_single->add_option("--samples", single.samples, "Number of records")->capture_default_str();
    cmd_single->add_option("--window", single.window, "Records per variance bin")->capture_default_str();
    cmd_single->add_option("--seed", single.seed, "Random seed")->capture_default_str();
    cmd_single->add_flag("--write-dataset", single.write_dataset, "Also write the raw records");

    EprSweepParams epr;
    auto *cmd_epr = app.add_subcommand("epr-sweep", "Sweep the two-mode EPR pipeline");
    cmd_epr->add_option("--zeta", epr.zeta, "Squeezing parameter of each crystal")->capture_default_str();
    cmd_epr->add_option("--eta", epr.eta, "Detection efficiency")->capture_default_str();
    cmd_epr->add_option("--relative-phase", epr.relative_phase,
                        "Phase between the two squeezed inputs (rad)")->capture_default_str();
    cmd_epr->add_option("--mismatch", epr.mismatch, "Spatial-mode mismatch in [0, 1)")->capture_default_str();
    cmd_epr->add_option("--theta1", epr.theta1, "Initial LO phase of mode 1 (rad)")->capture_default_str();
    auto *epr_rate1 = cmd_epr->add_option(
        "--rate1", epr.rate1, "LO phase step of mode 1 (rad; default two turns per run)");
    cmd_epr->add_option("--theta2", epr.theta2, "Initial LO phase of mode 2 (rad)")->capture_default_str();
    cmd_epr->add_option("--rate2", epr.rate2, "LO phase step of mode 2 (rad)")->capture_default_str();
    cmd_epr->add_option("--samples", epr.samples, "Number of records")->capture_default_str();
    cmd_epr->add_option("--window", epr.window, "Records per variance bin")->capture_default_str();
    cmd_epr->add_option("--seed", epr.seed, "Random seed")->capture_default_str();
    cmd_epr->add_flag("--write-dataset", epr.write_dataset, "Also write the raw records");

    TomographyParams tomo;
    auto *cmd_tomo = app.add_subcommand("tomography", "Maximum-likelihood state reconstruction");
    cmd_tomo->add_option("--in", tomo.input, "Dataset CSV")->required();
    cmd_tomo->add_option("--cutoff", tomo.cutoff, "Photon-number cutoff per mode")->capture_default_str();
    cmd_tomo->add_option("--stop-tol", tomo.stop_tol, "Relative log-likelihood tolerance")->capture_default_str();
    cmd_tomo->add_option("--max-iterations", tomo.max_iterations)->capture_default_str();
    cmd_tomo->add_option("--dilution", tomo.dilution, "Initial dilution in (0, 1]")->capture_default_str();
    cmd_tomo->add_option("--threads", tomo.threads, "Worker threads (0: all cores)")->capture_default_str();
    cmd_tomo->add_option("--ref-zeta", tomo.ref_zeta, "Reference state squeezing");
    cmd_tomo->add_option("--ref-eta", tomo.ref_eta, "Reference state efficiency");
    cmd_tomo->add_option("--ref-phase", tomo.ref_phase, "Reference relative phase (rad)")->capture_default_str();

    FitParams fitp;
    auto *cmd_fit = app.add_subcommand("fit", "Fit a variance model to trace CSVs");
    cmd_fit->add_option("--model", fitp.model, "single or epr")
        ->check(CLI::IsMember({"single", "epr"}))
        ->capture_default_str();
    cmd_fit->add_option("--trace", fitp.trace, "Single-mode trace CSV");
    cmd_fit->add_option("--sum", fitp.sum, "Sum-quadrature trace CSV");
    cmd_fit->add_option("--difference", fitp.difference, "Difference-quadrature trace CSV");

    DesignParams design;
    auto *cmd_design = app.add_subcommand("design", "Beam geometry and walk-off arithmetic");
    cmd_design->add_option("quantity", design.quantity, "rayleigh, radius, walkoff or compensation")
        ->required();
    cmd_design->add_option("--w0", design.w0, "Waist radius")->capture_default_str();
    cmd_design->add_option("--wavelength", design.wavelength)->capture_default_str();
    cmd_design->add_option("--z", design.z, "Distance from the waist")->capture_default_str();
    cmd_design->add_option("--length", design.length, "Crystal length")->capture_default_str();
    cmd_design->add_option("--preset", design.preset, "Group-velocity preset")->capture_default_str();
    cmd_design->add_option("--v-pump", design.v_pump, "Pump group velocity (units of c)");
    cmd_design->add_option("--v-signal", design.v_signal, "Signal group velocity (units of c)");
    cmd_design->add_option("--delay", design.delay, "Delay to compensate")->capture_default_str();
    cmd_design->add_option("--group-index-difference", design.group_index_difference,
                           "Group index difference of the compensator");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        std::string name;
        json params;
        std::vector<OutputFile> outputs;
        if (!replay_path.empty()) {
            if (!app.get_subcommands().empty()) {
                std::cerr << "--replay does not take a subcommand\n";
                return kUsage;
            }
            const json manifest = read_manifest(replay_path);
            outputs = replay(manifest, serial);
            name = manifest.at("subcommand").get<std::string>();
            params = manifest.at("parameters");
        } else if (cmd_single->parsed()) {
            if (single_rate->count() == 0) {
                single.rate = default_rate(single.samples);
            }
            name = "single-sweep";
            params = to_json(single);
            outputs = run_single_sweep(single);
        } else if (cmd_epr->parsed()) {
            if (epr_rate1->count() == 0) {
                epr.rate1 = default_rate(epr.samples);
            }
            name = "epr-sweep";
            params = to_json(epr);
            outputs = run_epr_sweep(epr);
        } else if (cmd_tomo->parsed()) {
            tomo.input = std::filesystem::absolute(tomo.input).string();
            name = "tomography";
            params = to_json(tomo);
            outputs = run_tomography(tomo, serial);
        } else if (cmd_fit->parsed()) {
            for (auto *path : {&fitp.trace, &fitp.sum, &fitp.difference}) {
                if (!path->empty()) {
                    *path = std::filesystem::absolute(*path).string();
                }
            }
            name = "fit";
            params = to_json(fitp);
            outputs = run_fit(fitp);
        } else if (cmd_design->parsed()) {
            name = "design";
            params = to_json(design);
            outputs = run_design(design);
            std::cout << outputs.front().contents;
        } else {
            std::cerr << app.help();
            return kUsage;
        }
        write_outputs(out_dir, outputs, name, params);
        for (const auto &o : outputs) {
            std::cerr << "wrote " << (std::filesystem::path(out_dir) / o.name).string() << "\n";
        }
        return kOk;
    } catch (const Error &e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kNumerical;
    }
}
