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

#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "eprsynth/error.hpp"
#include "eprsynth/fitting.hpp"
#include "eprsynth/fock.hpp"
#include "eprsynth/gaussian.hpp"
#include "eprsynth/homodyne.hpp"
#include "eprsynth/io.hpp"
#include "eprsynth/optics.hpp"
#include "eprsynth/tomography.hpp"

namespace eprsynth::cli {

namespace fs = std::filesystem;
using homodyne::Target;

namespace {

std::string dump(const json &j) { return j.dump(2) + "\n"; }

std::string csv(const homodyne::VarianceTrace &trace) {
    std::ostringstream out;
    io::write_trace_csv(out, trace);
    return out.str();
}

std::string csv(const homodyne::QuadratureDataset &data) {
    std::ostringstream out;
    io::write_dataset_csv(out, data);
    return out.str();
}

std::ifstream open_input(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::Io, "cannot open '" + path + "'");
    }
    return in;
}

homodyne::VarianceTrace load_trace(const std::string &path) {
    auto in = open_input(path);
    try {
        return io::read_trace_csv(in);
    } catch (const Error &e) {
        fail(e.kind(), path + ": " + e.what());
    }
}

homodyne::QuadratureDataset load_dataset(const std::string &path) {
    auto in = open_input(path);
    try {
        return io::read_dataset_csv(in);
    } catch (const Error &e) {
        fail(e.kind(), path + ": " + e.what());
    }
}

json fit_summary(const fitting::FitResult &fit) {
    json j = io::to_json(fit);
    const auto ext = fitting::model_extrema(fit);
    j["model_min"] = ext.min;
    j["model_max"] = ext.max;
    j["squeezing_db"] = fitting::squeezing_db(ext.min);
    return j;
}

void check_sweep(double zeta, std::size_t samples, std::size_t window) {
    require(std::isfinite(zeta) && zeta >= 0.0, "zeta must be finite and non-negative");
    require(samples > 0, "samples must be positive");
    require(window >= 2, "window must be at least 2");
    require(window <= samples, "window exceeds the number of samples");
}

template <typename T> std::optional<T> optional_at(const json &j, const char *key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<T>();
}

template <typename T> json optional_json(const std::optional<T> &v) {
    return v ? json(*v) : json(nullptr);
}

json row(const char *quantity, double value, const char *unit) {
    return {{"quantity", quantity}, {"value", value}, {"unit", unit}};
}

} // namespace

double default_rate(std::size_t samples) {
    return samples == 0 ? 0.0 : 4.0 * std::numbers::pi / static_cast<double>(samples);
}

std::vector<OutputFile> run_single_sweep(const SingleSweepParams &p) {
    check_sweep(p.zeta, p.samples, p.window);
    const auto state = gaussian::loss(
        gaussian::squeeze(gaussian::vacuum(1), 0, {p.zeta, 0.0}), 0, {p.eta});
    const auto data = homodyne::sample(state, {{{p.theta0, p.rate}}, p.samples, p.seed});
    const auto trace = homodyne::binned_variance(data, p.window, Target::Mode1);
    const auto fit = fitting::fit_single(trace);

    std::vector<OutputFile> out;
    if (p.write_dataset) {
        out.push_back({"single_dataset.csv", csv(data)});
    }
    out.push_back({"single_trace.csv", csv(trace)});
    out.push_back({"single_fit.json", dump(fit_summary(fit))});
    return out;
}

std::vector<OutputFile> run_epr_sweep(const EprSweepParams &p) {
    check_sweep(p.zeta, p.samples, p.window);
    const auto state =
        gaussian::epr_pipeline({p.zeta, p.relative_phase, p.eta, p.mismatch});
    const auto data = homodyne::sample(
        state, {{{p.theta1, p.rate1}, {p.theta2, p.rate2}}, p.samples, p.seed});
    const auto mode1 = homodyne::binned_variance(data, p.window, Target::Mode1);
    const auto mode2 = homodyne::binned_variance(data, p.window, Target::Mode2);
    const auto sum = homodyne::binned_variance(data, p.window, Target::Sum);
    const auto diff = homodyne::binned_variance(data, p.window, Target::Difference);
    const auto fit = fitting::fit_epr(sum, diff);

    double sampled_min = diff.bins.front().variance;
    for (const auto &b : diff.bins) {
        sampled_min = std::min(sampled_min, b.variance);
    }
    json summary = fit_summary(fit);
    summary["difference_min_sampled"] = sampled_min;

    std::vector<OutputFile> out;
    if (p.write_dataset) {
        out.push_back({"epr_dataset.csv", csv(data)});
    }
    out.push_back({"epr_mode1.csv", csv(mode1)});
    out.push_back({"epr_mode2.csv", csv(mode2)});
    out.push_back({"epr_sum.csv", csv(sum)});
    out.push_back({"epr_difference.csv", csv(diff)});
    out.push_back({"epr_fit.json", dump(summary)});
    return out;
}

std::vector<OutputFile> run_tomography(const TomographyParams &p, bool serial) {
    require(p.ref_zeta.has_value() == p.ref_eta.has_value(),
            "--ref-zeta and --ref-eta must be given together");
    const auto data = load_dataset(p.input);

    tomography::TomographyConfig cfg;
    cfg.cutoff = p.cutoff;
    cfg.stop_tol = p.stop_tol;
    cfg.max_iterations = p.max_iterations;
    cfg.dilution = p.dilution;
    cfg.threads = serial ? 1 : p.threads;

    // Build the reference first so a bad reference fails before the long run.
    std::optional<fock::FockDensityMatrix> ref;
    if (p.ref_zeta) {
        const auto st =
            data.n_modes == 1
                ? gaussian::loss(gaussian::squeeze(gaussian::vacuum(1), 0, {*p.ref_zeta, 0.0}),
                                 0, {*p.ref_eta})
                : gaussian::epr_pipeline({*p.ref_zeta, p.ref_phase, *p.ref_eta, 0.0});
        ref = fock::gaussian_to_fock(st, p.cutoff).first;
    }

    const auto rec = tomography::reconstruct(data, cfg);

    json diag = io::to_json(rec.diagnostics);
    diag["converged"] = rec.diagnostics.converged;
    diag["rejected_steps"] = rec.diagnostics.rejected_steps;
    diag["records"] = data.size();

    json cmp;
    json photons = json::array();
    for (std::size_t m = 0; m < data.n_modes; ++m) {
        photons.push_back(fock::mean_photon(rec.rho, m));
    }
    cmp["mean_photon"] = photons;
    if (ref) {
        const double s = std::sinh(*p.ref_zeta);
        cmp["reference"] = {{"zeta", *p.ref_zeta},
                            {"eta", *p.ref_eta},
                            {"mean_photon", *p.ref_eta * s * s},
                            {"fidelity", fock::fidelity(rec.rho, *ref)}};
    }

    return {{"tomography_rho.json", dump(io::to_json(rec.rho))},
            {"tomography_diagnostics.json", dump(diag)},
            {"tomography_comparison.json", dump(cmp)}};
}

std::vector<OutputFile> run_fit(const FitParams &p) {
    fitting::FitResult fit;
    if (p.model == "single") {
        require(!p.trace.empty(), "single-mode fits need --trace");
        fit = fitting::fit_single(load_trace(p.trace));
    } else if (p.model == "epr") {
        require(!p.sum.empty() && !p.difference.empty(),
                "EPR fits need --sum and --difference");
        fit = fitting::fit_epr(load_trace(p.sum), load_trace(p.difference));
    } else {
        fail(ErrorKind::InvalidArgument, "unknown model '" + p.model + "'");
    }
    return {{"fit.json", dump(fit_summary(fit))}};
}

std::vector<OutputFile> run_design(const DesignParams &p) {
    json rows = json::array();
    if (p.quantity == "rayleigh" || p.quantity == "radius") {
        const optics::BeamParams beam{optics::parse_length(p.w0),
                                      optics::parse_length(p.wavelength)};
        rows.push_back(row("rayleigh_range", optics::rayleigh_range(beam), "m"));
        if (p.quantity == "radius") {
            const double w = optics::beam_radius(optics::parse_length(p.z), beam);
            rows.push_back(row("beam_radius", w, "m"));
            rows.push_back(row("radius_ratio", w / beam.w0, "w0"));
        }
    } else if (p.quantity == "walkoff") {
        const double length = optics::parse_length(p.length);
        optics::WalkoffParams wp;
        if (p.v_pump || p.v_signal) {
            require(p.v_pump && p.v_signal, "give both --v-pump and --v-signal");
            wp = {length, *p.v_pump, *p.v_signal};
        } else {
            require(p.preset == "ppktp", "unknown preset '" + p.preset + "'");
            wp = optics::ppktp_preset(length);
        }
        rows.push_back(row("walkoff_path", optics::walkoff_path(wp), "m"));
    } else if (p.quantity == "compensation") {
        require(p.group_index_difference.has_value(),
                "compensation needs --group-index-difference");
        rows.push_back(row("compensation_length",
                           optics::compensation_length(optics::parse_length(p.delay),
                                                       *p.group_index_difference),
                           "m"));
    } else {
        fail(ErrorKind::InvalidArgument, "unknown design quantity '" + p.quantity +
                                             "' (rayleigh, radius, walkoff, compensation)");
    }
    return {{"design_" + p.quantity + ".json", dump(rows)}};
}

json to_json(const SingleSweepParams &p) {
    return {{"zeta", p.zeta},       {"eta", p.eta},         {"theta0", p.theta0},
            {"rate", p.rate},       {"samples", p.samples}, {"window", p.window},
            {"seed", p.seed},       {"write_dataset", p.write_dataset}};
}

json to_json(const EprSweepParams &p) {
    return {{"zeta", p.zeta},       {"eta", p.eta},         {"relative_phase", p.relative_phase},
            {"mismatch", p.mismatch}, {"theta1", p.theta1}, {"rate1", p.rate1},
            {"theta2", p.theta2},   {"rate2", p.rate2},     {"samples", p.samples},
            {"window", p.window},   {"seed", p.seed},       {"write_dataset", p.write_dataset}};
}

json to_json(const TomographyParams &p) {
    return {{"input", p.input},
            {"cutoff", p.cutoff},
            {"stop_tol", p.stop_tol},
            {"max_iterations", p.max_iterations},
            {"dilution", p.dilution},
            {"threads", p.threads},
            {"ref_zeta", optional_json(p.ref_zeta)},
            {"ref_eta", optional_json(p.ref_eta)},
            {"ref_phase", p.ref_phase}};
}

json to_json(const FitParams &p) {
    return {{"model", p.model}, {"trace", p.trace}, {"sum", p.sum}, {"difference", p.difference}};
}

json to_json(const DesignParams &p) {
    return {{"quantity", p.quantity},
            {"w0", p.w0},
            {"wavelength", p.wavelength},
            {"z", p.z},
            {"length", p.length},
            {"preset", p.preset},
            {"v_pump", optional_json(p.v_pump)},
            {"v_signal", optional_json(p.v_signal)},
            {"delay", p.delay},
            {"group_index_difference", optional_json(p.group_index_difference)}};
}

void from_json(const json &j, SingleSweepParams &p) {
    j.at("zeta").get_to(p.zeta);
    j.at("eta").get_to(p.eta);
    j.at("theta0").get_to(p.theta0);
    j.at("rate").get_to(p.rate);
    j.at("samples").get_to(p.samples);
    j.at("window").get_to(p.window);
    j.at("seed").get_to(p.seed);
    j.at("write_dataset").get_to(p.write_dataset);
}

void from_json(const json &j, EprSweepParams &p) {
    j.at("zeta").get_to(p.zeta);
    j.at("eta").get_to(p.eta);
    j.at("relative_phase").get_to(p.relative_phase);
    j.at("mismatch").get_to(p.mismatch);
    j.at("theta1").get_to(p.theta1);
    j.at("rate1").get_to(p.rate1);
    j.at("theta2").get_to(p.theta2);
    j.at("rate2").get_to(p.rate2);
    j.at("samples").get_to(p.samples);
    j.at("window").get_to(p.window);
    j.at("seed").get_to(p.seed);
    j.at("write_dataset").get_to(p.write_dataset);
}

void from_json(const json &j, TomographyParams &p) {
    j.at("input").get_to(p.input);
    j.at("cutoff").get_to(p.cutoff);
    j.at("stop_tol").get_to(p.stop_tol);
    j.at("max_iterations").get_to(p.max_iterations);
    j.at("dilution").get_to(p.dilution);
    j.at("threads").get_to(p.threads);
    p.ref_zeta = optional_at<double>(j, "ref_zeta");
    p.ref_eta = optional_at<double>(j, "ref_eta");
    j.at("ref_phase").get_to(p.ref_phase);
}

void from_json(const json &j, FitParams &p) {
    j.at("model").get_to(p.model);
    j.at("trace").get_to(p.trace);
    j.at("sum").get_to(p.sum);
    j.at("difference").get_to(p.difference);
}

void from_json(const json &j, DesignParams &p) {
    j.at("quantity").get_to(p.quantity);
    j.at("w0").get_to(p.w0);
    j.at("wavelength").get_to(p.wavelength);
    j.at("z").get_to(p.z);
    j.at("length").get_to(p.length);
    j.at("preset").get_to(p.preset);
    p.v_pump = optional_at<double>(j, "v_pump");
    p.v_signal = optional_at<double>(j, "v_signal");
    j.at("delay").get_to(p.delay);
    p.group_index_difference = optional_at<double>(j, "group_index_difference");
}

json make_manifest(const std::string &subcommand, const json &params,
                   const std::string &out_dir, const std::vector<OutputFile> &outputs) {
    json names = json::array();
    for (const auto &o : outputs) {
        names.push_back(o.name);
    }
    json m = {{"subcommand", subcommand},
              {"version", kVersion},
              {"parameters", params},
              {"out_dir", out_dir},
              {"outputs", names}};
    m["seed"] = params.contains("seed") ? params.at("seed") : json(nullptr);
    return m;
}

std::string manifest_name(const std::string &subcommand, const json &params) {
    if (subcommand == "design") {
        return "design_" + params.at("quantity").get<std::string>() + ".manifest.json";
    }
    return subcommand + ".manifest.json";
}

std::vector<OutputFile> replay(const json &manifest, bool serial) {
    try {
        const auto sub = manifest.at("subcommand").get<std::string>();
        const auto &params = manifest.at("parameters");
        if (sub == "single-sweep") {
            return run_single_sweep(params.get<SingleSweepParams>());
        }
        if (sub == "epr-sweep") {
            return run_epr_sweep(params.get<EprSweepParams>());
        }
        if (sub == "tomography") {
            return run_tomography(params.get<TomographyParams>(), serial);
        }
        if (sub == "fit") {
            return run_fit(params.get<FitParams>());
        }
        if (sub == "design") {
            return run_design(params.get<DesignParams>());
        }
        fail(ErrorKind::DataFormat, "manifest names unknown subcommand '" + sub + "'");
    } catch (const json::exception &e) {
        fail(ErrorKind::DataFormat, std::string("malformed manifest: ") + e.what());
    }
}

void write_outputs(const std::string &out_dir, const std::vector<OutputFile> &outputs,
                   const std::string &subcommand, const json &params) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        fail(ErrorKind::Io, "cannot create '" + out_dir + "': " + ec.message());
    }
    auto files = outputs;
    files.push_back({manifest_name(subcommand, params),
                     dump(make_manifest(subcommand, params, out_dir, outputs))});
    for (const auto &f : files) {
        const auto path = fs::path(out_dir) / f.name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << f.contents;
        out.close();
        if (!out) {
            fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
        }
    }
}

} // namespace eprsynth::cli
