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

#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "eprsynth/io.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using eprsynth::io::json;

namespace {

// Scratch directory removed at scope exit.
struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() /
              ("eprsynth_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    static inline int counter = 0;
};

int run(const std::string &args, const fs::path &stdout_file = "/dev/null") {
    const std::string cmd = std::string(EPRSYNTH_CLI) + " " + args + " >" +
                            stdout_file.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json load(const fs::path &p) { return json::parse(slurp(p)); }

} // namespace

TEST_CASE("design emits JSON rows") {
    Scratch s;
    const auto out = s.dir / "stdout.json";
    REQUIRE(run("design rayleigh --w0 12.4um --wavelength 390nm -o " + s.dir.string(), out) == 0);
    const auto rows = load(out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].at("quantity") == "rayleigh_range");
    CHECK(rows[0].at("unit") == "m");
    CHECK_NEAR(rows[0].at("value").get<double>(), 1.2385930420922221e-3, 1e-15);
    CHECK(load(s.dir / "design_rayleigh.json") == rows);
    CHECK(fs::exists(s.dir / "design_rayleigh.manifest.json"));

    REQUIRE(run("design radius --z 0.72mm -o " + s.dir.string(), out) == 0);
    CHECK_NEAR(load(out)[2].at("value").get<double>(), 1.1566828410734189, 1e-12);

    REQUIRE(run("design walkoff --length 1mm -o " + s.dir.string(), out) == 0);
    CHECK_NEAR(load(out)[0].at("value").get<double>(), 5.1594746716697936e-4, 1e-15);

    REQUIRE(run("design compensation --delay 0.58mm --group-index-difference 0.16111111111111112 -o " +
                    s.dir.string(),
                out) == 0);
    CHECK_NEAR(load(out)[0].at("value").get<double>(), 3.6e-3, 1e-15);
}

TEST_CASE("invalid parameters exit 2 before writing anything") {
    Scratch s;
    const auto dir = s.dir / "out";
    CHECK(run("design rayleigh --w0 12.4furlong -o " + dir.string()) == 2);
    CHECK(run("design sideways -o " + dir.string()) == 2);
    CHECK(run("single-sweep --eta 1.5 -o " + dir.string()) == 2);
    CHECK(run("single-sweep --window 1 -o " + dir.string()) == 2);
    CHECK(run("epr-sweep --mismatch -0.1 -o " + dir.string()) == 2);
    CHECK(run("tomography --in x.csv --ref-zeta 0.4 -o " + dir.string()) == 2);
    CHECK(run("single-sweep --no-such-flag -o " + dir.string()) == 2);
    CHECK(run("") == 2);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("malformed input exits 3") {
    Scratch s;
    const auto bad = s.dir / "bad.csv";
    std::ofstream(bad) << "index,theta1,x1\n0,0,0.5\n1,0.1\n";
    const auto dir = s.dir / "out";
    CHECK(run("tomography --in " + bad.string() + " -o " + dir.string()) == 3);
    CHECK(run("fit --trace " + (s.dir / "missing.csv").string() + " -o " + dir.string()) == 3);
    CHECK_FALSE(fs::exists(dir));
    CHECK(run("design walkoff -o /proc/eprsynth_no_such_dir") == 3);
}

TEST_CASE("ill-posed fits exit 4") {
    Scratch s;
    const auto dir = s.dir / "out";
    // A tenth of a period cannot identify the sinusoid.
    CHECK(run("single-sweep --samples 100000 --window 2000 --rate 3e-6 -o " + dir.string()) == 4);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("single-sweep recovers its parameters and is deterministic") {
    Scratch s;
    const auto a = s.dir / "a";
    const auto b = s.dir / "b";
    REQUIRE(run("single-sweep --seed 7 -o " + a.string()) == 0);
    REQUIRE(run("single-sweep --seed 7 -o " + b.string()) == 0);
    CHECK(slurp(a / "single_trace.csv") == slurp(b / "single_trace.csv"));
    CHECK(slurp(a / "single_fit.json") == slurp(b / "single_fit.json"));
    const auto fit = load(a / "single_fit.json");
    CHECK_NEAR(fit.at("zeta").get<double>(), 0.44, 0.02);
    CHECK_NEAR(fit.at("eta").get<double>(), 0.52, 0.03);
}

TEST_CASE("zero squeezing gives a flat vacuum trace") {
    Scratch s;
    REQUIRE(run("single-sweep --zeta 0 --samples 200000 --window 10000 -o " + s.dir.string()) ==
            0);
    std::ifstream in(s.dir / "single_trace.csv");
    const auto trace = eprsynth::io::read_trace_csv(in);
    const double sigma = 0.5 * std::sqrt(2.0 / 9999.0);
    for (const auto &bin : trace.bins) {
        CHECK(std::abs(bin.variance - 0.5) <= 5 * sigma);
    }
    const auto fit = load(s.dir / "single_fit.json");
    CHECK(fit.at("model_max").get<double>() - fit.at("model_min").get<double>() <= 0.02);
}

TEST_CASE("epr-sweep, fit and replay") {
    Scratch s;
    const auto a = s.dir / "a";
    REQUIRE(run("epr-sweep --write-dataset --samples 400000 --window 10000 -o " + a.string()) == 0);
    for (const char *name : {"epr_mode1.csv", "epr_mode2.csv", "epr_sum.csv",
                             "epr_difference.csv", "epr_dataset.csv"}) {
        CHECK(fs::exists(a / name));
    }
    const auto fit = load(a / "epr_fit.json");
    CHECK_NEAR(fit.at("model_min").get<double>(), 0.3537, 0.01);
    CHECK_NEAR(fit.at("squeezing_db").get<double>(), 1.4, 0.15);

    const auto f = s.dir / "f";
    REQUIRE(run("fit --model epr --sum " + (a / "epr_sum.csv").string() + " --difference " +
                (a / "epr_difference.csv").string() + " -o " + f.string()) == 0);
    const auto refit = load(f / "fit.json");
    CHECK(refit.at("zeta") == fit.at("zeta"));
    CHECK(refit.at("theta0") == fit.at("theta0"));

    const auto manifest = load(a / "epr-sweep.manifest.json");
    CHECK(manifest.at("subcommand") == "epr-sweep");
    CHECK(manifest.at("seed") == 1);
    CHECK(manifest.at("outputs").size() == 6);

    const auto b = s.dir / "b";
    REQUIRE(run("--replay " + (a / "epr-sweep.manifest.json").string() + " -o " + b.string()) ==
            0);
    for (const auto &name : manifest.at("outputs")) {
        CHECK(slurp(a / name.get<std::string>()) == slurp(b / name.get<std::string>()));
    }
}

TEST_CASE("output directory comes from the environment") {
    Scratch s;
    const auto dir = s.dir / "env";
    REQUIRE(::setenv("EPRSYNTH_OUT_DIR", dir.c_str(), 1) == 0);
    CHECK(run("design walkoff") == 0);
    ::unsetenv("EPRSYNTH_OUT_DIR");
    CHECK(fs::exists(dir / "design_walkoff.json"));
}

TEST_CASE("tomography of vacuum data") {
    Scratch s;
    const auto a = s.dir / "a";
    REQUIRE(run("single-sweep --zeta 0 --samples 100000 --window 1000 --rate 0.7 --write-dataset -o " +
                a.string()) == 0);
    const auto t = s.dir / "t";
    REQUIRE(run("--serial tomography --in " + (a / "single_dataset.csv").string() +
                " --cutoff 4 --ref-zeta 0 --ref-eta 1 -o " + t.string()) == 0);
    std::ifstream in(t / "tomography_rho.json");
    const auto rho = eprsynth::io::fock_from_json(json::parse(in));
    CHECK(rho.population(0) >= 0.99);
    const auto cmp = load(t / "tomography_comparison.json");
    CHECK(cmp.at("reference").at("fidelity").get<double>() >= 0.99);
    CHECK(load(t / "tomography_diagnostics.json").at("phase_deficient") == false);
}
