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

#include <cmath>
#include <sstream>
#include <string>

#include "eprsynth/fock.hpp"
#include "eprsynth/gaussian.hpp"
#include "eprsynth/homodyne.hpp"
#include "eprsynth/io.hpp"
#include "test_support.hpp"

using namespace eprsynth;
using eprsynth::io::json;
using eprsynth::test::kPi;

namespace {

void check_format_error(const std::string &text, bool trace, const std::string &needle) {
    std::istringstream in(text);
    try {
        if (trace) {
            io::read_trace_csv(in);
        } else {
            io::read_dataset_csv(in);
        }
        FAIL("expected a data-format error for: " << text);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::DataFormat);
        INFO(e.what());
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

} // namespace

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, kPi, 0.0}) {
        CHECK(std::stod(io::format_double(v)) == v);
    }
}

TEST_CASE("Gaussian state JSON") {
    const auto st = gaussian::epr_pipeline({0.44, kPi / 2, 0.5, 0.1});
    const json j = io::to_json(st);
    CHECK(j.at("n_modes") == 2);
    CHECK(j.at("convention") == "vacuum=0.5");
    const auto back = io::gaussian_from_json(json::parse(j.dump()));
    CHECK(back.cov() == st.cov());

    auto bad = j;
    bad["convention"] = "vacuum=1";
    CHECK(test::error_kind_of([&] { io::gaussian_from_json(bad); }) == ErrorKind::DataFormat);
    bad = j;
    bad["cov"][0][0] = 0.1; // violates the uncertainty relation
    CHECK(test::error_kind_of([&] { io::gaussian_from_json(bad); }) == ErrorKind::DataFormat);
    bad = j;
    bad.erase("cov");
    CHECK(test::error_kind_of([&] { io::gaussian_from_json(bad); }) == ErrorKind::DataFormat);
}

TEST_CASE("density matrix JSON is bit-exact") {
    const auto rho = fock::phase_rotate(fock::gaussian_to_fock(
                                            gaussian::epr_pipeline({0.44, kPi / 2, 0.5, 0.0}), 4)
                                            .first,
                                        0, 0.7);
    const json j = io::to_json(rho);
    CHECK(j.at("basis") == io::kFockBasisTag);
    CHECK(j.at("entries").size() == 625);
    const auto back = io::fock_from_json(json::parse(j.dump()));
    CHECK(back.n_modes() == 2);
    CHECK(back.cutoff() == 4);
    CHECK(back.entries() == rho.entries());

    auto bad = j;
    bad["entries"].erase(0);
    CHECK(test::error_kind_of([&] { io::fock_from_json(bad); }) == ErrorKind::DataFormat);
    bad = j;
    bad["entries"][1] = json::array({5.0, 0.0}); // breaks Hermiticity
    CHECK(test::error_kind_of([&] { io::fock_from_json(bad); }) == ErrorKind::DataFormat);
}

TEST_CASE("fit and diagnostics JSON") {
    fitting::FitResult fit;
    fit.model = fitting::Model::Epr;
    fit.zeta = 0.44;
    fit.eta = 0.5;
    fit.theta0 = 1.0 / 3.0;
    fit.rate = 2e-6;
    fit.rss = 1.5e-9;
    fit.converged = true;
    fit.iterations = 17;
    const auto back = io::fit_from_json(json::parse(io::to_json(fit).dump()));
    CHECK(back.model == fit.model);
    CHECK(back.zeta == fit.zeta);
    CHECK(back.eta == fit.eta);
    CHECK(back.theta0 == fit.theta0);
    CHECK(back.rate == fit.rate);
    CHECK(back.rss == fit.rss);
    CHECK(back.converged);
    CHECK_FALSE(back.degenerate);
    CHECK(back.iterations == 17);

    tomography::Diagnostics diag;
    diag.iterations = 12;
    diag.loglik = -123.5;
    diag.phase_deficient = true;
    const json d = io::to_json(diag);
    CHECK(d.at("iterations") == 12);
    CHECK(d.at("loglik") == -123.5);
    CHECK(d.at("phase_deficient") == true);
}

TEST_CASE("dataset CSV round trip") {
    const auto st = gaussian::epr_pipeline({0.44, kPi / 2, 0.5, 0.0});
    const auto data = homodyne::sample(st, {{{0.1, 1e-3}, {0.2, 3e-3}}, 500, 11});
    std::ostringstream out;
    io::write_dataset_csv(out, data);
    const std::string text = out.str();
    CHECK(text.rfind("index,theta1,x1,theta2,x2\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    std::istringstream in(text);
    const auto back = io::read_dataset_csv(in);
    CHECK(back.n_modes == 2);
    CHECK(back.index == data.index);
    CHECK(back.theta == data.theta);
    CHECK(back.x == data.x);

    const auto one = homodyne::sample(gaussian::vacuum(1), {{{0.0, 0.01}}, 50, 2});
    std::ostringstream out1;
    io::write_dataset_csv(out1, one);
    std::istringstream in1(out1.str());
    const auto back1 = io::read_dataset_csv(in1);
    CHECK(back1.n_modes == 1);
    CHECK(back1.x == one.x);
}

TEST_CASE("trace CSV round trip") {
    const auto data = homodyne::sample(gaussian::epr_pipeline({0.44, kPi / 2, 0.5, 0.0}),
                                       {{{0.0, 1e-3}, {0.0, 0.0}}, 2000, 12});
    for (auto target : {homodyne::Target::Mode1, homodyne::Target::Difference}) {
        const auto tr = homodyne::binned_variance(data, 100, target);
        std::ostringstream out;
        io::write_trace_csv(out, tr);
        std::istringstream in(out.str());
        const auto back = io::read_trace_csv(in);
        REQUIRE(back.bins.size() == tr.bins.size());
        CHECK(back.n_modes == 2);
        for (std::size_t b = 0; b < tr.bins.size(); ++b) {
            CHECK(back.bins[b].center_index == tr.bins[b].center_index);
            CHECK(back.bins[b].theta_center == tr.bins[b].theta_center);
            CHECK(back.bins[b].variance == tr.bins[b].variance);
            CHECK(back.bins[b].count == tr.bins[b].count);
        }
    }
}

TEST_CASE("CSV readers tolerate CRLF and blank lines") {
    std::istringstream in("index,theta1,x1\r\n0,0.5,1.25\r\n\r\n1,0.5,-0.75\r\n");
    const auto d = io::read_dataset_csv(in);
    REQUIRE(d.size() == 2);
    CHECK(d.x[1][0] == -0.75);
}

TEST_CASE("CSV readers report the offending line") {
    check_format_error("", false, "header");
    check_format_error("idx,theta1,x1\n0,0,0\n", false, "line 1");
    check_format_error("index,theta1,x1\n0,0,0\n1,0\n", false, "line 3");
    check_format_error("index,theta1,x1\n0,0,abc\n", false, "line 2");
    check_format_error("index,theta1,x1\n0,0,1.5x\n", false, "line 2");
    check_format_error("index,theta1,x1,theta2,x2\n0,0,1,0\n", false, "line 2");
    check_format_error("bin_center_index,theta1_center,variance,count\n4.5,0,-0.1,10\n", true,
                       "line 2");
    check_format_error("bin_center_index,theta1_center,variance,count\n4.5,0,0.1,ten\n", true,
                       "line 2");
}
