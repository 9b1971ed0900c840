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

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "eprsynth/fock.hpp"
#include "eprsynth/gaussian.hpp"
#include "test_support.hpp"

using namespace eprsynth;
using namespace eprsynth::fock;
using eprsynth::test::kPi;

namespace {

Eigen::MatrixXd annihilation(std::size_t cutoff) {
    const auto d = static_cast<Eigen::Index>(cutoff + 1);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

// exp[(zeta/2)(a^2 - a^dagger^2)]|0> in a large space.
Eigen::VectorXd squeeze_oracle(double zeta, std::size_t cutoff) {
    const Eigen::MatrixXd a = annihilation(cutoff);
    const Eigen::MatrixXd gen = 0.5 * zeta * (a * a - (a * a).transpose());
    const Eigen::MatrixXd u = gen.exp();
    return u.col(0);
}

// exp[zeta (a1 a2 - a1^dagger a2^dagger)]|00>.
Eigen::VectorXd tmsv_oracle(double zeta, std::size_t cutoff) {
    const Eigen::MatrixXd a = annihilation(cutoff);
    const auto d = a.rows();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd a1 = Eigen::kroneckerProduct(a, id);
    const Eigen::MatrixXd a2 = Eigen::kroneckerProduct(id, a);
    const Eigen::MatrixXd pair = a1 * a2;
    const Eigen::MatrixXd gen = zeta * (pair - pair.transpose());
    return gen.exp().col(0);
}

FockDensityMatrix lossy_tmsv(double zeta, double eta, std::size_t cutoff) {
    return loss_fock(loss_fock(tmsv_fock(zeta, cutoff), 0, eta), 1, eta);
}

double max_abs_diff(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("from_matrix validates") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = 1.0;
    CHECK(FockDensityMatrix::from_matrix(1, 2, m).trace() == 1.0);
    auto bad = m;
    bad(0, 1) = cplx(0.0, 0.1);
    CHECK(test::error_kind_of([&] { FockDensityMatrix::from_matrix(1, 2, bad); }) ==
          ErrorKind::InvalidArgument);
    auto negative = m;
    negative(1, 1) = -0.01;
    negative(0, 0) = 1.01;
    CHECK(test::error_kind_of([&] { FockDensityMatrix::from_matrix(1, 2, negative); }) ==
          ErrorKind::InvalidArgument);
    auto short_trace = m;
    short_trace(0, 0) = 0.99;
    CHECK(test::error_kind_of([&] { FockDensityMatrix::from_matrix(1, 2, short_trace); }) ==
          ErrorKind::InvalidArgument);
    CHECK(FockDensityMatrix::from_matrix(1, 2, short_trace, 0.02).trace() == 0.99);
    CHECK(test::error_kind_of([&] { FockDensityMatrix::from_matrix(2, 2, m); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("squeezed_vacuum_fock") {
    const auto vac = squeezed_vacuum_fock(0.0, 5);
    CHECK(vac.population(0) == 1.0);
    CHECK(purity(vac) == 1.0);

    const auto st = squeezed_vacuum_fock(0.44, 6);
    CHECK_NEAR(st.population(0), 0.91043850723027626, 1e-15);
    CHECK_NEAR(st.population(2), 0.0778888, 1e-7);
    for (std::size_t n : {1u, 3u, 5u}) {
        CHECK(st.population(n) == 0.0);
    }
    CHECK_NEAR(st.entries()(0, 0).real(), 0.9541690139751323 * 0.9541690139751323, 1e-15);
    // Alternating sign of the even amplitudes.
    CHECK_NEAR(st.entries()(0, 2).real(), 0.9541690139751323 * -0.2790856487585196, 1e-15);
    CHECK_NEAR(st.entries()(0, 4).real(), 0.9541690139751323 * 0.09997590168719274, 1e-15);
    CHECK_NEAR(st.entries()(0, 6).real(), 0.9541690139751323 * -0.03775129900977709, 1e-15);
    CHECK(test::error_kind_of([] { squeezed_vacuum_fock(0.44, 1); }) ==
          ErrorKind::InvalidArgument);
    CHECK(test::error_kind_of([] { squeezed_vacuum_fock(-0.1, 5); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("squeezed vacuum matches the squeeze-operator oracle") {
    for (double zeta : {0.1, 0.44, 0.6}) {
        const Eigen::VectorXd psi = squeeze_oracle(zeta, 40);
        const auto st = squeezed_vacuum_fock(zeta, 10);
        for (std::size_t n = 0; n <= 10; ++n) {
            const auto i = static_cast<Eigen::Index>(n);
            CHECK_NEAR(st.population(n), psi(i) * psi(i), 1e-8);
            CHECK_NEAR(st.entries()(0, i).real(), psi(0) * psi(i), 1e-8);
        }
    }
}

TEST_CASE("tmsv_fock") {
    const auto st = tmsv_fock(0.44, 5);
    CHECK_NEAR(st.population(0, 0), 0.82889827544769380, 1e-15);
    CHECK_NEAR(st.population(1, 1), 0.14182592440753294, 1e-15);
    for (std::size_t a = 0; a <= 5; ++a) {
        for (std::size_t b = 0; b <= 5; ++b) {
            if (a != b) {
                CHECK(st.population(a, b) == 0.0);
            }
        }
    }
    CHECK(tmsv_fock(0.0, 4).population(0, 0) == 1.0);

    const Eigen::VectorXd psi = tmsv_oracle(0.44, 20);
    const auto big = tmsv_fock(0.44, 8);
    for (std::size_t n = 0; n <= 8; ++n) {
        const auto oi = static_cast<Eigen::Index>(n * 21 + n);
        const auto fi = static_cast<Eigen::Index>(big.index(n, n));
        CHECK_NEAR(big.entries()(0, fi).real(), psi(0) * psi(oi), 1e-8);
    }
    CHECK(test::error_kind_of([] { tmsv_fock(0.3, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("loss_fock") {
    const auto st = tmsv_fock(0.44, 5);
    CHECK(max_abs_diff(loss_fock(st, 0, 1.0).entries(), st.entries()) <= 1e-12);

    const auto one = loss_fock(number_state(1, 3), 0, 0.5);
    CHECK_NEAR(one.population(0), 0.5, 1e-15);
    CHECK_NEAR(one.population(1), 0.5, 1e-15);

    CHECK_NEAR(mean_photon(lossy_tmsv(0.44, 0.5, 25), 0), 0.10321032726234890, 1e-12);
    CHECK_NEAR(mean_photon(lossy_tmsv(0.44, 0.5, 25), 1), 0.10321032726234890, 1e-12);
    CHECK_NEAR(mean_photon(lossy_tmsv(0.44, 0.5, 5), 0), 0.10313246311484701, 1e-12);

    const auto full = loss_fock(squeezed_vacuum_fock(0.5, 20), 0, 0.0);
    CHECK_NEAR(full.population(0), full.trace(), 1e-15);

    CHECK(test::error_kind_of([&] { loss_fock(st, 0, 1.5); }) == ErrorKind::InvalidArgument);
    CHECK(test::error_kind_of([&] { loss_fock(st, 2, 0.5); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("loss composes multiplicatively") {
    test::Gen gen(31);
    for (int i = 0; i < 20; ++i) {
        const double e1 = gen.uniform(0, 1);
        const double e2 = gen.uniform(0, 1);
        const auto st = tmsv_fock(gen.uniform(0, 0.8), 6);
        const auto m = static_cast<std::size_t>(gen.integer(0, 1));
        const auto twice = loss_fock(loss_fock(st, m, e1), m, e2);
        const auto once = loss_fock(st, m, e1 * e2);
        CHECK(max_abs_diff(twice.entries(), once.entries()) <= 1e-10);
    }
}

TEST_CASE("loss preserves the trace and positivity") {
    test::Gen gen(32);
    for (int i = 0; i < 20; ++i) {
        const auto st = squeezed_vacuum_fock(gen.uniform(0, 0.4), 30);
        const auto out = loss_fock(st, 0, gen.uniform(0, 1));
        CHECK_NEAR(out.trace(), st.trace(), 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out.entries());
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("mean_photon") {
    CHECK(mean_photon(vacuum_fock(2, 4), 1) == 0.0);
    CHECK(mean_photon(number_state(1, 4), 0) == 1.0);
    CHECK_NEAR(mean_photon(squeezed_vacuum_fock(0.44, 60), 0), std::pow(std::sinh(0.44), 2),
               1e-12);
}

TEST_CASE("purity") {
    test::Gen gen(33);
    for (int i = 0; i < 10; ++i) {
        const double zeta = gen.uniform(0, 1);
        const auto sq = squeezed_vacuum_fock(zeta, 8);
        CHECK_NEAR(purity(sq), sq.trace() * sq.trace(), 1e-10);
        const auto tm = tmsv_fock(zeta, 8);
        CHECK_NEAR(purity(tm), tm.trace() * tm.trace(), 1e-10);
    }
    CHECK_NEAR(purity(squeezed_vacuum_fock(0.44, 40)), 1.0, 1e-10);
    CHECK(purity(lossy_tmsv(0.44, 0.9, 6)) < 1.0);
}

TEST_CASE("fidelity") {
    const auto rho = lossy_tmsv(0.44, 0.5, 5);
    const auto sigma = lossy_tmsv(0.40, 0.5, 5);
    CHECK_NEAR(fidelity(rho, rho), 1.0, 1e-10);
    CHECK(fidelity(number_state(0, 4), number_state(1, 4)) == 0.0);
    CHECK_NEAR(fidelity(rho, sigma), 0.9987702273, 1e-8);
    CHECK_NEAR(fidelity(rho, sigma), fidelity(sigma, rho), 1e-8);
    CHECK(test::error_kind_of([&] { fidelity(rho, vacuum_fock(2, 4)); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("partial_trace of the two-mode squeezed vacuum is thermal") {
    const double lam = std::tanh(0.44);
    const auto reduced = partial_trace(tmsv_fock(0.44, 10), 1);
    for (std::size_t n = 0; n <= 10; ++n) {
        CHECK_NEAR(reduced.population(n), (1 - lam * lam) * std::pow(lam, 2.0 * n), 1e-14);
    }
    CHECK(reduced.entries().imag().cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXcd diag = reduced.entries().diagonal().asDiagonal();
    CHECK(max_abs_diff(reduced.entries(), diag) == 0.0);
}

TEST_CASE("gaussian_to_fock reproduces the constructions") {
    const auto pipe = gaussian::epr_pipeline({0.44, kPi / 2, 0.5, 0.0});
    const auto [rho, report] = gaussian_to_fock(pipe, 20);
    CHECK(max_abs_diff(rho.entries(), lossy_tmsv(0.44, 0.5, 20).entries()) <= 1e-10);

    const auto [vac, vac_report] = gaussian_to_fock(gaussian::vacuum(2), 5);
    CHECK(vac.population(0, 0) == 1.0);
    CHECK(vac_report.trace_deficit == 0.0);

    const auto [small, small_report] = gaussian_to_fock(pipe, 5);
    CHECK(small_report.trace_deficit >= 0.0);
    CHECK(small_report.trace_deficit < 1e-4);
    CHECK_NEAR(small.trace(), 1.0 - small_report.trace_deficit, 1e-12);
    CHECK(small_report.largest_discarded_population > 0.0);
    CHECK(small_report.largest_discarded_population <= small_report.trace_deficit);

    const auto sq = gaussian::loss(gaussian::squeeze(gaussian::vacuum(1), 0, {0.44, 0.0}), 0,
                                   {0.7});
    const auto [one, one_report] = gaussian_to_fock(sq, 20);
    // Loss feeds the truncated tail back into low photon numbers, so the
    // reference is built large and cut down.
    const auto wide = loss_fock(squeezed_vacuum_fock(0.44, 120), 0, 0.7);
    CHECK(max_abs_diff(one.entries(), wide.entries().topLeftCorner(21, 21)) <= 1e-10);
    CHECK(one_report.trace_deficit < 1e-8);
}

TEST_CASE("phase conventions agree between the two representations") {
    const auto pipe = gaussian::epr_pipeline({0.5, kPi / 2, 0.6, 0.0});
    for (double phi : {0.4, 1.9}) {
        for (std::size_t m : {0u, 1u}) {
            const auto lhs = gaussian_to_fock(gaussian::phase_shift(pipe, m, phi), 12).first;
            const auto rhs = phase_rotate(gaussian_to_fock(pipe, 12).first, m, phi);
            CHECK(max_abs_diff(lhs.entries(), rhs.entries()) <= 1e-10);
        }
    }
    const auto sq = gaussian::squeeze(gaussian::vacuum(1), 0, {0.3, 0.0});
    const auto lhs = gaussian_to_fock(gaussian::phase_shift(sq, 0, 0.8), 12).first;
    const auto rhs = phase_rotate(gaussian_to_fock(sq, 12).first, 0, 0.8);
    CHECK(max_abs_diff(lhs.entries(), rhs.entries()) <= 1e-10);
}

TEST_CASE("truncated quadrature covariance matches the covariance matrix") {
    test::Gen gen(34);
    for (int i = 0; i < 25; ++i) {
        const double zeta = gen.uniform(0, 0.6);
        const double eta = gen.uniform(0, 1);
        const auto pipe = gaussian::phase_shift(
            gaussian::epr_pipeline({zeta, kPi / 2, eta, 0.0}), 0, gen.uniform(0, 2 * kPi));
        const auto rho = gaussian_to_fock(pipe, 10).first;
        CHECK((quadrature_covariance(rho) - pipe.cov()).cwiseAbs().maxCoeff() <= 1e-3);

        // Single-mode squeezed vacua populate only even photon numbers and
        // lose more variance to the cutoff than the two-mode states do.
        const double zeta1 = 0.75 * zeta;
        const auto sq = gaussian::loss(
            gaussian::squeeze(gaussian::vacuum(1), 0, {zeta1, gen.uniform(0, kPi)}), 0, {eta});
        const auto rho1 = gaussian_to_fock(sq, 10).first;
        CHECK((quadrature_covariance(rho1) - sq.cov()).cwiseAbs().maxCoeff() <= 1e-3);

        auto prod = gaussian::squeeze(gaussian::vacuum(2), 0, {zeta1, 0.0});
        prod = gaussian::loss(gaussian::squeeze(prod, 1, {0.5 * zeta, 1.0}), 1, {eta});
        const auto rho2 = gaussian_to_fock(prod, 10).first;
        CHECK((quadrature_covariance(rho2) - prod.cov()).cwiseAbs().maxCoeff() <= 1e-3);
    }
}

TEST_CASE("pure single-mode squeezing exceeds the covariance budget at cutoff 10") {
    const auto sq = gaussian::squeeze(gaussian::vacuum(1), 0, {0.6, 0.0});
    const double err =
        (quadrature_covariance(gaussian_to_fock(sq, 10).first) - sq.cov()).cwiseAbs().maxCoeff();
    CHECK_NEAR(err, 7.8147606e-3, 1e-8);
    const auto mild = gaussian::squeeze(gaussian::vacuum(1), 0, {0.45, 0.0});
    CHECK((quadrature_covariance(gaussian_to_fock(mild, 10).first) - mild.cov())
              .cwiseAbs()
              .maxCoeff() <= 1e-3);
}

TEST_CASE("gaussian_to_fock rejects states outside the family") {
    const auto thermal = gaussian::GaussianState::from_covariance(Eigen::MatrixXd::Identity(2, 2));
    CHECK(test::error_kind_of([&] { gaussian_to_fock(thermal); }) ==
          ErrorKind::UnsupportedState);
    const auto mixed = gaussian::epr_pipeline({0.44, kPi / 2, 0.5, 0.2});
    CHECK(test::error_kind_of([&] { gaussian_to_fock(mixed); }) == ErrorKind::UnsupportedState);
    CHECK(test::error_kind_of([] { gaussian_to_fock(gaussian::vacuum(3)); }) ==
          ErrorKind::UnsupportedState);
}
