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

#include "eprsynth/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <thread>

#include "eprsynth/error.hpp"

namespace eprsynth::tomography {

namespace {

using fock::cplx;

constexpr double kMinProbability = 1e-300;
constexpr double kMinDilution = 1e-9;
// Fixed block size of the reduction tree; block sums are combined in order
// so the result does not depend on the number of threads.
constexpr Eigen::Index kBlock = 4096;

std::size_t worker_count(std::size_t requested, std::size_t blocks) {
    std::size_t n = requested;
    if (n == 0) {
        n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    return std::max<std::size_t>(1, std::min(n, blocks));
}

template <typename Fn>
void for_each_block(std::size_t n_blocks, std::size_t threads, Fn &&fn) {
    if (threads <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) {
            fn(b);
        }
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t b = t; b < n_blocks; b += threads) {
                fn(b);
            }
        });
    }
}

struct Evaluation {
    Eigen::VectorXd prob;
    double loglik = 0.0;
};

class Engine {
  public:
    Engine(const ProjectorCache &cache, std::size_t threads)
        : cache_(cache),
          n_blocks_(static_cast<std::size_t>((cache.columns().cols() + kBlock - 1) / kBlock)),
          threads_(worker_count(threads, n_blocks_)) {}

    Evaluation evaluate(const Eigen::MatrixXcd &rho) const {
        const auto &v = cache_.columns();
        Evaluation ev;
        ev.prob.resize(v.cols());
        std::vector<double> partial(n_blocks_, 0.0);
        std::vector<Eigen::Index> bad(n_blocks_, -1);
        for_each_block(n_blocks_, threads_, [&](std::size_t b) {
            const auto [begin, len] = range(b);
            const Eigen::MatrixXcd w = rho * v.middleCols(begin, len);
            double sum = 0.0;
            for (Eigen::Index j = 0; j < len; ++j) {
                const double p =
                    v.col(begin + j).dot(w.col(j)).real(); // conj(v) . w
                ev.prob(begin + j) = p;
                if (!(p >= kMinProbability)) {
                    if (bad[b] < 0) {
                        bad[b] = begin + j;
                    }
                    continue;
                }
                sum += std::log(p);
            }
            partial[b] = sum;
        });
        for (std::size_t b = 0; b < n_blocks_; ++b) {
            if (bad[b] >= 0) {
                fail(ErrorKind::IllConditionedDatum,
                     "record " + std::to_string(bad[b]) +
                         " has vanishing probability under the current estimate");
            }
            ev.loglik += partial[b];
        }
        return ev;
    }

    Eigen::MatrixXcd r_operator(const Eigen::VectorXd &prob) const {
        const auto &v = cache_.columns();
        const auto dim = v.rows();
        std::vector<Eigen::MatrixXcd> partial(n_blocks_);
        for_each_block(n_blocks_, threads_, [&](std::size_t b) {
            const auto [begin, len] = range(b);
            const auto block = v.middleCols(begin, len);
            const Eigen::MatrixXcd scaled =
                block * prob.segment(begin, len).cwiseInverse().asDiagonal();
            partial[b] = scaled * block.adjoint();
        });
        Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
        for (const auto &m : partial) {
            r += m;
        }
        r /= static_cast<double>(v.cols());
        return 0.5 * (r + r.adjoint());
    }

  private:
    [[nodiscard]] std::pair<Eigen::Index, Eigen::Index> range(std::size_t b) const {
        const Eigen::Index begin = static_cast<Eigen::Index>(b) * kBlock;
        return {begin, std::min(kBlock, cache_.columns().cols() - begin)};
    }

    const ProjectorCache &cache_;
    std::size_t n_blocks_;
    std::size_t threads_;
};

} // namespace

double quad_wavefunction(std::size_t n, double x) {
    return quad_wavefunctions(n, x)(static_cast<Eigen::Index>(n));
}

Eigen::VectorXd quad_wavefunctions(std::size_t cutoff, double x) {
    Eigen::VectorXd psi(static_cast<Eigen::Index>(cutoff + 1));
    psi(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (cutoff >= 1) {
        psi(1) = std::numbers::sqrt2 * x * psi(0);
    }
    for (std::size_t n = 1; n < cutoff; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        psi(i + 1) = (std::numbers::sqrt2 * x * psi(i) -
                      std::sqrt(static_cast<double>(n)) * psi(i - 1)) /
                     std::sqrt(static_cast<double>(n + 1));
    }
    return psi;
}

Eigen::VectorXcd projector_overlaps(double theta, double x, std::size_t cutoff) {
    require(cutoff >= 2, "cutoff must be at least 2");
    const Eigen::VectorXd psi = quad_wavefunctions(cutoff, x);
    Eigen::VectorXcd out(psi.size());
    for (Eigen::Index n = 0; n < psi.size(); ++n) {
        out(n) = std::polar(psi(n), static_cast<double>(n) * theta);
    }
    return out;
}

ProjectorCache::ProjectorCache(const homodyne::QuadratureDataset &data,
                               std::size_t cutoff)
    : n_modes_(data.n_modes), cutoff_(cutoff) {
    require(cutoff >= 2, "cutoff must be at least 2");
    require(n_modes_ == 1 || n_modes_ == 2, "tomography covers 1 or 2 modes");
    const auto d = static_cast<Eigen::Index>(cutoff + 1);
    const Eigen::Index dim = n_modes_ == 1 ? d : d * d;
    columns_.resize(dim, static_cast<Eigen::Index>(data.size()));
    const double bound = norm_bound() * (1.0 + 1e-9);
    for (std::size_t j = 0; j < data.size(); ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        const auto &th = data.theta[j];
        const auto &x = data.x[j];
        if (!std::isfinite(x[0]) || !std::isfinite(th[0]) ||
            (n_modes_ == 2 && (!std::isfinite(x[1]) || !std::isfinite(th[1])))) {
            fail(ErrorKind::InvalidArgument,
                 "record " + std::to_string(j) + " has a non-finite value");
        }
        const Eigen::VectorXcd w1 = projector_overlaps(th[0], x[0], cutoff);
        if (n_modes_ == 1) {
            columns_.col(col) = w1;
        } else {
            const Eigen::VectorXcd w2 = projector_overlaps(th[1], x[1], cutoff);
            for (Eigen::Index a = 0; a < d; ++a) {
                columns_.col(col).segment(a * d, d) = w1(a) * w2;
            }
        }
        if (columns_.col(col).squaredNorm() > bound) {
            fail(ErrorKind::Internal,
                 "overlap vector of record " + std::to_string(j) +
                     " exceeds the Hermite-function bound");
        }
    }
}

double ProjectorCache::norm_bound() const noexcept {
    const double per_mode = static_cast<double>(cutoff_ + 1) / std::sqrt(std::numbers::pi);
    return n_modes_ == 1 ? per_mode : per_mode * per_mode;
}

double log_likelihood(const fock::FockDensityMatrix &rho,
                      const ProjectorCache &cache) {
    require(rho.n_modes() == cache.n_modes() && rho.cutoff() == cache.cutoff(),
            "density matrix does not match the projector cache");
    return Engine(cache, 1).evaluate(rho.entries()).loglik;
}

bool phase_deficient(const homodyne::QuadratureDataset &data) {
    for (std::size_t m = 0; m < data.n_modes; ++m) {
        std::set<double> seen;
        for (const auto &th : data.theta) {
            seen.insert(th[m]);
            if (seen.size() >= 3) {
                break;
            }
        }
        if (seen.size() < 3) {
            return true;
        }
    }
    return false;
}

Reconstruction reconstruct(const homodyne::QuadratureDataset &data,
                           const TomographyConfig &config) {
    require(data.size() > 0, "tomography needs a non-empty dataset");
    require(config.cutoff >= 2, "cutoff must be at least 2");
    require(config.stop_tol > 0.0, "stop tolerance must be positive");
    require(config.dilution > 0.0 && config.dilution <= 1.0,
            "dilution must lie in (0, 1]");

    const ProjectorCache cache(data, config.cutoff);
    const Engine engine(cache, config.threads);
    const auto dim = cache.columns().rows();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);

    Eigen::MatrixXcd rho = id / static_cast<double>(dim);
    Evaluation current = engine.evaluate(rho);

    Diagnostics diag;
    diag.phase_deficient = phase_deficient(data);
    while (diag.iterations < config.max_iterations) {
        const Eigen::MatrixXcd r = engine.r_operator(current.prob);
        double d = config.dilution;
        bool accepted = false;
        Eigen::MatrixXcd candidate;
        Evaluation next;
        while (d >= kMinDilution) {
            const Eigen::MatrixXcd t = (1.0 - d) * id + d * r;
            candidate = t * rho * t;
            candidate = 0.5 * (candidate + candidate.adjoint());
            candidate /= candidate.trace().real();
            next = engine.evaluate(candidate);
            if (next.loglik >= current.loglik) {
                accepted = true;
                break;
            }
            ++diag.rejected_steps;
            d *= 0.5;
        }
        if (!accepted) {
            // No dilution improves the likelihood: stationary point.
            diag.converged = true;
            break;
        }
        const double gain = next.loglik - current.loglik;
        rho = std::move(candidate);
        current = std::move(next);
        ++diag.iterations;
        diag.loglik_history.push_back(current.loglik);
        if (gain <= config.stop_tol * std::max(1.0, std::abs(current.loglik))) {
            diag.converged = true;
            break;
        }
    }
    diag.loglik = current.loglik;
    return {fock::FockDensityMatrix::from_matrix(data.n_modes, config.cutoff,
                                                 std::move(rho)),
            std::move(diag)};
}

} // namespace eprsynth::tomography
