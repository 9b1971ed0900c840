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

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace eprsynth {

/// Counter-based generator: output k is the k-th output of a SplitMix64
/// stream seeded with `seed`, computed directly from k. Any range of
/// counters can therefore be evaluated independently and in any order.
class SplitMixCounter {
  public:
    explicit constexpr SplitMixCounter(std::uint64_t seed) noexcept : seed_(seed) {}

    [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        std::uint64_t z = seed_ + (counter + 1) * 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1] with 53 random bits.
    [[nodiscard]] constexpr double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
    }

    /// Two independent standard normals from counters 2i and 2i+1 (Box-Muller).
    [[nodiscard]] std::array<double, 2> normal_pair(std::uint64_t i) const noexcept {
        const double r = std::sqrt(-2.0 * std::log(uniform(2 * i)));
        const double phi = 2.0 * std::numbers::pi * uniform(2 * i + 1);
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    [[nodiscard]] constexpr std::uint64_t seed() const noexcept { return seed_; }

  private:
    std::uint64_t seed_;
};

} // namespace eprsynth
