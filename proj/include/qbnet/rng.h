// Copyright 2026 The qbnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QBNET_RNG_H
#define QBNET_RNG_H

#include <cstdint>
#include <span>

namespace qbnet {

/// xoshiro256** generator seeded through splitmix64.
///
/// Streams: a generator is identified by (seed, stream). Two generators with
/// the same seed and different streams are statistically independent. The
/// samplers use the following rule:
///   - importance sampling: stream = sample index k;
///   - Markov chains: stream = 4 * chain + role, where role 0 draws the
///     initial state, role 1 draws node indices and proposals, role 2 draws
///     acceptance variates, role 3 draws measurement outcomes.
class Rng {
   public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in [0, n). Consumes nothing when n == 1.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Inverse-CDF draw: the smallest k with u < cumulative[k]. Mass lost to
    /// rounding at the top falls on the last nonzero entry.
    std::size_t categorical(std::span<const double> probabilities);

   private:
    std::uint64_t s_[4];
};

enum class ChainStream : std::uint64_t { Init = 0, Moves = 1, Accept = 2, Measure = 3 };

inline Rng chain_rng(std::uint64_t seed, std::uint64_t chain, ChainStream role) {
    return Rng(seed, 4 * chain + static_cast<std::uint64_t>(role));
}

/// Inverse-CDF categorical draw for a given uniform variate.
std::size_t categorical_from_uniform(std::span<const double> probabilities, double u);

}  // namespace qbnet

#endif
