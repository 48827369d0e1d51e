// Copyright 2026 The anamorph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANAMORPH_RNG_HPP
#define ANAMORPH_RNG_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <string_view>

namespace anamorph {

/// 64-bit FNV-1a hash of a label; used only for substream derivation.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the substream (seed, label, index).
std::uint64_t derive_substream_seed(std::uint64_t seed, std::string_view label,
                                    std::uint64_t index) noexcept;

/// Deterministic random source.
///
/// The engine is std::mt19937_64 seeded with one 64-bit word. Every draw in the
/// library goes through next_u64(), so an instance built from a custom source
/// (see from_source) reproduces any stream exactly, including degenerate ones.
class Rng {
   public:
    explicit Rng(std::uint64_t seed);

    /// Substream for (seed, label, index); see derive_substream_seed.
    static Rng substream(std::uint64_t seed, std::string_view label, std::uint64_t index);

    /// Wraps an arbitrary word source; intended for tests.
    static Rng from_source(std::function<std::uint64_t()> source);

    std::uint64_t next_u64();

    /// Uniform integer in [0, n) by rejection; n must be positive.
    std::uint64_t uniform_below(std::uint64_t n);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    /// One fair bit taken from the top bit of a word.
    bool bit();

   private:
    Rng() = default;
    std::mt19937_64 engine_;
    std::function<std::uint64_t()> source_;
};

}  // namespace anamorph

#endif  // ANAMORPH_RNG_HPP
