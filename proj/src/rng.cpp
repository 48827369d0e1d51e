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

#include "anamorph/rng.hpp"

#include "anamorph/error.hpp"

namespace anamorph {

std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_substream_seed(std::uint64_t seed, std::string_view label,
                                    std::uint64_t index) noexcept {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ fnv1a64(label));
    return splitmix64(h ^ index);
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng Rng::substream(std::uint64_t seed, std::string_view label, std::uint64_t index) {
    return Rng(derive_substream_seed(seed, label, index));
}

Rng Rng::from_source(std::function<std::uint64_t()> source) {
    if (!source) fail(ErrorCode::InvalidArgument, "empty RNG source");
    Rng r;
    r.source_ = std::move(source);
    return r;
}

std::uint64_t Rng::next_u64() { return source_ ? source_() : engine_(); }

std::uint64_t Rng::uniform_below(std::uint64_t n) {
    if (n == 0) fail(ErrorCode::InvalidArgument, "uniform_below(0)");
    // Accept x below the largest multiple of n representable in 64 bits.
    const std::uint64_t rem = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t x = next_u64();
        if (rem == 0 || x < 0 - rem) return x % n;
    }
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

bool Rng::bit() { return (next_u64() >> 63) != 0; }

}  // namespace anamorph
