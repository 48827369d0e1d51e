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

#ifndef ANAMORPH_QASS_HPP
#define ANAMORPH_QASS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anamorph/mat_core.hpp"
#include "anamorph/rng.hpp"
#include "anamorph/scheme.hpp"

namespace anamorph {

bool is_prime(std::uint64_t n);
/// Smallest prime strictly greater than n.
std::uint64_t next_prime_above(std::uint64_t n);
/// ceil(log2 n) for n >= 1.
unsigned ceil_log2(std::uint64_t n);

/// Element of GF(p). The modulus is checked by trial division and must be below 2^32.
class FieldElement {
public:
    FieldElement(std::uint64_t value, std::uint64_t p);

    std::uint64_t value() const { return value_; }
    std::uint64_t modulus() const { return p_; }

    FieldElement operator+(const FieldElement &o) const;
    FieldElement operator-(const FieldElement &o) const;
    FieldElement operator*(const FieldElement &o) const;
    FieldElement inverse() const;
    bool operator==(const FieldElement &o) const = default;

private:
    struct Unchecked {};
    FieldElement(std::uint64_t value, std::uint64_t p, Unchecked) : value_(value), p_(p) {}
    void require_same_field(const FieldElement &o) const;

    std::uint64_t value_;
    std::uint64_t p_;
};

struct ShamirShare {
    FieldElement x;
    FieldElement y;
    bool operator==(const ShamirShare &) const = default;
};

/// 2-of-3 sharing with f(x) = secret + c x at x = 1, 2, 3. Requires p > 3.
std::array<ShamirShare, 3> shamir_share_with(const FieldElement &secret, std::uint64_t c);
/// Draws c = uniform_below(p).
std::array<ShamirShare, 3> shamir_share(const FieldElement &secret, Rng &rng);
/// Interpolates the first two shares at 0; any further shares must lie on the same line.
FieldElement shamir_reconstruct(std::span<const ShamirShare> shares);

/// Public finite set of admissible eta values, ascending.
struct EtaDomain {
    std::vector<std::uint64_t> values;

    void validate() const;
    std::size_t index_of(std::uint64_t eta) const;  // InvalidArgument if absent
    bool operator==(const EtaDomain &) const = default;
};

/// (k1, k2, k3) = (k, d1, Lehmer rank of the permutation) is the original key,
/// (k4, k5, k6) = (k', d2, index of eta in the domain) is the covert key.
struct KeyTuple {
    std::uint64_t k1 = 0, k2 = 0, k3 = 0, k4 = 0, k5 = 0, k6 = 0;

    std::uint64_t get(std::size_t component) const;  // component in [1, 6]
    void set(std::size_t component, std::uint64_t v);
    bool operator==(const KeyTuple &) const = default;
};

inline constexpr std::array<const char *, 6> kKeyComponentNames = {"k1", "k2", "k3", "k4", "k5", "k6"};
inline constexpr unsigned kMaxQassD1 = 2;

KeyTuple key_tuple_from(const AnamorphicKey &key, const EtaDomain &domain);
AnamorphicKey key_from_tuple(const KeyTuple &t, const EtaDomain &domain);

/// Number of admissible values of a component: 2^(2 d1), 2^(d1+1), (2^(d1+1))!,
/// 2^(2 d2), 2^(d1+1), |J|.
std::uint64_t component_domain_size(std::size_t component, unsigned d1, unsigned d2, std::size_t eta_domain_size);
/// Smallest prime strictly greater than max(domain, 3).
std::uint64_t component_prime(std::size_t component, unsigned d1, unsigned d2, std::size_t eta_domain_size);

struct ShareBundle {
    unsigned player = 0;                          // 1..3
    std::map<std::string, ShamirShare> classical;  // "k1".."k6"
    unsigned qudit_index = 0;                      // 1..3, register in the encoded state

    bool has_covert() const;
    bool operator==(const ShareBundle &) const = default;
};

/// Drops k4, k5, k6: a holder authorized for the original message only.
ShareBundle withhold_covert(ShareBundle b);

/// Polynomial code over GF(q): |m> -> q^-1/2 sum_c |m + c, m + 2c, m + 3c>.
/// Register 1 is the most significant factor of the q^3-dimensional space.
struct EncodedQuantumState {
    std::uint64_t q = 0;
    unsigned n = 3;
    std::array<std::uint64_t, 3> eval_points{1, 2, 3};
    DensityMatrix global = DensityMatrix::trusted(ComplexMatrix::Identity(1, 1));
    std::size_t embed_dim = 0;

    void validate() const;
};

/// Smallest prime >= max(5, embed_dim).
std::uint64_t code_prime(std::size_t embed_dim);

EncodedQuantumState cgl_encode(const DensityMatrix &rho, std::uint64_t q);
/// Reduced state of one register (1-based).
ComplexMatrix register_reduced_state(const EncodedQuantumState &enc, unsigned reg);
/// Decodes from registers {i, j}; the third register is traced out first.
DensityMatrix cgl_decode(const EncodedQuantumState &enc, unsigned i, unsigned j);

struct QassShareResult {
    std::array<ShareBundle, 3> bundles;
    EncodedQuantumState enc;
    Ciphertext dictator_view;
    AnamorphicKey key;  // dealer's key, kept for verification
    EtaDomain eta_domain;
};

/// Draws the anamorphic key (weak rule, then the smallest domain eta not below it),
/// encrypts, Shamir-shares k1..k6 in that order and encodes the ciphertext.
QassShareResult qass_share(const DensityMatrix &mo, const DensityMatrix &mc, const EtaDomain &domain,
                           const SecurityConfig &cfg, Rng &rng);

struct QassReconstruction {
    DensityMatrix mo_rec;
    DensityMatrix mc_rec;
    KeyTuple tuple;
};

/// Needs exactly two bundles from distinct players; throws CovertUnavailable if either lacks k4..k6.
QassReconstruction qass_reconstruct(std::span<const ShareBundle> bundles, const EncodedQuantumState &enc,
                                    const EtaDomain &domain);
/// Original-message path using k1, k2, k3 only.
DensityMatrix qass_reconstruct_original(std::span<const ShareBundle> bundles, const EncodedQuantumState &enc);

/// Components whose value differs between the three qualified pairs.
std::vector<std::string> cross_pair_disagreements(const std::array<ShareBundle, 3> &bundles);

struct ShareSizeReport {
    std::uint64_t anamorphic_bits = 0;
    std::uint64_t original_bits = 0;
    std::int64_t difference = 0;
    std::uint64_t quantum_bits = 0;
};

/// quantum + (4 d1 + 2 d2 + 1) + 6 ceil(log2 |R|) + ceil(log2 |J|) + ceil(log2 (2^(d1+1))!),
/// with |R| the largest field size and quantum = 3 ceil(log2 q).
ShareSizeReport share_size_report(unsigned d1, unsigned d2, std::span<const std::uint64_t> field_sizes,
                                  std::size_t eta_domain_size);

struct CheatReport {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double empirical_success = 0;
    double formula = 0;
    double three_sigma = 0;
};

/// 1 - 1 / (2^(2 d2 + d1 + 1) |J|).
double cheat_formula(unsigned d1, unsigned d2, std::size_t eta_domain_size);

/// Player 1 forges its covert shares so that the pair (1, 2) reconstructs a uniformly
/// drawn covert key; success when it differs from the honest one. Trial t uses
/// Rng::substream(seed, "cheat", t).
CheatReport cheat_simulate(unsigned d1, unsigned d2, std::size_t eta_domain_size, std::uint64_t trials,
                           std::uint64_t seed);

}  // namespace anamorph

#endif  // ANAMORPH_QASS_HPP
