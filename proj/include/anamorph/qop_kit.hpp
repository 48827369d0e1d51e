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

#ifndef ANAMORPH_QOP_KIT_HPP
#define ANAMORPH_QOP_KIT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anamorph/mat_core.hpp"
#include "anamorph/rng.hpp"

namespace anamorph {

/// Tensor product of X^{x_j} Z^{z_j}, qubit 0 most significant.
struct PauliString {
    std::size_t n = 0;
    std::vector<std::uint8_t> x_bits;
    std::vector<std::uint8_t> z_bits;

    /// Base-4 enumeration, one digit per qubit (qubit 0 most significant),
    /// digits 0..3 standing for I, X, Y, Z.
    static PauliString from_index(std::size_t n, std::size_t index);
    /// Parses a word over {I, X, Y, Z}; Y stands for x = z = 1.
    static PauliString from_symbol(std::string_view symbol);

    std::size_t index() const;
    std::string symbol() const;
    bool is_identity() const;
    bool operator==(const PauliString &) const = default;
};

/// Phase-free realization X^x Z^z per qubit. For x = z = 1 this is XZ = -iY.
ComplexMatrix pauli_matrix(const PauliString &p);

/// Hermitian realization, i^{x_j z_j} X^{x_j} Z^{z_j} per qubit (I, X, Y, Z).
ComplexMatrix pauli_observable(const PauliString &p);

/// Tr(P m) for the Hermitian observable P of `p`, in O(dim) operations.
Complex pauli_trace(const PauliString &p, const ComplexMatrix &m);

class QotpKey {
   public:
    QotpKey() = default;
    /// Bits k_1 .. k_2n as 0/1 values; the length must be even.
    explicit QotpKey(std::vector<std::uint8_t> bits);

    static QotpKey zeros(std::size_t qubits);
    /// Key number `index` among the 4^n keys, k_1 being the most significant bit.
    static QotpKey from_index(std::size_t qubits, std::uint64_t index);
    /// Parses "0101..."; throws SchemaViolation on other characters or odd length.
    static QotpKey from_string(std::string_view text);
    /// Draws 2n bits, one rng.bit() each, k_1 first.
    static QotpKey sample(std::size_t qubits, Rng &rng);

    std::string to_string() const;
    std::size_t qubits() const noexcept { return bits_.size() / 2; }
    const std::vector<std::uint8_t> &bits() const noexcept { return bits_; }
    /// Qubit j carries X^{k_{2j-1}} Z^{k_{2j}}.
    PauliString pauli() const;
    bool operator==(const QotpKey &) const = default;

   private:
    std::vector<std::uint8_t> bits_;
};

ComplexMatrix qotp_unitary(const QotpKey &key);

/// U_k rho U_k^dagger, computed as an exact signed index permutation.
ComplexMatrix qotp_encrypt(const ComplexMatrix &rho, const QotpKey &key);
ComplexMatrix qotp_decrypt(const ComplexMatrix &sigma, const QotpKey &key);
DensityMatrix qotp_encrypt(const DensityMatrix &rho, const QotpKey &key);
DensityMatrix qotp_decrypt(const DensityMatrix &sigma, const QotpKey &key);

/// Average over all 4^n keys; limited to n <= 4.
DensityMatrix qotp_key_average(const DensityMatrix &rho);

std::uint64_t factorial(std::size_t n);

/// Lehmer rank: sum_i c_i (N-1-i)! with c_i the count of smaller entries right of i.
std::uint64_t lehmer_rank(std::span<const std::size_t> mapping);
std::vector<std::size_t> lehmer_unrank(std::size_t size, std::uint64_t rank);

struct PermSpec {
    std::size_t size = 0;
    std::vector<std::size_t> mapping;  // U|j> = |mapping[j]>
    std::optional<std::uint64_t> lehmer;

    static constexpr std::size_t kMaxLehmerSize = 20;

    static PermSpec identity(std::size_t size);
    /// Validates the bijection and fills `lehmer` when size <= 20.
    static PermSpec from_mapping(std::vector<std::size_t> mapping);
    static PermSpec from_lehmer(std::size_t size, std::uint64_t rank);
    /// Forward Fisher-Yates: for i = 0..N-2 swap i with i + uniform_below(N - i).
    static PermSpec sample(std::size_t size, Rng &rng);

    PermSpec inverse() const;
    bool operator==(const PermSpec &) const = default;
};

ComplexMatrix permutation_unitary(const PermSpec &p);

/// U m U^dagger and U^dagger m U by index relabeling.
ComplexMatrix permute_conjugate(const ComplexMatrix &m, const PermSpec &p);
ComplexMatrix permute_conjugate_inverse(const ComplexMatrix &m, const PermSpec &p);

/// Isometry V from 2^d2 into 2^d1 dimensions, V|j> = |j>. The padding qubits
/// are the most significant factor, so the image is the top-left block.
ComplexMatrix padding_isometry(unsigned d2, unsigned d1);
/// Support projector V V^dagger.
ComplexMatrix padding_projector(unsigned d2, unsigned d1);

ComplexMatrix pad_embed(const ComplexMatrix &rho, unsigned d1);
DensityMatrix pad_embed(const DensityMatrix &rho, unsigned d1);
/// V^dagger X V, i.e. the top-left 2^d2 block.
ComplexMatrix pad_unembed(const ComplexMatrix &rho_big, unsigned d2);

/// Block (r, c) of a matrix over R (x) M with R the leading qubit.
ComplexMatrix control_block(const ComplexMatrix &m, int r, int c);
ComplexMatrix assemble_control_blocks(const ComplexMatrix &a00, const ComplexMatrix &a01,
                                      const ComplexMatrix &a10, const ComplexMatrix &a11);

/// Scales the off-diagonal control blocks by lambda in [-1, 1].
ComplexMatrix dephase_control(const ComplexMatrix &rho, double lambda);
DensityMatrix dephase_control(const DensityMatrix &rho, double lambda);

}  // namespace anamorph

#endif  // ANAMORPH_QOP_KIT_HPP
