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

#ifndef ANAMORPH_SCHEME_HPP
#define ANAMORPH_SCHEME_HPP

#include <cstdint>

#include "anamorph/mat_core.hpp"
#include "anamorph/qop_kit.hpp"
#include "anamorph/rng.hpp"

namespace anamorph {

inline constexpr double kDefaultMinEigFloor = 1e-9;

struct SecurityConfig {
    unsigned security_bits = 1;  // require 1/eta < 2^-security_bits
    double min_eig_floor = kDefaultMinEigFloor;
};

enum class EtaMode { Strict, Weak };

struct AnamorphicKey {
    unsigned d1 = 0;
    unsigned d2 = 0;
    QotpKey k;
    QotpKey k_prime;
    PermSpec perm;
    std::uint64_t eta = 1;

    /// Throws DimensionMismatch or InvalidArgument when the fields disagree.
    void validate() const;
    bool operator==(const AnamorphicKey &) const = default;
};

struct Ciphertext {
    unsigned d1 = 0;
    DensityMatrix dm = DensityMatrix::trusted(ComplexMatrix::Identity(1, 1));

    /// Throws DimensionMismatch unless dm has dimension 2^(d1+1).
    void validate() const;
};

/// Encrypted original M_o' = QOTP(mo, k) and padded covert M_c'' = V QOTP(mc, k') V^dagger.
struct EncodedMessages {
    ComplexMatrix mo_enc;
    ComplexMatrix mc_padded;
};

EncodedMessages encode_messages(const DensityMatrix &mo, const DensityMatrix &mc, const AnamorphicKey &key);

/// Largest eigenvalue of M_c'' (M_o')^{-1} M_c''.
double strict_lhs_norm(const ComplexMatrix &mo_enc, const ComplexMatrix &mc_padded);

/// (1/eta^2) ||M_c'' (M_o')^{-1} M_c''|| <= lambda_min(M_o') / 4, with 1e-12 relative slack.
bool strict_condition_holds(const ComplexMatrix &mo_enc, const ComplexMatrix &mc_padded, double eta);

/// kappa = ||(M_o')^{-1/2} M_c'' (M_o')^{-1/2}||_inf.
double dilation_kappa(const ComplexMatrix &mo_enc, const ComplexMatrix &mc_padded);

/// Smallest integer eta meeting the chosen condition, 1/eta < 2^-bits and eta >= 2 kappa_max.
std::uint64_t select_eta(const DensityMatrix &mo_enc, const DensityMatrix &mc_padded, const SecurityConfig &cfg,
                         EtaMode mode);

/// Draws k (2 d1 bits), then k' (2 d2 bits), then the permutation; eta follows from select_eta.
AnamorphicKey keygen(unsigned d1, unsigned d2, const SecurityConfig &cfg, EtaMode mode, const DensityMatrix &mo,
                     const DensityMatrix &mc, Rng &rng);

/// Block state [[M_o'/2, M_c''/eta], [M_c''/eta, M_o'/2]] before the permutation.
ComplexMatrix anamorphic_block(const ComplexMatrix &mo_enc, const ComplexMatrix &mc_padded, double eta);

Ciphertext encrypt_direct(const DensityMatrix &mo, const DensityMatrix &mc, const AnamorphicKey &key);
Ciphertext encrypt_original(const DensityMatrix &mo, const AnamorphicKey &key);

struct DilationTrace {
    double kappa = 0;
    double kappa_max = 0;
    double lambda = 0;
    ComplexMatrix w0;
    ComplexMatrix u_bf;  // F-outer block form
    ComplexMatrix support_projector;
    ComplexMatrix x_block;  // sqrt(M_o') W0 sqrt(M_o'), read off Omega_r before dephasing
};

struct DilationResult {
    Ciphertext ct;
    DilationTrace trace;
};

/// Purification, Halmos dilation, control dephasing and permutation.
DilationResult encrypt_dilation(const DensityMatrix &mo, const DensityMatrix &mc, const AnamorphicKey &key);

/// Halmos unitary [[C, sqrt(I - C C^dagger)], [sqrt(I - C^dagger C), -C^dagger]] of a contraction C.
ComplexMatrix halmos_dilation(const ComplexMatrix &c);

DensityMatrix dom_decrypt(const Ciphertext &ct, const AnamorphicKey &key);

/// Exact covert block eta (D0 - D1) / 2 after undoing the permutation and a
/// Hadamard on the control qubit; still padded and QOTP-encrypted.
ComplexMatrix covert_block_exact(const Ciphertext &ct, const AnamorphicKey &key);

/// Unembeds and decrypts a covert block estimate with k'.
ComplexMatrix decode_covert_block(const ComplexMatrix &b_hat, const AnamorphicKey &key);

/// Throws NoCovertSignal when the ciphertext carries no covert state for this key.
DensityMatrix dcm_exact(const Ciphertext &ct, const AnamorphicKey &key);

Ciphertext eoc_extract(const Ciphertext &ct, const AnamorphicKey &key);

/// Transmission under a supervising dictator: the receiver decrypts both messages
/// with the full key, the dictator runs DOM with (perm, d1, k) only.
struct TpdsReport {
    DensityMatrix receiver_mo;
    DensityMatrix receiver_mc;
    DensityMatrix dictator_mo;
    DensityMatrix dictator_mo_from_original;  // DOM applied to EOC of the same ciphertext
    bool dictator_views_identical = false;    // entrywise equality of the two dictator outputs
};

TpdsReport tpds_run(const Ciphertext &ct, const AnamorphicKey &key);

}  // namespace anamorph

#endif  // ANAMORPH_SCHEME_HPP
