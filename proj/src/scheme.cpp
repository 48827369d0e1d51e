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

#include "anamorph/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anamorph/error.hpp"

namespace anamorph {
namespace {

constexpr double kRelSlack = 1e-12;
constexpr double kNoSignal = 1e-12;

// Ceiling that ignores roundoff just above an integer.
std::uint64_t tolerant_ceil(double x) {
    const double c = std::ceil(x * (1 - kRelSlack));
    return static_cast<std::uint64_t>(std::max(1.0, c));
}

void require_strictly_positive(const ComplexMatrix &mo_enc, double floor) {
    const double lmin = min_eigenvalue(mo_enc);
    if (lmin < floor) {
        std::ostringstream msg;
        msg << "minimum eigenvalue " << lmin << " of the original message is below " << floor;
        fail(ErrorCode::NotStrictlyPositive, msg.str());
    }
}

void require_message_dims(const DensityMatrix &mo, const DensityMatrix *mc, const AnamorphicKey &key) {
    key.validate();
    if (mo.dim() != (std::size_t{1} << key.d1))
        fail(ErrorCode::DimensionMismatch, "original message dimension does not match d1");
    if (mc && mc->dim() != (std::size_t{1} << key.d2))
        fail(ErrorCode::DimensionMismatch, "covert message dimension does not match d2");
}

void require_ciphertext(const Ciphertext &ct, const AnamorphicKey &key) {
    key.validate();
    ct.validate();
    if (ct.d1 != key.d1) fail(ErrorCode::DimensionMismatch, "ciphertext d1 does not match the key");
}

ComplexMatrix inverse_sqrt(const ComplexMatrix &m) {
    return apply_hermitian_function(apply_hermitian_function(m, HermitianFunction::Sqrt),
                                    HermitianFunction::InvOnSupport);
}

ComplexMatrix hermitian_part(const ComplexMatrix &m) { return (m + m.adjoint()) / 2.0; }

}  // namespace

void AnamorphicKey::validate() const {
    if (d1 == 0 || d2 == 0) fail(ErrorCode::InvalidArgument, "d1 and d2 must be positive");
    if (d2 > d1) fail(ErrorCode::DimensionMismatch, "d2 must not exceed d1");
    if (d1 > 16) fail(ErrorCode::TooLarge, "d1 above 16 is not supported");
    if (k.qubits() != d1 || k.bits().size() != 2 * d1) fail(ErrorCode::DimensionMismatch, "k must have 2*d1 bits");
    if (k_prime.bits().size() != 2 * d2) fail(ErrorCode::DimensionMismatch, "k_prime must have 2*d2 bits");
    if (perm.size != (std::size_t{1} << (d1 + 1)) || perm.mapping.size() != perm.size)
        fail(ErrorCode::DimensionMismatch, "permutation size must be 2^(d1+1)");
    if (eta < 1) fail(ErrorCode::InvalidArgument, "eta must be at least 1");
}

void Ciphertext::validate() const {
    if (d1 == 0 || dm.dim() != (std::size_t{1} << (d1 + 1)))
        fail(ErrorCode::DimensionMismatch, "ciphertext dimension must be 2^(d1+1)");
}

EncodedMessages encode_messages(const DensityMatrix &mo, const DensityMatrix &mc, const AnamorphicKey &key) {
    require_message_dims(mo, &mc, key);
    return {qotp_encrypt(mo.mat(), key.k), pad_embed(qotp_encrypt(mc.mat(), key.k_prime), key.d1)};
}

double strict_lhs_norm(const ComplexMatrix &mo_enc, const ComplexMatrix &mc_padded) {
    const ComplexMatrix inv = apply_hermitian_function(mo_enc, HermitianFunction::InvOnSupport);
    return max_eigenvalue(hermitian_part(mc_padded.adjoint() * inv * mc_padded));
}

bool strict_condition_holds(const ComplexMatrix &mo_enc, const ComplexMatrix &mc_padded, double eta) {
    const double lhs = strict_lhs_norm(mo_enc, mc_padded) / (eta * eta);
    const double rhs = min_eigenvalue(mo_enc) / 4;
    return lhs <= rhs * (1 + kRelSlack);
}

double dilation_kappa(const ComplexMatrix &mo_enc, const ComplexMatrix &mc_padded) {
    const ComplexMatrix s = inverse_sqrt(mo_enc);
    return operator_norm(s * mc_padded * s);
}

std::uint64_t select_eta(const DensityMatrix &mo_enc, const DensityMatrix &mc_padded, const SecurityConfig &cfg,
                         EtaMode mode) {
    if (cfg.security_bits < 1 || cfg.security_bits > 62)
        fail(ErrorCode::InvalidArgument, "security_bits must be in [1, 62]");
    if (mo_enc.dim() != mc_padded.dim())
        fail(ErrorCode::DimensionMismatch, "select_eta: messages must share one dimension");
    const ComplexMatrix &mo = mo_enc.mat();
    const ComplexMatrix &mc = mc_padded.mat();
    require_strictly_positive(mo, cfg.min_eig_floor);
    const double lmin = min_eigenvalue(mo);

    std::uint64_t eta_cond;
    if (mode == EtaMode::Weak) {
        eta_cond = tolerant_ceil(2 * max_eigenvalue(mc) / lmin);
    } else {
        eta_cond = tolerant_ceil(std::sqrt(4 * strict_lhs_norm(mo, mc) / lmin));
        while (!strict_condition_holds(mo, mc, static_cast<double>(eta_cond))) ++eta_cond;
    }
    const std::uint64_t eta_security = (std::uint64_t{1} << cfg.security_bits) + 1;
    const double kappa_max = std::max(1.0, dilation_kappa(mo, mc));
    const std::uint64_t eta_dilation = tolerant_ceil(2 * kappa_max);
    return std::max({eta_cond, eta_security, eta_dilation});
}

AnamorphicKey keygen(unsigned d1, unsigned d2, const SecurityConfig &cfg, EtaMode mode, const DensityMatrix &mo,
                     const DensityMatrix &mc, Rng &rng) {
    AnamorphicKey key;
    key.d1 = d1;
    key.d2 = d2;
    key.k = QotpKey::sample(d1, rng);
    key.k_prime = QotpKey::sample(d2, rng);
    key.perm = PermSpec::sample(std::size_t{1} << (d1 + 1), rng);
    key.eta = 1;
    const EncodedMessages enc = encode_messages(mo, mc, key);
    key.eta = select_eta(DensityMatrix::trusted(enc.mo_enc), DensityMatrix::trusted(enc.mc_padded), cfg, mode);
    return key;
}

ComplexMatrix anamorphic_block(const ComplexMatrix &mo_enc, const ComplexMatrix &mc_padded, double eta) {
    const ComplexMatrix half = mo_enc / 2.0;
    const ComplexMatrix off = mc_padded / eta;
    return assemble_control_blocks(half, off, off.adjoint(), half);
}

Ciphertext encrypt_direct(const DensityMatrix &mo, const DensityMatrix &mc, const AnamorphicKey &key) {
    const EncodedMessages enc = encode_messages(mo, mc, key);
    require_strictly_positive(enc.mo_enc, kDefaultMinEigFloor);
    const double eta = static_cast<double>(key.eta);
    if (!strict_condition_holds(enc.mo_enc, enc.mc_padded, eta)) {
        std::ostringstream msg;
        msg << "eta = " << key.eta << " violates the positivity condition";
        fail(ErrorCode::EtaInfeasible, msg.str());
    }
    const ComplexMatrix ma = anamorphic_block(enc.mo_enc, enc.mc_padded, eta);
    return Ciphertext{key.d1, DensityMatrix::trusted(permute_conjugate(ma, key.perm))};
}

Ciphertext encrypt_original(const DensityMatrix &mo, const AnamorphicKey &key) {
    require_message_dims(mo, nullptr, key);
    const ComplexMatrix half = qotp_encrypt(mo.mat(), key.k) / 2.0;
    const ComplexMatrix zero = ComplexMatrix::Zero(half.rows(), half.cols());
    const ComplexMatrix ma = assemble_control_blocks(half, zero, zero, half);
    return Ciphertext{key.d1, DensityMatrix::trusted(permute_conjugate(ma, key.perm))};
}

ComplexMatrix halmos_dilation(const ComplexMatrix &c) {
    if (c.rows() != c.cols()) fail(ErrorCode::DimensionMismatch, "halmos_dilation needs a square contraction");
    // Defect operators from one SVD C = U S V^dagger: sqrt(I - C C^dagger) = U sqrt(1 - S^2) U^dagger
    // and sqrt(I - C^dagger C) = V sqrt(1 - S^2) V^dagger. Taking square roots of I - C C^dagger
    // directly loses half the digits when C has unit norm.
    Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues();
    if (s.size() > 0 && s(0) > 1 + 1e-12) fail(ErrorCode::InvalidArgument, "halmos_dilation needs a contraction");
    Eigen::VectorXd defect(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double si = std::min(s(i), 1.0);
        defect(i) = std::sqrt((1 - si) * (1 + si));
    }
    const ComplexMatrix &u = svd.matrixU();
    const ComplexMatrix &v = svd.matrixV();
    const ComplexMatrix top = u * defect.cast<Complex>().asDiagonal() * u.adjoint();
    const ComplexMatrix bottom = v * defect.cast<Complex>().asDiagonal() * v.adjoint();
    return assemble_control_blocks(c, top, bottom, -c.adjoint());
}

DilationResult encrypt_dilation(const DensityMatrix &mo, const DensityMatrix &mc, const AnamorphicKey &key) {
    const EncodedMessages enc = encode_messages(mo, mc, key);
    const ComplexMatrix &m = enc.mo_enc;
    require_strictly_positive(m, kDefaultMinEigFloor);
    const Eigen::Index dim = m.rows();

    DilationTrace tr;
    const ComplexMatrix sqrt_m = apply_hermitian_function(m, HermitianFunction::Sqrt);
    const ComplexMatrix inv_sqrt = apply_hermitian_function(sqrt_m, HermitianFunction::InvOnSupport);
    // Strict positivity makes the support projector the identity.
    tr.support_projector = inv_sqrt * sqrt_m;
    const ComplexMatrix v0 = tr.support_projector * inv_sqrt * enc.mc_padded * inv_sqrt * tr.support_projector;
    tr.kappa = operator_norm(v0);
    tr.kappa_max = std::max(1.0, tr.kappa);
    const double eta = static_cast<double>(key.eta);
    if (eta < 2 * tr.kappa_max * (1 - kRelSlack)) {
        std::ostringstream msg;
        msg << "eta = " << key.eta << " is below 2*kappa_max = " << 2 * tr.kappa_max;
        fail(ErrorCode::EtaTooSmallForDilation, msg.str());
    }
    tr.lambda = std::min(1.0, 2 * tr.kappa_max / eta);
    tr.w0 = v0 / tr.kappa_max;
    tr.u_bf = halmos_dilation(tr.w0.transpose());

    // Purification |phi> = sum_{jk} sqrt(M)_{jk} |j>_M |k>_B. Psi is stored as a
    // matrix with rows (r, m) and columns (b, f), column index b * 2 + f.
    ComplexMatrix psi = ComplexMatrix::Zero(2 * dim, 2 * dim);
    const ComplexMatrix u00 = control_block(tr.u_bf, 0, 0);
    const ComplexMatrix u10 = control_block(tr.u_bf, 1, 0);
    const ComplexMatrix branch_f0 = sqrt_m * u00.transpose();
    const ComplexMatrix branch_f1 = sqrt_m * u10.transpose();
    const double amp = 1 / std::sqrt(2.0);
    for (Eigen::Index row = 0; row < dim; ++row) {
        for (Eigen::Index b = 0; b < dim; ++b) {
            psi(row, 2 * b) = amp * sqrt_m(row, b);
            psi(dim + row, 2 * b) = amp * branch_f0(row, b);
            psi(dim + row, 2 * b + 1) = amp * branch_f1(row, b);
        }
    }
    const ComplexMatrix omega = psi * psi.adjoint();
    tr.x_block = 2.0 * control_block(omega, 0, 1);
    const ComplexMatrix ma = dephase_control(hermitian_part(omega), tr.lambda);
    return DilationResult{Ciphertext{key.d1, DensityMatrix::trusted(permute_conjugate(ma, key.perm))}, tr};
}

DensityMatrix dom_decrypt(const Ciphertext &ct, const AnamorphicKey &key) {
    require_ciphertext(ct, key);
    const ComplexMatrix md = dephase_control(permute_conjugate_inverse(ct.dm.mat(), key.perm), 0.0);
    const ComplexMatrix reduced = control_block(md, 0, 0) + control_block(md, 1, 1);
    return DensityMatrix::trusted(qotp_decrypt(reduced, key.k));
}

ComplexMatrix covert_block_exact(const Ciphertext &ct, const AnamorphicKey &key) {
    require_ciphertext(ct, key);
    const ComplexMatrix md = permute_conjugate_inverse(ct.dm.mat(), key.perm);
    const ComplexMatrix a = control_block(md, 0, 0), b = control_block(md, 0, 1);
    const ComplexMatrix c = control_block(md, 1, 0), d = control_block(md, 1, 1);
    // Diagonal blocks of (H (x) I) M_d (H (x) I).
    const ComplexMatrix d0 = (a + b + c + d) / 2.0;
    const ComplexMatrix d1 = (a - b - c + d) / 2.0;
    return static_cast<double>(key.eta) * (d0 - d1) / 2.0;
}

ComplexMatrix decode_covert_block(const ComplexMatrix &b_hat, const AnamorphicKey &key) {
    return qotp_decrypt(pad_unembed(b_hat, key.d2), key.k_prime);
}

DensityMatrix dcm_exact(const Ciphertext &ct, const AnamorphicKey &key) {
    const ComplexMatrix b_hat = covert_block_exact(ct, key);
    if (b_hat.norm() <= kNoSignal) fail(ErrorCode::NoCovertSignal, "ciphertext has no off-diagonal control block");
    ComplexMatrix out = decode_covert_block(b_hat, key);
    const DensityCheck check = check_density(out, 1e-8);
    if (!check.ok) {
        std::ostringstream msg;
        msg << "recovered covert block is not a state (wrong key or original ciphertext):";
        for (const auto &v : check.violations) msg << " " << v.label << "=" << v.residual;
        fail(ErrorCode::NoCovertSignal, msg.str());
    }
    return DensityMatrix::trusted(std::move(out));
}

Ciphertext eoc_extract(const Ciphertext &ct, const AnamorphicKey &key) {
    require_ciphertext(ct, key);
    const ComplexMatrix md = dephase_control(permute_conjugate_inverse(ct.dm.mat(), key.perm), 0.0);
    return Ciphertext{key.d1, DensityMatrix::trusted(permute_conjugate(md, key.perm))};
}

TpdsReport tpds_run(const Ciphertext &ct, const AnamorphicKey &key) {
    AnamorphicKey dictator_key = key;
    dictator_key.k_prime = QotpKey::zeros(key.d2);
    dictator_key.eta = 1;
    TpdsReport r{dom_decrypt(ct, key), dcm_exact(ct, key), dom_decrypt(ct, dictator_key),
                 dom_decrypt(eoc_extract(ct, dictator_key), dictator_key), false};
    r.dictator_views_identical = r.dictator_mo.mat() == r.dictator_mo_from_original.mat();
    return r;
}

}  // namespace anamorph
