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

#include "anamorph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "anamorph/error.hpp"
#include "anamorph/qop_kit.hpp"

namespace anamorph {
namespace {

void require_same_square(const ComplexMatrix &a, const ComplexMatrix &b, const char *what) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() || a.rows() == 0)
        fail(ErrorCode::DimensionMismatch, std::string(what) + ": operands must be square of equal size");
}

double plogp(double p) { return p > 0 ? p * std::log2(p) : 0.0; }

// Joint spectrum of commuting Hermitian A, B: for each eigenvector pair (lambda_i, mu_i).
void joint_spectrum(const ComplexMatrix &a, const ComplexMatrix &b, std::vector<double> &lambda,
                    std::vector<double> &mu) {
    const HermitianEigen ea = hermitian_eig(a);
    const double tol = 1e-10 * std::max(1.0, a.norm());
    const auto n = ea.eigenvalues.size();
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && ea.eigenvalues[end] - ea.eigenvalues[end - 1] <= tol) ++end;
        const auto width = static_cast<Eigen::Index>(end - start);
        const ComplexMatrix q = ea.eigenvectors.middleCols(static_cast<Eigen::Index>(start), width);
        ComplexMatrix sub = q.adjoint() * b * q;
        sub = (sub + sub.adjoint()) / 2.0;
        double mean = 0;
        for (std::size_t i = start; i < end; ++i) mean += ea.eigenvalues[i];
        mean /= static_cast<double>(end - start);
        for (double m : hermitian_eig(sub).eigenvalues) {
            lambda.push_back(mean);
            mu.push_back(m);
        }
        start = end;
    }
}

}  // namespace

double trace_distance(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
    require_same_square(rho, sigma, "trace_distance");
    ComplexMatrix diff = rho - sigma;
    diff = (diff + diff.adjoint()) / 2.0;
    double s = 0;
    for (double l : hermitian_eig(diff).eigenvalues) s += std::abs(l);
    return s / 2;
}

double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
    return trace_distance(rho.mat(), sigma.mat());
}

double fidelity(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
    require_same_square(rho, sigma, "fidelity");
    // ||sqrt(rho) sqrt(sigma)||_1 avoids square roots of tiny eigenvalues of sqrt(rho) sigma sqrt(rho).
    const ComplexMatrix sr = apply_hermitian_function((rho + rho.adjoint()) / 2.0, HermitianFunction::Sqrt);
    const ComplexMatrix ss = apply_hermitian_function((sigma + sigma.adjoint()) / 2.0, HermitianFunction::Sqrt);
    return trace_norm(sr * ss);
}

double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) { return fidelity(rho.mat(), sigma.mat()); }

IndistinguishabilityReport indistinguishability_report(const Ciphertext &ct0, const Ciphertext &ct1,
                                                       std::uint64_t eta) {
    ct0.validate();
    ct1.validate();
    if (ct0.d1 != ct1.d1) fail(ErrorCode::DimensionMismatch, "ciphertexts have different d1");
    IndistinguishabilityReport r;
    r.eta = eta;
    r.trace_distance = trace_distance(ct0.dm, ct1.dm);
    r.fidelity = fidelity(ct0.dm, ct1.dm);
    const double f = std::min(1.0, r.fidelity);
    r.fvdg_lower = 1 - f;
    r.fvdg_upper = std::sqrt(std::max(0.0, 1 - f * f));
    r.helstrom_advantage = r.trace_distance;
    return r;
}

TwirlReport twirl_expectation(const ComplexMatrix &phi, bool brute_force) {
    if (phi.rows() != phi.cols() || phi.rows() < 2) fail(ErrorCode::DimensionMismatch, "twirl needs a square matrix, n >= 2");
    const auto n = static_cast<std::size_t>(phi.rows());
    if (brute_force && n > kMaxBruteForceTwirl)
        fail(ErrorCode::TooLargeForBruteForce, "brute-force twirl enumerates n! permutations; n must be <= 8");
    TwirlReport r;
    r.n = n;
    r.trace = phi.trace().real();
    r.entry_sum = phi.sum().real();
    const double nn = static_cast<double>(n);
    r.alpha = (nn * r.trace - r.entry_sum) / (nn * (nn - 1));
    r.beta = (r.entry_sum - r.trace) / (nn * (nn - 1));
    const auto dim = static_cast<Eigen::Index>(n);
    r.formula_state = r.alpha * ComplexMatrix::Identity(dim, dim) + r.beta * ComplexMatrix::Ones(dim, dim);
    if (brute_force) {
        std::vector<std::size_t> mapping(n);
        std::iota(mapping.begin(), mapping.end(), std::size_t{0});
        ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
        std::uint64_t count = 0;
        do {
            acc += permute_conjugate(phi, PermSpec::from_mapping(mapping));
            ++count;
        } while (std::next_permutation(mapping.begin(), mapping.end()));
        r.brute_force_state = acc / static_cast<double>(count);
    }
    return r;
}

ComplexMatrix key_averaged_block(unsigned d1, unsigned d2, double eta) {
    if (d2 > d1) fail(ErrorCode::DimensionMismatch, "d2 must not exceed d1");
    const auto n = Eigen::Index{1} << d1;
    const ComplexMatrix diag = ComplexMatrix::Identity(n, n) / static_cast<double>(2 * n);
    const ComplexMatrix off = padding_projector(d2, d1) / (eta * static_cast<double>(std::uint64_t{1} << d2));
    return assemble_control_blocks(diag, off, off, diag);
}

double expected_state_distance(unsigned d1, std::uint64_t eta) {
    return 1.0 / (static_cast<double>(eta) * static_cast<double>(std::uint64_t{1} << d1));
}

double entropy_of_spectrum(const std::vector<double> &p) {
    double s = 0;
    for (double v : p) s -= plogp(std::max(v, 0.0));
    return s;
}

double von_neumann_entropy(const ComplexMatrix &rho) {
    return entropy_of_spectrum(hermitian_eig((rho + rho.adjoint()) / 2.0).eigenvalues);
}

double relative_entropy(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
    require_same_square(rho, sigma, "relative_entropy");
    const ComplexMatrix r = (rho + rho.adjoint()) / 2.0, s = (sigma + sigma.adjoint()) / 2.0;
    // Weight of rho on the kernel of sigma.
    const HermitianEigen es = hermitian_eig(s);
    const double cutoff = kSupportTol * std::max(std::abs(es.eigenvalues.front()), std::abs(es.eigenvalues.back()));
    double leak = 0;
    for (std::size_t i = 0; i < es.eigenvalues.size(); ++i) {
        if (es.eigenvalues[i] > cutoff) continue;
        const ComplexVector v = es.eigenvectors.col(static_cast<Eigen::Index>(i));
        leak += (v.adjoint() * r * v)(0, 0).real();
    }
    if (leak > 1e-12) return std::numeric_limits<double>::infinity();
    const ComplexMatrix lr = apply_hermitian_function(r, HermitianFunction::Log2OnSupport);
    const ComplexMatrix ls = apply_hermitian_function(s, HermitianFunction::Log2OnSupport);
    return (r * (lr - ls)).trace().real();
}

bool commutes(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_square(a, b, "commutes");
    return (a * b - b * a).norm() <= 1e-10 * a.norm() * b.norm();
}

EntropyReport entropy_report(const DensityMatrix &mo_enc, const DensityMatrix &mc_padded, std::uint64_t eta) {
    const ComplexMatrix &a = mo_enc.mat();
    const ComplexMatrix &b = mc_padded.mat();
    require_same_square(a, b, "entropy_report");
    if (eta < 1) fail(ErrorCode::InvalidArgument, "eta must be positive");
    const double lmin = min_eigenvalue(a);
    if (lmin < kDefaultMinEigFloor) fail(ErrorCode::NotStrictlyPositive, "entropy_report needs a strictly positive original");
    const double e = static_cast<double>(eta);

    EntropyReport r;
    r.s_mo_enc = von_neumann_entropy(a);
    const ComplexMatrix half = a / 2.0;
    const ComplexMatrix zero = ComplexMatrix::Zero(a.rows(), a.cols());
    r.s_mf0 = von_neumann_entropy(assemble_control_blocks(half, zero, zero, half));
    if (std::abs(r.s_mf0 - (r.s_mo_enc + 1)) > 1e-9)
        throw std::logic_error("entropy_report: S(M_f0) differs from S(M_o') + 1");

    const ComplexMatrix inv = apply_hermitian_function(a, HermitianFunction::InvOnSupport);
    r.rel_entropy_bound = 4 / (e * e) * (b.adjoint() * inv * b).trace().real();

    r.commuting = commutes(a, b);
    if (r.commuting) {
        std::vector<double> lambda, mu;
        joint_spectrum(a, b, lambda, mu);
        std::vector<double> p1;
        double rel = 0;
        bool psd = true;
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            const double q = lambda[i] / 2;
            for (double sign : {1.0, -1.0}) {
                const double p = q + sign * mu[i] / e;
                if (p < -1e-10) psd = false;
                p1.push_back(p);
                if (p > 0) rel += p * std::log2(p / q);
            }
        }
        if (psd) {
            r.s_mf1_commuting = entropy_of_spectrum(p1);
            r.rel_entropy = rel;
        }
    }
    return r;
}

QcpaReport qcpa_average(const DensityMatrix &mo, const DensityMatrix &mc, unsigned d1, unsigned d2,
                        std::uint64_t eta, QcpaMode mode, std::uint64_t samples, Rng *rng) {
    if (d1 == 0 || d2 == 0 || d2 > d1) fail(ErrorCode::DimensionMismatch, "qcpa_average needs 1 <= d2 <= d1");
    if (mo.dim() != (std::size_t{1} << d1) || mc.dim() != (std::size_t{1} << d2))
        fail(ErrorCode::DimensionMismatch, "message dimensions do not match d1, d2");
    if (eta < 2) fail(ErrorCode::InvalidArgument, "qcpa_average needs eta >= 2");
    const double e = static_cast<double>(eta);
    const std::size_t n = std::size_t{1} << (d1 + 1);
    const auto dim = static_cast<Eigen::Index>(n);

    auto term = [&](const QotpKey &k, const QotpKey &kp, const PermSpec &perm) {
        const ComplexMatrix mo_enc = qotp_encrypt(mo.mat(), k);
        const ComplexMatrix mc_pad = pad_embed(qotp_encrypt(mc.mat(), kp), d1);
        return permute_conjugate(anamorphic_block(mo_enc, mc_pad, e), perm);
    };

    QcpaReport r;
    ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
    if (mode == QcpaMode::Exact) {
        if (d1 != 1 || d2 != 1) fail(ErrorCode::UnsupportedDims, "exact enumeration is limited to d1 = d2 = 1");
        const std::uint64_t nk = std::uint64_t{1} << (2 * d1), nkp = std::uint64_t{1} << (2 * d2);
        const std::uint64_t np = factorial(n);
        for (std::uint64_t i = 0; i < nk; ++i)
            for (std::uint64_t j = 0; j < nkp; ++j)
                for (std::uint64_t l = 0; l < np; ++l) {
                    acc += term(QotpKey::from_index(d1, i), QotpKey::from_index(d2, j), PermSpec::from_lehmer(n, l));
                    ++r.terms;
                }
        r.avg_state = acc / static_cast<double>(r.terms);
    } else {
        if (samples < 2 || rng == nullptr) fail(ErrorCode::InvalidArgument, "Monte Carlo mode needs samples >= 2 and an RNG");
        std::vector<ComplexMatrix> draws;
        draws.reserve(static_cast<std::size_t>(samples));
        for (std::uint64_t s = 0; s < samples; ++s) {
            const QotpKey k = QotpKey::sample(d1, *rng);
            const QotpKey kp = QotpKey::sample(d2, *rng);
            const PermSpec perm = PermSpec::sample(n, *rng);
            draws.push_back(term(k, kp, perm));
            acc += draws.back();
        }
        r.terms = samples;
        r.avg_state = acc / static_cast<double>(samples);
        double ss = 0;
        for (const auto &x : draws) ss += (x - r.avg_state).squaredNorm();
        r.standard_error = std::sqrt(ss / (static_cast<double>(samples) * static_cast<double>(samples - 1)));
    }
    r.xi_formula = twirl_expectation(key_averaged_block(d1, d2, e), false).formula_state;
    r.distance = trace_distance(r.avg_state, r.xi_formula);
    return r;
}

}  // namespace anamorph
