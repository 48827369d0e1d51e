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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "anamorph/error.hpp"
#include "anamorph/metrics.hpp"
#include "anamorph/scheme.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace anamorph;
using namespace anamorph::testing;

namespace {

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    FAIL("expected an anamorph::Error");
    return ErrorCode::InvalidArgument;
}

double oracle_trace_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    return oracle_eigenvalues(a - b).cwiseAbs().sum() / 2;
}

ComplexMatrix oracle_sqrt(const ComplexMatrix &h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const Eigen::VectorXd r = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * r.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

// F = || sqrt(rho) sqrt(sigma) ||_1 with Eigen's square roots and singular values.
double oracle_fidelity(const ComplexMatrix &a, const ComplexMatrix &b) {
    return Eigen::BDCSVD<ComplexMatrix>(oracle_sqrt(a) * oracle_sqrt(b)).singularValues().sum();
}

ComplexMatrix random_unitary(std::mt19937_64 &gen, Eigen::Index n) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(gen, n, n));
    return qr.householderQ();
}

ComplexMatrix permutation_matrix(const std::vector<std::size_t> &m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) p(static_cast<Eigen::Index>(m[static_cast<std::size_t>(i)]), i) = 1;
    return p;
}

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

AnamorphicKey trivial_key(unsigned d1, unsigned d2, std::uint64_t eta) {
    AnamorphicKey key;
    key.d1 = d1;
    key.d2 = d2;
    key.k = QotpKey::zeros(d1);
    key.k_prime = QotpKey::zeros(d2);
    key.perm = PermSpec::identity(std::size_t{1} << (d1 + 1));
    key.eta = eta;
    return key;
}

// Spectral log2 through Eigen, for relative entropy oracles on full-rank states.
ComplexMatrix oracle_log2(const ComplexMatrix &h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    Eigen::VectorXd l = es.eigenvalues();
    for (Eigen::Index i = 0; i < l.size(); ++i) l(i) = std::log2(l(i));
    return es.eigenvectors() * l.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("trace distance and fidelity basics") {
    const ComplexMatrix z0 = diag2(1, 0), z1 = diag2(0, 1);
    CHECK(trace_distance(z0, z0) == 0.0);
    CHECK(trace_distance(z0, z1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fidelity(z0, z0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(fidelity(z0, z1)) < 1e-12);
    CHECK(code_of([&] { trace_distance(z0, ComplexMatrix::Identity(4, 4)); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { fidelity(z0, ComplexMatrix::Identity(4, 4)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("pure-state fidelity is the overlap modulus") {
    std::mt19937_64 gen(31);
    for (int rep = 0; rep < 100; ++rep) {
        const Eigen::Index n = 2 + rep % 7;
        const ComplexVector u = random_pure(gen, n), v = random_pure(gen, n);
        const double overlap = std::abs(u.dot(v));
        CHECK(fidelity(u * u.adjoint(), v * v.adjoint()) == doctest::Approx(overlap).epsilon(1e-9));
        CHECK(trace_distance(u * u.adjoint(), v * v.adjoint()) ==
              doctest::Approx(std::sqrt(1 - overlap * overlap)).epsilon(1e-9));
    }
}

TEST_CASE("Fuchs-van de Graaf sandwich on random pairs") {
    std::mt19937_64 gen(32);
    for (int rep = 0; rep < 500; ++rep) {
        const Eigen::Index n = 2 + rep % 7;
        const ComplexMatrix a = random_density(gen, n, 1 + rep % n), b = random_density(gen, n);
        const double d = trace_distance(a, b), f = fidelity(a, b);
        CHECK(std::abs(d - oracle_trace_distance(a, b)) < 1e-12);
        CHECK(std::abs(f - oracle_fidelity(a, b)) < 1e-8);
        CHECK(std::abs(f - fidelity(b, a)) < 1e-9);
        CHECK(f >= 0.0);
        CHECK(f <= 1 + 1e-9);
        CHECK(1 - f <= d + 1e-9);
        CHECK(d <= std::sqrt(std::max(0.0, 1 - f * f)) + 1e-9);
    }
}

TEST_CASE("trace distance properties") {
    std::mt19937_64 gen(33);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        const Eigen::Index n = 2 + rep % 4;
        const ComplexMatrix a = random_density(gen, n), b = random_density(gen, n), c = random_density(gen, n);
        const double ab = trace_distance(a, b);
        CHECK(ab == doctest::Approx(trace_distance(b, a)).epsilon(1e-14));
        CHECK(trace_distance(a, c) <= ab + trace_distance(b, c) + 1e-12);
        const ComplexMatrix w = random_unitary(gen, n);
        CHECK(std::abs(trace_distance(w * a * w.adjoint(), w * b * w.adjoint()) - ab) < 1e-12);

        // Mixture bound.
        const double p = u01(gen);
        const ComplexMatrix a2 = random_density(gen, n);
        CHECK(trace_distance(p * a + (1 - p) * a2, b) <= p * ab + (1 - p) * trace_distance(a2, b) + 1e-9);

        // Appending a common system leaves the distance unchanged; product distances are subadditive.
        const ComplexMatrix t = random_density(gen, 2);
        CHECK(std::abs(trace_distance(tensor_product(a, t), tensor_product(b, t)) - ab) < 1e-9);
        const ComplexMatrix s1 = random_density(gen, 2), s2 = random_density(gen, 2);
        CHECK(trace_distance(tensor_product(a, s1), tensor_product(b, s2)) <= ab + trace_distance(s1, s2) + 1e-9);
    }
}

TEST_CASE("indistinguishability report") {
    const DensityMatrix half(ComplexMatrix::Identity(2, 2) / 2.0), zero(diag2(1, 0));
    const AnamorphicKey key = trivial_key(1, 1, 4);
    const Ciphertext c0 = encrypt_original(half, key), c1 = encrypt_direct(half, zero, key);
    const IndistinguishabilityReport r = indistinguishability_report(c0, c1, 4);
    CHECK(r.trace_distance == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.fidelity >= 0.75 - 1e-9);
    CHECK(r.helstrom_advantage == r.trace_distance);
    CHECK(r.fvdg_lower <= r.trace_distance + 1e-9);
    CHECK(r.trace_distance <= r.fvdg_upper + 1e-9);

    const IndistinguishabilityReport same = indistinguishability_report(c0, c0, 4);
    CHECK(same.trace_distance == 0.0);
    CHECK(same.fidelity == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 gen(34);
    for (int rep = 0; rep < 20; ++rep) {
        const DensityMatrix mo(random_positive_density(gen, 4)), mc(random_density(gen, 2));
        Rng rng(500 + static_cast<std::uint64_t>(rep));
        AnamorphicKey k = keygen(2, 1, SecurityConfig{}, EtaMode::Weak, mo, mc, rng);
        k.eta = std::max<std::uint64_t>(k.eta, 16);
        const auto rr = indistinguishability_report(encrypt_original(mo, k), encrypt_direct(mo, mc, k), k.eta);
        CHECK(rr.trace_distance == doctest::Approx(1.0 / static_cast<double>(k.eta)).epsilon(1e-9));
        CHECK(rr.fidelity >= 1 - 1.0 / static_cast<double>(k.eta) - 1e-9);
    }
}

TEST_CASE("twirl closed form") {
    const TwirlReport id = twirl_expectation(ComplexMatrix::Identity(4, 4) / 4.0, true);
    CHECK(id.alpha == doctest::Approx(0.25));
    CHECK(std::abs(id.beta) < 1e-15);
    const TwirlReport jay = twirl_expectation(ComplexMatrix::Ones(4, 4) / 4.0, false);
    CHECK(std::abs(jay.alpha) < 1e-15);
    CHECK(jay.beta == doctest::Approx(0.25));

    const TwirlReport ka = twirl_expectation(key_averaged_block(1, 1, 4), true);
    CHECK(ka.alpha == doctest::Approx(2.5 / 12).epsilon(1e-14));
    CHECK(ka.beta == doctest::Approx(1.0 / 24).epsilon(1e-14));
    CHECK(max_abs(*ka.brute_force_state - ka.formula_state) < 1e-12);

    CHECK(code_of([] { twirl_expectation(ComplexMatrix::Identity(9, 9), true); }) == ErrorCode::TooLargeForBruteForce);
    CHECK_NOTHROW(twirl_expectation(ComplexMatrix::Identity(9, 9), false));
}

TEST_CASE("twirl formula matches enumeration on random Hermitian inputs") {
    std::mt19937_64 gen(35);
    for (Eigen::Index n : {2, 3, 4, 6, 8}) {
        const ComplexMatrix phi = random_hermitian(gen, n);
        const TwirlReport r = twirl_expectation(phi, true);
        REQUIRE(r.brute_force_state.has_value());
        CHECK(max_abs(*r.brute_force_state - r.formula_state) < 1e-12);
        if (n <= 4) {
            // Independent enumeration with explicit permutation matrices.
            std::vector<std::size_t> m(static_cast<std::size_t>(n));
            std::iota(m.begin(), m.end(), std::size_t{0});
            ComplexMatrix acc = ComplexMatrix::Zero(n, n);
            int count = 0;
            do {
                const ComplexMatrix p = permutation_matrix(m);
                acc += p * phi * p.adjoint();
                ++count;
            } while (std::next_permutation(m.begin(), m.end()));
            CHECK(max_abs(acc / static_cast<double>(count) - r.formula_state) < 1e-12);
        }
    }
}

TEST_CASE("expected state distance") {
    CHECK(expected_state_distance(1, 4) == 0.125);
    CHECK(expected_state_distance(2, 8) == 1.0 / 32);
    CHECK(expected_state_distance(1, std::uint64_t{1} << 60) < 1e-18);
    for (unsigned d1 = 1; d1 <= 3; ++d1) {
        for (unsigned d2 = 1; d2 <= d1; ++d2) {
            for (std::uint64_t eta : {2u, 4u, 7u, 32u}) {
                const auto n = Eigen::Index{1} << (d1 + 1);
                const ComplexMatrix e0 = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
                const TwirlReport e1 = twirl_expectation(key_averaged_block(d1, d2, static_cast<double>(eta)), false);
                CHECK(std::abs(e1.formula_state.trace().real() - 1) < 1e-14);
                CHECK(std::abs(oracle_trace_distance(e0, e1.formula_state) - expected_state_distance(d1, eta)) < 1e-12);
            }
        }
    }
}

TEST_CASE("entropy examples") {
    const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
    const EntropyReport r = entropy_report(DensityMatrix(half), DensityMatrix(diag2(1, 0)), 4);
    CHECK(r.s_mo_enc == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.s_mf0 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.commuting);
    REQUIRE(r.rel_entropy.has_value());
    CHECK(std::abs(*r.rel_entropy - 0.5) < 1e-9);
    CHECK(std::abs(r.rel_entropy_bound - 0.5) < 1e-9);
    REQUIRE(r.s_mf1_commuting.has_value());
    CHECK(*r.s_mf1_commuting == doctest::Approx(1.5).epsilon(1e-12));

    const EntropyReport r8 = entropy_report(DensityMatrix(half), DensityMatrix(diag2(1, 0)), 8);
    CHECK(r8.rel_entropy_bound == doctest::Approx(r.rel_entropy_bound / 4).epsilon(1e-12));

    const EntropyReport nc = entropy_report(DensityMatrix(diag2(0.3, 0.7)), DensityMatrix(ComplexMatrix::Constant(2, 2, 0.5)), 8);
    CHECK_FALSE(nc.commuting);
    CHECK_FALSE(nc.rel_entropy.has_value());
    CHECK_FALSE(nc.s_mf1_commuting.has_value());

    CHECK(code_of([&] { entropy_report(DensityMatrix(diag2(1, 0)), DensityMatrix(diag2(1, 0)), 4); }) ==
          ErrorCode::NotStrictlyPositive);
}

TEST_CASE("entropy on random commuting instances") {
    std::mt19937_64 gen(36);
    for (int rep = 0; rep < 200; ++rep) {
        const unsigned d1 = 1 + static_cast<unsigned>(rep % 3);
        const auto n = Eigen::Index{1} << d1;
        // Commuting pair: shared eigenbasis, Mc supported on a random subset.
        const ComplexMatrix w = random_unitary(gen, n);
        const ComplexMatrix lam = random_positive_density(gen, n).diagonal().real().cast<Complex>().asDiagonal();
        ComplexMatrix mu = random_density(gen, n).diagonal().real().cast<Complex>().asDiagonal();
        mu /= mu.trace().real();
        const ComplexMatrix mo = w * lam * w.adjoint(), mc = w * mu * w.adjoint();
        const DensityMatrix dmo = DensityMatrix::trusted((mo + mo.adjoint()) / 2.0);
        const DensityMatrix dmc = DensityMatrix::trusted((mc + mc.adjoint()) / 2.0);
        const std::uint64_t eta = select_eta(dmo, dmc, SecurityConfig{}, EtaMode::Strict) + static_cast<std::uint64_t>(rep % 3);
        const EntropyReport r = entropy_report(dmo, dmc, eta);
        CHECK(std::abs(r.s_mf0 - (r.s_mo_enc + 1)) < 1e-9);
        REQUIRE(r.commuting);
        REQUIRE(r.rel_entropy.has_value());
        CHECK(*r.rel_entropy <= r.rel_entropy_bound + 1e-9);

        // Bound as a sum over paired eigenvalues.
        double bound = 0;
        for (Eigen::Index i = 0; i < n; ++i) bound += std::norm(mu(i, i)) / lam(i, i).real();
        bound *= 4.0 / static_cast<double>(eta * eta);
        CHECK(std::abs(r.rel_entropy_bound - bound) < 1e-9);

        // Full block states, checked with Eigen's logarithm when both are full rank.
        const double e = static_cast<double>(eta);
        const ComplexMatrix z = ComplexMatrix::Zero(n, n);
        const ComplexMatrix f0 = assemble_control_blocks(dmo.mat() / 2.0, z, z, dmo.mat() / 2.0);
        const ComplexMatrix f1 = assemble_control_blocks(dmo.mat() / 2.0, dmc.mat() / e, dmc.mat() / e, dmo.mat() / 2.0);
        const Eigen::VectorXd ev1 = oracle_eigenvalues(f1);
        if (ev1.minCoeff() > 1e-6) {
            const double rel = (f1 * (oracle_log2(f1) - oracle_log2(f0))).trace().real();
            CHECK(std::abs(*r.rel_entropy - rel) < 1e-8);
            CHECK(std::abs(relative_entropy(f1, f0) - rel) < 1e-8);
            double s = 0;
            for (Eigen::Index i = 0; i < ev1.size(); ++i) s -= ev1(i) * std::log2(ev1(i));
            CHECK(std::abs(*r.s_mf1_commuting - s) < 1e-9);
        }
    }
}

TEST_CASE("relative entropy") {
    CHECK(relative_entropy(diag2(0.5, 0.5), diag2(0.5, 0.5)) == doctest::Approx(0.0).epsilon(1e-12));
    const double kl = 0.3 * std::log2(0.3 / 0.6) + 0.7 * std::log2(0.7 / 0.4);
    CHECK(relative_entropy(diag2(0.3, 0.7), diag2(0.6, 0.4)) == doctest::Approx(kl).epsilon(1e-12));
    CHECK(std::isinf(relative_entropy(diag2(0.5, 0.5), diag2(1, 0))));
    CHECK(std::isfinite(relative_entropy(diag2(1, 0), diag2(0.5, 0.5))));
    CHECK(von_neumann_entropy(diag2(1, 0)) == 0.0);
    CHECK(entropy_of_spectrum({0.5, 0.5, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("qcpa exact average is a constant channel") {
    const DensityMatrix a_mo(ComplexMatrix::Identity(2, 2) / 2.0), a_mc(diag2(1, 0));
    const DensityMatrix b_mo(diag2(0.3, 0.7)), b_mc(ComplexMatrix::Constant(2, 2, 0.5));
    for (std::uint64_t eta : {4u, 8u, 16u}) {
        const QcpaReport ra = qcpa_average(a_mo, a_mc, 1, 1, eta);
        const QcpaReport rb = qcpa_average(b_mo, b_mc, 1, 1, eta);
        CHECK(ra.terms == 384);
        CHECK(ra.distance <= 1e-12);
        CHECK(rb.distance <= 1e-12);
        CHECK(oracle_trace_distance(ra.avg_state, rb.avg_state) <= 1e-12);
        CHECK(std::abs(ra.xi_formula.trace().real() - 1) < 1e-14);
        CHECK(oracle_eigenvalues(ra.xi_formula).minCoeff() >= -1e-14);
        CHECK_FALSE(ra.standard_error.has_value());
    }
    CHECK(oracle_eigenvalues(twirl_expectation(key_averaged_block(1, 1, 2), false).formula_state).minCoeff() >= -1e-14);
    CHECK(code_of([&] { qcpa_average(DensityMatrix(ComplexMatrix::Identity(4, 4) / 4.0), a_mc, 2, 1, 8); }) ==
          ErrorCode::UnsupportedDims);
}

TEST_CASE("averaging over k alone gives maximally mixed diagonal blocks") {
    const DensityMatrix mo(diag2(0.3, 0.7)), mc(diag2(1, 0));
    ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
    for (std::uint64_t i = 0; i < 4; ++i) {
        AnamorphicKey key = trivial_key(1, 1, 8);
        key.k = QotpKey::from_index(1, i);
        acc += encrypt_direct(mo, mc, key).dm.mat();
    }
    acc /= 4.0;
    CHECK(max_abs(control_block(acc, 0, 0) - ComplexMatrix::Identity(2, 2) / 4.0) < 1e-15);
    CHECK(max_abs(control_block(acc, 1, 1) - ComplexMatrix::Identity(2, 2) / 4.0) < 1e-15);
}

TEST_CASE("qcpa Monte Carlo mode") {
    std::mt19937_64 gen(37);
    const DensityMatrix mo(random_positive_density(gen, 4)), mc(random_density(gen, 2));
    Rng rng(77);
    const QcpaReport r = qcpa_average(mo, mc, 2, 1, 16, QcpaMode::MonteCarlo, 4000, &rng);
    REQUIRE(r.standard_error.has_value());
    CHECK(r.terms == 4000);
    CHECK(*r.standard_error > 0);
    // Entrywise spread is bounded by the Frobenius standard error; allow a generous multiple.
    CHECK(r.distance < 8 * 8 * *r.standard_error);
    CHECK(code_of([&] { qcpa_average(mo, mc, 2, 1, 16, QcpaMode::MonteCarlo, 10, nullptr); }) ==
          ErrorCode::InvalidArgument);
}
