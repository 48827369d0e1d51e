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

#include <cmath>
#include <map>

#include "anamorph/error.hpp"
#include "anamorph/metrics.hpp"
#include "anamorph/qass.hpp"
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

ComplexMatrix ket0bra0() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1;
    return m;
}

// Encoded pure state built from the codeword definition.
ComplexVector oracle_codeword(const ComplexVector &amp, std::uint64_t q) {
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(q * q * q));
    for (Eigen::Index m = 0; m < amp.size(); ++m)
        for (std::uint64_t c = 0; c < q; ++c) {
            const std::uint64_t mm = static_cast<std::uint64_t>(m);
            const std::uint64_t idx = ((mm + c) % q) * q * q + ((mm + 2 * c) % q) * q + (mm + 3 * c) % q;
            out(static_cast<Eigen::Index>(idx)) += amp(m) / std::sqrt(static_cast<double>(q));
        }
    return out;
}

// Reduced state of one register by explicit index summation.
ComplexMatrix oracle_register(const ComplexMatrix &g, std::uint64_t q, unsigned reg) {
    const auto qi = static_cast<Eigen::Index>(q);
    ComplexMatrix out = ComplexMatrix::Zero(qi, qi);
    auto index = [&](Eigen::Index a, Eigen::Index o1, Eigen::Index o2) {
        if (reg == 1) return (a * qi + o1) * qi + o2;
        if (reg == 2) return (o1 * qi + a) * qi + o2;
        return (o1 * qi + o2) * qi + a;
    };
    for (Eigen::Index a = 0; a < qi; ++a)
        for (Eigen::Index b = 0; b < qi; ++b)
            for (Eigen::Index o1 = 0; o1 < qi; ++o1)
                for (Eigen::Index o2 = 0; o2 < qi; ++o2) out(a, b) += g(index(a, o1, o2), index(b, o1, o2));
    return out;
}

const EtaDomain kDomain{{4, 8, 16, 32}};

QassShareResult overview_share(std::uint64_t seed) {
    Rng rng(seed);
    return qass_share(DensityMatrix(ComplexMatrix::Identity(2, 2) / 2.0), DensityMatrix(ket0bra0()), kDomain,
                      SecurityConfig{}, rng);
}

}  // namespace

TEST_CASE("primes and field arithmetic") {
    CHECK(is_prime(2));
    CHECK(is_prime(29));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(25));
    CHECK(next_prime_above(24) == 29);
    CHECK(next_prime_above(4) == 5);
    CHECK(next_prime_above(5) == 7);
    CHECK(ceil_log2(1) == 0);
    CHECK(ceil_log2(5) == 3);
    CHECK(ceil_log2(24) == 5);
    CHECK(ceil_log2(std::uint64_t{1} << 16) == 16);
    const FieldElement a(3, 7), b(5, 7);
    CHECK((a + b).value() == 1);
    CHECK((a - b).value() == 5);
    CHECK((a * b).value() == 1);
    CHECK((a.inverse() * a).value() == 1);
    CHECK(code_of([] { FieldElement(1, 9); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { FieldElement(7, 7); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { a + FieldElement(1, 5); }) == ErrorCode::InconsistentShares);
}

TEST_CASE("Shamir examples") {
    const auto shares = shamir_share_with(FieldElement(3, 5), 2);
    CHECK(shares[0].x.value() == 1);
    CHECK(shares[0].y.value() == 0);
    CHECK(shares[1].y.value() == 2);
    CHECK(shares[2].y.value() == 4);
    for (const auto &s : shamir_share_with(FieldElement(3, 5), 0)) CHECK(s.y.value() == 3);

    const std::array<ShamirShare, 2> p12{shares[0], shares[1]}, p23{shares[1], shares[2]}, p31{shares[2], shares[0]};
    CHECK(shamir_reconstruct(p12).value() == 3);
    CHECK(shamir_reconstruct(p23).value() == 3);
    CHECK(shamir_reconstruct(p31).value() == 3);
    // By hand: s = 2 y1 - y2 and s = 3 y2 - 2 y3 mod 5.
    CHECK((2 * 0 + 5 - 2) % 5 == 3);
    CHECK((3 * 2 + 10 - 2 * 4) % 5 == 3);
    CHECK(shamir_reconstruct(shares).value() == 3);

    const std::array<ShamirShare, 1> single{shares[0]};
    CHECK(code_of([&] { shamir_reconstruct(single); }) == ErrorCode::ThresholdUnmet);
    const std::array<ShamirShare, 2> dup{shares[0], shares[0]};
    CHECK(code_of([&] { shamir_reconstruct(dup); }) == ErrorCode::DuplicatePoints);
    CHECK(code_of([] { shamir_share_with(FieldElement(1, 3), 1); }) == ErrorCode::FieldTooSmall);
    auto bad = shares;
    bad[2].y = bad[2].y + FieldElement(1, 5);
    CHECK(code_of([&] { shamir_reconstruct(bad); }) == ErrorCode::InconsistentShares);
}

TEST_CASE("single classical shares are uniform and secret-independent") {
    for (std::uint64_t p : {5u, 7u}) {
        for (unsigned player = 0; player < 3; ++player) {
            for (std::uint64_t s = 0; s < p; ++s) {
                std::map<std::uint64_t, int> hist;
                for (std::uint64_t c = 0; c < p; ++c) ++hist[shamir_share_with(FieldElement(s, p), c)[player].y.value()];
                REQUIRE(hist.size() == p);
                for (const auto &[y, count] : hist) CHECK(count == 1);
            }
        }
    }
}

TEST_CASE("random Shamir round trips") {
    Rng rng(41);
    for (int rep = 0; rep < 500; ++rep) {
        const std::uint64_t p = next_prime_above(3 + rng.uniform_below(1000));
        const FieldElement s(rng.uniform_below(p), p);
        const auto sh = shamir_share(s, rng);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                if (i == j) continue;
                const std::array<ShamirShare, 2> pair{sh[i], sh[j]};
                CHECK(shamir_reconstruct(pair) == s);
            }
    }
}

TEST_CASE("code prime and encoding") {
    CHECK(code_prime(2) == 5);
    CHECK(code_prime(4) == 5);
    CHECK(code_prime(8) == 11);
    std::mt19937_64 gen(42);
    for (Eigen::Index d : {2, 4}) {
        const ComplexVector psi = random_pure(gen, d);
        const EncodedQuantumState enc = cgl_encode(DensityMatrix(psi * psi.adjoint()), 5);
        const ComplexVector code = oracle_codeword(psi, 5);
        CHECK(enc.global.dim() == 125);
        CHECK(max_abs(enc.global.mat() - code * code.adjoint()) < 1e-15);
        CHECK(std::abs(enc.global.mat().trace().real() - 1) < 1e-14);
    }
    CHECK(code_of([] { cgl_encode(DensityMatrix(ComplexMatrix::Identity(8, 8) / 8.0), 7); }) == ErrorCode::FieldTooSmall);
    CHECK(code_of([] { cgl_encode(DensityMatrix(ComplexMatrix::Identity(2, 2) / 2.0), 3); }) == ErrorCode::FieldTooSmall);
}

TEST_CASE("every register is maximally mixed") {
    std::mt19937_64 gen(43);
    std::vector<ComplexMatrix> inputs{ket0bra0(), ComplexMatrix::Constant(2, 2, 0.5)};
    for (int rep = 0; rep < 10; ++rep) inputs.push_back(random_density(gen, 2 + 2 * (rep % 2)));
    for (const auto &rho : inputs) {
        const EncodedQuantumState enc = cgl_encode(DensityMatrix(rho), 5);
        for (unsigned reg = 1; reg <= 3; ++reg) {
            const ComplexMatrix red = register_reduced_state(enc, reg);
            CHECK(max_abs(red - ComplexMatrix::Identity(5, 5) / 5.0) < 1e-12);
            CHECK(max_abs(red - oracle_register(enc.global.mat(), 5, reg)) < 1e-14);
        }
    }
}

TEST_CASE("decoding from any pair") {
    // Pair {1, 2}: (y1, y2) -> (2 y1 - y2, -y1 + 2 y2). The basis state |3, 4, y3> decodes to s = 2.
    EncodedQuantumState basis;
    basis.q = 5;
    basis.embed_dim = 4;
    ComplexMatrix g = ComplexMatrix::Zero(125, 125);
    g((3 * 5 + 4) * 5 + 0, (3 * 5 + 4) * 5 + 0) = 1;
    basis.global = DensityMatrix::trusted(g);
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(2, 2) = 1;
    CHECK(max_abs(cgl_decode(basis, 1, 2).mat() - expect) == 0.0);
    CHECK(max_abs(cgl_decode(basis, 2, 1).mat() - expect) == 0.0);

    std::mt19937_64 gen(44);
    const std::array<std::pair<unsigned, unsigned>, 3> pairs{{{1, 2}, {1, 3}, {2, 3}}};
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::Index d = rep % 2 ? 4 : 2;
        const ComplexMatrix rho = random_density(gen, d);
        const ComplexVector psi = random_pure(gen, d);
        const EncodedQuantumState e_mixed = cgl_encode(DensityMatrix(rho), 5);
        const EncodedQuantumState e_pure = cgl_encode(DensityMatrix(psi * psi.adjoint()), 5);
        for (auto [i, j] : pairs) {
            CHECK(max_abs(cgl_decode(e_mixed, i, j).mat() - rho) < 1e-12);
            const ComplexMatrix out = cgl_decode(e_pure, i, j).mat();
            CHECK(std::abs((psi.adjoint() * out * psi)(0, 0).real() - 1) < 1e-12);
        }
    }
    ComplexVector plus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    const EncodedQuantumState ep = cgl_encode(DensityMatrix(plus * plus.adjoint()), 5);
    for (auto [i, j] : pairs) CHECK(std::abs(fidelity(cgl_decode(ep, i, j).mat(), plus * plus.adjoint()) - 1) < 1e-12);

    CHECK(code_of([&] { cgl_decode(ep, 1, 1); }) == ErrorCode::InvalidPair);
    CHECK(code_of([&] { cgl_decode(ep, 0, 2); }) == ErrorCode::InvalidPair);
    CHECK(code_of([&] { cgl_decode(ep, 2, 4); }) == ErrorCode::InvalidPair);
}

TEST_CASE("key tuple round trip") {
    Rng rng(45);
    for (int rep = 0; rep < 50; ++rep) {
        AnamorphicKey key;
        key.d1 = 1 + static_cast<unsigned>(rep % 2);
        key.d2 = 1;
        key.k = QotpKey::sample(key.d1, rng);
        key.k_prime = QotpKey::sample(1, rng);
        key.perm = PermSpec::sample(std::size_t{1} << (key.d1 + 1), rng);
        key.eta = kDomain.values[rng.uniform_below(4)];
        const KeyTuple t = key_tuple_from(key, kDomain);
        CHECK(t.k2 == key.d1);
        CHECK(t.k5 == 1);
        CHECK(key_from_tuple(t, kDomain) == key);
        for (std::size_t c = 1; c <= 6; ++c)
            CHECK(t.get(c) < component_prime(c, key.d1, key.d2, kDomain.values.size()));
    }
    CHECK(component_prime(3, 1, 1, 4) == 29);
    CHECK(component_prime(1, 1, 1, 4) == 5);
    CHECK(component_prime(6, 1, 1, 1) == 5);
}

TEST_CASE("QASS share on the overview instance") {
    const QassShareResult r = overview_share(7);
    CHECK(r.enc.global.dim() == 125);
    CHECK(r.enc.q == 5);
    CHECK(r.key.eta == 4);
    for (const auto &b : r.bundles) CHECK(b.classical.size() == 6);
    CHECK(r.bundles[0].player == 1);
    CHECK(r.bundles[2].qudit_index == 3);
    for (unsigned reg = 1; reg <= 3; ++reg)
        CHECK(max_abs(register_reduced_state(r.enc, reg) - ComplexMatrix::Identity(5, 5) / 5.0) < 1e-12);

    const QassShareResult again = overview_share(7);
    CHECK(again.bundles == r.bundles);
    CHECK(again.enc.global.mat() == r.enc.global.mat());
    CHECK_FALSE(overview_share(8).bundles == r.bundles);

    Rng rng(9);
    CHECK(code_of([&] {
              qass_share(DensityMatrix(ComplexMatrix::Identity(2, 2) / 2.0), DensityMatrix(ket0bra0()), EtaDomain{{2, 3}},
                         SecurityConfig{}, rng);
          }) == ErrorCode::EtaInfeasible);
}

TEST_CASE("QASS reconstruction from every qualified pair") {
    std::mt19937_64 gen(46);
    for (int rep = 0; rep < 6; ++rep) {
        const unsigned d1 = rep < 4 ? 1 : 2;
        const DensityMatrix mo(random_positive_density(gen, Eigen::Index{1} << d1));
        const ComplexVector psi = random_pure(gen, 2);
        const DensityMatrix mc(rep % 2 ? ComplexMatrix(psi * psi.adjoint()) : random_density(gen, 2));
        Rng rng(100 + static_cast<std::uint64_t>(rep));
        const EtaDomain domain{{4, 16, 64, 256, 1024}};
        const QassShareResult r = qass_share(mo, mc, domain, SecurityConfig{}, rng);
        const std::array<std::pair<unsigned, unsigned>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
        for (auto [i, j] : pairs) {
            const std::array<ShareBundle, 2> two{r.bundles[i], r.bundles[j]};
            const QassReconstruction rec = qass_reconstruct(two, r.enc, domain);
            CHECK(max_abs(rec.mo_rec.mat() - mo.mat()) < 1e-9);
            CHECK(max_abs(rec.mc_rec.mat() - mc.mat()) < 1e-9);
            CHECK(rec.tuple == key_tuple_from(r.key, domain));
            if (rep % 2) CHECK(std::abs(fidelity(rec.mc_rec.mat(), mc.mat()) - 1) < 1e-9);
            const std::array<ShareBundle, 2> orig{withhold_covert(r.bundles[i]), withhold_covert(r.bundles[j])};
            CHECK(max_abs(qass_reconstruct_original(orig, r.enc).mat() - mo.mat()) < 1e-9);
            CHECK(code_of([&] { qass_reconstruct(orig, r.enc, domain); }) == ErrorCode::CovertUnavailable);
        }
        CHECK(cross_pair_disagreements(r.bundles).empty());
    }
}

TEST_CASE("QASS reconstruction errors and tampering") {
    const QassShareResult r = overview_share(11);
    const std::array<ShareBundle, 1> one{r.bundles[0]};
    CHECK(code_of([&] { qass_reconstruct(one, r.enc, kDomain); }) == ErrorCode::ThresholdUnmet);
    const std::array<ShareBundle, 2> same{r.bundles[1], r.bundles[1]};
    CHECK(code_of([&] { qass_reconstruct(same, r.enc, kDomain); }) == ErrorCode::DuplicatePoints);

    auto tampered = r.bundles;
    ShamirShare &s = tampered[2].classical.at("k1");
    s.y = s.y + FieldElement(1, s.y.modulus());
    const auto bad = cross_pair_disagreements(tampered);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0] == "k1");
}

TEST_CASE("TPDS dictator views") {
    const QassShareResult r = overview_share(12);
    const TpdsReport t = tpds_run(r.dictator_view, r.key);
    CHECK(t.dictator_views_identical);
    CHECK(max_abs(t.receiver_mo.mat() - ComplexMatrix::Identity(2, 2) / 2.0) < 1e-12);
    CHECK(max_abs(t.receiver_mc.mat() - ket0bra0()) < 1e-12);
    CHECK(t.dictator_mo.mat() == t.receiver_mo.mat());
}

TEST_CASE("share size accounting") {
    const std::array<std::uint64_t, 1> r16{std::uint64_t{1} << 16};
    const ShareSizeReport rep = share_size_report(1, 1, r16, 4);
    CHECK(rep.quantum_bits == 9);
    CHECK(rep.anamorphic_bits == 119);
    CHECK(rep.difference == 0);
    CHECK(share_size_report(1, 1, r16, 8).anamorphic_bits == 120);
    const std::array<std::uint64_t, 3> mixed{5, 29, 7};
    CHECK(share_size_report(1, 1, mixed, 4).anamorphic_bits == 9 + 7 + 6 * 5 + 2 + 5);
    CHECK(share_size_report(2, 1, mixed, 4).difference == 0);
}

TEST_CASE("partial cheating probability") {
    CHECK(cheat_formula(1, 1, 4) == 0.984375);
    CHECK(cheat_formula(0, 0, 1) == 0.5);
    const CheatReport rep = cheat_simulate(1, 1, 4, 10000, 2024);
    CHECK(rep.trials == 10000);
    CHECK(std::abs(rep.empirical_success - 0.984375) <= rep.three_sigma);
    CHECK(rep.three_sigma == doctest::Approx(0.0037).epsilon(0.01));
    const CheatReport floor = cheat_simulate(0, 0, 1, 4000, 5);
    CHECK(std::abs(floor.empirical_success - 0.5) <= floor.three_sigma);
    CHECK(cheat_simulate(1, 1, 4, 500, 77).successes == cheat_simulate(1, 1, 4, 500, 77).successes);
}
