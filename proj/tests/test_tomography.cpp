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
#include <sstream>

#include "anamorph/error.hpp"
#include "anamorph/tomography.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace anamorph;
using namespace anamorph::testing;

namespace {

ComplexMatrix ket0bra0() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1;
    return m;
}

AnamorphicKey overview_key() {
    AnamorphicKey key;
    key.d1 = key.d2 = 1;
    key.k = key.k_prime = QotpKey::zeros(1);
    key.perm = PermSpec::identity(4);
    key.eta = 4;
    return key;
}

Ciphertext overview_ct() {
    return encrypt_direct(DensityMatrix(ComplexMatrix::Identity(2, 2) / 2.0), DensityMatrix(ket0bra0()), overview_key());
}

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    FAIL("expected an anamorph::Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("plan_shots examples") {
    TomographyPlan p = plan_shots(1, 0.1, 0.05, TomographyDesign::FramesD2);
    CHECK(p.n_shots == 2499);
    CHECK(p.allocation == std::vector<std::uint64_t>{833, 833, 833});
    CHECK(static_cast<double>(p.n_shots) >= 300 * std::log2(320.0));
    p = plan_shots(1, 0.25, 0.1, TomographyDesign::FramesD2);
    CHECK(p.n_shots == 354);
    const TomographyPlan half = plan_shots(1, 0.125, 0.1, TomographyDesign::FramesD2);
    CHECK(std::abs(static_cast<double>(half.n_shots) / static_cast<double>(p.n_shots) - 4.0) < 0.05);
    CHECK(code_of([] { plan_shots(2, 0.1, 0.1, TomographyDesign::FramesD2); }) == ErrorCode::UnsupportedDesign);
    const TomographyPlan s = plan_shots(2, 0.25, 0.1, TomographyDesign::Singleton);
    CHECK(s.n_shots % 15 == 0);
    CHECK(static_cast<double>(s.n_shots) >= 64 / (2 * 0.0625) * std::log2(64 / 0.1));
    CHECK(static_cast<double>(s.n_shots) < 64 / (2 * 0.0625) * std::log2(64 / 0.1) + 15);
    CHECK(code_of([] { plan_shots(1, 0, 0.1, TomographyDesign::FramesD2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("branch statistics") {
    const ProbeSampler orig(encrypt_original(DensityMatrix(ComplexMatrix::Identity(2, 2) / 2.0), overview_key()),
                            PermSpec::identity(4), Probe::X);
    CHECK(orig.branch_probability(0) == doctest::Approx(0.5));
    CHECK(orig.branch_probability(1) == doctest::Approx(0.5));
    for (std::size_t p = 1; p < 4; ++p) CHECK(std::abs(orig.conditional_expectation(0, p)) < 1e-15);

    const ProbeSampler ov(overview_ct(), PermSpec::identity(4), Probe::X);
    CHECK(ov.branch_probability(0) == doctest::Approx(0.75));
    CHECK(ov.branch_probability(1) == doctest::Approx(0.25));
    CHECK(ov.conditional_expectation(0, PauliString::from_symbol("Z").index()) == doctest::Approx(1.0 / 3));
    CHECK(max_abs(ov.block(0) - (ComplexMatrix::Identity(2, 2) / 4.0 + ket0bra0() / 4.0)) < 1e-15);
    CHECK(max_abs(ov.block(1) - (ComplexMatrix::Identity(2, 2) / 4.0 - ket0bra0() / 4.0)) < 1e-15);
}

TEST_CASE("probe identities on random instances") {
    std::mt19937_64 gen(31);
    std::uint64_t seed = 0;
    for (unsigned d1 = 1; d1 <= 3; ++d1) {
        for (int rep = 0; rep < 10; ++rep) {
            const unsigned d2 = 1 + static_cast<unsigned>(rep) % d1;
            const DensityMatrix mo(random_positive_density(gen, Eigen::Index{1} << d1));
            const DensityMatrix mc(random_density(gen, Eigen::Index{1} << d2));
            Rng rng(++seed);
            const AnamorphicKey key = keygen(d1, d2, SecurityConfig{}, EtaMode::Weak, mo, mc, rng);
            const Ciphertext ct = encrypt_direct(mo, mc, key);
            const ProbeSampler x(ct, key.perm, Probe::X), y(ct, key.perm, Probe::Y);
            const ComplexMatrix b_over_eta = encode_messages(mo, mc, key).mc_padded / static_cast<double>(key.eta);
            CHECK(max_abs((x.block(0) - x.block(1)) / 2.0 - b_over_eta) < 1e-12);
            CHECK(max_abs((y.block(0) - y.block(1)) / 2.0) < 1e-12);
            CHECK(std::abs(x.branch_probability(0) + x.branch_probability(1) - 1) < 1e-12);
            // Table lookups agree with explicit traces.
            for (std::size_t p = 0; p < (std::size_t{1} << (2 * d1)); ++p) {
                const ComplexMatrix obs = pauli_observable(PauliString::from_index(d1, p));
                const double e = (obs * x.block(1)).trace().real() / x.branch_probability(1);
                CHECK(std::abs(x.conditional_expectation(1, p) - e) < 1e-12);
            }
        }
    }
}

TEST_CASE("sample_shot consumes branch, Pauli, outcome draws in order") {
    const Ciphertext ct = overview_ct();
    const TomographyPlan plan = plan_shots(1, 0.25, 0.1, TomographyDesign::FramesD2);
    // 0.1 -> branch 0 (p0 = 3/4); any word -> the single Pauli; 0.0 -> outcome +1.
    std::vector<std::uint64_t> words{static_cast<std::uint64_t>(0.1 * 0x1p64), 12345, 0};
    std::size_t next = 0;
    Rng scripted = Rng::from_source([&] { return words[next++ % words.size()]; });
    const ShotRecord s = sample_shot(ct, PermSpec::identity(4), plan, 2, Probe::X, scripted);
    CHECK(next == 3);
    CHECK(s.branch == 0);
    CHECK(s.pauli == PauliString::from_symbol("Z").index());
    CHECK(s.outcome == 1);
    // Z on branch 1 of the overview instance is deterministic: rho_{M|1} = |1><1|.
    words = {static_cast<std::uint64_t>(0.9 * 0x1p64), 0, 0};
    next = 0;
    CHECK(sample_shot(ct, PermSpec::identity(4), plan, 2, Probe::X, scripted).outcome == -1);
}

TEST_CASE("Horvitz-Thompson example") {
    const TomographyPlan plan = plan_shots(1, 0.25, 0.1, TomographyDesign::FramesD2);
    const std::size_t z = PauliString::from_symbol("Z").index();
    std::vector<ShotRecord> shots(30, ShotRecord{0, z, 1});
    const ComplexMatrix d0 = estimate_branch_block(shots, plan, 0);
    const ComplexMatrix expected = (ComplexMatrix::Identity(2, 2) + 3.0 * pauli_observable(PauliString::from_symbol("Z"))) / 2.0;
    CHECK(max_abs(d0 - expected) < 1e-15);
    CHECK(code_of([&] { estimate_branch_block(shots, plan, 1); }) == ErrorCode::NoShotsInBranch);
    CHECK(code_of([&] { linear_inversion_estimate(shots, plan); }) == ErrorCode::NoShotsInBranch);
    // X and Y never measured: their coefficients vanish.
    CHECK(std::abs(d0(0, 1)) == 0.0);
}

TEST_CASE("large-N estimate on the overview instance") {
    const Ciphertext ct = overview_ct();
    const ProbeSampler sampler(ct, PermSpec::identity(4), Probe::X);
    TomographyPlan plan = plan_shots(1, 0.25, 0.1, TomographyDesign::FramesD2);
    plan.n_shots = 99999;
    plan.allocation = {33333, 33333, 33333};
    Rng rng(2024);
    const auto shots = collect_shots(sampler, plan, rng);
    const BranchEstimates est = linear_inversion_estimate(shots, plan);
    CHECK((est.d0_hat - sampler.block(0)).norm() < 0.05);
    CHECK((est.d1_hat - sampler.block(1)).norm() < 0.05);
    CHECK(est.counts[0] + est.counts[1] == 99999);
}

TEST_CASE("dcm_finite") {
    const Ciphertext ct = overview_ct();
    const AnamorphicKey key = overview_key();
    const ProbeSampler sampler(ct, key.perm, Probe::X);
    BranchEstimates exact{sampler.block(0), sampler.block(1), {}};
    const DcmFiniteResult surrogate = dcm_from_estimates(ct, key, exact);
    CHECK(max_abs(surrogate.mc_hat - ket0bra0()) < 1e-15);
    CHECK(surrogate.b_error_l2 < 1e-15);
    CHECK(surrogate.validity.ok);

    const TomographyPlan plan = plan_shots(1, 0.25, 0.1, TomographyDesign::FramesD2);
    Rng a(5), b(5);
    std::vector<ShotRecord> sa, sb;
    const DcmFiniteResult ra = dcm_finite(ct, key, plan, a, &sa);
    const DcmFiniteResult rb = dcm_finite(ct, key, plan, b, &sb);
    CHECK(sa == sb);
    CHECK(ra.mc_hat == rb.mc_hat);
    CHECK(sa.size() == plan.n_shots);
    CHECK((ra.mc_hat - ra.mc_hat.adjoint()).norm() == 0.0);
    CHECK(ra.b_error_trace_bound == doctest::Approx(4 * std::sqrt(2.0) * ra.b_error_l2));
}

TEST_CASE("empirical failure rate respects the shot bound") {
    const Ciphertext ct = overview_ct();
    const AnamorphicKey key = overview_key();
    for (auto [eps, delta] : {std::pair{0.25, 0.1}, std::pair{0.4, 0.2}}) {
        const TomographyPlan plan = plan_shots(1, eps, delta, TomographyDesign::FramesD2);
        int failures = 0;
        const int trials = 200;
        for (int t = 0; t < trials; ++t) {
            Rng rng = Rng::substream(77, "tomography-test", static_cast<std::uint64_t>(t));
            if (dcm_finite(ct, key, plan, rng).b_error_l2 > eps) ++failures;
        }
        CHECK(failures / static_cast<double>(trials) <= delta + 3 * std::sqrt(delta * (1 - delta) / trials));
    }
}

TEST_CASE("estimator is unbiased") {
    std::mt19937_64 gen(32);
    const DensityMatrix mo(random_positive_density(gen, 2)), mc(random_density(gen, 2));
    Rng krng(3);
    const AnamorphicKey key = keygen(1, 1, SecurityConfig{}, EtaMode::Weak, mo, mc, krng);
    const Ciphertext ct = encrypt_direct(mo, mc, key);
    const ProbeSampler sampler(ct, key.perm, Probe::X);
    TomographyPlan plan = plan_shots(1, 0.5, 0.5, TomographyDesign::FramesD2);
    ComplexMatrix mean0 = ComplexMatrix::Zero(2, 2);
    const int runs = 10000;
    int used = 0;
    for (int r = 0; r < runs; ++r) {
        Rng rng = Rng::substream(9, "unbiased", static_cast<std::uint64_t>(r));
        const auto shots = collect_shots(sampler, plan, rng);
        mean0 += estimate_branch_block(shots, plan, 0);
        ++used;
    }
    mean0 /= static_cast<double>(used);
    // Standard error of the mean is ~ 1/sqrt(runs * N) per entry.
    CHECK((mean0 - sampler.block(0)).norm() < 5 / std::sqrt(static_cast<double>(runs * plan.n_shots)) * 3);
}

TEST_CASE("shot CSV") {
    std::ostringstream out;
    const std::vector<ShotRecord> shots{{0, 1, 1}, {1, 3, -1}};
    write_shots_csv(out, shots, 7, 1, true);
    CHECK(out.str() == "trial,t,branch,pauli,outcome\n7,0,0,X,1\n7,1,1,Z,-1\n");
    std::ostringstream two;
    write_shots_csv(two, std::vector<ShotRecord>{{0, 7, 1}}, 0, 2, false);
    CHECK(two.str() == "0,0,0,XZ,1\n");
}
