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

#include "anamorph/tomography.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "anamorph/error.hpp"
#include "anamorph/qop_kit.hpp"

namespace anamorph {
namespace {

constexpr unsigned kMaxTomographyQubits = 6;

std::size_t group_count(std::size_t d) { return d * d - 1; }

}  // namespace

const char *design_name(TomographyDesign design) {
    return design == TomographyDesign::FramesD2 ? "frames_d2" : "singleton";
}

TomographyDesign parse_design(const std::string &name) {
    if (name == "frames_d2") return TomographyDesign::FramesD2;
    if (name == "singleton") return TomographyDesign::Singleton;
    fail(ErrorCode::SchemaViolation, "unknown tomography design '" + name + "'");
}

std::vector<std::vector<std::size_t>> TomographyPlan::groups() const {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t p = 1; p < d * d; ++p) out.push_back({p});
    return out;
}

double TomographyPlan::pauli_probability(std::size_t index) const {
    if (index == 0 || index >= d * d || n_shots == 0) return 0.0;
    return static_cast<double>(allocation[index - 1]) / static_cast<double>(n_shots);
}

void TomographyPlan::validate() const {
    if (d < 2 || (d & (d - 1)) != 0) fail(ErrorCode::SchemaViolation, "plan dimension must be a power of two >= 2");
    if (design == TomographyDesign::FramesD2 && d != 2)
        fail(ErrorCode::UnsupportedDesign, "frames_d2 design exists only for d = 2");
    if (allocation.size() != group_count(d)) fail(ErrorCode::SchemaViolation, "allocation must have d^2 - 1 entries");
    std::uint64_t total = 0;
    for (std::uint64_t a : allocation) total += a;
    if (total != n_shots) fail(ErrorCode::SchemaViolation, "allocation does not sum to n_shots");
    if (!(epsilon > 0 && epsilon < 1 && delta > 0 && delta < 1))
        fail(ErrorCode::SchemaViolation, "epsilon and delta must lie in (0, 1)");
}

double shot_bound(std::size_t d, double epsilon, double delta, TomographyDesign design) {
    const double dd = static_cast<double>(d);
    const double factor = design == TomographyDesign::FramesD2 ? (dd + 1) * dd : dd * dd * dd;
    return factor / (2 * epsilon * epsilon) * std::log2(4 * dd * dd / delta);
}

TomographyPlan plan_shots(unsigned d1, double epsilon, double delta, TomographyDesign design) {
    if (!(epsilon > 0 && epsilon < 1)) fail(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
    if (!(delta > 0 && delta < 1)) fail(ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
    if (d1 == 0 || d1 > kMaxTomographyQubits) fail(ErrorCode::InvalidArgument, "d1 must lie in [1, 6]");
    TomographyPlan plan;
    plan.d = std::size_t{1} << d1;
    plan.epsilon = epsilon;
    plan.delta = delta;
    plan.design = design;
    if (design == TomographyDesign::FramesD2 && plan.d != 2)
        fail(ErrorCode::UnsupportedDesign, "frames_d2 design exists only for d = 2");
    const std::uint64_t groups = group_count(plan.d);
    const auto minimal = static_cast<std::uint64_t>(std::ceil(shot_bound(plan.d, epsilon, delta, design)));
    plan.n_shots = (minimal + groups - 1) / groups * groups;
    plan.allocation.assign(groups, plan.n_shots / groups);
    return plan;
}

ProbeSampler::ProbeSampler(const Ciphertext &ct, const PermSpec &perm, Probe probe) {
    ct.validate();
    qubits_ = ct.d1;
    const ComplexMatrix md = permute_conjugate_inverse(ct.dm.mat(), perm);
    const double r = 1 / std::sqrt(2.0);
    // Rows of G = H or G = H S.
    const Complex g01 = probe == Probe::X ? Complex(r, 0) : Complex(0, r);
    const Complex g[2][2] = {{r, g01}, {r, -g01}};
    for (int b = 0; b < 2; ++b) {
        ComplexMatrix acc = ComplexMatrix::Zero(md.rows() / 2, md.cols() / 2);
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) acc += g[b][k] * std::conj(g[b][l]) * control_block(md, k, l);
        blocks_[static_cast<std::size_t>(b)] = (acc + acc.adjoint()) / 2.0;
        p_[static_cast<std::size_t>(b)] = blocks_[static_cast<std::size_t>(b)].trace().real();
    }
    if (std::abs(p_[0] + p_[1] - 1) > 1e-12) {
        std::ostringstream msg;
        msg << "branch probabilities sum to " << p_[0] + p_[1];
        fail(ErrorCode::NotDensity, msg.str());
    }
    const std::size_t paulis = std::size_t{1} << (2 * qubits_);
    for (std::size_t b = 0; b < 2; ++b) {
        if (!(p_[b] > 0)) continue;
        expectations_[b].resize(paulis);
        for (std::size_t i = 0; i < paulis; ++i) {
            const double e = pauli_trace(PauliString::from_index(qubits_, i), blocks_[b]).real() / p_[b];
            expectations_[b][i] = std::max(-1.0, std::min(1.0, e));
        }
    }
}

double ProbeSampler::conditional_expectation(int b, std::size_t pauli) const {
    if (b < 0 || b > 1) fail(ErrorCode::InvalidArgument, "branch must be 0 or 1");
    const auto &table = expectations_[static_cast<std::size_t>(b)];
    if (table.empty()) fail(ErrorCode::EmptyBranch, "branch " + std::to_string(b) + " has zero probability");
    if (pauli >= table.size()) fail(ErrorCode::InvalidArgument, "Pauli index out of range");
    return table[pauli];
}

ShotRecord ProbeSampler::sample(std::span<const std::size_t> group, Rng &rng) const {
    if (group.empty()) fail(ErrorCode::InvalidArgument, "empty Pauli group");
    ShotRecord shot;
    shot.branch = rng.uniform01() < p_[0] ? 0 : 1;
    shot.pauli = group[static_cast<std::size_t>(rng.uniform_below(group.size()))];
    const double e = conditional_expectation(shot.branch, shot.pauli);
    shot.outcome = rng.uniform01() < (1 + e) / 2 ? 1 : -1;
    return shot;
}

ShotRecord sample_shot(const Ciphertext &ct, const PermSpec &perm, const TomographyPlan &plan, std::size_t group,
                       Probe probe, Rng &rng) {
    plan.validate();
    const auto groups = plan.groups();
    if (group >= groups.size()) fail(ErrorCode::InvalidArgument, "group index out of range");
    if (plan.d != (std::size_t{1} << ct.d1)) fail(ErrorCode::DimensionMismatch, "plan dimension does not match the ciphertext");
    return ProbeSampler(ct, perm, probe).sample(groups[group], rng);
}

std::vector<ShotRecord> collect_shots(const ProbeSampler &sampler, const TomographyPlan &plan, Rng &rng) {
    plan.validate();
    const auto groups = plan.groups();
    std::vector<ShotRecord> shots;
    shots.reserve(static_cast<std::size_t>(plan.n_shots));
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::uint64_t i = 0; i < plan.allocation[g]; ++i) shots.push_back(sampler.sample(groups[g], rng));
    return shots;
}

ComplexMatrix estimate_branch_block(std::span<const ShotRecord> shots, const TomographyPlan &plan, int branch) {
    const std::size_t paulis = plan.d * plan.d;
    const unsigned n = plan.qubits();
    std::vector<double> sums(paulis, 0.0);
    std::uint64_t count = 0;
    for (const ShotRecord &s : shots) {
        if (s.pauli == 0 || s.pauli >= paulis || (s.outcome != 1 && s.outcome != -1) || s.branch > 1)
            fail(ErrorCode::InvalidArgument, "shot record outside the plan");
        if (s.branch != branch) continue;
        ++count;
        sums[s.pauli] += s.outcome;
    }
    if (count == 0) fail(ErrorCode::NoShotsInBranch, "no shots landed in branch " + std::to_string(branch));
    const auto dim = static_cast<Eigen::Index>(plan.d);
    ComplexMatrix rho = ComplexMatrix::Identity(dim, dim);
    for (std::size_t p = 1; p < paulis; ++p) {
        if (sums[p] == 0) continue;
        const double mu = sums[p] / static_cast<double>(count) / plan.pauli_probability(p);
        rho += mu * pauli_observable(PauliString::from_index(n, p));
    }
    rho /= static_cast<double>(plan.d);
    return static_cast<double>(count) / static_cast<double>(shots.size()) * rho;
}

BranchEstimates linear_inversion_estimate(std::span<const ShotRecord> shots, const TomographyPlan &plan) {
    plan.validate();
    BranchEstimates out;
    out.d0_hat = estimate_branch_block(shots, plan, 0);
    out.d1_hat = estimate_branch_block(shots, plan, 1);
    for (const ShotRecord &s : shots) ++out.counts[s.branch];
    return out;
}

DcmFiniteResult dcm_from_estimates(const Ciphertext &ct, const AnamorphicKey &key, BranchEstimates estimates) {
    const double eta = static_cast<double>(key.eta);
    const ComplexMatrix diff = (estimates.d0_hat - estimates.d1_hat) / 2.0;
    ComplexMatrix b_hat = eta * diff;
    b_hat = (b_hat + b_hat.adjoint()) / 2.0;

    DcmFiniteResult out;
    // Simulation oracle: the exact block B/eta.
    const ComplexMatrix exact = covert_block_exact(ct, key) / eta;
    out.b_error_l2 = (b_hat / eta - exact).norm();
    out.b_error_trace_bound = eta * std::sqrt(static_cast<double>(std::size_t{1} << key.d1)) * out.b_error_l2;
    out.mc_hat = decode_covert_block(b_hat, key);
    out.validity = check_density(out.mc_hat, 1e-10);
    out.estimates = std::move(estimates);
    return out;
}

DcmFiniteResult dcm_finite(const Ciphertext &ct, const AnamorphicKey &key, const TomographyPlan &plan, Rng &rng,
                           std::vector<ShotRecord> *shots_out) {
    key.validate();
    if (plan.d != (std::size_t{1} << key.d1)) fail(ErrorCode::DimensionMismatch, "plan dimension does not match d1");
    const ProbeSampler sampler(ct, key.perm, Probe::X);
    std::vector<ShotRecord> shots = collect_shots(sampler, plan, rng);
    BranchEstimates est = linear_inversion_estimate(shots, plan);
    if (shots_out) *shots_out = std::move(shots);
    return dcm_from_estimates(ct, key, std::move(est));
}

void write_shots_csv(std::ostream &out, std::span<const ShotRecord> shots, std::uint64_t trial, unsigned d1,
                     bool header) {
    if (header) out << "trial,t,branch,pauli,outcome\n";
    for (std::size_t t = 0; t < shots.size(); ++t) {
        const ShotRecord &s = shots[t];
        out << trial << ',' << t << ',' << static_cast<int>(s.branch) << ','
            << PauliString::from_index(d1, s.pauli).symbol() << ',' << s.outcome << '\n';
    }
}

}  // namespace anamorph
