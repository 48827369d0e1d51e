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

#ifndef ANAMORPH_TOMOGRAPHY_HPP
#define ANAMORPH_TOMOGRAPHY_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "anamorph/mat_core.hpp"
#include "anamorph/rng.hpp"
#include "anamorph/scheme.hpp"

namespace anamorph {

enum class TomographyDesign { FramesD2, Singleton };

const char *design_name(TomographyDesign design);
/// Inverse of design_name ("frames_d2" or "singleton"); throws SchemaViolation.
TomographyDesign parse_design(const std::string &name);

struct TomographyPlan {
    std::size_t d = 0;  // 2^d1
    double epsilon = 0;
    double delta = 0;
    TomographyDesign design = TomographyDesign::Singleton;
    std::uint64_t n_shots = 0;
    std::vector<std::uint64_t> allocation;  // shots per group

    unsigned qubits() const { return log2_exact(d); }
    /// Pauli indices of each group (see PauliString::from_index). Every
    /// design used here has one nonidentity Pauli per group.
    std::vector<std::vector<std::size_t>> groups() const;
    /// Probability that a shot measures Pauli `index`.
    double pauli_probability(std::size_t index) const;
    /// Throws SchemaViolation when the fields are inconsistent.
    void validate() const;
};

/// Real-valued shot bound before rounding; frames: (d+1)d, singleton: d^3,
/// times log2(4 d^2 / delta) / (2 epsilon^2).
double shot_bound(std::size_t d, double epsilon, double delta, TomographyDesign design);

/// Smallest admissible N rounded up to a multiple of the group count, split uniformly.
TomographyPlan plan_shots(unsigned d1, double epsilon, double delta, TomographyDesign design);

enum class Probe { X, Y };

struct ShotRecord {
    std::uint8_t branch = 0;
    std::size_t pauli = 0;
    int outcome = 1;
    bool operator==(const ShotRecord &) const = default;
};

/// Exact measurement statistics of one probe setting.
///
/// The ciphertext is unpermuted, G = H (X probe) or G = HS (Y probe) is applied
/// to the control qubit, and the unnormalized branch blocks D_b are kept.
class ProbeSampler {
   public:
    ProbeSampler(const Ciphertext &ct, const PermSpec &perm, Probe probe);

    const ComplexMatrix &block(int b) const { return blocks_[static_cast<std::size_t>(b)]; }
    double branch_probability(int b) const { return p_[static_cast<std::size_t>(b)]; }
    /// Tr(P rho_{M|b}) for the Hermitian Pauli observable P.
    double conditional_expectation(int b, std::size_t pauli) const;

    /// Draws, in order: the branch (uniform01 against p_0), the Pauli within
    /// the group (uniform_below), the outcome (uniform01 against (1 + <P>)/2).
    ShotRecord sample(std::span<const std::size_t> group, Rng &rng) const;

   private:
    unsigned qubits_;
    std::array<ComplexMatrix, 2> blocks_;
    std::array<double, 2> p_{};
    std::array<std::vector<double>, 2> expectations_;  // indexed by Pauli
};

ShotRecord sample_shot(const Ciphertext &ct, const PermSpec &perm, const TomographyPlan &plan, std::size_t group,
                       Probe probe, Rng &rng);

/// Runs the plan group by group, allocation[g] shots each.
std::vector<ShotRecord> collect_shots(const ProbeSampler &sampler, const TomographyPlan &plan, Rng &rng);

/// Horvitz-Thompson estimate of D_b from the shots of one branch.
ComplexMatrix estimate_branch_block(std::span<const ShotRecord> shots, const TomographyPlan &plan, int branch);

struct BranchEstimates {
    ComplexMatrix d0_hat;
    ComplexMatrix d1_hat;
    std::array<std::uint64_t, 2> counts{};
};

/// Both branch blocks; throws NoShotsInBranch if either branch is empty.
BranchEstimates linear_inversion_estimate(std::span<const ShotRecord> shots, const TomographyPlan &plan);

struct DcmFiniteResult {
    ComplexMatrix mc_hat;
    double b_error_l2 = 0;           // ||(D0_hat - D1_hat)/2 - B/eta||_F against the exact blocks
    double b_error_trace_bound = 0;  // eta * sqrt(d) * b_error_l2
    DensityCheck validity;           // of mc_hat; no positivity projection is applied
    BranchEstimates estimates;
};

/// Finite-data covert decryption from branch block estimates.
DcmFiniteResult dcm_from_estimates(const Ciphertext &ct, const AnamorphicKey &key, BranchEstimates estimates);

/// Samples plan.n_shots X-probe shots and decodes the covert state.
DcmFiniteResult dcm_finite(const Ciphertext &ct, const AnamorphicKey &key, const TomographyPlan &plan, Rng &rng,
                           std::vector<ShotRecord> *shots_out = nullptr);

/// CSV rows "trial,t,branch,pauli,outcome"; the header is written when requested.
void write_shots_csv(std::ostream &out, std::span<const ShotRecord> shots, std::uint64_t trial, unsigned d1,
                     bool header);

}  // namespace anamorph

#endif  // ANAMORPH_TOMOGRAPHY_HPP
