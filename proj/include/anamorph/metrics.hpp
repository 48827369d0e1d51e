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

#ifndef ANAMORPH_METRICS_HPP
#define ANAMORPH_METRICS_HPP

#include <cstdint>
#include <optional>

#include "anamorph/mat_core.hpp"
#include "anamorph/rng.hpp"
#include "anamorph/scheme.hpp"

namespace anamorph {

/// (1/2) ||rho - sigma||_1.
double trace_distance(const ComplexMatrix &rho, const ComplexMatrix &sigma);
double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma);

/// Tr sqrt(sqrt(rho) sigma sqrt(rho)).
double fidelity(const ComplexMatrix &rho, const ComplexMatrix &sigma);
double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);

struct IndistinguishabilityReport {
    double trace_distance = 0;
    double fidelity = 0;
    std::uint64_t eta = 0;
    double fvdg_lower = 0;          // 1 - F
    double fvdg_upper = 0;          // sqrt(1 - F^2)
    double helstrom_advantage = 0;  // optimal distinguishing advantage, equal to the trace distance
};

IndistinguishabilityReport indistinguishability_report(const Ciphertext &ct0, const Ciphertext &ct1,
                                                       std::uint64_t eta);

/// Average of U_sigma phi U_sigma^dagger over Sym(n) is alpha I + beta J.
struct TwirlReport {
    std::size_t n = 0;
    double alpha = 0;
    double beta = 0;
    double trace = 0;      // T
    double entry_sum = 0;  // S, sum of all entries
    ComplexMatrix formula_state;
    std::optional<ComplexMatrix> brute_force_state;
};

inline constexpr std::size_t kMaxBruteForceTwirl = 8;

/// The brute-force average enumerates all n! permutations (n <= 8).
TwirlReport twirl_expectation(const ComplexMatrix &phi, bool brute_force);

/// Expected M_f^(1) over keys and permutations, as a twirl of the key-averaged
/// block state [[2^-(d1+1) I, 2^-d2 Pi_V / eta], [2^-d2 Pi_V / eta, 2^-(d1+1) I]].
ComplexMatrix key_averaged_block(unsigned d1, unsigned d2, double eta);

/// 1 / (eta 2^d1).
double expected_state_distance(unsigned d1, std::uint64_t eta);

/// -sum lambda log2 lambda with 0 log 0 = 0.
double von_neumann_entropy(const ComplexMatrix &rho);
double entropy_of_spectrum(const std::vector<double> &p);

/// Tr rho (log2 rho - log2 sigma); +infinity if supp(rho) is not inside supp(sigma).
double relative_entropy(const ComplexMatrix &rho, const ComplexMatrix &sigma);

struct EntropyReport {
    double s_mf0 = 0;
    double s_mo_enc = 0;
    bool commuting = false;
    std::optional<double> s_mf1_commuting;
    std::optional<double> rel_entropy;  // S(M_f^(1) || M_f^(0))
    double rel_entropy_bound = 0;       // (4 / eta^2) Tr(M_c'' (M_o')^-1 M_c'')
};

/// ||[A, B]||_F <= 1e-10 ||A||_F ||B||_F.
bool commutes(const ComplexMatrix &a, const ComplexMatrix &b);

EntropyReport entropy_report(const DensityMatrix &mo_enc, const DensityMatrix &mc_padded, std::uint64_t eta);

enum class QcpaMode { Exact, MonteCarlo };

struct QcpaReport {
    ComplexMatrix avg_state;
    ComplexMatrix xi_formula;
    double distance = 0;
    std::uint64_t terms = 0;
    std::optional<double> standard_error;  // Monte Carlo only
};

/// Average of the anamorphic ciphertext over k, k' and the permutation at a fixed eta.
/// Exact mode enumerates all coins and needs d1 = d2 = 1; Monte Carlo draws `samples` keys.
/// The per-term positivity gate of encrypt_direct is not applied: the average is an
/// algebraic identity and remains a state for eta >= 2.
QcpaReport qcpa_average(const DensityMatrix &mo, const DensityMatrix &mc, unsigned d1, unsigned d2,
                        std::uint64_t eta, QcpaMode mode = QcpaMode::Exact, std::uint64_t samples = 0,
                        Rng *rng = nullptr);

}  // namespace anamorph

#endif  // ANAMORPH_METRICS_HPP
