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

#ifndef ANAMORPH_MAT_CORE_HPP
#define ANAMORPH_MAT_CORE_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace anamorph {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Default tolerance for the density-matrix invariants.
inline constexpr double kDensityTol = 1e-10;
/// Eigenvalues at or below this fraction of the largest one are treated as zero.
inline constexpr double kSupportTol = 1e-12;

struct HermitianEigen {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // column i belongs to eigenvalues[i]
};

/// Entrywise Hermiticity residual max|A - A^dagger|.
double hermiticity_residual(const ComplexMatrix &a);

/// Hermiticity test at tol * max(1, operator norm).
bool is_hermitian(const ComplexMatrix &a, double tol = kDensityTol);

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Rotations are applied in row-major (p, q) order each sweep until the
/// off-diagonal Frobenius norm drops below 1e-13 * ||a||_F. Each eigenvector is
/// normalized so that its first component with modulus above 1e-8 is real and
/// positive.
HermitianEigen hermitian_eig(const ComplexMatrix &a);

/// Eigenvalues only, ascending.
std::vector<double> eigenvalues(const ComplexMatrix &a);
double min_eigenvalue(const ComplexMatrix &a);
double max_eigenvalue(const ComplexMatrix &a);

enum class HermitianFunction { Sqrt, InvOnSupport, Log2OnSupport, Abs };

/// Spectral calculus sum_i f(lambda_i) |u_i><u_i|.
ComplexMatrix apply_hermitian_function(const ComplexMatrix &a, HermitianFunction f);

struct MatrixNorms {
    double trace_norm = 0;
    double operator_norm = 0;
    double frobenius = 0;
};

MatrixNorms matrix_norms(const ComplexMatrix &a);
double trace_norm(const ComplexMatrix &a);
double operator_norm(const ComplexMatrix &a);

/// Kronecker product, left factor most significant.
ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b);

/// Partial trace over the listed tensor factors.
ComplexMatrix partial_trace(const ComplexMatrix &rho, std::span<const std::size_t> factor_dims,
                            std::span<const std::size_t> traced_indices);

struct SchurCheck {
    bool is_psd = false;
    double schur_min_eigenvalue = 0;
};

/// PSD test for [[B, C], [C^dagger, D]] through B >= 0 and D - C^dagger B^+ C >= 0.
/// schur_min_eigenvalue is the smallest eigenvalue of the Schur complement.
SchurCheck schur_psd_check(const ComplexMatrix &b, const ComplexMatrix &c, const ComplexMatrix &d);

struct DensityViolation {
    std::string label;  // "shape", "finite", "hermitian", "psd" or "trace"
    double residual = 0;
};

struct DensityCheck {
    bool ok = true;
    std::vector<DensityViolation> violations;
};

DensityCheck check_density(const ComplexMatrix &a, double tol = kDensityTol);

/// Validated density matrix. The checked constructor throws NotDensity.
class DensityMatrix {
   public:
    explicit DensityMatrix(ComplexMatrix mat, double tol = kDensityTol);

    /// Wraps a matrix known to be a state up to roundoff, e.g. the output of a
    /// channel applied to a validated state. Only the shape is checked.
    static DensityMatrix trusted(ComplexMatrix mat);

    const ComplexMatrix &mat() const noexcept { return mat_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }

   private:
    struct TrustedTag {};
    DensityMatrix(ComplexMatrix mat, TrustedTag);
    ComplexMatrix mat_;
};

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> factor_dims,
                            std::span<const std::size_t> traced_indices);

/// log2 of a power of two; throws DimensionMismatch otherwise.
unsigned log2_exact(std::size_t n);

}  // namespace anamorph

#endif  // ANAMORPH_MAT_CORE_HPP
