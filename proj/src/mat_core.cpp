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

#include "anamorph/mat_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "anamorph/error.hpp"

namespace anamorph {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kConvergence = 1e-13;
constexpr double kPhaseThreshold = 1e-8;

void require_square(const ComplexMatrix &a, const char *what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        std::ostringstream msg;
        msg << what << ": expected a nonempty square matrix, got " << a.rows() << "x" << a.cols();
        fail(ErrorCode::DimensionMismatch, msg.str());
    }
}

double off_diagonal_norm(const ComplexMatrix &a) {
    double s = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One rotation zeroing a(p, q). G = diag(1, e^{-i phi}) * [[c, s], [-s, c]].
void rotate(ComplexMatrix &a, ComplexMatrix &v, Eigen::Index p, Eigen::Index q) {
    const Complex apq = a(p, q);
    const double g = std::abs(apq);
    if (g == 0) return;
    const Complex phase = apq / g;
    const double theta = (a(q, q).real() - a(p, p).real()) / (2 * g);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
    }
    const double c = 1 / std::sqrt(1 + t * t);
    const double s = t * c;
    const Complex gpp = c, gpq = s;
    const Complex gqp = -s * std::conj(phase), gqq = c * std::conj(phase);

    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex akp = a(k, p), akq = a(k, q);
        a(k, p) = akp * gpp + akq * gqp;
        a(k, q) = akp * gpq + akq * gqq;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex apk = a(p, k), aqk = a(q, k);
        a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
        a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
    }
    a(p, q) = 0;
    a(q, p) = 0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex vkp = v(k, p), vkq = v(k, q);
        v(k, p) = vkp * gpp + vkq * gqp;
        v(k, q) = vkp * gpq + vkq * gqq;
    }
}

}  // namespace

unsigned log2_exact(std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0)
        fail(ErrorCode::DimensionMismatch, "dimension " + std::to_string(n) + " is not a power of two");
    unsigned k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

double hermiticity_residual(const ComplexMatrix &a) {
    if (a.rows() != a.cols()) return INFINITY;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix &a, double tol) {
    if (a.rows() != a.cols()) return false;
    return hermiticity_residual(a) <= tol * std::max(1.0, operator_norm(a));
}

HermitianEigen hermitian_eig(const ComplexMatrix &input) {
    require_square(input, "hermitian_eig");
    if (!input.allFinite()) fail(ErrorCode::InvalidArgument, "hermitian_eig: non-finite entry");
    if (!is_hermitian(input)) {
        std::ostringstream msg;
        msg << "hermitian_eig: residual " << hermiticity_residual(input);
        fail(ErrorCode::NotHermitian, msg.str());
    }
    const Eigen::Index n = input.rows();
    ComplexMatrix a = (input + input.adjoint()) / 2.0;
    ComplexMatrix v = ComplexMatrix::Identity(n, n);
    const double target = kConvergence * a.norm();

    bool converged = false;
    for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
        const double off = off_diagonal_norm(a);
        if (off == 0 || off < target) {
            converged = true;
            break;
        }
        if (sweep == kMaxSweeps) break;
        for (Eigen::Index p = 0; p + 1 < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "hermitian_eig: off-diagonal norm " << off_diagonal_norm(a) << " after "
            << kMaxSweeps << " sweeps";
        fail(ErrorCode::NoConvergence, msg.str());
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return a(x, x).real() < a(y, y).real();
    });

    HermitianEigen out;
    out.eigenvalues.reserve(order.size());
    out.eigenvectors.resize(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        const Eigen::Index src = order[static_cast<std::size_t>(col)];
        out.eigenvalues.push_back(a(src, src).real());
        ComplexVector u = v.col(src);
        u.normalize();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double m = std::abs(u(i));
            if (m > kPhaseThreshold) {
                u *= std::conj(u(i)) / m;
                u(i) = m;
                break;
            }
        }
        out.eigenvectors.col(col) = u;
    }
    return out;
}

std::vector<double> eigenvalues(const ComplexMatrix &a) { return hermitian_eig(a).eigenvalues; }

double min_eigenvalue(const ComplexMatrix &a) { return hermitian_eig(a).eigenvalues.front(); }

double max_eigenvalue(const ComplexMatrix &a) { return hermitian_eig(a).eigenvalues.back(); }

ComplexMatrix apply_hermitian_function(const ComplexMatrix &a, HermitianFunction f) {
    const HermitianEigen eig = hermitian_eig(a);
    double scale = 0;
    for (double l : eig.eigenvalues) scale = std::max(scale, std::abs(l));
    const double cutoff = kSupportTol * scale;

    const std::size_t n = eig.eigenvalues.size();
    std::vector<double> fl(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double l = eig.eigenvalues[i];
        switch (f) {
            case HermitianFunction::Sqrt:
                if (l < -1e-10) {
                    std::ostringstream msg;
                    msg << "sqrt of eigenvalue " << l;
                    fail(ErrorCode::NegativeEigenvalueForSqrt, msg.str());
                }
                fl[i] = std::sqrt(std::max(l, 0.0));
                break;
            case HermitianFunction::InvOnSupport:
                fl[i] = std::abs(l) > cutoff ? 1 / l : 0.0;
                break;
            case HermitianFunction::Log2OnSupport:
                if (l < -std::max(1e-10, cutoff)) {
                    std::ostringstream msg;
                    msg << "log2 of eigenvalue " << l;
                    fail(ErrorCode::InvalidArgument, msg.str());
                }
                fl[i] = l > cutoff ? std::log2(l) : 0.0;
                break;
            case HermitianFunction::Abs:
                fl[i] = std::abs(l);
                break;
        }
    }
    const ComplexMatrix &v = eig.eigenvectors;
    ComplexMatrix scaled = v;
    for (std::size_t i = 0; i < n; ++i) scaled.col(static_cast<Eigen::Index>(i)) *= fl[i];
    return scaled * v.adjoint();
}

MatrixNorms matrix_norms(const ComplexMatrix &a) {
    MatrixNorms out;
    out.frobenius = a.norm();
    if (a.size() == 0) return out;
    std::vector<double> sv;
    if (a.rows() == a.cols() && hermiticity_residual(a) == 0) {
        for (double l : hermitian_eig(a).eigenvalues) sv.push_back(std::abs(l));
    } else {
        Eigen::JacobiSVD<ComplexMatrix> svd(a);
        const auto &s = svd.singularValues();
        sv.assign(s.data(), s.data() + s.size());
    }
    for (double s : sv) {
        out.trace_norm += s;
        out.operator_norm = std::max(out.operator_norm, s);
    }
    const double dim = static_cast<double>(std::min(a.rows(), a.cols()));
    if (out.trace_norm > std::sqrt(dim) * out.frobenius * (1 + 1e-12) + 1e-300)
        throw std::logic_error("matrix_norms: Schatten norm comparison violated");
    return out;
}

double trace_norm(const ComplexMatrix &a) { return matrix_norms(a).trace_norm; }

double operator_norm(const ComplexMatrix &a) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues()(0);
}

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix &rho, std::span<const std::size_t> factor_dims,
                            std::span<const std::size_t> traced_indices) {
    require_square(rho, "partial_trace");
    std::size_t total = 1;
    for (std::size_t d : factor_dims) {
        if (d == 0) fail(ErrorCode::DimensionMismatch, "partial_trace: zero factor dimension");
        total *= d;
    }
    if (total != static_cast<std::size_t>(rho.rows()))
        fail(ErrorCode::DimensionMismatch, "partial_trace: factor dims do not multiply to " +
                                               std::to_string(rho.rows()));
    std::vector<bool> traced(factor_dims.size(), false);
    for (std::size_t t : traced_indices) {
        if (t >= factor_dims.size() || traced[t])
            fail(ErrorCode::DimensionMismatch, "partial_trace: bad traced index " + std::to_string(t));
        traced[t] = true;
    }

    // kept[i] and env[i]: mixed-radix indices of the kept and traced factors.
    std::vector<std::size_t> kept(total), env(total);
    std::size_t kept_dim = 1;
    for (std::size_t f = 0; f < factor_dims.size(); ++f)
        if (!traced[f]) kept_dim *= factor_dims[f];
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rem = i, k = 0, e = 0, kstride = 1, estride = 1;
        for (std::size_t f = factor_dims.size(); f-- > 0;) {
            const std::size_t digit = rem % factor_dims[f];
            rem /= factor_dims[f];
            if (traced[f]) {
                e += digit * estride;
                estride *= factor_dims[f];
            } else {
                k += digit * kstride;
                kstride *= factor_dims[f];
            }
        }
        kept[i] = k;
        env[i] = e;
    }
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(kept_dim),
                                            static_cast<Eigen::Index>(kept_dim));
    for (std::size_t r = 0; r < total; ++r)
        for (std::size_t c = 0; c < total; ++c)
            if (env[r] == env[c])
                out(static_cast<Eigen::Index>(kept[r]), static_cast<Eigen::Index>(kept[c])) +=
                    rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> factor_dims,
                            std::span<const std::size_t> traced_indices) {
    return DensityMatrix::trusted(partial_trace(rho.mat(), factor_dims, traced_indices));
}

SchurCheck schur_psd_check(const ComplexMatrix &b, const ComplexMatrix &c, const ComplexMatrix &d) {
    require_square(b, "schur_psd_check(B)");
    require_square(d, "schur_psd_check(D)");
    if (c.rows() != b.rows() || c.cols() != d.cols())
        fail(ErrorCode::DimensionMismatch, "schur_psd_check: C is not compatible with B and D");
    const double b_min = min_eigenvalue(b);
    const ComplexMatrix b_pinv = apply_hermitian_function(b, HermitianFunction::InvOnSupport);
    ComplexMatrix schur = d - c.adjoint() * b_pinv * c;
    schur = (schur + schur.adjoint()) / 2.0;

    SchurCheck out;
    out.schur_min_eigenvalue = min_eigenvalue(schur);
    // The generalized Schur criterion also needs range(C) inside range(B).
    const ComplexMatrix leak = c - b * b_pinv * c;
    const double leak_tol = 1e-10 * std::max(1.0, c.norm());
    out.is_psd = b_min >= -1e-10 && out.schur_min_eigenvalue >= -1e-10 && leak.norm() <= leak_tol;
    return out;
}

DensityCheck check_density(const ComplexMatrix &a, double tol) {
    DensityCheck out;
    auto add = [&](const char *label, double residual) {
        out.ok = false;
        out.violations.push_back({label, residual});
    };
    if (a.rows() != a.cols() || a.rows() == 0) {
        add("shape", static_cast<double>(std::abs(a.rows() - a.cols())) + (a.rows() == 0 ? 1 : 0));
        return out;
    }
    if (!a.allFinite()) {
        add("finite", INFINITY);
        return out;
    }
    const double herm = hermiticity_residual(a);
    if (herm > tol * std::max(1.0, operator_norm(a))) add("hermitian", herm);
    const ComplexMatrix h = (a + a.adjoint()) / 2.0;
    const double lmin = min_eigenvalue(h);
    if (lmin < -tol) add("psd", -lmin);
    const double tr_err = std::abs(a.trace() - Complex(1, 0));
    if (tr_err > tol) add("trace", tr_err);
    return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix mat, double tol) : mat_(std::move(mat)) {
    const DensityCheck check = check_density(mat_, tol);
    if (!check.ok) {
        std::ostringstream msg;
        msg << "not a density matrix:";
        for (const auto &v : check.violations) msg << " " << v.label << "=" << v.residual;
        fail(ErrorCode::NotDensity, msg.str());
    }
}

DensityMatrix::DensityMatrix(ComplexMatrix mat, TrustedTag) : mat_(std::move(mat)) {}

DensityMatrix DensityMatrix::trusted(ComplexMatrix mat) {
    if (mat.rows() != mat.cols() || mat.rows() == 0)
        fail(ErrorCode::DimensionMismatch, "density matrix must be square and nonempty");
    return DensityMatrix(std::move(mat), TrustedTag{});
}

}  // namespace anamorph
