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

#include "anamorph/qop_kit.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

#include "anamorph/error.hpp"

namespace anamorph {
namespace {

constexpr char kPauliLetters[] = {'I', 'X', 'Y', 'Z'};

// Digit d in 0..3 (I, X, Y, Z) to (x, z).
void digit_to_bits(std::size_t d, std::uint8_t &x, std::uint8_t &z) {
    x = (d == 1 || d == 2) ? 1 : 0;
    z = (d == 2 || d == 3) ? 1 : 0;
}

std::size_t bits_to_digit(std::uint8_t x, std::uint8_t z) {
    if (x && z) return 2;
    if (x) return 1;
    if (z) return 3;
    return 0;
}

// Packs per-qubit bits into an index with qubit 0 as the most significant bit.
std::size_t pack_bits(const std::vector<std::uint8_t> &bits) {
    std::size_t v = 0;
    for (std::uint8_t b : bits) v = (v << 1) | (b & 1u);
    return v;
}

Complex observable_phase(std::size_t xmask, std::size_t zmask) {
    static const Complex kPowers[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kPowers[std::popcount(xmask & zmask) % 4];
}

ComplexMatrix pauli_realization(const PauliString &p, bool hermitian) {
    const std::size_t dim = std::size_t{1} << p.n;
    const std::size_t xmask = pack_bits(p.x_bits);
    const std::size_t zmask = pack_bits(p.z_bits);
    const Complex phase = hermitian ? observable_phase(xmask, zmask) : Complex(1);
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    // X^x Z^z |j> = (-1)^{z.j} |j xor x>.
    for (std::size_t j = 0; j < dim; ++j) {
        const double sign = (std::popcount(zmask & j) & 1) ? -1.0 : 1.0;
        out(static_cast<Eigen::Index>(j ^ xmask), static_cast<Eigen::Index>(j)) = phase * sign;
    }
    return out;
}

void require_qubit_dim(const ComplexMatrix &m, std::size_t qubits, const char *what) {
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != (std::size_t{1} << qubits)) {
        std::ostringstream msg;
        msg << what << ": matrix is " << m.rows() << "x" << m.cols() << ", key covers " << qubits
            << " qubits";
        fail(ErrorCode::DimensionMismatch, msg.str());
    }
}

void require_even_square(const ComplexMatrix &m, const char *what) {
    if (m.rows() != m.cols() || m.rows() < 2 || m.rows() % 2 != 0)
        fail(ErrorCode::DimensionMismatch, std::string(what) + ": expected an even square matrix");
}

}  // namespace

PauliString PauliString::from_index(std::size_t n, std::size_t index) {
    PauliString p;
    p.n = n;
    p.x_bits.assign(n, 0);
    p.z_bits.assign(n, 0);
    for (std::size_t q = n; q-- > 0;) {
        digit_to_bits(index % 4, p.x_bits[q], p.z_bits[q]);
        index /= 4;
    }
    if (index != 0) fail(ErrorCode::InvalidArgument, "Pauli index out of range");
    return p;
}

PauliString PauliString::from_symbol(std::string_view symbol) {
    PauliString p;
    p.n = symbol.size();
    p.x_bits.assign(p.n, 0);
    p.z_bits.assign(p.n, 0);
    for (std::size_t q = 0; q < p.n; ++q) {
        const char *hit = std::find(std::begin(kPauliLetters), std::end(kPauliLetters), symbol[q]);
        if (hit == std::end(kPauliLetters))
            fail(ErrorCode::SchemaViolation, "bad Pauli symbol '" + std::string(symbol) + "'");
        digit_to_bits(static_cast<std::size_t>(hit - kPauliLetters), p.x_bits[q], p.z_bits[q]);
    }
    return p;
}

std::size_t PauliString::index() const {
    std::size_t v = 0;
    for (std::size_t q = 0; q < n; ++q) v = v * 4 + bits_to_digit(x_bits[q], z_bits[q]);
    return v;
}

std::string PauliString::symbol() const {
    std::string s;
    for (std::size_t q = 0; q < n; ++q) s.push_back(kPauliLetters[bits_to_digit(x_bits[q], z_bits[q])]);
    return s;
}

bool PauliString::is_identity() const {
    for (std::size_t q = 0; q < n; ++q)
        if (x_bits[q] || z_bits[q]) return false;
    return true;
}

ComplexMatrix pauli_matrix(const PauliString &p) { return pauli_realization(p, false); }

ComplexMatrix pauli_observable(const PauliString &p) { return pauli_realization(p, true); }

Complex pauli_trace(const PauliString &p, const ComplexMatrix &m) {
    const std::size_t dim = std::size_t{1} << p.n;
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != dim)
        fail(ErrorCode::DimensionMismatch, "pauli_trace: matrix dimension does not match the Pauli string");
    const std::size_t xmask = pack_bits(p.x_bits);
    const std::size_t zmask = pack_bits(p.z_bits);
    // Tr(P m) = sum_j P[j ^ x, j] m[j, j ^ x].
    Complex acc = 0;
    for (std::size_t j = 0; j < dim; ++j) {
        const Complex v = m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ xmask));
        acc += (std::popcount(zmask & j) & 1) ? -v : v;
    }
    return observable_phase(xmask, zmask) * acc;
}

QotpKey::QotpKey(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.size() % 2 != 0) fail(ErrorCode::InvalidArgument, "QOTP key length must be even");
    for (std::uint8_t b : bits_)
        if (b > 1) fail(ErrorCode::InvalidArgument, "QOTP key bits must be 0 or 1");
}

QotpKey QotpKey::zeros(std::size_t qubits) { return QotpKey(std::vector<std::uint8_t>(2 * qubits, 0)); }

QotpKey QotpKey::from_index(std::size_t qubits, std::uint64_t index) {
    std::vector<std::uint8_t> bits(2 * qubits, 0);
    for (std::size_t i = bits.size(); i-- > 0;) {
        bits[i] = static_cast<std::uint8_t>(index & 1u);
        index >>= 1;
    }
    if (index != 0) fail(ErrorCode::InvalidArgument, "QOTP key index out of range");
    return QotpKey(std::move(bits));
}

QotpKey QotpKey::from_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            fail(ErrorCode::SchemaViolation, "QOTP key must be a string of 0 and 1");
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (bits.size() % 2 != 0) fail(ErrorCode::SchemaViolation, "QOTP key length must be even");
    return QotpKey(std::move(bits));
}

QotpKey QotpKey::sample(std::size_t qubits, Rng &rng) {
    std::vector<std::uint8_t> bits(2 * qubits);
    for (auto &b : bits) b = rng.bit() ? 1 : 0;
    return QotpKey(std::move(bits));
}

std::string QotpKey::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (std::uint8_t b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
}

PauliString QotpKey::pauli() const {
    PauliString p;
    p.n = qubits();
    for (std::size_t j = 0; j < p.n; ++j) {
        p.x_bits.push_back(bits_[2 * j]);
        p.z_bits.push_back(bits_[2 * j + 1]);
    }
    return p;
}

ComplexMatrix qotp_unitary(const QotpKey &key) { return pauli_matrix(key.pauli()); }

ComplexMatrix qotp_encrypt(const ComplexMatrix &rho, const QotpKey &key) {
    require_qubit_dim(rho, key.qubits(), "qotp");
    const PauliString p = key.pauli();
    const std::size_t xmask = pack_bits(p.x_bits);
    const std::size_t zmask = pack_bits(p.z_bits);
    const auto dim = static_cast<std::size_t>(rho.rows());
    // (P rho P^dagger)[a, b] = (-1)^{z.a + z.b} rho[a xor x, b xor x].
    ComplexMatrix out(rho.rows(), rho.cols());
    for (std::size_t a = 0; a < dim; ++a) {
        const int sa = std::popcount(zmask & a) & 1;
        for (std::size_t b = 0; b < dim; ++b) {
            const int sb = std::popcount(zmask & b) & 1;
            const Complex v = rho(static_cast<Eigen::Index>(a ^ xmask), static_cast<Eigen::Index>(b ^ xmask));
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = (sa ^ sb) ? -v : v;
        }
    }
    return out;
}

// Conjugation by P^dagger equals conjugation by P since the two differ by a sign.
ComplexMatrix qotp_decrypt(const ComplexMatrix &sigma, const QotpKey &key) { return qotp_encrypt(sigma, key); }

DensityMatrix qotp_encrypt(const DensityMatrix &rho, const QotpKey &key) {
    return DensityMatrix::trusted(qotp_encrypt(rho.mat(), key));
}

DensityMatrix qotp_decrypt(const DensityMatrix &sigma, const QotpKey &key) {
    return DensityMatrix::trusted(qotp_decrypt(sigma.mat(), key));
}

DensityMatrix qotp_key_average(const DensityMatrix &rho) {
    const unsigned n = log2_exact(rho.dim());
    if (n > 4) fail(ErrorCode::TooLarge, "qotp_key_average enumerates 4^n keys; n must be <= 4");
    const std::uint64_t count = std::uint64_t{1} << (2 * n);
    ComplexMatrix acc = ComplexMatrix::Zero(rho.mat().rows(), rho.mat().cols());
    for (std::uint64_t i = 0; i < count; ++i) acc += qotp_encrypt(rho.mat(), QotpKey::from_index(n, i));
    acc /= static_cast<double>(count);
    const ComplexMatrix expected = ComplexMatrix::Identity(acc.rows(), acc.cols()) / static_cast<double>(acc.rows());
    if ((acc - expected).cwiseAbs().maxCoeff() > 1e-12)
        throw std::logic_error("qotp_key_average: result differs from the maximally mixed state");
    return DensityMatrix::trusted(std::move(acc));
}

std::uint64_t factorial(std::size_t n) {
    if (n > 20) fail(ErrorCode::TooLarge, "factorial overflows 64 bits for n > 20");
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

std::uint64_t lehmer_rank(std::span<const std::size_t> mapping) {
    const std::size_t n = mapping.size();
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            if (mapping[j] < mapping[i]) ++smaller;
        rank += smaller * factorial(n - 1 - i);
    }
    return rank;
}

std::vector<std::size_t> lehmer_unrank(std::size_t size, std::uint64_t rank) {
    if (rank >= factorial(size)) fail(ErrorCode::InvalidArgument, "Lehmer rank out of range");
    std::vector<std::size_t> pool(size);
    for (std::size_t i = 0; i < size; ++i) pool[i] = i;
    std::vector<std::size_t> out;
    out.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        const std::uint64_t f = factorial(size - 1 - i);
        const auto digit = static_cast<std::size_t>(rank / f);
        rank %= f;
        out.push_back(pool[digit]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return out;
}

PermSpec PermSpec::identity(std::size_t size) {
    std::vector<std::size_t> m(size);
    for (std::size_t i = 0; i < size; ++i) m[i] = i;
    return from_mapping(std::move(m));
}

PermSpec PermSpec::from_mapping(std::vector<std::size_t> mapping) {
    const std::size_t n = mapping.size();
    if (n == 0) fail(ErrorCode::InvalidArgument, "permutation must be nonempty");
    std::vector<bool> seen(n, false);
    for (std::size_t v : mapping) {
        if (v >= n || seen[v]) fail(ErrorCode::InvalidArgument, "mapping is not a bijection");
        seen[v] = true;
    }
    PermSpec p;
    p.size = n;
    p.mapping = std::move(mapping);
    if (n <= kMaxLehmerSize) p.lehmer = lehmer_rank(p.mapping);
    return p;
}

PermSpec PermSpec::from_lehmer(std::size_t size, std::uint64_t rank) {
    if (size > kMaxLehmerSize) fail(ErrorCode::TooLarge, "Lehmer form needs size <= 20");
    return from_mapping(lehmer_unrank(size, rank));
}

PermSpec PermSpec::sample(std::size_t size, Rng &rng) {
    std::vector<std::size_t> m(size);
    for (std::size_t i = 0; i < size; ++i) m[i] = i;
    for (std::size_t i = 0; i + 1 < size; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(size - i));
        std::swap(m[i], m[j]);
    }
    return from_mapping(std::move(m));
}

PermSpec PermSpec::inverse() const {
    std::vector<std::size_t> inv(size);
    for (std::size_t i = 0; i < size; ++i) inv[mapping[i]] = i;
    return from_mapping(std::move(inv));
}

ComplexMatrix permutation_unitary(const PermSpec &p) {
    const auto n = static_cast<Eigen::Index>(p.size);
    ComplexMatrix u = ComplexMatrix::Zero(n, n);
    for (std::size_t j = 0; j < p.size; ++j) u(static_cast<Eigen::Index>(p.mapping[j]), static_cast<Eigen::Index>(j)) = 1;
    return u;
}

ComplexMatrix permute_conjugate(const ComplexMatrix &m, const PermSpec &p) {
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != p.size)
        fail(ErrorCode::DimensionMismatch, "permutation size does not match the matrix");
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < p.size; ++i)
        for (std::size_t j = 0; j < p.size; ++j)
            out(static_cast<Eigen::Index>(p.mapping[i]), static_cast<Eigen::Index>(p.mapping[j])) =
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

ComplexMatrix permute_conjugate_inverse(const ComplexMatrix &m, const PermSpec &p) {
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != p.size)
        fail(ErrorCode::DimensionMismatch, "permutation size does not match the matrix");
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < p.size; ++i)
        for (std::size_t j = 0; j < p.size; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m(static_cast<Eigen::Index>(p.mapping[i]), static_cast<Eigen::Index>(p.mapping[j]));
    return out;
}

ComplexMatrix padding_isometry(unsigned d2, unsigned d1) {
    if (d2 > d1) fail(ErrorCode::DimensionMismatch, "padding needs d2 <= d1");
    const auto big = Eigen::Index{1} << d1, small = Eigen::Index{1} << d2;
    ComplexMatrix v = ComplexMatrix::Zero(big, small);
    v.topLeftCorner(small, small).setIdentity();
    return v;
}

ComplexMatrix padding_projector(unsigned d2, unsigned d1) {
    const ComplexMatrix v = padding_isometry(d2, d1);
    return v * v.adjoint();
}

ComplexMatrix pad_embed(const ComplexMatrix &rho, unsigned d1) {
    const unsigned d2 = log2_exact(static_cast<std::size_t>(rho.rows()));
    if (rho.rows() != rho.cols() || d2 > d1) fail(ErrorCode::DimensionMismatch, "pad_embed needs a square 2^d2 input with d2 <= d1");
    const auto big = Eigen::Index{1} << d1;
    ComplexMatrix out = ComplexMatrix::Zero(big, big);
    out.topLeftCorner(rho.rows(), rho.cols()) = rho;
    return out;
}

DensityMatrix pad_embed(const DensityMatrix &rho, unsigned d1) {
    return DensityMatrix::trusted(pad_embed(rho.mat(), d1));
}

ComplexMatrix pad_unembed(const ComplexMatrix &rho_big, unsigned d2) {
    const unsigned d1 = log2_exact(static_cast<std::size_t>(rho_big.rows()));
    if (rho_big.rows() != rho_big.cols() || d2 > d1)
        fail(ErrorCode::DimensionMismatch, "pad_unembed needs a square 2^d1 input with d2 <= d1");
    const auto small = Eigen::Index{1} << d2;
    return rho_big.topLeftCorner(small, small);
}

ComplexMatrix control_block(const ComplexMatrix &m, int r, int c) {
    require_even_square(m, "control_block");
    if (r < 0 || r > 1 || c < 0 || c > 1) fail(ErrorCode::InvalidArgument, "control block index must be 0 or 1");
    const Eigen::Index h = m.rows() / 2;
    return m.block(r * h, c * h, h, h);
}

ComplexMatrix assemble_control_blocks(const ComplexMatrix &a00, const ComplexMatrix &a01,
                                      const ComplexMatrix &a10, const ComplexMatrix &a11) {
    const Eigen::Index h = a00.rows();
    for (const ComplexMatrix *b : {&a00, &a01, &a10, &a11})
        if (b->rows() != h || b->cols() != h) fail(ErrorCode::DimensionMismatch, "control blocks must share one square shape");
    ComplexMatrix out(2 * h, 2 * h);
    out.topLeftCorner(h, h) = a00;
    out.topRightCorner(h, h) = a01;
    out.bottomLeftCorner(h, h) = a10;
    out.bottomRightCorner(h, h) = a11;
    return out;
}

ComplexMatrix dephase_control(const ComplexMatrix &rho, double lambda) {
    if (!(lambda >= -1.0 && lambda <= 1.0)) {
        std::ostringstream msg;
        msg << "lambda " << lambda << " outside [-1, 1]";
        fail(ErrorCode::LambdaOutOfRange, msg.str());
    }
    require_even_square(rho, "dephase_control");
    const Eigen::Index h = rho.rows() / 2;
    ComplexMatrix out = rho;
    out.topRightCorner(h, h) *= lambda;
    out.bottomLeftCorner(h, h) *= lambda;
    return out;
}

DensityMatrix dephase_control(const DensityMatrix &rho, double lambda) {
    return DensityMatrix::trusted(dephase_control(rho.mat(), lambda));
}

}  // namespace anamorph
