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

#include "anamorph/qass.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "anamorph/error.hpp"
#include "anamorph/qop_kit.hpp"

namespace anamorph {
namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    b %= p;
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

const ShamirShare &component_share(const ShareBundle &b, const char *name) {
    const auto it = b.classical.find(name);
    if (it == b.classical.end())
        fail(ErrorCode::InconsistentShares, "player " + std::to_string(b.player) + " has no share for " + name);
    return it->second;
}

void require_pair(std::span<const ShareBundle> bundles) {
    if (bundles.size() < 2) fail(ErrorCode::ThresholdUnmet, "reconstruction needs two share bundles");
    if (bundles.size() > 2) fail(ErrorCode::InvalidArgument, "reconstruction takes exactly two share bundles");
    for (const auto &b : bundles) {
        if (b.player < 1 || b.player > 3) fail(ErrorCode::InvalidArgument, "player index must be in [1, 3]");
        if (b.qudit_index < 1 || b.qudit_index > 3) fail(ErrorCode::InvalidArgument, "qudit index must be in [1, 3]");
    }
    if (bundles[0].player == bundles[1].player || bundles[0].qudit_index == bundles[1].qudit_index)
        fail(ErrorCode::DuplicatePoints, "bundles come from the same player");
}

std::uint64_t reconstruct_component(const ShareBundle &a, const ShareBundle &b, const char *name) {
    const std::array<ShamirShare, 2> pair{component_share(a, name), component_share(b, name)};
    return shamir_reconstruct(pair).value();
}

unsigned d1_from_embed_dim(std::size_t embed_dim) {
    const unsigned bits = log2_exact(embed_dim);
    if (bits < 2) fail(ErrorCode::DimensionMismatch, "embedded dimension must be 2^(d1+1) with d1 >= 1");
    return bits - 1;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t f = 3; f <= n / f; f += 2)
        if (n % f == 0) return false;
    return true;
}

std::uint64_t next_prime_above(std::uint64_t n) {
    std::uint64_t c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

unsigned ceil_log2(std::uint64_t n) {
    if (n == 0) fail(ErrorCode::InvalidArgument, "ceil_log2 of zero");
    return static_cast<unsigned>(std::bit_width(n - 1));
}

FieldElement::FieldElement(std::uint64_t value, std::uint64_t p) : value_(value), p_(p) {
    if (p >= (std::uint64_t{1} << 32)) fail(ErrorCode::TooLarge, "field modulus must be below 2^32");
    if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "field modulus " + std::to_string(p) + " is not prime");
    if (value >= p) fail(ErrorCode::InvalidArgument, "field element " + std::to_string(value) + " is not below p");
}

void FieldElement::require_same_field(const FieldElement &o) const {
    if (p_ != o.p_) fail(ErrorCode::InconsistentShares, "field elements from different fields");
}

FieldElement FieldElement::operator+(const FieldElement &o) const {
    require_same_field(o);
    return {(value_ + o.value_) % p_, p_, Unchecked{}};
}

FieldElement FieldElement::operator-(const FieldElement &o) const {
    require_same_field(o);
    return {(value_ + p_ - o.value_) % p_, p_, Unchecked{}};
}

FieldElement FieldElement::operator*(const FieldElement &o) const {
    require_same_field(o);
    return {value_ * o.value_ % p_, p_, Unchecked{}};
}

FieldElement FieldElement::inverse() const {
    if (value_ == 0) fail(ErrorCode::InvalidArgument, "zero has no inverse");
    return {pow_mod(value_, p_ - 2, p_), p_, Unchecked{}};
}

std::array<ShamirShare, 3> shamir_share_with(const FieldElement &secret, std::uint64_t c) {
    const std::uint64_t p = secret.modulus();
    if (p <= 3) fail(ErrorCode::FieldTooSmall, "2-of-3 sharing needs p > 3");
    const FieldElement coef(c, p);
    std::array<ShamirShare, 3> out{ShamirShare{secret, secret}, ShamirShare{secret, secret}, ShamirShare{secret, secret}};
    for (std::uint64_t i = 0; i < 3; ++i) {
        const FieldElement x(i + 1, p);
        out[i] = ShamirShare{x, secret + coef * x};
    }
    return out;
}

std::array<ShamirShare, 3> shamir_share(const FieldElement &secret, Rng &rng) {
    if (secret.modulus() <= 3) fail(ErrorCode::FieldTooSmall, "2-of-3 sharing needs p > 3");
    return shamir_share_with(secret, rng.uniform_below(secret.modulus()));
}

FieldElement shamir_reconstruct(std::span<const ShamirShare> shares) {
    if (shares.size() < 2) fail(ErrorCode::ThresholdUnmet, "threshold is two shares");
    const std::uint64_t p = shares[0].x.modulus();
    for (const auto &s : shares)
        if (s.x.modulus() != p || s.y.modulus() != p) fail(ErrorCode::InconsistentShares, "shares over different fields");
    const ShamirShare &a = shares[0], &b = shares[1];
    if (a.x == b.x) fail(ErrorCode::DuplicatePoints, "two shares at the same evaluation point");
    const FieldElement c = (b.y - a.y) * (b.x - a.x).inverse();
    const FieldElement s = a.y - c * a.x;
    for (std::size_t i = 2; i < shares.size(); ++i)
        if (shares[i].y != s + c * shares[i].x) fail(ErrorCode::InconsistentShares, "shares are not on one line");
    return s;
}

void EtaDomain::validate() const {
    if (values.empty()) fail(ErrorCode::InvalidArgument, "eta domain is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 2) fail(ErrorCode::InvalidArgument, "eta domain values must be at least 2");
        if (i > 0 && values[i] <= values[i - 1]) fail(ErrorCode::InvalidArgument, "eta domain must be strictly ascending");
    }
}

std::size_t EtaDomain::index_of(std::uint64_t eta) const {
    const auto it = std::find(values.begin(), values.end(), eta);
    if (it == values.end()) fail(ErrorCode::InvalidArgument, "eta " + std::to_string(eta) + " is not in the domain");
    return static_cast<std::size_t>(it - values.begin());
}

std::uint64_t KeyTuple::get(std::size_t component) const {
    switch (component) {
    case 1: return k1;
    case 2: return k2;
    case 3: return k3;
    case 4: return k4;
    case 5: return k5;
    case 6: return k6;
    default: fail(ErrorCode::InvalidArgument, "key component must be in [1, 6]");
    }
}

void KeyTuple::set(std::size_t component, std::uint64_t v) {
    switch (component) {
    case 1: k1 = v; break;
    case 2: k2 = v; break;
    case 3: k3 = v; break;
    case 4: k4 = v; break;
    case 5: k5 = v; break;
    case 6: k6 = v; break;
    default: fail(ErrorCode::InvalidArgument, "key component must be in [1, 6]");
    }
}

namespace {

std::uint64_t qotp_index(const QotpKey &k) {
    std::uint64_t v = 0;
    for (std::uint8_t b : k.bits()) v = (v << 1) | b;
    return v;
}

}  // namespace

KeyTuple key_tuple_from(const AnamorphicKey &key, const EtaDomain &domain) {
    key.validate();
    domain.validate();
    if (key.d1 > kMaxQassD1) fail(ErrorCode::UnsupportedDims, "key sharing supports d1 <= 2");
    KeyTuple t;
    t.k1 = qotp_index(key.k);
    t.k2 = key.d1;
    t.k3 = lehmer_rank(key.perm.mapping);
    t.k4 = qotp_index(key.k_prime);
    t.k5 = key.d2;
    t.k6 = domain.index_of(key.eta);
    return t;
}

AnamorphicKey key_from_tuple(const KeyTuple &t, const EtaDomain &domain) {
    domain.validate();
    if (t.k2 < 1 || t.k2 > kMaxQassD1 || t.k5 < 1 || t.k5 > t.k2)
        fail(ErrorCode::InconsistentShares, "reconstructed dimensions are out of range");
    const auto d1 = static_cast<unsigned>(t.k2), d2 = static_cast<unsigned>(t.k5);
    const std::size_t n = std::size_t{1} << (d1 + 1);
    if (t.k1 >= (std::uint64_t{1} << (2 * d1)) || t.k4 >= (std::uint64_t{1} << (2 * d2)) || t.k3 >= factorial(n) ||
        t.k6 >= domain.values.size())
        fail(ErrorCode::InconsistentShares, "reconstructed key component is out of range");
    AnamorphicKey key;
    key.d1 = d1;
    key.d2 = d2;
    key.k = QotpKey::from_index(d1, t.k1);
    key.k_prime = QotpKey::from_index(d2, t.k4);
    key.perm = PermSpec::from_lehmer(n, t.k3);
    key.eta = domain.values[static_cast<std::size_t>(t.k6)];
    return key;
}

std::uint64_t component_domain_size(std::size_t component, unsigned d1, unsigned d2, std::size_t eta_domain_size) {
    switch (component) {
    case 1: return std::uint64_t{1} << (2 * d1);
    case 2:
    case 5: return std::uint64_t{1} << (d1 + 1);
    case 3: return factorial(std::size_t{1} << (d1 + 1));
    case 4: return std::uint64_t{1} << (2 * d2);
    case 6: return eta_domain_size;
    default: fail(ErrorCode::InvalidArgument, "key component must be in [1, 6]");
    }
}

std::uint64_t component_prime(std::size_t component, unsigned d1, unsigned d2, std::size_t eta_domain_size) {
    return next_prime_above(std::max<std::uint64_t>(component_domain_size(component, d1, d2, eta_domain_size), 3));
}

bool ShareBundle::has_covert() const {
    return classical.count("k4") && classical.count("k5") && classical.count("k6");
}

ShareBundle withhold_covert(ShareBundle b) {
    b.classical.erase("k4");
    b.classical.erase("k5");
    b.classical.erase("k6");
    return b;
}

std::uint64_t code_prime(std::size_t embed_dim) {
    std::uint64_t q = std::max<std::uint64_t>(5, embed_dim);
    while (!is_prime(q)) ++q;
    return q;
}

void EncodedQuantumState::validate() const {
    if (n != 3 || eval_points != std::array<std::uint64_t, 3>{1, 2, 3})
        fail(ErrorCode::SchemaViolation, "encoded state must use three registers at points 1, 2, 3");
    if (embed_dim == 0) fail(ErrorCode::DimensionMismatch, "embedded dimension must be positive");
    if (q > 1000 || !is_prime(q)) fail(ErrorCode::InvalidArgument, "qudit dimension must be a small prime");
    if (q < std::max<std::uint64_t>(5, embed_dim)) fail(ErrorCode::FieldTooSmall, "q must be at least max(5, D)");
    if (global.dim() != q * q * q) fail(ErrorCode::DimensionMismatch, "global state must have dimension q^3");
}

EncodedQuantumState cgl_encode(const DensityMatrix &rho, std::uint64_t q) {
    const std::size_t d = rho.dim();
    if (q > 1000 || !is_prime(q)) fail(ErrorCode::InvalidArgument, "qudit dimension must be a small prime");
    if (q < std::max<std::uint64_t>(5, d)) fail(ErrorCode::FieldTooSmall, "q must be at least max(5, D)");
    const auto qi = static_cast<Eigen::Index>(q);
    ComplexMatrix w = ComplexMatrix::Zero(qi * qi * qi, static_cast<Eigen::Index>(d));
    const double amp = 1.0 / std::sqrt(static_cast<double>(q));
    for (std::uint64_t m = 0; m < d; ++m)
        for (std::uint64_t c = 0; c < q; ++c) {
            const std::uint64_t y1 = (m + c) % q, y2 = (m + 2 * c) % q, y3 = (m + 3 * c) % q;
            w(static_cast<Eigen::Index>((y1 * q + y2) * q + y3), static_cast<Eigen::Index>(m)) = amp;
        }
    EncodedQuantumState enc;
    enc.q = q;
    enc.embed_dim = d;
    enc.global = DensityMatrix::trusted(w * rho.mat() * w.adjoint());
    return enc;
}

ComplexMatrix register_reduced_state(const EncodedQuantumState &enc, unsigned reg) {
    enc.validate();
    if (reg < 1 || reg > 3) fail(ErrorCode::InvalidArgument, "register must be in [1, 3]");
    const std::size_t q = static_cast<std::size_t>(enc.q);
    const std::array<std::size_t, 3> dims{q, q, q};
    std::vector<std::size_t> traced;
    for (std::size_t r = 0; r < 3; ++r)
        if (r + 1 != reg) traced.push_back(r);
    return partial_trace(enc.global.mat(), dims, traced);
}

DensityMatrix cgl_decode(const EncodedQuantumState &enc, unsigned i, unsigned j) {
    if (i < 1 || i > 3 || j < 1 || j > 3 || i == j) fail(ErrorCode::InvalidPair, "decoding needs two distinct registers in [1, 3]");
    enc.validate();
    const unsigned a = std::min(i, j), b = std::max(i, j), k = 6 - a - b;
    const std::uint64_t q = enc.q;
    const std::array<std::size_t, 3> dims{q, q, q};
    const std::array<std::size_t, 1> erased{k - 1};
    const ComplexMatrix pair = partial_trace(enc.global.mat(), dims, erased);

    // (y_a, y_b) -> (s, y_k) on the line through the two points.
    const FieldElement xa(enc.eval_points[a - 1], q), xb(enc.eval_points[b - 1], q), xk(enc.eval_points[k - 1], q);
    const FieldElement inv = (xb - xa).inverse();
    std::vector<Eigen::Index> target(static_cast<std::size_t>(q * q));
    for (std::uint64_t ya = 0; ya < q; ++ya)
        for (std::uint64_t yb = 0; yb < q; ++yb) {
            const FieldElement fa(ya, q), fb(yb, q);
            const FieldElement c = (fb - fa) * inv;
            const FieldElement s = fa - c * xa;
            const FieldElement yk = s + c * xk;
            target[ya * q + yb] = static_cast<Eigen::Index>(s.value() * q + yk.value());
        }
    const auto qq = static_cast<Eigen::Index>(q * q);
    ComplexMatrix mapped(qq, qq);
    for (Eigen::Index r = 0; r < qq; ++r)
        for (Eigen::Index c = 0; c < qq; ++c)
            mapped(target[static_cast<std::size_t>(r)], target[static_cast<std::size_t>(c)]) = pair(r, c);

    const std::array<std::size_t, 2> out_dims{q, q};
    const std::array<std::size_t, 1> residual{1};
    const ComplexMatrix secret = partial_trace(mapped, out_dims, residual);
    const auto d = static_cast<Eigen::Index>(enc.embed_dim);
    return DensityMatrix::trusted(secret.topLeftCorner(d, d));
}

QassShareResult qass_share(const DensityMatrix &mo, const DensityMatrix &mc, const EtaDomain &domain,
                           const SecurityConfig &cfg, Rng &rng) {
    domain.validate();
    const unsigned d1 = log2_exact(mo.dim()), d2 = log2_exact(mc.dim());
    if (d1 < 1 || d1 > kMaxQassD1) fail(ErrorCode::UnsupportedDims, "secret sharing supports 1 <= d1 <= 2");
    AnamorphicKey key = keygen(d1, d2, cfg, EtaMode::Weak, mo, mc, rng);
    const auto it = std::lower_bound(domain.values.begin(), domain.values.end(), key.eta);
    if (it == domain.values.end())
        fail(ErrorCode::EtaInfeasible, "no eta in the domain reaches the required " + std::to_string(key.eta));
    key.eta = *it;

    QassShareResult out;
    out.key = key;
    out.eta_domain = domain;
    out.dictator_view = encrypt_direct(mo, mc, key);
    const KeyTuple tuple = key_tuple_from(key, domain);
    for (unsigned p = 0; p < 3; ++p) {
        out.bundles[p].player = p + 1;
        out.bundles[p].qudit_index = p + 1;
    }
    for (std::size_t c = 1; c <= 6; ++c) {
        const std::uint64_t prime = component_prime(c, d1, d2, domain.values.size());
        const auto shares = shamir_share(FieldElement(tuple.get(c), prime), rng);
        for (std::size_t p = 0; p < 3; ++p) out.bundles[p].classical.emplace(kKeyComponentNames[c - 1], shares[p]);
    }
    out.enc = cgl_encode(out.dictator_view.dm, code_prime(out.dictator_view.dm.dim()));
    return out;
}

QassReconstruction qass_reconstruct(std::span<const ShareBundle> bundles, const EncodedQuantumState &enc,
                                    const EtaDomain &domain) {
    require_pair(bundles);
    if (!bundles[0].has_covert() || !bundles[1].has_covert())
        fail(ErrorCode::CovertUnavailable, "covert key components k4, k5, k6 are not available");
    KeyTuple t;
    for (std::size_t c = 1; c <= 6; ++c) t.set(c, reconstruct_component(bundles[0], bundles[1], kKeyComponentNames[c - 1]));
    if (t.k2 != d1_from_embed_dim(enc.embed_dim))
        fail(ErrorCode::InconsistentShares, "reconstructed d1 does not match the encoded state");
    const AnamorphicKey key = key_from_tuple(t, domain);
    const Ciphertext ct{key.d1, cgl_decode(enc, bundles[0].qudit_index, bundles[1].qudit_index)};
    return QassReconstruction{dom_decrypt(ct, key), dcm_exact(ct, key), t};
}

DensityMatrix qass_reconstruct_original(std::span<const ShareBundle> bundles, const EncodedQuantumState &enc) {
    require_pair(bundles);
    const std::uint64_t k1 = reconstruct_component(bundles[0], bundles[1], "k1");
    const std::uint64_t k2 = reconstruct_component(bundles[0], bundles[1], "k2");
    const std::uint64_t k3 = reconstruct_component(bundles[0], bundles[1], "k3");
    const unsigned d1 = d1_from_embed_dim(enc.embed_dim);
    if (k2 != d1) fail(ErrorCode::InconsistentShares, "reconstructed d1 does not match the encoded state");
    const std::size_t n = std::size_t{1} << (d1 + 1);
    if (k1 >= (std::uint64_t{1} << (2 * d1)) || k3 >= factorial(n))
        fail(ErrorCode::InconsistentShares, "reconstructed key component is out of range");
    AnamorphicKey key;
    key.d1 = d1;
    key.d2 = 1;
    key.k = QotpKey::from_index(d1, k1);
    key.k_prime = QotpKey::zeros(1);
    key.perm = PermSpec::from_lehmer(n, k3);
    key.eta = 1;
    const Ciphertext ct{d1, cgl_decode(enc, bundles[0].qudit_index, bundles[1].qudit_index)};
    return dom_decrypt(ct, key);
}

std::vector<std::string> cross_pair_disagreements(const std::array<ShareBundle, 3> &bundles) {
    std::vector<std::string> out;
    for (const char *name : kKeyComponentNames) {
        if (!bundles[0].classical.count(name) || !bundles[1].classical.count(name) || !bundles[2].classical.count(name))
            continue;
        const std::uint64_t a = reconstruct_component(bundles[0], bundles[1], name);
        const std::uint64_t b = reconstruct_component(bundles[0], bundles[2], name);
        const std::uint64_t c = reconstruct_component(bundles[1], bundles[2], name);
        if (a != b || b != c) out.emplace_back(name);
    }
    return out;
}

ShareSizeReport share_size_report(unsigned d1, unsigned d2, std::span<const std::uint64_t> field_sizes,
                                  std::size_t eta_domain_size) {
    if (field_sizes.empty()) fail(ErrorCode::InvalidArgument, "at least one field size is required");
    if (eta_domain_size == 0) fail(ErrorCode::InvalidArgument, "eta domain must be nonempty");
    if (d1 == 0 || d2 == 0 || d2 > d1) fail(ErrorCode::DimensionMismatch, "needs 1 <= d2 <= d1");
    const std::uint64_t r = *std::max_element(field_sizes.begin(), field_sizes.end());
    ShareSizeReport rep;
    rep.quantum_bits = 3 * std::uint64_t{ceil_log2(code_prime(std::size_t{1} << (d1 + 1)))};
    const std::uint64_t classical = (4 * d1 + 2 * d2 + 1) + 6 * std::uint64_t{ceil_log2(r)} +
                                    ceil_log2(eta_domain_size) + ceil_log2(factorial(std::size_t{1} << (d1 + 1)));
    rep.anamorphic_bits = rep.quantum_bits + classical;
    // The original sharing reserves the same six classical slots and the same code.
    rep.original_bits = rep.quantum_bits + classical;
    rep.difference = static_cast<std::int64_t>(rep.anamorphic_bits) - static_cast<std::int64_t>(rep.original_bits);
    return rep;
}

double cheat_formula(unsigned d1, unsigned d2, std::size_t eta_domain_size) {
    if (eta_domain_size == 0) fail(ErrorCode::InvalidArgument, "eta domain must be nonempty");
    if (2 * d2 + d1 + 1 > 62) fail(ErrorCode::TooLarge, "dimensions too large");
    const double space = static_cast<double>(std::uint64_t{1} << (2 * d2 + d1 + 1)) * static_cast<double>(eta_domain_size);
    return 1.0 - 1.0 / space;
}

CheatReport cheat_simulate(unsigned d1, unsigned d2, std::size_t eta_domain_size, std::uint64_t trials,
                           std::uint64_t seed) {
    if (trials == 0) fail(ErrorCode::InvalidArgument, "trials must be positive");
    if (d2 > d1 || d1 > kMaxQassD1) fail(ErrorCode::UnsupportedDims, "cheat simulation supports d2 <= d1 <= 2");
    CheatReport rep;
    rep.trials = trials;
    rep.formula = cheat_formula(d1, d2, eta_domain_size);
    const std::array<std::size_t, 3> covert{4, 5, 6};
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, "cheat", t);
        // Covert values are drawn over {0..n-1}, except k5 which ranges over {1..2^(d1+1)}.
        auto draw = [&](std::size_t c) {
            const std::uint64_t n = component_domain_size(c, d1, d2, eta_domain_size);
            return c == 5 ? 1 + rng.uniform_below(n) : rng.uniform_below(n);
        };
        std::array<std::uint64_t, 3> honest{}, forged{};
        for (std::size_t i = 0; i < 3; ++i) honest[i] = draw(covert[i]);
        std::array<std::array<ShamirShare, 3>, 3> shares{
            {shamir_share(FieldElement(honest[0], component_prime(4, d1, d2, eta_domain_size)), rng),
             shamir_share(FieldElement(honest[1], component_prime(5, d1, d2, eta_domain_size)), rng),
             shamir_share(FieldElement(honest[2], component_prime(6, d1, d2, eta_domain_size)), rng)}};
        for (std::size_t i = 0; i < 3; ++i) forged[i] = draw(covert[i]);
        bool differs = false;
        for (std::size_t i = 0; i < 3; ++i) {
            const std::uint64_t p = shares[i][0].y.modulus();
            // Player 1 replaces y_1 so that s = 2 y_1 - y_2 equals the forged value.
            const FieldElement y2 = shares[i][1].y;
            const FieldElement y1 = (FieldElement(forged[i], p) + y2) * FieldElement(2, p).inverse();
            const std::array<ShamirShare, 2> pair{ShamirShare{shares[i][0].x, y1}, shares[i][1]};
            differs = differs || shamir_reconstruct(pair).value() != honest[i];
        }
        rep.successes += differs ? 1 : 0;
    }
    rep.empirical_success = static_cast<double>(rep.successes) / static_cast<double>(trials);
    rep.three_sigma = 3 * std::sqrt(rep.formula * (1 - rep.formula) / static_cast<double>(trials));
    return rep;
}

}  // namespace anamorph
