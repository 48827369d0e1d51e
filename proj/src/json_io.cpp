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

#include "anamorph/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <set>

#include "anamorph/error.hpp"

namespace anamorph::json {
namespace {

std::string format_real(double v) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite real cannot be serialized");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

bool is_scalar(const Json &j) { return !j.is_array() && !j.is_object(); }

void emit(const Json &j, std::size_t indent, std::string &out) {
    switch (j.type()) {
    case Json::value_t::number_float: out += format_real(j.get<double>()); return;
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        const bool flat = std::all_of(j.begin(), j.end(), [](const Json &e) { return is_scalar(e); });
        if (flat) {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                emit(j[i], indent, out);
            }
            out += ']';
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out.append(indent + 2, ' ');
            emit(j[i], indent + 2, out);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out.append(indent, ' ');
        out += ']';
        return;
    }
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            out.append(indent + 2, ' ');
            out += Json(it.key()).dump();
            out += ": ";
            emit(it.value(), indent + 2, out);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out.append(indent, ' ');
        out += '}';
        return;
    }
    default: out += j.dump(); return;
    }
}

std::string child(const std::string &pointer, std::string_view key) {
    std::string escaped;
    for (char c : key) {
        if (c == '~') escaped += "~0";
        else if (c == '/') escaped += "~1";
        else escaped += c;
    }
    return pointer + "/" + escaped;
}

std::string child(const std::string &pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

[[noreturn]] void violation(const std::string &pointer, const std::string &what) {
    fail(ErrorCode::SchemaViolation, (pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

void expect_object(const Json &j, const std::string &pointer, std::initializer_list<const char *> required,
                   std::initializer_list<const char *> optional = {}) {
    if (!j.is_object()) violation(pointer, "expected an object");
    std::set<std::string> allowed;
    for (const char *k : required) {
        allowed.insert(k);
        if (!j.contains(k)) violation(child(pointer, k), "missing field");
    }
    for (const char *k : optional) allowed.insert(k);
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) violation(child(pointer, it.key()), "unexpected field");
}

std::uint64_t as_uint(const Json &j, const std::string &pointer) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    violation(pointer, "expected a nonnegative integer");
}

double as_real(const Json &j, const std::string &pointer) {
    if (!j.is_number()) violation(pointer, "expected a number");
    return j.get<double>();
}

const std::string &as_string(const Json &j, const std::string &pointer) {
    if (!j.is_string()) violation(pointer, "expected a string");
    return j.get_ref<const std::string &>();
}

const Json &as_array(const Json &j, const std::string &pointer) {
    if (!j.is_array()) violation(pointer, "expected an array");
    return j;
}

std::uint64_t uint_field(const Json &j, const std::string &pointer, const char *key) {
    return as_uint(j.at(key), child(pointer, key));
}

unsigned small_uint_field(const Json &j, const std::string &pointer, const char *key, unsigned max) {
    const std::uint64_t v = uint_field(j, pointer, key);
    if (v > max) violation(child(pointer, key), "value exceeds " + std::to_string(max));
    return static_cast<unsigned>(v);
}

Json optional_real(const std::optional<double> &v) { return v ? Json(*v) : Json(nullptr); }

// Converts library errors raised while building a value into schema violations at `pointer`.
template <class F>
auto at_pointer(const std::string &pointer, F &&fn) {
    try {
        return fn();
    } catch (const Error &e) {
        if (e.code() == ErrorCode::NotDensity) throw;
        // Messages from violation() already start with a pointer.
        if (e.code() == ErrorCode::SchemaViolation && std::string_view(e.what()).starts_with("SchemaViolation: /")) throw;
        violation(pointer, e.what());
    }
}

}  // namespace

std::string dump(const Json &j) {
    std::string out;
    emit(j, 0, out);
    return out;
}

Json parse(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error &e) {
        fail(ErrorCode::SchemaViolation, std::string("/: malformed JSON: ") + e.what());
    }
}

Json to_json(const ComplexMatrix &m) {
    Json entries = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    return Json{{"rows", static_cast<std::uint64_t>(m.rows())}, {"cols", static_cast<std::uint64_t>(m.cols())},
                {"entries", std::move(entries)}};
}

Json to_json(const DensityMatrix &m) { return to_json(m.mat()); }

Json to_json(const QotpKey &k) { return k.to_string(); }

Json to_json(const PermSpec &p) {
    return Json{{"size", p.size},
                {"mapping", p.mapping},
                {"lehmer", p.lehmer ? Json(*p.lehmer) : Json(nullptr)}};
}

Json to_json(const AnamorphicKey &k) {
    return Json{{"d1", k.d1},           {"d2", k.d2},          {"k", to_json(k.k)},
                {"k_prime", to_json(k.k_prime)}, {"perm", to_json(k.perm)}, {"eta", k.eta}};
}

Json to_json(const Ciphertext &c) { return Json{{"d1", c.d1}, {"dm", to_json(c.dm)}}; }

Json to_json(const TomographyPlan &p) {
    return Json{{"d", p.d},
                {"epsilon", p.epsilon},
                {"delta", p.delta},
                {"design", design_name(p.design)},
                {"n_shots", p.n_shots},
                {"allocation", p.allocation}};
}

Json to_json(const EtaDomain &d) { return Json{{"values", d.values}}; }

Json to_json(const ShareBundle &b) {
    Json classical = Json::object();
    for (const auto &[name, s] : b.classical)
        classical[name] = Json{{"p", s.x.modulus()}, {"x", s.x.value()}, {"y", s.y.value()}};
    return Json{{"player", b.player}, {"classical", std::move(classical)}, {"qudit_index", b.qudit_index}};
}

Json to_json(const EncodedQuantumState &e) {
    return Json{{"q", e.q},
                {"n", e.n},
                {"eval_points", e.eval_points},
                {"global", to_json(e.global)},
                {"embed_dim", e.embed_dim}};
}

Json to_json(const KeyTuple &t) {
    return Json{{"k1", t.k1}, {"k2", t.k2}, {"k3", t.k3}, {"k4", t.k4}, {"k5", t.k5}, {"k6", t.k6}};
}

Json to_json(const IndistinguishabilityReport &r) {
    return Json{{"trace_distance", r.trace_distance}, {"fidelity", r.fidelity},
                {"eta", r.eta},                       {"fvdg_lower", r.fvdg_lower},
                {"fvdg_upper", r.fvdg_upper},         {"helstrom_advantage", r.helstrom_advantage}};
}

Json to_json(const TwirlReport &r) {
    return Json{{"n", r.n},
                {"alpha", r.alpha},
                {"beta", r.beta},
                {"trace", r.trace},
                {"entry_sum", r.entry_sum},
                {"formula_state", to_json(r.formula_state)},
                {"brute_force_state", r.brute_force_state ? to_json(*r.brute_force_state) : Json(nullptr)}};
}

Json to_json(const EntropyReport &r) {
    return Json{{"S_mf0", r.s_mf0},
                {"S_mo_enc", r.s_mo_enc},
                {"commuting", r.commuting},
                {"S_mf1_commuting", optional_real(r.s_mf1_commuting)},
                {"rel_entropy", optional_real(r.rel_entropy)},
                {"rel_entropy_bound", r.rel_entropy_bound}};
}

Json to_json(const QcpaReport &r) {
    return Json{{"avg_state", to_json(r.avg_state)},
                {"xi_formula", to_json(r.xi_formula)},
                {"distance", r.distance},
                {"terms", r.terms},
                {"standard_error", optional_real(r.standard_error)}};
}

Json to_json(const ShareSizeReport &r) {
    return Json{{"anamorphic_bits", r.anamorphic_bits},
                {"original_bits", r.original_bits},
                {"difference", r.difference},
                {"quantum_bits", r.quantum_bits}};
}

Json to_json(const CheatReport &r) {
    return Json{{"trials", r.trials},
                {"successes", r.successes},
                {"empirical_success", r.empirical_success},
                {"formula", r.formula},
                {"three_sigma", r.three_sigma}};
}

Json to_json(const DensityCheck &c) {
    Json v = Json::array();
    for (const auto &x : c.violations) v.push_back(Json{{"label", x.label}, {"residual", x.residual}});
    return Json{{"ok", c.ok}, {"violations", std::move(v)}};
}

ComplexMatrix matrix_from_json(const Json &j, const std::string &pointer) {
    expect_object(j, pointer, {"rows", "cols", "entries"});
    const std::uint64_t rows = uint_field(j, pointer, "rows"), cols = uint_field(j, pointer, "cols");
    if (rows > 4096 || cols > 4096) violation(pointer, "matrix too large");
    const std::string ep = child(pointer, "entries");
    const Json &entries = as_array(j.at("entries"), ep);
    if (entries.size() != rows * cols) violation(ep, "expected rows*cols entries");
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string p = child(ep, i);
        const Json &e = as_array(entries[i], p);
        if (e.size() != 2) violation(p, "expected [re, im]");
        const double re = as_real(e[0], child(p, 0)), im = as_real(e[1], child(p, 1));
        m(static_cast<Eigen::Index>(i / cols), static_cast<Eigen::Index>(i % cols)) = Complex(re, im);
    }
    return m;
}

DensityMatrix density_from_json(const Json &j, const std::string &pointer) {
    ComplexMatrix m = matrix_from_json(j, pointer);
    if (m.rows() != m.cols() || m.rows() == 0) violation(pointer, "density matrix must be square and nonempty");
    return DensityMatrix(std::move(m));
}

QotpKey qotp_key_from_json(const Json &j, const std::string &pointer) {
    const std::string &s = as_string(j, pointer);
    return at_pointer(pointer, [&] { return QotpKey::from_string(s); });
}

PermSpec perm_from_json(const Json &j, const std::string &pointer) {
    expect_object(j, pointer, {"size", "mapping", "lehmer"});
    const std::uint64_t size = uint_field(j, pointer, "size");
    const std::string mp = child(pointer, "mapping");
    const Json &arr = as_array(j.at("mapping"), mp);
    if (arr.size() != size) violation(mp, "mapping length differs from size");
    std::vector<std::size_t> mapping;
    mapping.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) mapping.push_back(static_cast<std::size_t>(as_uint(arr[i], child(mp, i))));
    PermSpec p = at_pointer(mp, [&] { return PermSpec::from_mapping(std::move(mapping)); });
    const Json &lj = j.at("lehmer");
    const std::optional<std::uint64_t> lehmer =
        lj.is_null() ? std::nullopt : std::optional<std::uint64_t>(as_uint(lj, child(pointer, "lehmer")));
    if (lehmer != p.lehmer) violation(child(pointer, "lehmer"), "does not match the mapping");
    return p;
}

AnamorphicKey key_from_json(const Json &j, const std::string &pointer) {
    expect_object(j, pointer, {"d1", "d2", "k", "k_prime", "perm", "eta"});
    AnamorphicKey k;
    k.d1 = small_uint_field(j, pointer, "d1", 16);
    k.d2 = small_uint_field(j, pointer, "d2", 16);
    k.k = qotp_key_from_json(j.at("k"), child(pointer, "k"));
    k.k_prime = qotp_key_from_json(j.at("k_prime"), child(pointer, "k_prime"));
    k.perm = perm_from_json(j.at("perm"), child(pointer, "perm"));
    k.eta = uint_field(j, pointer, "eta");
    at_pointer(pointer, [&] {
        k.validate();
        return 0;
    });
    return k;
}

Ciphertext ciphertext_from_json(const Json &j, const std::string &pointer) {
    expect_object(j, pointer, {"d1", "dm"});
    Ciphertext c{small_uint_field(j, pointer, "d1", 16), density_from_json(j.at("dm"), child(pointer, "dm"))};
    at_pointer(pointer, [&] {
        c.validate();
        return 0;
    });
    return c;
}

TomographyPlan plan_from_json(const Json &j, const std::string &pointer) {
    expect_object(j, pointer, {"d", "epsilon", "delta", "design", "n_shots", "allocation"});
    TomographyPlan p;
    p.d = static_cast<std::size_t>(uint_field(j, pointer, "d"));
    p.epsilon = as_real(j.at("epsilon"), child(pointer, "epsilon"));
    p.delta = as_real(j.at("delta"), child(pointer, "delta"));
    const std::string &design = as_string(j.at("design"), child(pointer, "design"));
    p.design = at_pointer(child(pointer, "design"), [&] { return parse_design(design); });
    p.n_shots = uint_field(j, pointer, "n_shots");
    const std::string ap = child(pointer, "allocation");
    const Json &alloc = as_array(j.at("allocation"), ap);
    for (std::size_t i = 0; i < alloc.size(); ++i) p.allocation.push_back(as_uint(alloc[i], child(ap, i)));
    at_pointer(pointer, [&] {
        p.validate();
        return 0;
    });
    return p;
}

EtaDomain eta_domain_from_json(const Json &j, const std::string &pointer) {
    expect_object(j, pointer, {"values"});
    const std::string vp = child(pointer, "values");
    const Json &arr = as_array(j.at("values"), vp);
    EtaDomain d;
    for (std::size_t i = 0; i < arr.size(); ++i) d.values.push_back(as_uint(arr[i], child(vp, i)));
    at_pointer(vp, [&] {
        d.validate();
        return 0;
    });
    return d;
}

ShareBundle bundle_from_json(const Json &j, const std::string &pointer) {
    expect_object(j, pointer, {"player", "classical", "qudit_index"});
    ShareBundle b;
    b.player = small_uint_field(j, pointer, "player", 3);
    b.qudit_index = small_uint_field(j, pointer, "qudit_index", 3);
    if (b.player == 0) violation(child(pointer, "player"), "must be in [1, 3]");
    if (b.qudit_index == 0) violation(child(pointer, "qudit_index"), "must be in [1, 3]");
    const std::string cp = child(pointer, "classical");
    const Json &classical = j.at("classical");
    expect_object(classical, cp, {}, {"k1", "k2", "k3", "k4", "k5", "k6"});
    for (auto it = classical.begin(); it != classical.end(); ++it) {
        const std::string sp = child(cp, it.key());
        expect_object(it.value(), sp, {"p", "x", "y"});
        const std::uint64_t p = uint_field(it.value(), sp, "p");
        const std::uint64_t x = uint_field(it.value(), sp, "x"), y = uint_field(it.value(), sp, "y");
        b.classical.emplace(it.key(), at_pointer(sp, [&] { return ShamirShare{FieldElement(x, p), FieldElement(y, p)}; }));
    }
    return b;
}

EncodedQuantumState encoded_from_json(const Json &j, const std::string &pointer) {
    expect_object(j, pointer, {"q", "n", "eval_points", "global", "embed_dim"});
    EncodedQuantumState e;
    e.q = uint_field(j, pointer, "q");
    e.n = small_uint_field(j, pointer, "n", 3);
    const std::string ep = child(pointer, "eval_points");
    const Json &pts = as_array(j.at("eval_points"), ep);
    if (pts.size() != 3) violation(ep, "expected three evaluation points");
    for (std::size_t i = 0; i < 3; ++i) e.eval_points[i] = as_uint(pts[i], child(ep, i));
    e.embed_dim = static_cast<std::size_t>(uint_field(j, pointer, "embed_dim"));
    if (e.q > 1000) violation(child(pointer, "q"), "qudit dimension too large");
    e.global = density_from_json(j.at("global"), child(pointer, "global"));
    at_pointer(pointer, [&] {
        e.validate();
        return 0;
    });
    return e;
}

}  // namespace anamorph::json
