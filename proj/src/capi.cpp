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

#include "anamorph/anamorph.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "anamorph/error.hpp"
#include "anamorph/json_io.hpp"
#include "anamorph/metrics.hpp"
#include "anamorph/qass.hpp"
#include "anamorph/scheme.hpp"
#include "anamorph/tomography.hpp"

struct anamorph_state {
    anamorph::DensityMatrix value;
};

struct anamorph_key {
    anamorph::AnamorphicKey value;
};

struct anamorph_ciphertext {
    anamorph::Ciphertext value;
};

namespace {

using anamorph::ErrorCode;
using anamorph::json::Json;

thread_local std::string g_last_error;

class CapiError : public std::runtime_error {
public:
    CapiError(anamorph_status s, const std::string &msg) : std::runtime_error(msg), status(s) {}
    anamorph_status status;
};

template <class F>
anamorph_status guard(F &&fn) {
    try {
        fn();
        g_last_error.clear();
        return ANAMORPH_OK;
    } catch (const anamorph::Error &e) {
        g_last_error = e.what();
        return static_cast<anamorph_status>(static_cast<int>(e.code()) + 1);
    } catch (const CapiError &e) {
        g_last_error = e.what();
        return e.status;
    } catch (const std::bad_alloc &) {
        g_last_error = "out of memory";
        return ANAMORPH_E_INTERNAL;
    } catch (const std::exception &e) {
        g_last_error = std::string("internal error: ") + e.what();
        return ANAMORPH_E_INTERNAL;
    }
}

template <class T>
const T &deref(const T *p, const char *what) {
    if (p == nullptr) throw CapiError(ANAMORPH_E_NULL_POINTER, std::string(what) + " is NULL");
    return *p;
}

void require_out(const void *p) {
    if (p == nullptr) throw CapiError(ANAMORPH_E_NULL_POINTER, "output pointer is NULL");
}

char *copy_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

void emit_json(const Json &j, char **out) { *out = copy_string(anamorph::json::dump(j)); }

Json parse_text(const char *text) { return anamorph::json::parse(deref(text, "json text") ? text : ""); }

anamorph::EtaMode to_mode(anamorph_eta_mode m) {
    if (m == ANAMORPH_ETA_STRICT) return anamorph::EtaMode::Strict;
    if (m == ANAMORPH_ETA_WEAK) return anamorph::EtaMode::Weak;
    anamorph::fail(ErrorCode::InvalidArgument, "unknown eta mode");
}

}  // namespace

extern "C" {

const char *anamorph_version(void) { return "1.0.0"; }

const char *anamorph_status_name(anamorph_status status) {
    switch (status) {
    case ANAMORPH_OK: return "Ok";
    case ANAMORPH_E_NULL_POINTER: return "NullPointer";
    case ANAMORPH_E_IO: return "IoError";
    case ANAMORPH_E_INTERNAL: return "InternalError";
    default: break;
    }
    const int code = static_cast<int>(status) - 1;
    if (code >= 0 && code <= static_cast<int>(ErrorCode::InconsistentShares))
        return anamorph::error_code_name(static_cast<ErrorCode>(code));
    return "UnknownStatus";
}

const char *anamorph_last_error(void) { return g_last_error.c_str(); }

void anamorph_string_free(char *s) { std::free(s); }

anamorph_status anamorph_json_canonical(const char *json, char **out) {
    return guard([&] {
        require_out(out);
        emit_json(parse_text(json), out);
    });
}

anamorph_status anamorph_state_from_json(const char *json, anamorph_state **out) {
    return guard([&] {
        require_out(out);
        const Json j = parse_text(json);
        *out = new anamorph_state{anamorph::json::density_from_json(j)};
    });
}

anamorph_status anamorph_state_from_array(size_t dim, const double *re_im, anamorph_state **out) {
    return guard([&] {
        require_out(out);
        deref(re_im, "array");
        if (dim == 0 || dim > 4096) anamorph::fail(ErrorCode::InvalidArgument, "dimension must be in [1, 4096]");
        const auto n = static_cast<Eigen::Index>(dim);
        anamorph::ComplexMatrix m(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c) {
                const std::size_t i = 2 * static_cast<std::size_t>(r * n + c);
                m(r, c) = anamorph::Complex(re_im[i], re_im[i + 1]);
            }
        *out = new anamorph_state{anamorph::DensityMatrix(std::move(m))};
    });
}

anamorph_status anamorph_state_to_json(const anamorph_state *s, char **out) {
    return guard([&] {
        require_out(out);
        emit_json(anamorph::json::to_json(deref(s, "state").value), out);
    });
}

anamorph_status anamorph_state_dim(const anamorph_state *s, size_t *dim) {
    return guard([&] {
        require_out(dim);
        *dim = deref(s, "state").value.dim();
    });
}

anamorph_status anamorph_state_entry(const anamorph_state *s, size_t row, size_t col, double *re, double *im) {
    return guard([&] {
        require_out(re);
        require_out(im);
        const auto &m = deref(s, "state").value.mat();
        if (row >= static_cast<size_t>(m.rows()) || col >= static_cast<size_t>(m.cols()))
            anamorph::fail(ErrorCode::InvalidArgument, "entry index out of range");
        const auto v = m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        *re = v.real();
        *im = v.imag();
    });
}

anamorph_status anamorph_state_max_abs_diff(const anamorph_state *a, const anamorph_state *b, double *out) {
    return guard([&] {
        require_out(out);
        const auto &x = deref(a, "state a").value.mat();
        const auto &y = deref(b, "state b").value.mat();
        if (x.rows() != y.rows()) anamorph::fail(ErrorCode::DimensionMismatch, "states have different dimensions");
        *out = (x - y).cwiseAbs().maxCoeff();
    });
}

void anamorph_state_free(anamorph_state *s) { delete s; }

anamorph_status anamorph_keygen(const anamorph_state *mo, const anamorph_state *mc, unsigned security_bits,
                                anamorph_eta_mode mode, uint64_t seed, anamorph_key **out) {
    return guard([&] {
        require_out(out);
        const auto &o = deref(mo, "original").value;
        const auto &c = deref(mc, "covert").value;
        anamorph::Rng rng = anamorph::Rng::substream(seed, "keygen", 0);
        anamorph::SecurityConfig cfg;
        cfg.security_bits = security_bits;
        const unsigned d1 = anamorph::log2_exact(o.dim()), d2 = anamorph::log2_exact(c.dim());
        *out = new anamorph_key{anamorph::keygen(d1, d2, cfg, to_mode(mode), o, c, rng)};
    });
}

anamorph_status anamorph_key_from_json(const char *json, anamorph_key **out) {
    return guard([&] {
        require_out(out);
        *out = new anamorph_key{anamorph::json::key_from_json(parse_text(json))};
    });
}

anamorph_status anamorph_key_to_json(const anamorph_key *k, char **out) {
    return guard([&] {
        require_out(out);
        emit_json(anamorph::json::to_json(deref(k, "key").value), out);
    });
}

anamorph_status anamorph_key_eta(const anamorph_key *k, uint64_t *eta) {
    return guard([&] {
        require_out(eta);
        *eta = deref(k, "key").value.eta;
    });
}

void anamorph_key_free(anamorph_key *k) { delete k; }

anamorph_status anamorph_ciphertext_from_json(const char *json, anamorph_ciphertext **out) {
    return guard([&] {
        require_out(out);
        *out = new anamorph_ciphertext{anamorph::json::ciphertext_from_json(parse_text(json))};
    });
}

anamorph_status anamorph_ciphertext_to_json(const anamorph_ciphertext *c, char **out) {
    return guard([&] {
        require_out(out);
        emit_json(anamorph::json::to_json(deref(c, "ciphertext").value), out);
    });
}

anamorph_status anamorph_ciphertext_state(const anamorph_ciphertext *c, anamorph_state **out) {
    return guard([&] {
        require_out(out);
        *out = new anamorph_state{deref(c, "ciphertext").value.dm};
    });
}

void anamorph_ciphertext_free(anamorph_ciphertext *c) { delete c; }

anamorph_status anamorph_encrypt(const anamorph_state *mo, const anamorph_state *mc, const anamorph_key *key,
                                 anamorph_route route, anamorph_ciphertext **out) {
    return guard([&] {
        require_out(out);
        const auto &o = deref(mo, "original").value;
        const auto &c = deref(mc, "covert").value;
        const auto &k = deref(key, "key").value;
        if (route == ANAMORPH_ROUTE_DIRECT) *out = new anamorph_ciphertext{anamorph::encrypt_direct(o, c, k)};
        else if (route == ANAMORPH_ROUTE_DILATION) *out = new anamorph_ciphertext{anamorph::encrypt_dilation(o, c, k).ct};
        else anamorph::fail(ErrorCode::InvalidArgument, "unknown encryption route");
    });
}

anamorph_status anamorph_encrypt_original(const anamorph_state *mo, const anamorph_key *key,
                                          anamorph_ciphertext **out) {
    return guard([&] {
        require_out(out);
        *out = new anamorph_ciphertext{anamorph::encrypt_original(deref(mo, "original").value, deref(key, "key").value)};
    });
}

anamorph_status anamorph_dom(const anamorph_ciphertext *ct, const anamorph_key *key, anamorph_state **out) {
    return guard([&] {
        require_out(out);
        *out = new anamorph_state{anamorph::dom_decrypt(deref(ct, "ciphertext").value, deref(key, "key").value)};
    });
}

anamorph_status anamorph_dcm_exact(const anamorph_ciphertext *ct, const anamorph_key *key, anamorph_state **out) {
    return guard([&] {
        require_out(out);
        *out = new anamorph_state{anamorph::dcm_exact(deref(ct, "ciphertext").value, deref(key, "key").value)};
    });
}

anamorph_status anamorph_eoc(const anamorph_ciphertext *ct, const anamorph_key *key, anamorph_ciphertext **out) {
    return guard([&] {
        require_out(out);
        *out = new anamorph_ciphertext{anamorph::eoc_extract(deref(ct, "ciphertext").value, deref(key, "key").value)};
    });
}

anamorph_status anamorph_dcm_sampled(const anamorph_ciphertext *ct, const anamorph_key *key, double epsilon,
                                     double delta, const char *design, uint64_t seed, uint64_t trials,
                                     const char *shots_csv_path, char **report_json, anamorph_state **mc_hat) {
    return guard([&] {
        require_out(report_json);
        const auto &c = deref(ct, "ciphertext").value;
        const auto &k = deref(key, "key").value;
        if (trials == 0) anamorph::fail(ErrorCode::InvalidArgument, "trials must be positive");
        const anamorph::TomographyPlan plan =
            anamorph::plan_shots(k.d1, epsilon, delta, anamorph::parse_design(deref(design, "design") ? design : ""));
        std::ofstream csv;
        if (shots_csv_path != nullptr) {
            csv.open(shots_csv_path, std::ios::binary);
            if (!csv) throw CapiError(ANAMORPH_E_IO, std::string("cannot write ") + shots_csv_path);
        }
        Json per_trial = Json::array();
        std::uint64_t failures = 0;
        double sum_err = 0;
        std::optional<anamorph::ComplexMatrix> first;
        for (std::uint64_t t = 0; t < trials; ++t) {
            anamorph::Rng rng = anamorph::Rng::substream(seed, "dcm", t);
            std::vector<anamorph::ShotRecord> shots;
            const auto r = anamorph::dcm_finite(c, k, plan, rng, csv.is_open() ? &shots : nullptr);
            if (csv.is_open()) anamorph::write_shots_csv(csv, shots, t, k.d1, t == 0);
            const bool within = r.b_error_l2 <= epsilon;
            failures += within ? 0 : 1;
            sum_err += r.b_error_l2;
            per_trial.push_back(Json{{"trial", t},
                                     {"b_error_l2", r.b_error_l2},
                                     {"b_error_trace_bound", r.b_error_trace_bound},
                                     {"within_epsilon", within},
                                     {"counts", r.estimates.counts},
                                     {"validity", anamorph::json::to_json(r.validity)}});
            if (t == 0) first = r.mc_hat;
        }
        if (csv.is_open() && !csv.flush()) throw CapiError(ANAMORPH_E_IO, "failed writing the shot log");
        Json report{{"plan", anamorph::json::to_json(plan)},
                    {"trials", trials},
                    {"failures", failures},
                    {"failure_rate", static_cast<double>(failures) / static_cast<double>(trials)},
                    {"mean_b_error_l2", sum_err / static_cast<double>(trials)},
                    {"per_trial", std::move(per_trial)}};
        if (mc_hat != nullptr) {
            // Finite-data estimates need not be states; keep the raw Hermitian estimate.
            *mc_hat = new anamorph_state{anamorph::DensityMatrix::trusted(*first)};
        }
        emit_json(report, report_json);
    });
}

anamorph_status anamorph_analyze(const anamorph_ciphertext *ct0, const anamorph_ciphertext *ct1, uint64_t eta,
                                 char **report_json) {
    return guard([&] {
        require_out(report_json);
        const auto r = anamorph::indistinguishability_report(deref(ct0, "ct0").value, deref(ct1, "ct1").value, eta);
        emit_json(anamorph::json::to_json(r), report_json);
    });
}

anamorph_status anamorph_entropy(const anamorph_state *mo, const anamorph_state *mc, const anamorph_key *key,
                                 char **report_json) {
    return guard([&] {
        require_out(report_json);
        const auto &k = deref(key, "key").value;
        const auto enc = anamorph::encode_messages(deref(mo, "original").value, deref(mc, "covert").value, k);
        const auto r = anamorph::entropy_report(anamorph::DensityMatrix::trusted(enc.mo_enc),
                                                anamorph::DensityMatrix::trusted(enc.mc_padded), k.eta);
        Json j = anamorph::json::to_json(r);
        j["eta"] = k.eta;
        emit_json(j, report_json);
    });
}

anamorph_status anamorph_twirl_check(unsigned d1, unsigned d2, uint64_t eta, int brute_force, char **report_json) {
    return guard([&] {
        require_out(report_json);
        if (eta < 2) anamorph::fail(ErrorCode::InvalidArgument, "eta must be at least 2");
        if (d1 == 0 || d1 > 10) anamorph::fail(ErrorCode::InvalidArgument, "d1 must be in [1, 10]");
        const auto phi = anamorph::key_averaged_block(d1, d2, static_cast<double>(eta));
        const auto r = anamorph::twirl_expectation(phi, brute_force != 0);
        Json j = anamorph::json::to_json(r);
        j["d1"] = d1;
        j["d2"] = d2;
        j["eta"] = eta;
        const auto n = phi.rows();
        const anamorph::ComplexMatrix e0 = anamorph::ComplexMatrix::Identity(n, n) / static_cast<double>(n);
        j["expected_state_distance"] = anamorph::expected_state_distance(d1, eta);
        j["formula_state_distance"] = anamorph::trace_distance(e0, r.formula_state);
        if (r.brute_force_state)
            j["max_deviation"] = (*r.brute_force_state - r.formula_state).cwiseAbs().maxCoeff();
        else
            j["max_deviation"] = nullptr;
        emit_json(j, report_json);
    });
}

anamorph_status anamorph_qcpa_check(const anamorph_state *mo, const anamorph_state *mc, uint64_t eta,
                                    char **report_json) {
    return guard([&] {
        require_out(report_json);
        const auto &o = deref(mo, "original").value;
        const auto &c = deref(mc, "covert").value;
        const unsigned d1 = anamorph::log2_exact(o.dim()), d2 = anamorph::log2_exact(c.dim());
        const auto r = anamorph::qcpa_average(o, c, d1, d2, eta);
        anamorph::ComplexMatrix zero = anamorph::ComplexMatrix::Zero(2, 2);
        zero(0, 0) = 1;
        const auto ref = anamorph::qcpa_average(anamorph::DensityMatrix(anamorph::ComplexMatrix::Identity(2, 2) / 2.0),
                                                anamorph::DensityMatrix(zero), 1, 1, eta);
        Json j = anamorph::json::to_json(r);
        j["eta"] = eta;
        j["input_independence"] = anamorph::trace_distance(r.avg_state, ref.avg_state);
        emit_json(j, report_json);
    });
}

anamorph_status anamorph_tpds(const anamorph_ciphertext *ct, const anamorph_key *key, char **report_json) {
    return guard([&] {
        require_out(report_json);
        const auto r = anamorph::tpds_run(deref(ct, "ciphertext").value, deref(key, "key").value);
        const Json j{{"receiver_mo", anamorph::json::to_json(r.receiver_mo)},
                     {"receiver_mc", anamorph::json::to_json(r.receiver_mc)},
                     {"dictator_mo", anamorph::json::to_json(r.dictator_mo)},
                     {"dictator_mo_from_original", anamorph::json::to_json(r.dictator_mo_from_original)},
                     {"dictator_views_identical", r.dictator_views_identical}};
        emit_json(j, report_json);
    });
}

anamorph_status anamorph_qass_share(const anamorph_state *mo, const anamorph_state *mc, const char *eta_domain_json,
                                    unsigned security_bits, uint64_t seed, char **share_json) {
    return guard([&] {
        require_out(share_json);
        const auto domain = anamorph::json::eta_domain_from_json(parse_text(eta_domain_json));
        anamorph::SecurityConfig cfg;
        cfg.security_bits = security_bits;
        anamorph::Rng rng = anamorph::Rng::substream(seed, "qass", 0);
        const auto r = anamorph::qass_share(deref(mo, "original").value, deref(mc, "covert").value, domain, cfg, rng);
        Json bundles = Json::array();
        std::vector<std::uint64_t> fields;
        for (const auto &b : r.bundles) bundles.push_back(anamorph::json::to_json(b));
        for (const auto &[name, s] : r.bundles[0].classical) fields.push_back(s.x.modulus());
        const auto size = anamorph::share_size_report(r.key.d1, r.key.d2, fields, domain.values.size());
        const Json j{{"bundles", std::move(bundles)},
                     {"encoded", anamorph::json::to_json(r.enc)},
                     {"dictator_view", anamorph::json::to_json(r.dictator_view)},
                     {"eta_domain", anamorph::json::to_json(domain)},
                     {"share_size", anamorph::json::to_json(size)}};
        emit_json(j, share_json);
    });
}

anamorph_status anamorph_qass_reconstruct(const char *share_json, unsigned player_i, unsigned player_j,
                                          int original_only, char **report_json, anamorph_state **mo_rec,
                                          anamorph_state **mc_rec) {
    return guard([&] {
        require_out(report_json);
        const Json doc = parse_text(share_json);
        if (!doc.is_object() || !doc.contains("bundles") || !doc.contains("encoded") || !doc.contains("eta_domain"))
            anamorph::fail(ErrorCode::SchemaViolation, "/: share document needs bundles, encoded and eta_domain");
        if (!doc["bundles"].is_array() || doc["bundles"].size() != 3)
            anamorph::fail(ErrorCode::SchemaViolation, "/bundles: expected three bundles");
        if (player_i < 1 || player_i > 3 || player_j < 1 || player_j > 3)
            anamorph::fail(ErrorCode::InvalidArgument, "players must be in [1, 3]");
        std::vector<anamorph::ShareBundle> two;
        for (unsigned p : {player_i, player_j})
            two.push_back(anamorph::json::bundle_from_json(doc["bundles"][p - 1], "/bundles/" + std::to_string(p - 1)));
        const auto enc = anamorph::json::encoded_from_json(doc["encoded"], "/encoded");
        const auto domain = anamorph::json::eta_domain_from_json(doc["eta_domain"], "/eta_domain");
        Json j{{"players", {player_i, player_j}}, {"original_only", original_only != 0}};
        if (original_only != 0) {
            for (auto &b : two) b = anamorph::withhold_covert(std::move(b));
            anamorph::DensityMatrix mo = anamorph::qass_reconstruct_original(two, enc);
            j["mo_rec"] = anamorph::json::to_json(mo);
            j["mc_rec"] = nullptr;
            if (mo_rec != nullptr) *mo_rec = new anamorph_state{std::move(mo)};
        } else {
            auto r = anamorph::qass_reconstruct(two, enc, domain);
            j["mo_rec"] = anamorph::json::to_json(r.mo_rec);
            j["mc_rec"] = anamorph::json::to_json(r.mc_rec);
            j["key_tuple"] = anamorph::json::to_json(r.tuple);
            if (mo_rec != nullptr) *mo_rec = new anamorph_state{std::move(r.mo_rec)};
            if (mc_rec != nullptr) *mc_rec = new anamorph_state{std::move(r.mc_rec)};
        }
        emit_json(j, report_json);
    });
}

anamorph_status anamorph_cheat_sim(unsigned d1, unsigned d2, size_t eta_domain_size, uint64_t trials, uint64_t seed,
                                   char **report_json) {
    return guard([&] {
        require_out(report_json);
        const auto r = anamorph::cheat_simulate(d1, d2, eta_domain_size, trials, seed);
        Json j = anamorph::json::to_json(r);
        j["d1"] = d1;
        j["d2"] = d2;
        j["eta_domain_size"] = eta_domain_size;
        emit_json(j, report_json);
    });
}

}  // extern "C"
