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


// anamorph command-line driver. Talks to the library only through the C API.

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anamorph/anamorph.h"
#include "json.hpp"

namespace {

using nlohmann::json;

// Tolerances for the built-in acceptance checks.
constexpr double kRoundTripTol = 1e-9;
constexpr double kExactTol = 1e-12;

struct Failure {
    int exit_code;
    std::string code;
    std::string message;
};

int exit_code_for(anamorph_status s) {
    switch (s) {
    case ANAMORPH_E_ETA_INFEASIBLE:
    case ANAMORPH_E_ETA_TOO_SMALL_FOR_DILATION:
    case ANAMORPH_E_LAMBDA_OUT_OF_RANGE:
        return 3;
    case ANAMORPH_E_NO_COVERT_SIGNAL:
    case ANAMORPH_E_EMPTY_BRANCH:
    case ANAMORPH_E_NO_SHOTS_IN_BRANCH:
    case ANAMORPH_E_DUPLICATE_POINTS:
    case ANAMORPH_E_THRESHOLD_UNMET:
    case ANAMORPH_E_COVERT_UNAVAILABLE:
    case ANAMORPH_E_INCONSISTENT_SHARES:
        return 4;
    case ANAMORPH_E_NO_CONVERGENCE:
    case ANAMORPH_E_NEGATIVE_EIGENVALUE_FOR_SQRT:
    case ANAMORPH_E_INTERNAL:
        return 1;
    default:
        return 2;
    }
}

void check(anamorph_status s) {
    if (s != ANAMORPH_OK) throw Failure{exit_code_for(s), anamorph_status_name(s), anamorph_last_error()};
}

[[noreturn]] void check_failed(const std::string &what) { throw Failure{4, "CheckFailed", what}; }

struct StateDel {
    void operator()(anamorph_state *s) const { anamorph_state_free(s); }
};
struct KeyDel {
    void operator()(anamorph_key *k) const { anamorph_key_free(k); }
};
struct CtDel {
    void operator()(anamorph_ciphertext *c) const { anamorph_ciphertext_free(c); }
};
using State = std::unique_ptr<anamorph_state, StateDel>;
using Key = std::unique_ptr<anamorph_key, KeyDel>;
using Ct = std::unique_ptr<anamorph_ciphertext, CtDel>;

std::string take(char *s) {
    std::string out(s);
    anamorph_string_free(s);
    return out;
}

std::string sha256_hex(const std::string &bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Failure{1, "InternalError", "SHA-256 digest failed"};
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

// Collects digests and metrics for the RunReport printed on stdout.
class Run {
public:
    explicit Run(std::string command) : command_(std::move(command)) {}

    std::string read(const std::string &path, const std::string &label) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Failure{2, "IoError", "cannot read " + path};
        std::ostringstream ss;
        ss << in.rdbuf();
        std::string bytes = ss.str();
        inputs_[label] = "sha256:" + sha256_hex(bytes);
        return bytes;
    }

    void write(const std::string &path, const std::string &label, std::string bytes) {
        if (bytes.empty() || bytes.back() != '\n') bytes.push_back('\n');
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << bytes;
        if (!out.flush()) throw Failure{2, "IoError", "cannot write " + path};
        outputs_[label] = "sha256:" + sha256_hex(bytes);
    }

    void write_optional(const std::string &path, const std::string &label, const std::string &bytes) {
        if (!path.empty()) write(path, label, bytes);
    }

    void note_output_file(const std::string &path, const std::string &label) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        outputs_[label] = "sha256:" + sha256_hex(ss.str());
    }

    json &metrics() { return metrics_; }

    std::string report(std::int64_t wall_ms) const {
        const json doc{{"command", command_},
                       {"inputs", inputs_},
                       {"outputs", outputs_},
                       {"metrics", metrics_},
                       {"wall_time_ms", wall_ms}};
        char *out = nullptr;
        check(anamorph_json_canonical(doc.dump().c_str(), &out));
        return take(out);
    }

private:
    std::string command_;
    json inputs_ = json::object();
    json outputs_ = json::object();
    json metrics_ = json::object();
};

State load_state(Run &run, const std::string &path, const std::string &label) {
    const std::string text = run.read(path, label);
    anamorph_state *s = nullptr;
    check(anamorph_state_from_json(text.c_str(), &s));
    return State(s);
}

Key load_key(Run &run, const std::string &path) {
    const std::string text = run.read(path, "key");
    anamorph_key *k = nullptr;
    check(anamorph_key_from_json(text.c_str(), &k));
    return Key(k);
}

Ct load_ct(Run &run, const std::string &path, const std::string &label) {
    const std::string text = run.read(path, label);
    anamorph_ciphertext *c = nullptr;
    check(anamorph_ciphertext_from_json(text.c_str(), &c));
    return Ct(c);
}

std::string state_json(const anamorph_state *s) {
    char *out = nullptr;
    check(anamorph_state_to_json(s, &out));
    return take(out);
}

std::string ct_json(const anamorph_ciphertext *c) {
    char *out = nullptr;
    check(anamorph_ciphertext_to_json(c, &out));
    return take(out);
}

std::string key_json(const anamorph_key *k) {
    char *out = nullptr;
    check(anamorph_key_to_json(k, &out));
    return take(out);
}

std::uint64_t key_eta(const anamorph_key *k) {
    std::uint64_t eta = 0;
    check(anamorph_key_eta(k, &eta));
    return eta;
}

unsigned qubits_of(const anamorph_state *s) {
    std::size_t dim = 0;
    check(anamorph_state_dim(s, &dim));
    unsigned n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    return n;
}

double max_abs_diff(const anamorph_state *a, const anamorph_state *b) {
    double d = 0;
    check(anamorph_state_max_abs_diff(a, b, &d));
    return d;
}

// |0><0| on n qubits, or I / 2^n.
State basis_or_mixed(unsigned n, bool mixed) {
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> re_im(2 * dim * dim, 0.0);
    if (mixed) {
        for (std::size_t i = 0; i < dim; ++i) re_im[2 * (i * dim + i)] = 1.0 / static_cast<double>(dim);
    } else {
        re_im[0] = 1.0;
    }
    anamorph_state *s = nullptr;
    check(anamorph_state_from_array(dim, re_im.data(), &s));
    return State(s);
}

json parse_report(char *text) { return json::parse(take(text)); }

anamorph_eta_mode parse_mode(const std::string &m) { return m == "weak" ? ANAMORPH_ETA_WEAK : ANAMORPH_ETA_STRICT; }

anamorph_route parse_route(const std::string &r) {
    return r == "dilation" ? ANAMORPH_ROUTE_DILATION : ANAMORPH_ROUTE_DIRECT;
}

struct Options {
    std::uint64_t seed = 0;
    unsigned security_bits = 1;
    std::string eta_mode = "strict";
    std::string route = "direct";
    std::string original, covert, key, ct, ct0, ct1, out, key_out, share, shots_csv;
    std::string mode = "exact";
    std::string design = "singleton";
    std::string players = "1,2";
    std::string eta_domain_file;
    std::vector<std::uint64_t> eta_values{4, 8, 16, 32};
    std::string expect_original, expect_covert;
    double eps = 0.25, delta = 0.1;
    std::uint64_t trials = 1;
    std::uint64_t cheat_trials = 10000;
    std::uint64_t eta = 4;
    unsigned d1 = 1, d2 = 1;
    std::uint64_t domain_size = 4;
    bool brute_force = false;
    bool original_only = false;
};

void cmd_encrypt(const Options &o, Run &run) {
    const State mo = load_state(run, o.original, "original");
    const State mc = load_state(run, o.covert, "covert");
    Key key;
    if (!o.key.empty()) {
        key = load_key(run, o.key);
    } else {
        anamorph_key *k = nullptr;
        check(anamorph_keygen(mo.get(), mc.get(), o.security_bits, parse_mode(o.eta_mode), o.seed, &k));
        key.reset(k);
    }
    anamorph_ciphertext *c = nullptr;
    check(anamorph_encrypt(mo.get(), mc.get(), key.get(), parse_route(o.route), &c));
    const Ct ct(c);
    run.write(o.out, "ct", ct_json(ct.get()));
    run.write_optional(o.key_out, "key", key_json(key.get()));
    run.metrics() = {{"eta", key_eta(key.get())}, {"d1", qubits_of(mo.get())}, {"d2", qubits_of(mc.get())},
                     {"route", o.route}, {"eta_mode", o.eta_mode}, {"seed", o.seed}};
}

void cmd_encrypt_original(const Options &o, Run &run) {
    const State mo = load_state(run, o.original, "original");
    const Key key = load_key(run, o.key);
    anamorph_ciphertext *c = nullptr;
    check(anamorph_encrypt_original(mo.get(), key.get(), &c));
    const Ct ct(c);
    run.write(o.out, "ct", ct_json(ct.get()));
    run.metrics() = {{"eta", key_eta(key.get())}, {"d1", qubits_of(mo.get())}};
}

void compare_expected(Run &run, const anamorph_state *got, const std::string &path, const std::string &label) {
    if (path.empty()) return;
    const State want = load_state(run, path, "expected_" + label);
    const double d = max_abs_diff(got, want.get());
    run.metrics()[label + "_max_abs_diff"] = d;
    if (d > kRoundTripTol) check_failed(label + " differs from the expected state by " + std::to_string(d));
}

void cmd_dom(const Options &o, Run &run) {
    const Ct ct = load_ct(run, o.ct, "ct");
    const Key key = load_key(run, o.key);
    anamorph_state *s = nullptr;
    check(anamorph_dom(ct.get(), key.get(), &s));
    const State mo(s);
    run.write_optional(o.out, "original", state_json(mo.get()));
    run.metrics() = {{"d1", qubits_of(mo.get())}};
    compare_expected(run, mo.get(), o.expect_original, "original");
}

void cmd_dcm(const Options &o, Run &run) {
    const Ct ct = load_ct(run, o.ct, "ct");
    const Key key = load_key(run, o.key);
    if (o.mode == "exact") {
        anamorph_state *s = nullptr;
        check(anamorph_dcm_exact(ct.get(), key.get(), &s));
        const State mc(s);
        run.write_optional(o.out, "covert", state_json(mc.get()));
        run.metrics() = {{"mode", "exact"}, {"d2", qubits_of(mc.get())}};
        compare_expected(run, mc.get(), o.expect_covert, "covert");
        return;
    }
    char *text = nullptr;
    anamorph_state *s = nullptr;
    check(anamorph_dcm_sampled(ct.get(), key.get(), o.eps, o.delta, o.design.c_str(), o.seed, o.trials,
                               o.shots_csv.empty() ? nullptr : o.shots_csv.c_str(), &text, &s));
    const State mc_hat(s);
    json rep = parse_report(text);
    run.write_optional(o.out, "covert_estimate", state_json(mc_hat.get()));
    if (!o.shots_csv.empty()) run.note_output_file(o.shots_csv, "shots_csv");
    rep.erase("per_trial");
    rep["mode"] = "sampled";
    rep["seed"] = o.seed;
    run.metrics() = rep;
}

void cmd_eoc(const Options &o, Run &run) {
    const Ct ct = load_ct(run, o.ct, "ct");
    const Key key = load_key(run, o.key);
    anamorph_ciphertext *c = nullptr;
    check(anamorph_eoc(ct.get(), key.get(), &c));
    const Ct out(c);
    run.write(o.out, "ct_original", ct_json(out.get()));
    run.metrics() = {{"eta", key_eta(key.get())}};
}

void cmd_analyze(const Options &o, Run &run) {
    const Ct a = load_ct(run, o.ct0, "ct0");
    const Ct b = load_ct(run, o.ct1, "ct1");
    char *text = nullptr;
    check(anamorph_analyze(a.get(), b.get(), o.eta, &text));
    run.metrics() = parse_report(text);
    run.write_optional(o.out, "report", run.metrics().dump());
}

void cmd_entropy(const Options &o, Run &run) {
    const State mo = load_state(run, o.original, "original");
    const State mc = load_state(run, o.covert, "covert");
    const Key key = load_key(run, o.key);
    char *text = nullptr;
    check(anamorph_entropy(mo.get(), mc.get(), key.get(), &text));
    run.metrics() = parse_report(text);
    run.write_optional(o.out, "report", run.metrics().dump());
}

void cmd_twirl_check(const Options &o, Run &run) {
    char *text = nullptr;
    check(anamorph_twirl_check(o.d1, o.d2, o.eta, o.brute_force ? 1 : 0, &text));
    const json rep = parse_report(text);
    run.write_optional(o.out, "report", rep.dump());
    json m = rep;
    m.erase("formula_state");
    m.erase("brute_force_state");
    run.metrics() = m;
    if (o.brute_force && rep["max_deviation"].get<double>() > kExactTol)
        check_failed("brute-force twirl deviates from the formula state");
}

void cmd_qcpa_check(const Options &o, Run &run) {
    const State mo = o.original.empty() ? basis_or_mixed(o.d1, true) : load_state(run, o.original, "original");
    const State mc = o.covert.empty() ? basis_or_mixed(o.d2, false) : load_state(run, o.covert, "covert");
    if (qubits_of(mo.get()) != o.d1 || qubits_of(mc.get()) != o.d2)
        throw Failure{2, "DimensionMismatch", "message dimensions do not match --d1/--d2"};
    char *text = nullptr;
    check(anamorph_qcpa_check(mo.get(), mc.get(), o.eta, &text));
    const json rep = parse_report(text);
    run.write_optional(o.out, "report", rep.dump());
    json m = rep;
    m.erase("avg_state");
    m.erase("xi_formula");
    run.metrics() = m;
    if (rep["distance"].get<double>() > kExactTol || rep["input_independence"].get<double>() > kExactTol)
        check_failed("coin-averaged ciphertext is not the constant state");
}

void cmd_share(const Options &o, Run &run) {
    const State mo = load_state(run, o.original, "original");
    const State mc = load_state(run, o.covert, "covert");
    std::string domain;
    if (!o.eta_domain_file.empty()) {
        domain = run.read(o.eta_domain_file, "eta_domain");
    } else {
        domain = json{{"values", o.eta_values}}.dump();
    }
    char *text = nullptr;
    check(anamorph_qass_share(mo.get(), mc.get(), domain.c_str(), o.security_bits, o.seed, &text));
    const std::string doc = take(text);
    run.write(o.out, "share", doc);
    const json d = json::parse(doc);
    run.metrics() = {{"share_size", d["share_size"]},
                     {"q", d["encoded"]["q"]},
                     {"eta_domain", d["eta_domain"]["values"]},
                     {"seed", o.seed}};
}

std::pair<unsigned, unsigned> parse_players(const std::string &s) {
    unsigned i = 0, j = 0;
    char comma = 0;
    std::istringstream in(s);
    if (!(in >> i >> comma >> j) || comma != ',' || !in.eof())
        throw Failure{2, "InvalidArgument", "--players expects i,j"};
    return {i, j};
}

void cmd_reconstruct(const Options &o, Run &run) {
    const std::string doc = run.read(o.share, "share");
    const auto [i, j] = parse_players(o.players);
    char *text = nullptr;
    anamorph_state *a = nullptr, *b = nullptr;
    check(anamorph_qass_reconstruct(doc.c_str(), i, j, o.original_only ? 1 : 0, &text, &a, &b));
    const State mo(a), mc(b);
    const json rep = parse_report(text);
    run.write_optional(o.out, "reconstruction", rep.dump());
    run.metrics() = {{"players", rep["players"]}, {"original_only", o.original_only}};
    if (rep.contains("key_tuple")) run.metrics()["key_tuple"] = rep["key_tuple"];
    compare_expected(run, mo.get(), o.expect_original, "original");
    if (mc) compare_expected(run, mc.get(), o.expect_covert, "covert");
}

void cmd_cheat_sim(const Options &o, Run &run) {
    char *text = nullptr;
    check(anamorph_cheat_sim(o.d1, o.d2, o.domain_size, o.cheat_trials, o.seed, &text));
    const json rep = parse_report(text);
    run.write_optional(o.out, "report", rep.dump());
    run.metrics() = rep;
    run.metrics()["seed"] = o.seed;
    const double gap = std::abs(rep["empirical_success"].get<double>() - rep["formula"].get<double>());
    run.metrics()["within_three_sigma"] = gap <= rep["three_sigma"].get<double>();
}

void cmd_tpds(const Options &o, Run &run) {
    const Ct ct = load_ct(run, o.ct, "ct");
    const Key key = load_key(run, o.key);
    char *text = nullptr;
    check(anamorph_tpds(ct.get(), key.get(), &text));
    const json rep = parse_report(text);
    run.write_optional(o.out, "report", rep.dump());
    run.metrics() = {{"dictator_views_identical", rep["dictator_views_identical"]}};
    if (!rep["dictator_views_identical"].get<bool>())
        check_failed("dictator decryptions of the two ciphertexts differ");
}

// Line-oriented error record on stderr: "error <code> <message>".
void report_failure(const Failure &f) {
    std::string msg = f.message;
    if (msg.rfind(f.code + ": ", 0) == 0) msg.erase(0, f.code.size() + 2);
    for (char &c : msg)
        if (c == '\n' || c == '\r') c = ' ';
    std::cerr << "error " << f.code << " " << msg << "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Anamorphic quantum encryption toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(anamorph_version()));
    Options o;

    auto add_seed = [&](CLI::App *sub) {
        sub->add_option("--seed", o.seed, "Sole entropy source")->envname("ANAMORPH_SEED");
    };
    auto add_messages = [&](CLI::App *sub, bool required) {
        auto *a = sub->add_option("--original", o.original, "Original message state (JSON)");
        auto *b = sub->add_option("--covert", o.covert, "Covert message state (JSON)");
        if (required) {
            a->required();
            b->required();
        }
    };
    auto add_ct_key = [&](CLI::App *sub) {
        sub->add_option("--ct", o.ct, "Ciphertext (JSON)")->required();
        sub->add_option("--key", o.key, "Key (JSON)")->required();
    };
    const std::vector<std::string> modes{"strict", "weak"};

    auto *encrypt = app.add_subcommand("encrypt", "Anamorphic encryption; generates a key unless --key is given");
    add_messages(encrypt, true);
    add_seed(encrypt);
    encrypt->add_option("--key", o.key, "Use this key instead of generating one");
    encrypt->add_option("--out", o.out, "Ciphertext output")->required();
    encrypt->add_option("--key-out", o.key_out, "Key output");
    encrypt->add_option("--security-bits", o.security_bits)->check(CLI::Range(1, 62));
    encrypt->add_option("--eta-mode", o.eta_mode)->check(CLI::IsMember(modes));
    encrypt->add_option("--route", o.route)->check(CLI::IsMember({"direct", "dilation"}));

    auto *enc_orig = app.add_subcommand("encrypt-original", "Original-only encryption");
    enc_orig->add_option("--original", o.original)->required();
    enc_orig->add_option("--key", o.key)->required();
    enc_orig->add_option("--out", o.out)->required();

    auto *dom = app.add_subcommand("dom", "Decrypt the original message");
    add_ct_key(dom);
    dom->add_option("--out", o.out);
    dom->add_option("--expect-original", o.expect_original, "Fail with exit 4 if the result differs");

    auto *dcm = app.add_subcommand("dcm", "Decrypt the covert message");
    add_ct_key(dcm);
    add_seed(dcm);
    dcm->add_option("--mode", o.mode)->check(CLI::IsMember({"exact", "sampled"}));
    dcm->add_option("--eps", o.eps);
    dcm->add_option("--delta", o.delta);
    dcm->add_option("--trials", o.trials);
    dcm->add_option("--design", o.design);
    dcm->add_option("--shots-csv", o.shots_csv, "Per-shot log (sampled mode)");
    dcm->add_option("--out", o.out);
    dcm->add_option("--expect-covert", o.expect_covert, "Fail with exit 4 if the result differs (exact mode)");

    auto *eoc = app.add_subcommand("eoc", "Extract the original-only ciphertext");
    add_ct_key(eoc);
    eoc->add_option("--out", o.out)->required();

    auto *analyze = app.add_subcommand("analyze", "Trace distance and fidelity of two ciphertexts");
    analyze->add_option("--ct0", o.ct0)->required();
    analyze->add_option("--ct1", o.ct1)->required();
    analyze->add_option("--eta", o.eta)->required();
    analyze->add_option("--out", o.out);

    auto *entropy = app.add_subcommand("entropy", "Entropy quantities of the encoded messages");
    add_messages(entropy, true);
    entropy->add_option("--key", o.key)->required();
    entropy->add_option("--out", o.out);

    auto *twirl = app.add_subcommand("twirl-check", "Permutation twirl of the key-averaged block");
    twirl->add_option("--d1", o.d1)->check(CLI::Range(1, 10));
    twirl->add_option("--d2", o.d2)->check(CLI::Range(1, 10));
    twirl->add_option("--eta", o.eta);
    twirl->add_flag("--brute-force", o.brute_force);
    twirl->add_option("--out", o.out);

    auto *qcpa = app.add_subcommand("qcpa-check", "Exact coin average of the encryption map");
    qcpa->add_option("--d1", o.d1);
    qcpa->add_option("--d2", o.d2);
    qcpa->add_option("--eta", o.eta);
    add_messages(qcpa, false);
    qcpa->add_option("--out", o.out);

    auto *share = app.add_subcommand("share", "Split both messages among three players");
    add_messages(share, true);
    add_seed(share);
    auto *dom_file = share->add_option("--eta-domain", o.eta_domain_file, "Eta domain file {\"values\": [...]}");
    share->add_option("--eta-values", o.eta_values, "Eta domain as a comma list")
        ->delimiter(',')
        ->excludes(dom_file);
    share->add_option("--security-bits", o.security_bits)->check(CLI::Range(1, 62));
    share->add_option("--out", o.out)->required();

    auto *recon = app.add_subcommand("reconstruct", "Reconstruct from two players");
    recon->add_option("--share", o.share)->required();
    recon->add_option("--players", o.players);
    recon->add_flag("--original-only", o.original_only);
    recon->add_option("--out", o.out);
    recon->add_option("--expect-original", o.expect_original);
    recon->add_option("--expect-covert", o.expect_covert);

    auto *cheat = app.add_subcommand("cheat-sim", "Monte Carlo covert-share forgery");
    add_seed(cheat);
    cheat->add_option("--d1", o.d1);
    cheat->add_option("--d2", o.d2);
    cheat->add_option("--eta-domain-size", o.domain_size);
    cheat->add_option("--trials", o.cheat_trials);
    cheat->add_option("--out", o.out);

    auto *tpds = app.add_subcommand("tpds", "Receiver and dictator views of one ciphertext");
    add_ct_key(tpds);
    tpds->add_option("--out", o.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        report_failure(Failure{2, "UsageError", e.what()});
        return 2;
    }

    const std::map<CLI::App *, void (*)(const Options &, Run &)> handlers{
        {encrypt, cmd_encrypt}, {enc_orig, cmd_encrypt_original}, {dom, cmd_dom},
        {dcm, cmd_dcm},         {eoc, cmd_eoc},                   {analyze, cmd_analyze},
        {entropy, cmd_entropy}, {twirl, cmd_twirl_check},         {qcpa, cmd_qcpa_check},
        {share, cmd_share},     {recon, cmd_reconstruct},         {cheat, cmd_cheat_sim},
        {tpds, cmd_tpds}};

    CLI::App *sub = app.get_subcommands().front();
    Run run(sub->get_name());
    const auto start = std::chrono::steady_clock::now();
    try {
        handlers.at(sub)(o, run);
        const auto ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        std::cout << run.report(ms) << "\n";
    } catch (const Failure &f) {
        report_failure(f);
        return f.exit_code;
    } catch (const std::exception &e) {
        report_failure(Failure{1, "InternalError", e.what()});
        return 1;
    }
    return 0;
}
