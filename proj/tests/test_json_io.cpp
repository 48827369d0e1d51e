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

#include <cstring>
#include <limits>
#include <random>

#include "anamorph/error.hpp"
#include "anamorph/json_io.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace anamorph;
using namespace anamorph::testing;
namespace aj = anamorph::json;

namespace {

Error error_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e;
    }
    FAIL("expected an anamorph::Error");
    return Error(ErrorCode::InvalidArgument, "unreachable");
}

bool same_bits(double a, double b) {
    std::uint64_t x, y;
    std::memcpy(&x, &a, sizeof x);
    std::memcpy(&y, &b, sizeof y);
    return x == y;
}

AnamorphicKey sample_key(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const DensityMatrix mo(random_positive_density(gen, 4)), mc(random_density(gen, 2));
    Rng rng(seed);
    return keygen(2, 1, SecurityConfig{}, EtaMode::Weak, mo, mc, rng);
}

}  // namespace

TEST_CASE("deterministic layout") {
    const aj::Json j{{"b", 1.0}, {"a", aj::Json::array({1, 2})}, {"c", aj::Json::object()}};
    CHECK(aj::dump(j) == "{\n  \"a\": [1, 2],\n  \"b\": 1.0,\n  \"c\": {}\n}");
    CHECK(aj::dump(aj::Json(0.1)) == "0.10000000000000001");
    CHECK(aj::dump(aj::Json(-0.0)) == "-0.0");
    CHECK(aj::dump(aj::Json(1e300)) == "1.0000000000000001e+300");
    CHECK(error_of([] { aj::dump(aj::Json(std::numeric_limits<double>::quiet_NaN())); }).code() == ErrorCode::InvalidArgument);
    CHECK(error_of([] { aj::dump(aj::Json(std::numeric_limits<double>::infinity())); }).code() == ErrorCode::InvalidArgument);
}

TEST_CASE("reals survive a text round trip bit for bit") {
    std::mt19937_64 gen(51);
    std::vector<double> corpus{0.0,
                               -0.0,
                               1.0,
                               0.1,
                               1.0 / 3,
                               std::numeric_limits<double>::min(),
                               std::numeric_limits<double>::denorm_min(),
                               std::numeric_limits<double>::max(),
                               std::numeric_limits<double>::lowest(),
                               std::numeric_limits<double>::epsilon()};
    for (int i = 0; i < 20000; ++i) {
        double v;
        const std::uint64_t bits = gen();
        std::memcpy(&v, &bits, sizeof v);
        if (std::isfinite(v)) corpus.push_back(v);
    }
    std::normal_distribution<double> n01;
    for (int i = 0; i < 5000; ++i) corpus.push_back(n01(gen));
    for (double v : corpus) {
        const double back = aj::parse(aj::dump(aj::Json(v))).get<double>();
        REQUIRE(same_bits(v, back));
    }
}

TEST_CASE("matrix round trip") {
    std::mt19937_64 gen(52);
    const ComplexMatrix m = random_complex(gen, 3, 5);
    const std::string text = aj::dump(aj::to_json(m));
    const ComplexMatrix back = aj::matrix_from_json(aj::parse(text));
    CHECK(back.rows() == 3);
    CHECK(back.cols() == 5);
    CHECK((back.array() == m.array()).all());
    CHECK(aj::dump(aj::to_json(back)) == text);
}

TEST_CASE("key, ciphertext and plan round trips are byte exact") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const AnamorphicKey key = sample_key(seed);
        const std::string kt = aj::dump(aj::to_json(key));
        const AnamorphicKey kb = aj::key_from_json(aj::parse(kt));
        CHECK(kb == key);
        CHECK(aj::dump(aj::to_json(kb)) == kt);

        std::mt19937_64 gen(seed);
        const DensityMatrix mo(random_positive_density(gen, 4)), mc(random_density(gen, 2));
        const Ciphertext ct = encrypt_direct(mo, mc, key);
        const std::string ctext = aj::dump(aj::to_json(ct));
        CHECK(aj::dump(aj::to_json(aj::ciphertext_from_json(aj::parse(ctext)))) == ctext);
    }
    const TomographyPlan plan = plan_shots(1, 0.25, 0.1, TomographyDesign::FramesD2);
    const std::string pt = aj::dump(aj::to_json(plan));
    CHECK(pt.find("\"design\": \"frames_d2\"") != std::string::npos);
    CHECK(aj::dump(aj::to_json(aj::plan_from_json(aj::parse(pt)))) == pt);

    PermSpec big = PermSpec::identity(32);
    CHECK(aj::to_json(big)["lehmer"].is_null());
    CHECK(aj::perm_from_json(aj::parse(aj::dump(aj::to_json(big)))) == big);
}

TEST_CASE("share bundles and encoded states round trip") {
    Rng rng(53);
    const QassShareResult r = qass_share(DensityMatrix(ComplexMatrix::Identity(2, 2) / 2.0),
                                         DensityMatrix(ComplexMatrix::Identity(2, 2) / 2.0), EtaDomain{{4, 8}},
                                         SecurityConfig{}, rng);
    for (const auto &b : r.bundles) {
        const std::string t = aj::dump(aj::to_json(b));
        CHECK(aj::bundle_from_json(aj::parse(t)) == b);
        CHECK(aj::dump(aj::to_json(aj::bundle_from_json(aj::parse(t)))) == t);
    }
    const ShareBundle partial = withhold_covert(r.bundles[0]);
    CHECK(aj::bundle_from_json(aj::parse(aj::dump(aj::to_json(partial)))) == partial);
    const std::string et = aj::dump(aj::to_json(r.enc));
    CHECK(aj::dump(aj::to_json(aj::encoded_from_json(aj::parse(et)))) == et);
    const std::string dt = aj::dump(aj::to_json(r.eta_domain));
    CHECK(aj::eta_domain_from_json(aj::parse(dt)) == r.eta_domain);
}

TEST_CASE("schema violations carry a JSON pointer") {
    const AnamorphicKey key = sample_key(4);
    const std::string text = aj::dump(aj::to_json(key));

    const Error truncated = error_of([&] { aj::parse(text.substr(0, text.size() / 2)); });
    CHECK(truncated.code() == ErrorCode::SchemaViolation);

    aj::Json j = aj::to_json(key);
    j["perm"]["mapping"][3] = "x";
    Error e = error_of([&] { aj::key_from_json(j); });
    CHECK(e.code() == ErrorCode::SchemaViolation);
    CHECK(std::string(e.what()).find("/perm/mapping/3") != std::string::npos);

    j = aj::to_json(key);
    j.erase("eta");
    e = error_of([&] { aj::key_from_json(j); });
    CHECK(std::string(e.what()).find("/eta") != std::string::npos);

    j = aj::to_json(key);
    j["extra"] = 1;
    e = error_of([&] { aj::key_from_json(j); });
    CHECK(std::string(e.what()).find("/extra") != std::string::npos);

    j = aj::to_json(key);
    j["k"] = "01x1";
    e = error_of([&] { aj::key_from_json(j); });
    CHECK(e.code() == ErrorCode::SchemaViolation);
    CHECK(std::string(e.what()).find("/k") != std::string::npos);

    j = aj::to_json(key);
    j["perm"]["lehmer"] = 0;
    CHECK(std::string(error_of([&] { aj::key_from_json(j); }).what()).find("/perm/lehmer") != std::string::npos);

    aj::Json m = aj::to_json(ComplexMatrix::Identity(2, 2));
    m["entries"].erase(3);
    CHECK(std::string(error_of([&] { aj::matrix_from_json(m); }).what()).find("/entries") != std::string::npos);
}

TEST_CASE("invalid states are rejected") {
    ComplexMatrix bad = ComplexMatrix::Identity(4, 4) / 4.0;
    bad(0, 0) = -0.25;
    bad(1, 1) = 0.75;
    aj::Json ct{{"d1", 1}, {"dm", aj::to_json(bad)}};
    CHECK(error_of([&] { aj::ciphertext_from_json(ct); }).code() == ErrorCode::NotDensity);
    ct = aj::Json{{"d1", 2}, {"dm", aj::to_json(ComplexMatrix::Identity(4, 4) / 4.0)}};
    CHECK(error_of([&] { aj::ciphertext_from_json(ct); }).code() == ErrorCode::SchemaViolation);
}

TEST_CASE("report writers") {
    TwirlReport t = twirl_expectation(ComplexMatrix::Identity(2, 2) / 2.0, false);
    CHECK(aj::to_json(t)["brute_force_state"].is_null());
    EntropyReport e;
    CHECK(aj::to_json(e)["rel_entropy"].is_null());
    const aj::Json c = aj::to_json(check_density(ComplexMatrix::Identity(2, 2)));
    CHECK_FALSE(c["ok"].get<bool>());
    CHECK(c["violations"][0]["label"] == "trace");
}
