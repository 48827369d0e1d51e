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

#ifndef ANAMORPH_JSON_IO_HPP
#define ANAMORPH_JSON_IO_HPP

#include <string>
#include <string_view>

#include "anamorph/mat_core.hpp"
#include "anamorph/metrics.hpp"
#include "anamorph/qass.hpp"
#include "anamorph/qop_kit.hpp"
#include "anamorph/scheme.hpp"
#include "anamorph/tomography.hpp"
#include "json.hpp"

namespace anamorph::json {

using Json = nlohmann::json;

/// Deterministic text: sorted keys, two-space indent, scalar-only arrays on one
/// line, reals as %.17g with ".0" appended to integral values. Non-finite reals
/// raise InvalidArgument.
std::string dump(const Json &j);

/// Parses a document; syntax errors raise SchemaViolation.
Json parse(std::string_view text);

// Writers.
Json to_json(const ComplexMatrix &m);
Json to_json(const DensityMatrix &m);
Json to_json(const QotpKey &k);
Json to_json(const PermSpec &p);
Json to_json(const AnamorphicKey &k);
Json to_json(const Ciphertext &c);
Json to_json(const TomographyPlan &p);
Json to_json(const EtaDomain &d);
Json to_json(const ShareBundle &b);
Json to_json(const EncodedQuantumState &e);
Json to_json(const KeyTuple &t);
Json to_json(const IndistinguishabilityReport &r);
Json to_json(const TwirlReport &r);
Json to_json(const EntropyReport &r);
Json to_json(const QcpaReport &r);
Json to_json(const ShareSizeReport &r);
Json to_json(const CheatReport &r);
Json to_json(const DensityCheck &c);

// Readers. `pointer` is the JSON pointer of `j` within its document and is
// reported in SchemaViolation messages.
ComplexMatrix matrix_from_json(const Json &j, const std::string &pointer = "");
/// Also checks the density conditions (NotDensity).
DensityMatrix density_from_json(const Json &j, const std::string &pointer = "");
QotpKey qotp_key_from_json(const Json &j, const std::string &pointer = "");
PermSpec perm_from_json(const Json &j, const std::string &pointer = "");
AnamorphicKey key_from_json(const Json &j, const std::string &pointer = "");
Ciphertext ciphertext_from_json(const Json &j, const std::string &pointer = "");
TomographyPlan plan_from_json(const Json &j, const std::string &pointer = "");
EtaDomain eta_domain_from_json(const Json &j, const std::string &pointer = "");
ShareBundle bundle_from_json(const Json &j, const std::string &pointer = "");
EncodedQuantumState encoded_from_json(const Json &j, const std::string &pointer = "");

}  // namespace anamorph::json

#endif  // ANAMORPH_JSON_IO_HPP
