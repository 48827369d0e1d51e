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

#ifndef ANAMORPH_ERROR_HPP
#define ANAMORPH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace anamorph {

enum class ErrorCode {
    InvalidArgument,
    SchemaViolation,
    DimensionMismatch,
    NotHermitian,
    NotDensity,
    NotStrictlyPositive,
    NoConvergence,
    NegativeEigenvalueForSqrt,
    TooLarge,
    LambdaOutOfRange,
    EtaInfeasible,
    EtaTooSmallForDilation,
    NoCovertSignal,
    UnsupportedDesign,
    EmptyBranch,
    NoShotsInBranch,
    TooLargeForBruteForce,
    UnsupportedDims,
    FieldTooSmall,
    DuplicatePoints,
    ThresholdUnmet,
    InvalidPair,
    CovertUnavailable,
    InconsistentShares,
};

/// Stable identifier, e.g. "EtaInfeasible".
const char *error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);
    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string &message);

}  // namespace anamorph

#endif  // ANAMORPH_ERROR_HPP
