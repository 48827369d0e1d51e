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

#include "anamorph/error.hpp"

namespace anamorph {

const char *error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotDensity: return "NotDensity";
        case ErrorCode::NotStrictlyPositive: return "NotStrictlyPositive";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NegativeEigenvalueForSqrt: return "NegativeEigenvalueForSqrt";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
        case ErrorCode::EtaInfeasible: return "EtaInfeasible";
        case ErrorCode::EtaTooSmallForDilation: return "EtaTooSmallForDilation";
        case ErrorCode::NoCovertSignal: return "NoCovertSignal";
        case ErrorCode::UnsupportedDesign: return "UnsupportedDesign";
        case ErrorCode::EmptyBranch: return "EmptyBranch";
        case ErrorCode::NoShotsInBranch: return "NoShotsInBranch";
        case ErrorCode::TooLargeForBruteForce: return "TooLargeForBruteForce";
        case ErrorCode::UnsupportedDims: return "UnsupportedDims";
        case ErrorCode::FieldTooSmall: return "FieldTooSmall";
        case ErrorCode::DuplicatePoints: return "DuplicatePoints";
        case ErrorCode::ThresholdUnmet: return "ThresholdUnmet";
        case ErrorCode::InvalidPair: return "InvalidPair";
        case ErrorCode::CovertUnavailable: return "CovertUnavailable";
        case ErrorCode::InconsistentShares: return "InconsistentShares";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string &message) { throw Error(code, message); }

}  // namespace anamorph
