// Copyright 2026 The mfdpg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mfdpg/error.hpp"

namespace mfdpg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorCode::kDuplicateFactorId: return "DuplicateFactorId";
    case ErrorCode::kEmptyPassword: return "EmptyPassword";
    case ErrorCode::kUnknownFactorId: return "UnknownFactorId";
    case ErrorCode::kInsufficientWitnesses: return "InsufficientWitnesses";
    case ErrorCode::kMalformedCode: return "MalformedCode";
    case ErrorCode::kVerifierMismatch: return "VerifierMismatch";
    case ErrorCode::kStaleWindow: return "StaleWindow";
    case ErrorCode::kInsufficientShares: return "InsufficientShares";
    case ErrorCode::kDuplicateShareIndex: return "DuplicateShareIndex";
    case ErrorCode::kRequestTooLarge: return "RequestTooLarge";
    case ErrorCode::kInsertionFailure: return "InsertionFailure";
    case ErrorCode::kRevocationCapacityExhausted: return "RevocationCapacityExhausted";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptLength: return "CorruptLength";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnsupportedFeature: return "UnsupportedFeature";
    case ErrorCode::kStateExplosion: return "StateExplosion";
    case ErrorCode::kPolicyEmpty: return "PolicyEmpty";
    case ErrorCode::kCounterExhausted: return "CounterExhausted";
    case ErrorCode::kVersionUnsupported: return "VersionUnsupported";
    case ErrorCode::kMalformedEncoding: return "MalformedEncoding";
    case ErrorCode::kIntegrityMismatch: return "IntegrityMismatch";
    case ErrorCode::kCryptoFailure: return "CryptoFailure";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace mfdpg
