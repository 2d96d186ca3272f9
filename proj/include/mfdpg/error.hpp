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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mfdpg {

enum class ErrorCode {
  kInvalidArgument,
  kThresholdOutOfRange,
  kDuplicateFactorId,
  kEmptyPassword,
  kUnknownFactorId,
  kInsufficientWitnesses,
  kMalformedCode,
  kVerifierMismatch,
  kStaleWindow,
  kInsufficientShares,
  kDuplicateShareIndex,
  kRequestTooLarge,
  kInsertionFailure,
  kRevocationCapacityExhausted,
  kVersionMismatch,
  kCorruptLength,
  kSyntaxError,
  kUnsupportedFeature,
  kStateExplosion,
  kPolicyEmpty,
  kCounterExhausted,
  kVersionUnsupported,
  kMalformedEncoding,
  kIntegrityMismatch,
  kCryptoFailure,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library is an Error carrying a stable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Regex syntax errors additionally carry the byte offset into the source.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message)
      : Error(ErrorCode::kSyntaxError,
              message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace mfdpg
