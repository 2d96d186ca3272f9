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
#include <cstdint>

#include "mfdpg/bytes.hpp"

namespace mfdpg {

// HMAC_DRBG with SHA-256 (NIST SP 800-90A, section 10.1.2), without
// reseeding or prediction resistance. The state is a plain value: copying it
// forks the stream.
class HmacDrbg {
 public:
  static constexpr std::size_t kMaxRequest = 4096;

  // Instantiate with the seed as entropy_input, empty nonce and
  // personalization string.
  explicit HmacDrbg(ByteView seed);
  HmacDrbg(ByteView entropy, ByteView nonce, ByteView personalization);

  // Throws kRequestTooLarge above kMaxRequest bytes.
  Bytes generate(std::size_t n, ByteView additional = {});

  // Uniform integer in [0, bound) by rejection sampling on 4-byte
  // little-endian draws; every attempt consumes one generate(4) request.
  std::uint32_t uniform(std::uint32_t bound);

  const Key32& key() const { return key_; }
  const Key32& value() const { return value_; }
  std::uint64_t reseed_counter() const { return reseed_counter_; }

 private:
  void update(ByteView provided);

  Key32 key_{};
  Key32 value_{};
  std::uint64_t reseed_counter_ = 0;
};

}  // namespace mfdpg
