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

#include "mfdpg/drbg.hpp"

#include <limits>

#include "mfdpg/crypto.hpp"
#include "mfdpg/error.hpp"

namespace mfdpg {
namespace {

constexpr std::uint64_t kReseedInterval = std::uint64_t{1} << 48;

}  // namespace

HmacDrbg::HmacDrbg(ByteView seed) : HmacDrbg(seed, {}, {}) {}

HmacDrbg::HmacDrbg(ByteView entropy, ByteView nonce, ByteView personalization) {
  Bytes seed_material;
  append(seed_material, entropy);
  append(seed_material, nonce);
  append(seed_material, personalization);
  key_.fill(0x00);
  value_.fill(0x01);
  update(seed_material);
  reseed_counter_ = 1;
}

void HmacDrbg::update(ByteView provided) {
  for (std::uint8_t round = 0; round < 2; ++round) {
    Bytes msg(value_.begin(), value_.end());
    msg.push_back(round);
    append(msg, provided);
    key_ = crypto::hmac_sha256(key_, msg);
    value_ = crypto::hmac_sha256(key_, value_);
    if (provided.empty()) break;
  }
}

Bytes HmacDrbg::generate(std::size_t n, ByteView additional) {
  if (n > kMaxRequest) throw Error(ErrorCode::kRequestTooLarge, "DRBG request exceeds 4096 bytes");
  if (reseed_counter_ > kReseedInterval) {
    throw Error(ErrorCode::kRequestTooLarge, "DRBG reseed interval exhausted");
  }
  if (!additional.empty()) update(additional);
  Bytes out;
  out.reserve(n + value_.size());
  while (out.size() < n) {
    value_ = crypto::hmac_sha256(key_, value_);
    append(out, value_);
  }
  out.resize(n);
  update(additional);
  ++reseed_counter_;
  return out;
}

std::uint32_t HmacDrbg::uniform(std::uint32_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "uniform bound must be positive");
  const std::uint64_t range = std::uint64_t{1} << 32;
  const std::uint64_t limit = range / bound * bound;
  for (;;) {
    Bytes draw = generate(4);
    std::uint64_t x = load_le32(draw.data());
    if (x < limit) return static_cast<std::uint32_t>(x % bound);
  }
}

}  // namespace mfdpg
