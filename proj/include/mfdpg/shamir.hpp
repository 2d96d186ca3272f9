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

#include <cstdint>
#include <span>
#include <vector>

#include "mfdpg/bytes.hpp"
#include "mfdpg/crypto.hpp"

namespace mfdpg::shamir {

inline constexpr int kMaxShares = 16;

struct Share {
  std::uint8_t index = 0;  // evaluation point, 1..255
  Key32 value{};
};

// GF(2^8) arithmetic over the AES polynomial x^8 + x^4 + x^3 + x + 1.
std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b);
std::uint8_t gf_inv(std::uint8_t a);

// Byte-wise k-of-n split; share i is evaluated at x = i + 1.
std::vector<Share> split(const Key32& secret, int k, int n, const RandomSource& random);

// Reconstructs the secret from at least k shares with distinct indices.
Key32 combine(std::span<const Share> shares, int k);

// Evaluates the polynomial through `shares` at `x`. With x = 0 this is the
// secret; with a missing index it recovers that party's share.
Key32 interpolate(std::span<const Share> shares, std::uint8_t x);

}  // namespace mfdpg::shamir
