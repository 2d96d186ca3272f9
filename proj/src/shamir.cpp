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

#include "mfdpg/shamir.hpp"

#include <array>

#include "mfdpg/error.hpp"

namespace mfdpg::shamir {
namespace {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

constexpr Tables make_tables() {
  Tables t;
  std::uint8_t x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[i] = x;
    t.log[x] = static_cast<std::uint8_t>(i);
    // multiply by the generator 0x03
    std::uint8_t doubled = static_cast<std::uint8_t>((x << 1) ^ ((x & 0x80) ? 0x1b : 0));
    x = static_cast<std::uint8_t>(doubled ^ x);
  }
  for (int i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

constexpr Tables kTables = make_tables();

void check_indices(std::span<const Share> shares) {
  std::array<bool, 256> seen{};
  for (const auto& s : shares) {
    if (s.index == 0) throw Error(ErrorCode::kInvalidArgument, "share index 0 is reserved");
    if (seen[s.index]) throw Error(ErrorCode::kDuplicateShareIndex, "duplicate share index");
    seen[s.index] = true;
  }
}

}  // namespace

std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return kTables.exp[kTables.log[a] + kTables.log[b]];
}

std::uint8_t gf_inv(std::uint8_t a) {
  if (a == 0) throw Error(ErrorCode::kInvalidArgument, "zero has no inverse in GF(256)");
  return kTables.exp[255 - kTables.log[a]];
}

std::vector<Share> split(const Key32& secret, int k, int n, const RandomSource& random) {
  if (k < 1 || k > n || n > kMaxShares) {
    throw Error(ErrorCode::kThresholdOutOfRange, "require 1 <= k <= n <= 16");
  }
  // coefficients[j][byte]: coefficient of x^j for that byte position
  std::vector<Key32> coefficients(static_cast<std::size_t>(k));
  coefficients[0] = secret;
  for (int j = 1; j < k; ++j) random(coefficients[j]);

  std::vector<Share> shares(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto x = static_cast<std::uint8_t>(i + 1);
    shares[i].index = x;
    for (std::size_t b = 0; b < secret.size(); ++b) {
      std::uint8_t acc = 0;
      for (int j = k - 1; j >= 0; --j) acc = static_cast<std::uint8_t>(gf_mul(acc, x) ^ coefficients[j][b]);
      shares[i].value[b] = acc;
    }
  }
  for (auto& c : coefficients) crypto::wipe(c);
  return shares;
}

Key32 interpolate(std::span<const Share> shares, std::uint8_t x) {
  if (shares.empty()) throw Error(ErrorCode::kInsufficientShares, "no shares supplied");
  check_indices(shares);
  Key32 out{};
  for (std::size_t i = 0; i < shares.size(); ++i) {
    // Lagrange basis l_i(x) = prod_{j != i} (x - x_j) / (x_i - x_j); minus is xor
    std::uint8_t num = 1;
    std::uint8_t den = 1;
    for (std::size_t j = 0; j < shares.size(); ++j) {
      if (j == i) continue;
      num = gf_mul(num, x ^ shares[j].index);
      den = gf_mul(den, shares[i].index ^ shares[j].index);
    }
    std::uint8_t basis = gf_mul(num, gf_inv(den));
    for (std::size_t b = 0; b < out.size(); ++b) out[b] ^= gf_mul(basis, shares[i].value[b]);
  }
  return out;
}

Key32 combine(std::span<const Share> shares, int k) {
  if (k < 1 || k > kMaxShares) throw Error(ErrorCode::kThresholdOutOfRange, "require 1 <= k <= 16");
  if (static_cast<int>(shares.size()) < k) {
    throw Error(ErrorCode::kInsufficientShares, "fewer than k shares supplied");
  }
  return interpolate(shares, 0);
}

}  // namespace mfdpg::shamir
