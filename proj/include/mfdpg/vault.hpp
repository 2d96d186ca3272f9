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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mfdpg/bytes.hpp"
#include "mfdpg/crypto.hpp"
#include "mfdpg/revocation.hpp"

namespace mfdpg {

inline constexpr std::uint32_t kVaultVersion = 1;
inline constexpr std::size_t kMaxFactors = 16;
inline constexpr std::size_t kMaxFactorIdLength = 32;

// In-memory secrets. Neither is ever written to a VaultState.
struct MasterKey {
  Key32 bytes{};
  friend bool operator==(const MasterKey&, const MasterKey&) = default;
};

struct FactorMaterial {
  Key32 bytes{};
  friend bool operator==(const FactorMaterial&, const FactorMaterial&) = default;
};

enum class FactorKind { kPassword, kHotp, kTotp, kHmacChallenge };

std::string_view to_string(FactorKind kind);
// Accepts "password", "hotp", "totp", "hmac".
FactorKind parse_factor_kind(std::string_view name);

struct PadEntry {
  std::uint64_t index = 0;
  Key32 pad{};
  friend bool operator==(const PadEntry&, const PadEntry&) = default;
};

// Trustless per-factor parameters. Which fields are meaningful depends on
// the kind:
//   password        salt
//   hotp            pads (one entry, index = counter), counter, enc_secret
//   totp            pads (one entry), window_start, window_size, offsets,
//                   enc_secret
//   hmac_challenge  pads (one entry), challenge, enc_secret
struct FactorPublicParams {
  crypto::Salt16 salt{};
  std::vector<PadEntry> pads;
  std::uint64_t counter = 0;
  std::uint64_t window_start = 0;
  std::uint64_t window_size = 0;
  // offsets[i] = (target - totp(window_start + i)) mod 10^6
  std::vector<std::uint32_t> offsets;
  Key32 challenge{};
  Bytes enc_secret;

  friend bool operator==(const FactorPublicParams&, const FactorPublicParams&) = default;
};

struct FactorConfig {
  std::string id;
  FactorKind kind = FactorKind::kPassword;
  FactorPublicParams params;

  friend bool operator==(const FactorConfig&, const FactorConfig&) = default;
};

// A Shamir share of the master key XOR-encrypted under one factor's material.
struct EncryptedShare {
  std::string factor_id;
  std::uint8_t index = 0;
  Key32 value{};

  friend bool operator==(const EncryptedShare&, const EncryptedShare&) = default;
};

// Everything that is persisted. Holds only public parameters.
struct VaultState {
  std::uint32_t version = kVaultVersion;
  KdfParams kdf;
  std::vector<FactorConfig> factors;
  std::uint32_t threshold = 1;
  std::vector<EncryptedShare> shares;
  std::array<std::uint8_t, 16> verifier{};
  RevocationConfig revocation;
  Bytes filter;  // serialized RevocationFilter
  Key32 integrity{};

  const FactorConfig* find_factor(std::string_view id) const;
  RevocationFilter revocation_filter() const;

  friend bool operator==(const VaultState&, const VaultState&) = default;
};

}  // namespace mfdpg
