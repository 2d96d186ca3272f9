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
#include <string>
#include <string_view>
#include <vector>

#include "mfdpg/crypto.hpp"
#include "mfdpg/factors.hpp"
#include "mfdpg/policy.hpp"
#include "mfdpg/vault.hpp"

namespace mfdpg {

inline constexpr std::uint32_t kMaxCounter = 1u << 20;
inline constexpr std::size_t kMaxServiceLength = 256;

// Trimmed, ASCII-lowercased, 1..256 bytes.
class ServiceId {
 public:
  static ServiceId parse(std::string_view raw);
  const std::string& name() const { return name_; }

  friend bool operator==(const ServiceId&, const ServiceId&) = default;

 private:
  explicit ServiceId(std::string name) : name_(std::move(name)) {}
  std::string name_;
};

struct Preimage {
  Key32 bytes{};
  std::uint32_t counter = 0;

  friend bool operator==(const Preimage&, const Preimage&) = default;
};

// SHA-256("mfdpg/preimage" || le32(len) || service || le64(counter))[:16]
crypto::Salt16 preimage_salt(const ServiceId& service, std::uint32_t counter);

Preimage derive_preimage(const MasterKey& master_key, const ServiceId& service,
                         std::uint32_t counter, const KdfParams& kdf);

// First preimage for the service not present in the revocation filter.
Preimage active_preimage(const VaultState& vault, const MasterKey& master_key,
                         const ServiceId& service);

struct GenerateResult {
  std::string password;
  Preimage active;
  VaultState vault;
};

GenerateResult mfdpg_generate(const VaultState& vault, const std::vector<FactorWitness>& witnesses,
                              const ServiceId& service, const PasswordPolicy& policy,
                              std::uint64_t now);

VaultState revoke_current(const VaultState& vault, const std::vector<FactorWitness>& witnesses,
                          const ServiceId& service, std::uint64_t now);

// Revocation step used by revoke_current once the master key is known.
VaultState revoke_preimage(const VaultState& vault, const MasterKey& master_key,
                           const Preimage& preimage);

}  // namespace mfdpg
