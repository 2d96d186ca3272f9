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

#include <filesystem>
#include <string>
#include <string_view>

#include "mfdpg/vault.hpp"

namespace mfdpg {

inline constexpr std::string_view kExportPrefix = "mfdpg1:";

// Canonical JSON: sorted keys, no whitespace, binary fields in base64.
std::string canonical_json(const VaultState& vault, bool include_integrity = true);

// HMAC(HMAC(master_key, "mfdpg/integrity"), canonical_json without the tag).
Key32 compute_integrity(const VaultState& vault, const MasterKey& master_key);
bool verify_integrity(const VaultState& vault, const MasterKey& master_key);

// "mfdpg1:" + base64(canonical_json(vault)).
std::string export_vault(const VaultState& vault);

// Throws kVersionUnsupported or kMalformedEncoding. Integrity is checked
// later, at the first derivation, once the master key is available.
VaultState import_vault(std::string_view text);

std::filesystem::path default_state_path();

// Write-to-temp then rename within the same directory.
void save_vault_file(const std::filesystem::path& path, const VaultState& vault);
VaultState load_vault_file(const std::filesystem::path& path);

// Advisory exclusive lock on "<path>.lock", released on destruction.
class StateLock {
 public:
  explicit StateLock(const std::filesystem::path& state_path);
  ~StateLock();
  StateLock(const StateLock&) = delete;
  StateLock& operator=(const StateLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace mfdpg
