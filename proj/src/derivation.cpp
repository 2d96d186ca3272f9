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

#include "mfdpg/derivation.hpp"

#include <algorithm>

#include "mfdpg/error.hpp"
#include "mfdpg/revocation.hpp"
#include "mfdpg/state_store.hpp"

namespace mfdpg {

ServiceId ServiceId::parse(std::string_view raw) {
  auto is_space = [](char c) { return c == ' ' || (c >= '\t' && c <= '\r'); };
  while (!raw.empty() && is_space(raw.front())) raw.remove_prefix(1);
  while (!raw.empty() && is_space(raw.back())) raw.remove_suffix(1);
  if (raw.empty()) throw Error(ErrorCode::kInvalidArgument, "service name must not be empty");
  if (raw.size() > kMaxServiceLength) {
    throw Error(ErrorCode::kInvalidArgument, "service name exceeds 256 bytes");
  }
  std::string name(raw);
  std::transform(name.begin(), name.end(), name.begin(), [](char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  });
  return ServiceId(std::move(name));
}

crypto::Salt16 preimage_salt(const ServiceId& service, std::uint32_t counter) {
  Bytes msg;
  append(msg, "mfdpg/preimage");
  append_le32(msg, static_cast<std::uint32_t>(service.name().size()));
  append(msg, service.name());
  append_le64(msg, counter);
  Key32 digest = crypto::sha256(msg);
  crypto::Salt16 salt{};
  std::copy_n(digest.begin(), salt.size(), salt.begin());
  return salt;
}

Preimage derive_preimage(const MasterKey& master_key, const ServiceId& service,
                         std::uint32_t counter, const KdfParams& kdf) {
  if (counter < 1) throw Error(ErrorCode::kInvalidArgument, "counter starts at 1");
  return Preimage{crypto::argon2id(master_key.bytes, preimage_salt(service, counter), kdf), counter};
}

Preimage active_preimage(const VaultState& vault, const MasterKey& master_key,
                         const ServiceId& service) {
  RevocationFilter filter = vault.revocation_filter();
  for (std::uint32_t counter = 1; counter <= kMaxCounter; ++counter) {
    Preimage candidate = derive_preimage(master_key, service, counter, vault.kdf);
    if (!filter.check(candidate.bytes)) return candidate;
    crypto::wipe(candidate.bytes);
  }
  throw Error(ErrorCode::kCounterExhausted, "every counter up to 2^20 is revoked");
}

GenerateResult mfdpg_generate(const VaultState& vault, const std::vector<FactorWitness>& witnesses,
                              const ServiceId& service, const PasswordPolicy& policy,
                              std::uint64_t now) {
  // Compiling first keeps policy errors independent of the factors.
  PolicyWalker walker(compile_policy(policy), policy.max_length);
  DeriveResult derived = derive_master_key(vault, witnesses, now);
  GenerateResult result;
  result.active = active_preimage(derived.vault, derived.master_key, service);
  HmacDrbg drbg(result.active.bytes);
  result.password = walker.walk(drbg);
  result.vault = std::move(derived.vault);
  crypto::wipe(derived.master_key.bytes);
  return result;
}

VaultState revoke_preimage(const VaultState& vault, const MasterKey& master_key,
                           const Preimage& preimage) {
  RevocationFilter filter = vault.revocation_filter().revoke(master_key.bytes, preimage.bytes);
  VaultState next = vault;
  next.filter = filter.serialize();
  next.integrity = compute_integrity(next, master_key);
  return next;
}

VaultState revoke_current(const VaultState& vault, const std::vector<FactorWitness>& witnesses,
                          const ServiceId& service, std::uint64_t now) {
  DeriveResult derived = derive_master_key(vault, witnesses, now);
  Preimage active = active_preimage(derived.vault, derived.master_key, service);
  VaultState next = revoke_preimage(derived.vault, derived.master_key, active);
  crypto::wipe(active.bytes);
  crypto::wipe(derived.master_key.bytes);
  return next;
}

}  // namespace mfdpg
