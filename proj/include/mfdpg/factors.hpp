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
#include "mfdpg/vault.hpp"

namespace mfdpg {

inline constexpr std::uint64_t kTotpStepSeconds = 30;
inline constexpr std::uint64_t kDefaultTotpWindow = 4096;
inline constexpr std::size_t kOtpSecretSize = 20;

// Setup input for one factor: the password text, or the raw 20-byte shared
// secret for hotp/totp/hmac_challenge. An empty id defaults to the kind name.
struct FactorSpec {
  FactorKind kind = FactorKind::kPassword;
  std::string id;
  std::string input;
};

// Live authentication input: password text, 6-digit OTP, or the raw 20-byte
// HMAC response to the vault's current challenge.
struct FactorWitness {
  std::string id;
  std::string value;
};

struct SetupOptions {
  KdfParams kdf;
  RevocationConfig revocation;
  std::uint64_t now = 0;  // seconds; anchors the first TOTP window
  std::uint64_t totp_window = kDefaultTotpWindow;
};

struct SetupResult {
  VaultState vault;
  MasterKey master_key;
};

struct DeriveResult {
  MasterKey master_key;
  VaultState vault;  // with dynamic factors rolled forward
};

// Factor constructions.
FactorMaterial material_password(std::string_view password, const crypto::Salt16& salt,
                                 const KdfParams& kdf);
FactorMaterial material_otp(std::string_view code, const Key32& pad);

// The XOR pad that makes material_otp(code, pad) return `material`.
Key32 otp_pad(const FactorMaterial& material, std::uint32_t code);

// RFC 4226 / RFC 6238 with HMAC-SHA-1, 6 digits, 30-second steps.
std::uint32_t hotp_code(ByteView secret, std::uint64_t counter);
std::uint32_t totp_code(ByteView secret, std::uint64_t now);
std::string format_code(std::uint32_t code);

// Software stand-in for a hardware HMAC-SHA-1 challenge-response token.
crypto::Digest20 hmac_response(ByteView secret, const Key32& challenge);

// Creates a fresh vault with random master key. Requires
// 1 <= threshold <= specs.size() <= 16.
SetupResult setup_vault(const std::vector<FactorSpec>& specs, int threshold,
                        const SetupOptions& options,
                        const RandomSource& random = system_random());

// Reconstructs the master key from at least `threshold` witnesses and rolls
// dynamic factors forward: hotp to the next counter, hmac to a new
// challenge, and every totp window re-anchored at the current step.
// A wrong witness yields kVerifierMismatch without saying which.
DeriveResult derive_master_key(const VaultState& vault, const std::vector<FactorWitness>& witnesses,
                               std::uint64_t now);

// HMAC(master_key, "mfdpg/verify") truncated to 16 bytes.
std::array<std::uint8_t, 16> verifier_tag(const MasterKey& master_key);

}  // namespace mfdpg
