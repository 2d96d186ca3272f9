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

#include "mfdpg/factors.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "mfdpg/error.hpp"
#include "mfdpg/shamir.hpp"
#include "mfdpg/state_store.hpp"

namespace mfdpg {
namespace {

constexpr std::uint32_t kOtpModulus = 1'000'000;

Key32 labelled_hmac(const Key32& key, std::string_view label, ByteView extra = {}) {
  Bytes msg;
  append(msg, label);
  append(msg, extra);
  return crypto::hmac_sha256(key, msg);
}

Key32 otp_digest(std::uint32_t code) {
  Bytes msg;
  append(msg, "mfdpg/otp");
  append_le32(msg, code);
  return crypto::sha256(msg);
}

Key32 hmac_digest(ByteView response) {
  Bytes msg;
  append(msg, "mfdpg/hmac");
  append(msg, response);
  return crypto::sha256(msg);
}

Key32 secret_key(const MasterKey& mk) { return labelled_hmac(mk.bytes, "mfdpg/secret-key"); }

Bytes secret_associated_data(std::string_view id) {
  Bytes ad;
  append(ad, "mfdpg/secret/");
  append(ad, id);
  return ad;
}

std::uint32_t parse_code(std::string_view code) {
  if (code.size() != 6 || !std::all_of(code.begin(), code.end(), [](char c) {
        return c >= '0' && c <= '9';
      })) {
    throw Error(ErrorCode::kMalformedCode, "OTP must be exactly 6 ASCII digits");
  }
  return static_cast<std::uint32_t>(std::stoul(std::string(code)));
}

bool valid_id(std::string_view id) {
  return !id.empty() && id.size() <= kMaxFactorIdLength &&
         std::all_of(id.begin(), id.end(), [](char c) { return c > 0x20 && c < 0x7f; });
}

// The TOTP code every window step is mapped onto; derived from the master
// key so rebuilding a window needs no fresh entropy.
std::uint32_t totp_target(const MasterKey& mk, std::string_view id, std::uint64_t window_start) {
  Bytes extra;
  append(extra, id);
  extra.push_back(0);
  append_le64(extra, window_start);
  Key32 h = labelled_hmac(mk.bytes, "mfdpg/totp-target", extra);
  // 2^64 mod 10^6 bias is below 2^-44; acceptable for a derived target.
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(h[i]) << (8 * i);
  return static_cast<std::uint32_t>(v % kOtpModulus);
}

void build_totp_window(FactorConfig& factor, const MasterKey& mk, const FactorMaterial& material,
                       ByteView secret, std::uint64_t start_step, std::uint64_t size) {
  auto& p = factor.params;
  std::uint32_t target = totp_target(mk, factor.id, start_step);
  p.window_start = start_step;
  p.window_size = size;
  p.pads = {PadEntry{0, otp_pad(material, target)}};
  p.offsets.resize(size);
  for (std::uint64_t i = 0; i < size; ++i) {
    std::uint32_t code = hotp_code(secret, start_step + i);
    p.offsets[i] = (target + kOtpModulus - code) % kOtpModulus;
  }
}

void set_hotp_pad(FactorConfig& factor, const FactorMaterial& material, ByteView secret) {
  factor.params.pads = {
      PadEntry{factor.params.counter, otp_pad(material, hotp_code(secret, factor.params.counter))}};
}

void set_hmac_pad(FactorConfig& factor, const FactorMaterial& material, ByteView secret) {
  crypto::Digest20 response = hmac_response(secret, factor.params.challenge);
  factor.params.pads = {PadEntry{0, xor32(material.bytes, hmac_digest(response))}};
}

const Key32& single_pad(const FactorConfig& factor) {
  if (factor.params.pads.size() != 1) {
    throw Error(ErrorCode::kMalformedEncoding, "factor " + factor.id + " has no pad");
  }
  return factor.params.pads.front().pad;
}

Bytes open_secret(const FactorConfig& factor, const MasterKey& mk) {
  auto secret = crypto::aead_open(secret_key(mk), secret_associated_data(factor.id),
                                  factor.params.enc_secret);
  if (!secret) throw Error(ErrorCode::kIntegrityMismatch, "factor secret failed to authenticate");
  return *secret;
}

void validate_specs(const std::vector<FactorSpec>& specs, int threshold) {
  if (specs.empty() || specs.size() > kMaxFactors) {
    throw Error(ErrorCode::kThresholdOutOfRange, "between 1 and 16 factors are required");
  }
  if (threshold < 1 || threshold > static_cast<int>(specs.size())) {
    throw Error(ErrorCode::kThresholdOutOfRange,
                "threshold must be between 1 and the number of factors");
  }
  std::set<std::string> ids;
  for (const auto& spec : specs) {
    std::string id = spec.id.empty() ? std::string(to_string(spec.kind)) : spec.id;
    if (!valid_id(id)) {
      throw Error(ErrorCode::kInvalidArgument, "factor ids must be 1-32 printable ASCII characters");
    }
    if (!ids.insert(id).second) throw Error(ErrorCode::kDuplicateFactorId, "duplicate factor id " + id);
    if (spec.kind == FactorKind::kPassword) {
      if (spec.input.empty()) throw Error(ErrorCode::kEmptyPassword, "password must not be empty");
    } else if (spec.input.size() != kOtpSecretSize) {
      throw Error(ErrorCode::kInvalidArgument, "factor " + id + " needs a 20-byte secret");
    }
  }
}

}  // namespace

std::string_view to_string(FactorKind kind) {
  switch (kind) {
    case FactorKind::kPassword: return "password";
    case FactorKind::kHotp: return "hotp";
    case FactorKind::kTotp: return "totp";
    case FactorKind::kHmacChallenge: return "hmac";
  }
  return "unknown";
}

FactorKind parse_factor_kind(std::string_view name) {
  if (name == "password") return FactorKind::kPassword;
  if (name == "hotp") return FactorKind::kHotp;
  if (name == "totp") return FactorKind::kTotp;
  if (name == "hmac" || name == "hmac_challenge") return FactorKind::kHmacChallenge;
  throw Error(ErrorCode::kInvalidArgument, "unknown factor kind " + std::string(name));
}

const FactorConfig* VaultState::find_factor(std::string_view id) const {
  auto it = std::find_if(factors.begin(), factors.end(), [&](const auto& f) { return f.id == id; });
  return it == factors.end() ? nullptr : &*it;
}

RevocationFilter VaultState::revocation_filter() const {
  return RevocationFilter::deserialize(filter, revocation);
}

FactorMaterial material_password(std::string_view password, const crypto::Salt16& salt,
                                 const KdfParams& kdf) {
  if (password.empty()) throw Error(ErrorCode::kEmptyPassword, "password must not be empty");
  return FactorMaterial{crypto::argon2id(as_bytes(password), salt, kdf)};
}

FactorMaterial material_otp(std::string_view code, const Key32& pad) {
  return FactorMaterial{xor32(pad, otp_digest(parse_code(code)))};
}

Key32 otp_pad(const FactorMaterial& material, std::uint32_t code) {
  return xor32(material.bytes, otp_digest(code));
}

std::uint32_t hotp_code(ByteView secret, std::uint64_t counter) {
  std::array<std::uint8_t, 8> message{};
  for (int i = 0; i < 8; ++i) message[7 - i] = static_cast<std::uint8_t>(counter >> (8 * i));
  crypto::Digest20 mac = crypto::hmac_sha1(secret, message);
  int offset = mac[19] & 0x0f;
  std::uint32_t binary = (static_cast<std::uint32_t>(mac[offset] & 0x7f) << 24) |
                         (static_cast<std::uint32_t>(mac[offset + 1]) << 16) |
                         (static_cast<std::uint32_t>(mac[offset + 2]) << 8) |
                         static_cast<std::uint32_t>(mac[offset + 3]);
  return binary % kOtpModulus;
}

std::uint32_t totp_code(ByteView secret, std::uint64_t now) {
  return hotp_code(secret, now / kTotpStepSeconds);
}

std::string format_code(std::uint32_t code) {
  std::string digits = std::to_string(code % kOtpModulus);
  return std::string(6 - digits.size(), '0') + digits;
}

crypto::Digest20 hmac_response(ByteView secret, const Key32& challenge) {
  return crypto::hmac_sha1(secret, challenge);
}

std::array<std::uint8_t, 16> verifier_tag(const MasterKey& master_key) {
  Key32 full = labelled_hmac(master_key.bytes, "mfdpg/verify");
  std::array<std::uint8_t, 16> out{};
  std::copy_n(full.begin(), out.size(), out.begin());
  return out;
}

SetupResult setup_vault(const std::vector<FactorSpec>& specs, int threshold,
                        const SetupOptions& options, const RandomSource& random) {
  validate_specs(specs, threshold);
  if (options.totp_window < 1 || options.totp_window > (1u << 20)) {
    throw Error(ErrorCode::kInvalidArgument, "TOTP window must be between 1 and 2^20 steps");
  }

  SetupResult result;
  MasterKey& mk = result.master_key;
  random(mk.bytes);

  VaultState& vault = result.vault;
  vault.kdf = options.kdf;
  vault.threshold = static_cast<std::uint32_t>(threshold);
  vault.revocation = options.revocation;

  std::vector<FactorMaterial> materials;
  const Key32 encryption_key = secret_key(mk);
  for (const auto& spec : specs) {
    FactorConfig factor;
    factor.id = spec.id.empty() ? std::string(to_string(spec.kind)) : spec.id;
    factor.kind = spec.kind;
    FactorMaterial material;
    if (spec.kind == FactorKind::kPassword) {
      random(factor.params.salt);
      material = material_password(spec.input, factor.params.salt, vault.kdf);
    } else {
      random(material.bytes);
      ByteView secret = as_bytes(spec.input);
      factor.params.enc_secret =
          crypto::aead_seal(encryption_key, secret_associated_data(factor.id), secret, random);
      switch (spec.kind) {
        case FactorKind::kHotp:
          factor.params.counter = 0;
          set_hotp_pad(factor, material, secret);
          break;
        case FactorKind::kTotp:
          build_totp_window(factor, mk, material, secret, options.now / kTotpStepSeconds,
                            options.totp_window);
          break;
        case FactorKind::kHmacChallenge:
          random(factor.params.challenge);
          set_hmac_pad(factor, material, secret);
          break;
        case FactorKind::kPassword:
          break;
      }
    }
    vault.factors.push_back(std::move(factor));
    materials.push_back(material);
  }

  auto shares = shamir::split(mk.bytes, threshold, static_cast<int>(specs.size()), random);
  for (std::size_t i = 0; i < shares.size(); ++i) {
    vault.shares.push_back(EncryptedShare{vault.factors[i].id, shares[i].index,
                                          xor32(shares[i].value, materials[i].bytes)});
    crypto::wipe(shares[i].value);
    crypto::wipe(materials[i].bytes);
  }

  vault.verifier = verifier_tag(mk);
  vault.filter = RevocationFilter::setup(mk.bytes, vault.revocation).serialize();
  vault.integrity = compute_integrity(vault, mk);
  return result;
}

DeriveResult derive_master_key(const VaultState& vault, const std::vector<FactorWitness>& witnesses,
                               std::uint64_t now) {
  const std::uint64_t step = now / kTotpStepSeconds;
  std::set<std::string> seen;
  std::vector<shamir::Share> points;
  std::set<std::string> used;
  bool stale = false;

  for (const auto& witness : witnesses) {
    const FactorConfig* factor = vault.find_factor(witness.id);
    if (factor == nullptr) throw Error(ErrorCode::kUnknownFactorId, "unknown factor id " + witness.id);
    if (!seen.insert(witness.id).second) {
      throw Error(ErrorCode::kInvalidArgument, "witness supplied twice for " + witness.id);
    }
    FactorMaterial material;
    switch (factor->kind) {
      case FactorKind::kPassword:
        material = material_password(witness.value, factor->params.salt, vault.kdf);
        break;
      case FactorKind::kHotp:
        material = material_otp(witness.value, single_pad(*factor));
        break;
      case FactorKind::kTotp: {
        std::uint32_t code = parse_code(witness.value);
        const auto& p = factor->params;
        if (step < p.window_start || step - p.window_start >= p.window_size ||
            p.offsets.size() != p.window_size) {
          stale = true;
          continue;
        }
        std::uint32_t target = (code + p.offsets[step - p.window_start]) % kOtpModulus;
        material = FactorMaterial{otp_pad(FactorMaterial{single_pad(*factor)}, target)};
        break;
      }
      case FactorKind::kHmacChallenge:
        if (witness.value.size() != crypto::Digest20{}.size()) {
          throw Error(ErrorCode::kMalformedCode, "HMAC response must be 20 bytes");
        }
        material = FactorMaterial{xor32(single_pad(*factor), hmac_digest(as_bytes(witness.value)))};
        break;
    }
    auto share = std::find_if(vault.shares.begin(), vault.shares.end(),
                              [&](const auto& s) { return s.factor_id == witness.id; });
    if (share == vault.shares.end()) {
      throw Error(ErrorCode::kMalformedEncoding, "no share stored for factor " + witness.id);
    }
    points.push_back(shamir::Share{share->index, xor32(share->value, material.bytes)});
    used.insert(witness.id);
    crypto::wipe(material.bytes);
  }

  if (points.size() < vault.threshold) {
    if (stale) throw Error(ErrorCode::kStaleWindow, "TOTP time step is outside the stored window");
    throw Error(ErrorCode::kInsufficientWitnesses, "fewer witnesses than the vault threshold");
  }

  DeriveResult result;
  MasterKey& mk = result.master_key;
  mk.bytes = shamir::interpolate(points, 0);
  auto expected = verifier_tag(mk);
  if (!crypto::ct_equal(expected, vault.verifier)) {
    throw Error(ErrorCode::kVerifierMismatch, "factor witnesses do not match this vault");
  }
  if (!verify_integrity(vault, mk)) {
    throw Error(ErrorCode::kIntegrityMismatch, "vault public parameters have been modified");
  }

  VaultState next = vault;
  for (auto& factor : next.factors) {
    if (factor.kind == FactorKind::kPassword) continue;
    bool was_used = used.contains(factor.id);
    if (factor.kind != FactorKind::kTotp && !was_used) continue;

    auto share = std::find_if(next.shares.begin(), next.shares.end(),
                              [&](const auto& s) { return s.factor_id == factor.id; });
    Key32 plain_share = shamir::interpolate(points, share->index);
    FactorMaterial material{xor32(share->value, plain_share)};
    Bytes secret = open_secret(factor, mk);

    switch (factor.kind) {
      case FactorKind::kHotp:
        ++factor.params.counter;
        set_hotp_pad(factor, material, secret);
        break;
      case FactorKind::kHmacChallenge: {
        Bytes extra(factor.id.begin(), factor.id.end());
        extra.push_back(0);
        append(extra, factor.params.challenge);
        factor.params.challenge = labelled_hmac(mk.bytes, "mfdpg/challenge", extra);
        set_hmac_pad(factor, material, secret);
        break;
      }
      case FactorKind::kTotp:
        build_totp_window(factor, mk, material, secret, step, factor.params.window_size);
        break;
      case FactorKind::kPassword:
        break;
    }
    crypto::wipe(secret);
    crypto::wipe(material.bytes);
    crypto::wipe(plain_share);
  }
  for (auto& p : points) crypto::wipe(p.value);

  next.integrity = compute_integrity(next, mk);
  result.vault = std::move(next);
  return result;
}

}  // namespace mfdpg
