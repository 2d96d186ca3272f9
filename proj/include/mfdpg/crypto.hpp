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

// Thin wrappers over libsodium (SHA-256, HMAC-SHA-256, Argon2id, AEAD,
// encodings) and OpenSSL (HMAC-SHA-1 for HOTP/TOTP).

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "mfdpg/bytes.hpp"

namespace mfdpg {

// Cost parameters for the memory-hard KDF. Memory is in KiB.
struct KdfParams {
  std::uint32_t time_cost = 2;
  std::uint32_t memory_kib = 24576;
  std::uint32_t parallelism = 1;

  friend bool operator==(const KdfParams&, const KdfParams&) = default;
};

// Fills the span with random bytes. Injected wherever setup needs entropy so
// tests can run reproducibly.
using RandomSource = std::function<void(std::span<std::uint8_t>)>;

RandomSource system_random();

namespace crypto {

using Salt16 = std::array<std::uint8_t, 16>;
using Digest20 = std::array<std::uint8_t, 20>;

Key32 sha256(ByteView data);
Key32 hmac_sha256(ByteView key, ByteView message);
Digest20 hmac_sha1(ByteView key, ByteView message);

// Argon2id, 32-byte output. Only parallelism == 1 is supported.
Key32 argon2id(ByteView secret, const Salt16& salt, const KdfParams& params);

// ChaCha20-Poly1305 (IETF). Output layout: nonce(12) || ciphertext || tag(16).
inline constexpr std::size_t kAeadOverhead = 12 + 16;
Bytes aead_seal(const Key32& key, ByteView associated, ByteView plaintext,
                const RandomSource& random);
std::optional<Bytes> aead_open(const Key32& key, ByteView associated, ByteView sealed);

bool ct_equal(ByteView a, ByteView b);
void wipe(std::span<std::uint8_t> data);

// Standard alphabet with padding. Decoding is strict: the input must be the
// exact canonical encoding of the returned bytes.
std::string base64_encode(ByteView data);
std::optional<Bytes> base64_decode(std::string_view text);

// RFC 4648 base32 without padding, as used by authenticator apps.
std::string base32_encode(ByteView data);
std::optional<Bytes> base32_decode(std::string_view text);

}  // namespace crypto
}  // namespace mfdpg
