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

#include "mfdpg/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <sodium.h>

#include <algorithm>
#include <cctype>
#include <mutex>

#include "mfdpg/error.hpp"

namespace mfdpg {
namespace {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw Error(ErrorCode::kCryptoFailure, "libsodium initialization failed");
  });
}

constexpr std::string_view kBase32Alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";

}  // namespace

RandomSource system_random() {
  ensure_sodium();
  return [](std::span<std::uint8_t> out) { randombytes_buf(out.data(), out.size()); };
}

namespace crypto {

Key32 sha256(ByteView data) {
  ensure_sodium();
  Key32 out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Key32 hmac_sha256(ByteView key, ByteView message) {
  ensure_sodium();
  crypto_auth_hmacsha256_state state;
  crypto_auth_hmacsha256_init(&state, key.data(), key.size());
  crypto_auth_hmacsha256_update(&state, message.data(), message.size());
  Key32 out{};
  crypto_auth_hmacsha256_final(&state, out.data());
  sodium_memzero(&state, sizeof state);
  return out;
}

Digest20 hmac_sha1(ByteView key, ByteView message) {
  Digest20 out{};
  unsigned int len = 0;
  if (HMAC(EVP_sha1(), key.data(), static_cast<int>(key.size()), message.data(), message.size(),
           out.data(), &len) == nullptr ||
      len != out.size()) {
    throw Error(ErrorCode::kCryptoFailure, "HMAC-SHA-1 failed");
  }
  return out;
}

Key32 argon2id(ByteView secret, const Salt16& salt, const KdfParams& params) {
  ensure_sodium();
  static_assert(crypto_pwhash_argon2id_SALTBYTES == 16);
  if (params.parallelism != 1) {
    throw Error(ErrorCode::kInvalidArgument, "Argon2id parallelism other than 1 is not supported");
  }
  if (params.time_cost < crypto_pwhash_argon2id_OPSLIMIT_MIN ||
      params.memory_kib < 8 || params.memory_kib > (1u << 22)) {
    throw Error(ErrorCode::kInvalidArgument, "Argon2id cost parameters out of range");
  }
  Key32 out{};
  if (crypto_pwhash_argon2id(out.data(), out.size(), reinterpret_cast<const char*>(secret.data()),
                             secret.size(), salt.data(), params.time_cost,
                             static_cast<std::size_t>(params.memory_kib) * 1024,
                             crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw Error(ErrorCode::kCryptoFailure, "Argon2id failed (out of memory?)");
  }
  return out;
}

Bytes aead_seal(const Key32& key, ByteView associated, ByteView plaintext,
                const RandomSource& random) {
  ensure_sodium();
  constexpr std::size_t kNonce = crypto_aead_chacha20poly1305_ietf_NPUBBYTES;
  static_assert(kNonce + crypto_aead_chacha20poly1305_ietf_ABYTES == kAeadOverhead);
  Bytes out(kNonce + plaintext.size() + crypto_aead_chacha20poly1305_ietf_ABYTES);
  random(std::span(out.data(), kNonce));
  unsigned long long written = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt(out.data() + kNonce, &written, plaintext.data(),
                                            plaintext.size(), associated.data(), associated.size(),
                                            nullptr, out.data(), key.data());
  out.resize(kNonce + written);
  return out;
}

std::optional<Bytes> aead_open(const Key32& key, ByteView associated, ByteView sealed) {
  ensure_sodium();
  constexpr std::size_t kNonce = crypto_aead_chacha20poly1305_ietf_NPUBBYTES;
  if (sealed.size() < kAeadOverhead) return std::nullopt;
  Bytes out(sealed.size() - kAeadOverhead);
  unsigned long long written = 0;
  if (crypto_aead_chacha20poly1305_ietf_decrypt(out.data(), &written, nullptr,
                                                sealed.data() + kNonce, sealed.size() - kNonce,
                                                associated.data(), associated.size(),
                                                sealed.data(), key.data()) != 0) {
    return std::nullopt;
  }
  out.resize(written);
  return out;
}

bool ct_equal(ByteView a, ByteView b) {
  ensure_sodium();
  if (a.size() != b.size()) return false;
  return sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

void wipe(std::span<std::uint8_t> data) { sodium_memzero(data.data(), data.size()); }

std::string base64_encode(ByteView data) {
  ensure_sodium();
  constexpr int kVariant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_ENCODED_LEN(data.size(), kVariant), '\0');
  sodium_bin2base64(out.data(), out.size(), data.data(), data.size(), kVariant);
  out.resize(out.size() - 1);  // drop the terminator
  return out;
}

std::optional<Bytes> base64_decode(std::string_view text) {
  ensure_sodium();
  Bytes out(text.size() / 4 * 3 + 3);
  std::size_t written = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &written, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    return std::nullopt;
  }
  out.resize(written);
  if (base64_encode(out) != text) return std::nullopt;
  return out;
}

std::string base32_encode(ByteView data) {
  std::string out;
  std::uint32_t buffer = 0;
  int bits = 0;
  for (std::uint8_t byte : data) {
    buffer = (buffer << 8) | byte;
    bits += 8;
    while (bits >= 5) {
      out.push_back(kBase32Alphabet[(buffer >> (bits - 5)) & 31]);
      bits -= 5;
    }
  }
  if (bits > 0) out.push_back(kBase32Alphabet[(buffer << (5 - bits)) & 31]);
  return out;
}

std::optional<Bytes> base32_decode(std::string_view text) {
  Bytes out;
  std::uint32_t buffer = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=' || c == ' ' || c == '-') continue;
    auto pos = kBase32Alphabet.find(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (pos == std::string_view::npos) return std::nullopt;
    buffer = (buffer << 5) | static_cast<std::uint32_t>(pos);
    bits += 5;
    if (bits >= 8) {
      out.push_back(static_cast<std::uint8_t>(buffer >> (bits - 8)));
      bits -= 8;
    }
  }
  return out;
}

}  // namespace crypto

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::kInvalidArgument, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

bool contains_subsequence(ByteView haystack, ByteView needle) {
  if (needle.empty()) return true;
  if (needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

}  // namespace mfdpg
