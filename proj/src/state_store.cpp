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

#include "mfdpg/state_store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mfdpg/error.hpp"
#include "mfdpg/factors.hpp"

namespace mfdpg {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedEncoding, "vault: " + what);
}

std::string b64(ByteView data) { return crypto::base64_encode(data); }

Bytes unb64(const json& value, const char* field) {
  if (!value.is_string()) malformed(std::string(field) + " must be a base64 string");
  auto decoded = crypto::base64_decode(value.get<std::string>());
  if (!decoded) malformed(std::string(field) + " is not canonical base64");
  return *decoded;
}

template <std::size_t N>
std::array<std::uint8_t, N> unb64_fixed(const json& value, const char* field) {
  Bytes raw = unb64(value, field);
  if (raw.size() != N) malformed(std::string(field) + " has the wrong length");
  std::array<std::uint8_t, N> out{};
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

const json& member(const json& obj, const char* key) {
  if (!obj.is_object()) malformed("expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) malformed(std::string("missing field ") + key);
  return *it;
}

std::uint64_t unsigned_field(const json& obj, const char* key) {
  const json& v = member(obj, key);
  if (!v.is_number_unsigned()) malformed(std::string(key) + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string string_field(const json& obj, const char* key) {
  const json& v = member(obj, key);
  if (!v.is_string()) malformed(std::string(key) + " must be a string");
  return v.get<std::string>();
}

Bytes pack_offsets(const std::vector<std::uint32_t>& offsets) {
  Bytes out;
  out.reserve(offsets.size() * 4);
  for (auto v : offsets) append_le32(out, v);
  return out;
}

json pads_to_json(const std::vector<PadEntry>& pads) {
  json arr = json::array();
  for (const auto& p : pads) arr.push_back({{"index", p.index}, {"pad", b64(p.pad)}});
  return arr;
}

json factor_to_json(const FactorConfig& f) {
  json j = {{"id", f.id}, {"kind", std::string(to_string(f.kind))}};
  const auto& p = f.params;
  switch (f.kind) {
    case FactorKind::kPassword:
      j["salt"] = b64(p.salt);
      break;
    case FactorKind::kHotp:
      j["counter"] = p.counter;
      j["enc_secret"] = b64(p.enc_secret);
      j["pads"] = pads_to_json(p.pads);
      break;
    case FactorKind::kTotp:
      j["enc_secret"] = b64(p.enc_secret);
      j["pads"] = pads_to_json(p.pads);
      j["window_start"] = p.window_start;
      j["window_size"] = p.window_size;
      j["offsets"] = b64(pack_offsets(p.offsets));
      break;
    case FactorKind::kHmacChallenge:
      j["challenge"] = b64(p.challenge);
      j["enc_secret"] = b64(p.enc_secret);
      j["pads"] = pads_to_json(p.pads);
      break;
  }
  return j;
}

std::vector<PadEntry> pads_from_json(const json& arr) {
  if (!arr.is_array()) malformed("pads must be an array");
  std::vector<PadEntry> out;
  for (const auto& entry : arr) {
    out.push_back(PadEntry{unsigned_field(entry, "index"), unb64_fixed<32>(member(entry, "pad"), "pad")});
  }
  return out;
}

FactorConfig factor_from_json(const json& j) {
  FactorConfig f;
  f.id = string_field(j, "id");
  try {
    f.kind = parse_factor_kind(string_field(j, "kind"));
  } catch (const Error&) {
    malformed("unknown factor kind");
  }
  auto& p = f.params;
  switch (f.kind) {
    case FactorKind::kPassword:
      p.salt = unb64_fixed<16>(member(j, "salt"), "salt");
      break;
    case FactorKind::kHotp:
      p.counter = unsigned_field(j, "counter");
      p.enc_secret = unb64(member(j, "enc_secret"), "enc_secret");
      p.pads = pads_from_json(member(j, "pads"));
      break;
    case FactorKind::kTotp: {
      p.enc_secret = unb64(member(j, "enc_secret"), "enc_secret");
      p.pads = pads_from_json(member(j, "pads"));
      p.window_start = unsigned_field(j, "window_start");
      p.window_size = unsigned_field(j, "window_size");
      Bytes raw = unb64(member(j, "offsets"), "offsets");
      if (raw.size() != p.window_size * 4) malformed("offsets do not cover the TOTP window");
      for (std::size_t i = 0; i < raw.size(); i += 4) {
        std::uint32_t v = load_le32(raw.data() + i);
        if (v >= 1'000'000) malformed("TOTP offset out of range");
        p.offsets.push_back(v);
      }
      break;
    }
    case FactorKind::kHmacChallenge:
      p.challenge = unb64_fixed<32>(member(j, "challenge"), "challenge");
      p.enc_secret = unb64(member(j, "enc_secret"), "enc_secret");
      p.pads = pads_from_json(member(j, "pads"));
      break;
  }
  return f;
}

json to_json(const VaultState& v, bool include_integrity) {
  json factors = json::array();
  for (const auto& f : v.factors) factors.push_back(factor_to_json(f));
  json shares = json::array();
  for (const auto& s : v.shares) {
    shares.push_back({{"factor", s.factor_id}, {"index", s.index}, {"value", b64(s.value)}});
  }
  json j = {
      {"version", v.version},
      {"kdf", {{"t", v.kdf.time_cost}, {"m", v.kdf.memory_kib}, {"p", v.kdf.parallelism}}},
      {"factors", factors},
      {"threshold", v.threshold},
      {"shares", shares},
      {"verifier", b64(v.verifier)},
      {"revocation",
       {{"n", v.revocation.max_revocations},
        {"target_fpr", v.revocation.target_fpr},
        {"filter", b64(v.filter)}}},
  };
  if (include_integrity) j["integrity"] = b64(v.integrity);
  return j;
}

VaultState from_json(const json& j) {
  if (!j.is_object()) malformed("top level must be an object");
  VaultState v;
  v.version = static_cast<std::uint32_t>(unsigned_field(j, "version"));
  if (v.version != kVaultVersion) {
    throw Error(ErrorCode::kVersionUnsupported, "vault version " + std::to_string(v.version));
  }
  const json& kdf = member(j, "kdf");
  v.kdf.time_cost = static_cast<std::uint32_t>(unsigned_field(kdf, "t"));
  v.kdf.memory_kib = static_cast<std::uint32_t>(unsigned_field(kdf, "m"));
  v.kdf.parallelism = static_cast<std::uint32_t>(unsigned_field(kdf, "p"));

  const json& factors = member(j, "factors");
  if (!factors.is_array() || factors.empty() || factors.size() > kMaxFactors) {
    malformed("factors must be an array of 1..16 entries");
  }
  for (const auto& f : factors) v.factors.push_back(factor_from_json(f));

  v.threshold = static_cast<std::uint32_t>(unsigned_field(j, "threshold"));
  if (v.threshold < 1 || v.threshold > v.factors.size()) malformed("threshold out of range");

  const json& shares = member(j, "shares");
  if (!shares.is_array() || shares.size() != v.factors.size()) {
    malformed("there must be exactly one share per factor");
  }
  for (const auto& s : shares) {
    std::uint64_t index = unsigned_field(s, "index");
    if (index < 1 || index > 255) malformed("share index out of range");
    v.shares.push_back(EncryptedShare{string_field(s, "factor"), static_cast<std::uint8_t>(index),
                                      unb64_fixed<32>(member(s, "value"), "share")});
  }
  v.verifier = unb64_fixed<16>(member(j, "verifier"), "verifier");

  const json& rev = member(j, "revocation");
  v.revocation.max_revocations = static_cast<std::uint32_t>(unsigned_field(rev, "n"));
  const json& fpr = member(rev, "target_fpr");
  if (!fpr.is_number()) malformed("target_fpr must be a number");
  v.revocation.target_fpr = fpr.get<double>();
  v.filter = unb64(member(rev, "filter"), "filter");
  try {
    (void)CuckooFilter::deserialize(v.filter);
  } catch (const Error& e) {
    malformed(std::string("revocation filter: ") + e.what());
  }
  v.integrity = unb64_fixed<32>(member(j, "integrity"), "integrity");
  return v;
}

}  // namespace

std::string canonical_json(const VaultState& vault, bool include_integrity) {
  return to_json(vault, include_integrity).dump();
}

Key32 compute_integrity(const VaultState& vault, const MasterKey& master_key) {
  Key32 key = crypto::hmac_sha256(master_key.bytes, as_bytes("mfdpg/integrity"));
  Key32 tag = crypto::hmac_sha256(key, as_bytes(canonical_json(vault, false)));
  crypto::wipe(key);
  return tag;
}

bool verify_integrity(const VaultState& vault, const MasterKey& master_key) {
  return crypto::ct_equal(compute_integrity(vault, master_key), vault.integrity);
}

std::string export_vault(const VaultState& vault) {
  return std::string(kExportPrefix) + crypto::base64_encode(as_bytes(canonical_json(vault)));
}

VaultState import_vault(std::string_view text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) {
    text.remove_suffix(1);
  }
  if (!text.starts_with(kExportPrefix)) {
    if (text.starts_with("mfdpg") && text.find(':') != std::string_view::npos) {
      throw Error(ErrorCode::kVersionUnsupported, "unsupported export version prefix");
    }
    malformed("missing mfdpg1: prefix");
  }
  auto payload = crypto::base64_decode(text.substr(kExportPrefix.size()));
  if (!payload) malformed("payload is not canonical base64");
  json j;
  try {
    j = json::parse(as_chars(*payload));
  } catch (const json::exception&) {
    malformed("payload is not valid JSON");
  }
  return from_json(j);
}

std::filesystem::path default_state_path() {
  const char* home = std::getenv("HOME");
  std::filesystem::path base = home != nullptr ? home : ".";
  return base / ".mfdpg" / "vault.mfdpg";
}

void save_vault_file(const std::filesystem::path& path, const VaultState& vault) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << export_vault(vault) << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  int fd = ::open(tmp.c_str(), O_RDONLY);
  if (fd >= 0) {
    ::fsync(fd);
    ::close(fd);
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::kIo, "cannot replace " + path.string() + ": " + ec.message());
  }
}

VaultState load_vault_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return import_vault(buffer.str());
}

StateLock::StateLock(const std::filesystem::path& state_path) {
  std::error_code ec;
  if (state_path.has_parent_path()) std::filesystem::create_directories(state_path.parent_path(), ec);
  std::filesystem::path lock = state_path;
  lock += ".lock";
  fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT, 0600);
  if (fd_ < 0) throw Error(ErrorCode::kIo, "cannot open lock file " + lock.string());
  if (::flock(fd_, LOCK_EX) != 0) {
    ::close(fd_);
    throw Error(ErrorCode::kIo, "cannot lock " + lock.string());
  }
}

StateLock::~StateLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace mfdpg
