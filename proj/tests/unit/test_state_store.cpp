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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "mfdpg/derivation.hpp"
#include "mfdpg/error.hpp"
#include "mfdpg/state_store.hpp"
#include "oracles.hpp"

namespace mfdpg {
namespace {

constexpr std::uint64_t kNow = 1'700'000'000;
const std::string kOtpSecret = "12345678901234567890";

ErrorCode error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

SetupResult three_factor_vault(std::uint64_t seed, KdfParams kdf = testing::cheap_kdf(),
                               std::uint32_t n = 4096, std::uint64_t window = kDefaultTotpWindow) {
  SetupOptions o;
  o.kdf = kdf;
  o.revocation.max_revocations = n;
  o.now = kNow;
  o.totp_window = window;
  return setup_vault({{FactorKind::kPassword, "pw", "hunter2"},
                      {FactorKind::kHotp, "hotp", kOtpSecret},
                      {FactorKind::kTotp, "totp", kOtpSecret}},
                     3, o, testing::seeded_random(seed));
}

std::string json_of(const std::string& exported) {
  auto payload = crypto::base64_decode(exported.substr(kExportPrefix.size()));
  return std::string(as_chars(*payload));
}

std::string wrap(const std::string& json) {
  return std::string(kExportPrefix) + crypto::base64_encode(as_bytes(json));
}

TEST(Export, RoundTripIsExact) {
  auto v = three_factor_vault(1, testing::cheap_kdf(), 64, 128);
  std::string text = export_vault(v.vault);
  ASSERT_TRUE(text.starts_with("mfdpg1:"));
  VaultState back = import_vault(text);
  EXPECT_EQ(back, v.vault);
  EXPECT_EQ(export_vault(back), text);
  EXPECT_EQ(import_vault(text + "\n"), v.vault);
}

TEST(Export, CanonicalJsonHasSortedKeysAndNoWhitespace) {
  auto v = three_factor_vault(2, testing::cheap_kdf(), 8, 4);
  std::string json = json_of(export_vault(v.vault));
  EXPECT_EQ(json.find(' '), std::string::npos);
  EXPECT_EQ(json.find('\n'), std::string::npos);
  auto parsed = nlohmann::json::parse(json);
  EXPECT_EQ(parsed.dump(), json);  // nlohmann orders object keys
  std::vector<std::string> keys;
  for (auto it = parsed.begin(); it != parsed.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"factors", "integrity", "kdf", "revocation", "shares",
                                             "threshold", "verifier", "version"}));
}

TEST(Export, DefaultVaultFitsSizeBound) {
  auto v = three_factor_vault(3);
  std::string text = export_vault(v.vault);
  EXPECT_LE(text.size(), 128u * 1024);
}

TEST(Import, RejectsUnknownVersions) {
  auto v = three_factor_vault(4, testing::cheap_kdf(), 8, 4);
  std::string text = export_vault(v.vault);
  EXPECT_EQ(error_of([&] { import_vault("mfdpg2:" + text.substr(7)); }), ErrorCode::kVersionUnsupported);
  auto j = nlohmann::json::parse(json_of(text));
  j["version"] = 2;
  EXPECT_EQ(error_of([&] { import_vault(wrap(j.dump())); }), ErrorCode::kVersionUnsupported);
}

TEST(Import, RejectsMalformedInput) {
  auto v = three_factor_vault(5, testing::cheap_kdf(), 8, 4);
  auto j = nlohmann::json::parse(json_of(export_vault(v.vault)));
  EXPECT_EQ(error_of([] { import_vault("hello"); }), ErrorCode::kMalformedEncoding);
  EXPECT_EQ(error_of([] { import_vault("mfdpg1:!!!"); }), ErrorCode::kMalformedEncoding);
  EXPECT_EQ(error_of([] { import_vault(wrap("[1,2")); }), ErrorCode::kMalformedEncoding);
  EXPECT_EQ(error_of([] { import_vault(wrap("[]")); }), ErrorCode::kMalformedEncoding);

  auto mutate = [&](const std::function<void(nlohmann::json&)>& change) {
    auto copy = j;
    change(copy);
    return error_of([&] { import_vault(wrap(copy.dump())); });
  };
  EXPECT_EQ(mutate([](auto& x) { x.erase("verifier"); }), ErrorCode::kMalformedEncoding);
  EXPECT_EQ(mutate([](auto& x) { x["threshold"] = 4; }), ErrorCode::kMalformedEncoding);
  EXPECT_EQ(mutate([](auto& x) { x["threshold"] = -1; }), ErrorCode::kMalformedEncoding);
  EXPECT_EQ(mutate([](auto& x) { x["verifier"] = "AAAA"; }), ErrorCode::kMalformedEncoding);
  EXPECT_EQ(mutate([](auto& x) { x["factors"][0]["kind"] = "sms"; }), ErrorCode::kMalformedEncoding);
  EXPECT_EQ(mutate([](auto& x) { x["shares"].erase(0); }), ErrorCode::kMalformedEncoding);
  EXPECT_EQ(mutate([](auto& x) { x["revocation"]["filter"] = "TUZDRg=="; }), ErrorCode::kMalformedEncoding);
  EXPECT_EQ(mutate([](auto& x) { x["factors"][2]["window_size"] = 5; }), ErrorCode::kMalformedEncoding);
}

TEST(Integrity, DetectsParameterTampering) {
  auto v = three_factor_vault(6, testing::cheap_kdf(), 64, 8);
  EXPECT_TRUE(verify_integrity(v.vault, v.master_key));

  VaultState salt = v.vault;
  salt.factors[0].params.salt[3] ^= 0x10;
  EXPECT_FALSE(verify_integrity(salt, v.master_key));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    VaultState filter = v.vault;
    std::size_t at = 11 + rng() % (filter.filter.size() - 11);
    filter.filter[at] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    EXPECT_FALSE(verify_integrity(filter, v.master_key));
  }
  VaultState counter = v.vault;
  counter.factors[1].params.counter = 7;
  EXPECT_FALSE(verify_integrity(counter, v.master_key));
  VaultState config = v.vault;
  config.revocation.target_fpr = 1e-3;
  EXPECT_FALSE(verify_integrity(config, v.master_key));
}

TEST(Integrity, CharacterFlipsAreCaught) {
  auto v = three_factor_vault(8, testing::cheap_kdf(), 64, 8);
  std::string text = export_vault(v.vault);
  std::vector<FactorWitness> witnesses = {
      {"pw", "hunter2"},
      {"hotp", format_code(hotp_code(as_bytes(kOtpSecret), 0))},
      {"totp", format_code(totp_code(as_bytes(kOtpSecret), kNow))}};
  ASSERT_NO_THROW(derive_master_key(import_vault(text), witnesses, kNow));
  std::mt19937_64 rng(9);
  const std::string alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  for (int i = 0; i < 300; ++i) {
    std::string tampered = text;
    std::size_t at = kExportPrefix.size() + rng() % (text.size() - kExportPrefix.size());
    char replacement;
    do {
      replacement = alphabet[rng() % alphabet.size()];
    } while (replacement == tampered[at]);
    tampered[at] = replacement;
    // kIo is the no-exception sentinel of error_of.
    ErrorCode code = error_of([&] { derive_master_key(import_vault(tampered), witnesses, kNow); });
    EXPECT_NE(code, ErrorCode::kIo)
        << "tampered export accepted, offset " << at;
  }
}

TEST(Files, SaveAndLoad) {
  auto dir = std::filesystem::temp_directory_path() / ("mfdpg_store_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  auto path = dir / "nested" / "vault.mfdpg";
  auto v = three_factor_vault(10, testing::cheap_kdf(), 8, 4);
  {
    StateLock lock(path);
    save_vault_file(path, v.vault);
  }
  EXPECT_EQ(load_vault_file(path), v.vault);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, export_vault(v.vault));
  EXPECT_EQ(error_of([&] { load_vault_file(dir / "missing"); }), ErrorCode::kIo);
  std::filesystem::remove_all(dir);
}

TEST(Files, DefaultPathUnderHome) {
  const char* home = std::getenv("HOME");
  ASSERT_NE(home, nullptr);
  EXPECT_EQ(default_state_path(), std::filesystem::path(home) / ".mfdpg" / "vault.mfdpg");
}

TEST(Secretless, RandomizedLifecycles) {
  std::mt19937_64 rng(11);
  const PasswordPolicy policy{"[!-~]{16}", {}, 16};
  for (int life = 0; life < 20; ++life) {
    auto v = three_factor_vault(100 + static_cast<std::uint64_t>(life), testing::cheap_kdf(), 32, 16);
    VaultState vault = v.vault;
    std::vector<Bytes> secrets = {Bytes(v.master_key.bytes.begin(), v.master_key.bytes.end())};
    auto kdf = vault.kdf;
    auto pw_material = material_password("hunter2", vault.factors[0].params.salt, kdf);
    secrets.emplace_back(pw_material.bytes.begin(), pw_material.bytes.end());
    std::uint64_t counter = 0;
    for (int op = 0; op < 4; ++op) {
      std::string hotp = format_code(hotp_code(as_bytes(kOtpSecret), counter));
      auto hotp_material = material_otp(hotp, vault.factors[1].params.pads.at(0).pad);
      secrets.emplace_back(hotp_material.bytes.begin(), hotp_material.bytes.end());
      std::vector<FactorWitness> w = {{"pw", "hunter2"}, {"hotp", hotp},
                                      {"totp", format_code(totp_code(as_bytes(kOtpSecret), kNow))}};
      auto service = ServiceId::parse("site" + std::to_string(rng() % 5));
      if (rng() % 2) {
        auto g = mfdpg_generate(vault, w, service, policy, kNow);
        secrets.emplace_back(g.active.bytes.begin(), g.active.bytes.end());
        secrets.emplace_back(g.password.begin(), g.password.end());
        vault = g.vault;
      } else {
        vault = revoke_current(vault, w, service, kNow);
      }
      ++counter;
    }
    Bytes hay = testing::export_haystack(export_vault(vault));
    for (const auto& s : secrets) ASSERT_FALSE(contains_subsequence(hay, s)) << "lifecycle " << life;
  }
}

}  // namespace
}  // namespace mfdpg
