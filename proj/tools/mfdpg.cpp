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

// mfdpg command-line tool. stdout carries only command results; prompts and
// diagnostics go to stderr.

#include <termios.h>
#include <unistd.h>

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfdpg/derivation.hpp"
#include "mfdpg/error.hpp"
#include "mfdpg/factors.hpp"
#include "mfdpg/policy.hpp"
#include "mfdpg/state_store.hpp"

#ifndef MFDPG_DEFAULT_POLICIES
#define MFDPG_DEFAULT_POLICIES "policies.json"
#endif

namespace {

using namespace mfdpg;

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kVaultExists = 3,
  kBadFactors = 4,
  kPolicyError = 5,
  kCapacity = 6,
  kBadState = 7,
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kThresholdOutOfRange:
    case ErrorCode::kDuplicateFactorId:
    case ErrorCode::kEmptyPassword:
      return kUsage;
    case ErrorCode::kUnknownFactorId:
    case ErrorCode::kInsufficientWitnesses:
    case ErrorCode::kMalformedCode:
    case ErrorCode::kVerifierMismatch:
    case ErrorCode::kStaleWindow:
      return kBadFactors;
    case ErrorCode::kSyntaxError:
    case ErrorCode::kUnsupportedFeature:
    case ErrorCode::kStateExplosion:
    case ErrorCode::kPolicyEmpty:
      return kPolicyError;
    case ErrorCode::kRevocationCapacityExhausted:
      return kCapacity;
    case ErrorCode::kVersionUnsupported:
    case ErrorCode::kMalformedEncoding:
    case ErrorCode::kIntegrityMismatch:
    case ErrorCode::kVersionMismatch:
    case ErrorCode::kCorruptLength:
      return kBadState;
    default:
      return kFailure;
  }
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string state;
  std::optional<std::uint64_t> at;
  std::string policies;

  std::filesystem::path state_path() const {
    if (!state.empty()) return state;
    if (const char* env = std::getenv("MFDPG_STATE"); env != nullptr && *env != '\0') return env;
    return default_state_path();
  }
  std::uint64_t now() const {
    return at ? *at : static_cast<std::uint64_t>(std::time(nullptr));
  }
  std::filesystem::path policy_path() const {
    if (!policies.empty()) return policies;
    if (const char* env = std::getenv("MFDPG_POLICIES"); env != nullptr && *env != '\0') return env;
    return MFDPG_DEFAULT_POLICIES;
  }
};

struct WitnessFlags {
  std::optional<std::string> password;
  std::vector<std::string> otps;
  std::vector<std::string> hmac_files;

  bool any() const { return password || !otps.empty() || !hmac_files.empty(); }
};

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos) return {"", text};
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::string read_line(const std::string& prompt, bool hidden) {
  std::cerr << prompt << std::flush;
  termios saved{};
  bool restore = false;
  if (hidden && ::isatty(STDIN_FILENO) && ::tcgetattr(STDIN_FILENO, &saved) == 0) {
    termios quiet = saved;
    quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    restore = ::tcsetattr(STDIN_FILENO, TCSANOW, &quiet) == 0;
  }
  std::string line;
  std::getline(std::cin, line);
  if (restore) {
    ::tcsetattr(STDIN_FILENO, TCSANOW, &saved);
    std::cerr << '\n';
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::optional<std::string> env_password() {
  const char* env = std::getenv("MFDPG_PASSWORD");
  if (env == nullptr) return std::nullopt;
  return std::string(env);
}

Bytes read_secret_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read secret file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  auto secret = crypto::base32_decode(text);
  if (!secret || secret->size() != kOtpSecretSize) {
    throw UsageError("secret file " + path + " must hold a base32 encoded 20-byte secret");
  }
  return *secret;
}

// Resolves ID=VALUE (or bare VALUE when exactly one factor of the kinds fits).
std::map<std::string, std::string> assign_to_factors(const std::vector<std::string>& entries,
                                                     const VaultState& vault,
                                                     std::initializer_list<FactorKind> kinds,
                                                     const char* flag) {
  std::vector<std::string> candidates;
  for (const auto& f : vault.factors) {
    for (auto k : kinds) {
      if (f.kind == k) candidates.push_back(f.id);
    }
  }
  std::map<std::string, std::string> out;
  for (const auto& entry : entries) {
    auto [id, value] = split_assignment(entry);
    if (id.empty()) {
      if (candidates.size() != 1) {
        throw UsageError(std::string(flag) + " needs ID=VALUE when the vault has several such factors");
      }
      id = candidates.front();
    }
    if (std::find(candidates.begin(), candidates.end(), id) == candidates.end()) {
      throw UsageError(std::string(flag) + ": no matching factor named " + id);
    }
    out[id] = value;
  }
  return out;
}

FactorWitness hmac_witness(const FactorConfig& factor, const std::string& path) {
  Bytes secret = read_secret_file(path);
  crypto::Digest20 response = hmac_response(secret, factor.params.challenge);
  crypto::wipe(secret);
  return FactorWitness{factor.id, std::string(response.begin(), response.end())};
}

std::vector<FactorWitness> collect_witnesses(const VaultState& vault, WitnessFlags flags) {
  if (!flags.password) flags.password = env_password();
  std::vector<FactorWitness> out;
  if (flags.any()) {
    auto otps = assign_to_factors(flags.otps, vault, {FactorKind::kHotp, FactorKind::kTotp}, "--otp");
    auto hmacs = assign_to_factors(flags.hmac_files, vault, {FactorKind::kHmacChallenge},
                                   "--hmac-secret-file");
    for (const auto& f : vault.factors) {
      if (f.kind == FactorKind::kPassword && flags.password) {
        out.push_back({f.id, *flags.password});
      } else if (auto it = otps.find(f.id); it != otps.end()) {
        out.push_back({f.id, it->second});
      } else if (auto h = hmacs.find(f.id); h != hmacs.end()) {
        out.push_back(hmac_witness(f, h->second));
      }
    }
    return out;
  }
  for (const auto& f : vault.factors) {
    std::string label = f.id + " (" + std::string(to_string(f.kind)) + ")";
    std::string value;
    switch (f.kind) {
      case FactorKind::kPassword:
        value = read_line("Password for " + label + ", empty to skip: ", true);
        if (!value.empty()) out.push_back({f.id, value});
        break;
      case FactorKind::kHotp:
      case FactorKind::kTotp:
        value = read_line("One-time code for " + label + ", empty to skip: ", false);
        if (!value.empty()) out.push_back({f.id, value});
        break;
      case FactorKind::kHmacChallenge:
        value = read_line("Secret file for " + label + ", empty to skip: ", false);
        if (!value.empty()) out.push_back(hmac_witness(f, value));
        break;
    }
  }
  return out;
}

void add_witness_flags(CLI::App* cmd, WitnessFlags& flags) {
  cmd->add_option("--password", flags.password, "Password factor witness (env MFDPG_PASSWORD)");
  cmd->add_option("--otp", flags.otps, "One-time code as ID=CODE, or CODE for a single OTP factor");
  cmd->add_option("--hmac-secret-file", flags.hmac_files,
                  "Software HMAC responder secret as ID=PATH, or PATH for a single HMAC factor");
}

struct InitOptions {
  std::vector<std::string> factors;
  int threshold = 0;
  bool force = false;
  std::vector<std::string> secrets;
  std::vector<std::string> hmac_files;
  std::optional<std::string> password;
  std::uint32_t max_revocations = RevocationConfig{}.max_revocations;
  std::uint32_t kdf_time = KdfParams{}.time_cost;
  std::uint32_t kdf_memory = KdfParams{}.memory_kib;
};

int cmd_init(const Globals& globals, const InitOptions& opts) {
  auto path = globals.state_path();
  StateLock lock(path);
  if (std::filesystem::exists(path) && !opts.force) {
    std::cerr << "mfdpg: a vault already exists at " << path << " (use --force to replace it)\n";
    return kVaultExists;
  }
  if (opts.factors.empty()) throw UsageError("at least one --factor is required");

  std::map<std::string, std::string> named_secrets;
  for (const auto& s : opts.secrets) {
    auto [id, value] = split_assignment(s);
    if (id.empty()) throw UsageError("--secret expects ID=BASE32");
    auto secret = crypto::base32_decode(value);
    if (!secret || secret->size() != kOtpSecretSize) {
      throw UsageError("--secret " + id + " must be a base32 encoded 20-byte secret");
    }
    named_secrets[id] = std::string(secret->begin(), secret->end());
  }
  for (const auto& h : opts.hmac_files) {
    auto [id, file] = split_assignment(h);
    if (id.empty()) id = "hmac";
    Bytes secret = read_secret_file(file);
    named_secrets[id] = std::string(secret.begin(), secret.end());
  }

  std::vector<FactorSpec> specs;
  std::vector<bool> generated;
  RandomSource random = system_random();
  for (const auto& text : opts.factors) {
    auto colon = text.find(':');
    FactorSpec spec;
    try {
      spec.kind = parse_factor_kind(text.substr(0, colon));
    } catch (const Error&) {
      throw UsageError("unknown factor kind in --factor " + text);
    }
    spec.id = colon == std::string::npos ? std::string(to_string(spec.kind)) : text.substr(colon + 1);
    bool fresh = false;
    if (spec.kind == FactorKind::kPassword) {
      std::optional<std::string> pw = opts.password ? opts.password : env_password();
      if (!pw) {
        pw = read_line("New password for " + spec.id + ": ", true);
        if (read_line("Repeat password: ", true) != *pw) throw UsageError("passwords do not match");
      }
      spec.input = *pw;
    } else if (auto it = named_secrets.find(spec.id); it != named_secrets.end()) {
      spec.input = it->second;
    } else {
      Bytes secret(kOtpSecretSize);
      random(secret);
      spec.input.assign(secret.begin(), secret.end());
      fresh = true;
    }
    specs.push_back(std::move(spec));
    generated.push_back(fresh);
  }

  SetupOptions setup;
  setup.kdf.time_cost = opts.kdf_time;
  setup.kdf.memory_kib = opts.kdf_memory;
  setup.revocation.max_revocations = opts.max_revocations;
  setup.now = globals.now();
  int threshold = opts.threshold == 0 ? static_cast<int>(specs.size()) : opts.threshold;
  SetupResult result = setup_vault(specs, threshold, setup, random);
  crypto::wipe(result.master_key.bytes);
  save_vault_file(path, result.vault);

  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!generated[i]) continue;
    std::cout << specs[i].id << " (" << to_string(specs[i].kind)
              << ") secret: " << crypto::base32_encode(as_bytes(specs[i].input)) << '\n';
  }
  std::cerr << "mfdpg: vault with " << specs.size() << " factors (threshold " << threshold
            << ") written to " << path << '\n';
  return kOk;
}

PasswordPolicy resolve_policy(const Globals& globals, const ServiceId& service,
                              const std::optional<std::string>& requested,
                              std::optional<int> max_length) {
  std::optional<std::vector<PolicyEntry>> corpus;
  auto load = [&]() -> const std::vector<PolicyEntry>& {
    if (!corpus) corpus = load_policy_corpus(globals.policy_path());
    return *corpus;
  };
  PasswordPolicy policy;
  if (requested) {
    std::optional<PasswordPolicy> named;
    if (std::filesystem::exists(globals.policy_path())) named = find_policy(load(), *requested);
    if (named) {
      policy = *named;
    } else {
      policy.must_match = *requested;
    }
  } else if (auto own = find_policy(load(), service.name())) {
    policy = *own;
  } else if (auto fallback = find_policy(load(), "default")) {
    policy = *fallback;
  } else {
    throw Error(ErrorCode::kPolicyEmpty, "no policy for " + service.name() + " and no default");
  }
  if (max_length) policy.max_length = *max_length;
  return policy;
}

int cmd_generate(const Globals& globals, const std::string& service_text,
                 const std::optional<std::string>& policy_name, std::optional<int> max_length,
                 const WitnessFlags& flags) {
  ServiceId service = ServiceId::parse(service_text);
  PasswordPolicy policy = resolve_policy(globals, service, policy_name, max_length);
  auto path = globals.state_path();
  StateLock lock(path);
  VaultState vault = load_vault_file(path);
  GenerateResult result =
      mfdpg_generate(vault, collect_witnesses(vault, flags), service, policy, globals.now());
  crypto::wipe(result.active.bytes);
  save_vault_file(path, result.vault);
  std::cout << result.password << '\n' << std::flush;
  return kOk;
}

int cmd_revoke(const Globals& globals, const std::string& service_text, const WitnessFlags& flags) {
  ServiceId service = ServiceId::parse(service_text);
  auto path = globals.state_path();
  StateLock lock(path);
  VaultState vault = load_vault_file(path);
  VaultState next = revoke_current(vault, collect_witnesses(vault, flags), service, globals.now());
  save_vault_file(path, next);
  std::cerr << "mfdpg: current password for " << service.name() << " revoked\n";
  return kOk;
}

int cmd_export(const Globals& globals) {
  VaultState vault = load_vault_file(globals.state_path());
  std::cout << export_vault(vault) << '\n';
  return kOk;
}

int cmd_import(const Globals& globals, std::string text, bool force) {
  if (text.empty() || text == "-") {
    std::stringstream buffer;
    buffer << std::cin.rdbuf();
    text = buffer.str();
  }
  VaultState vault = import_vault(text);
  auto path = globals.state_path();
  StateLock lock(path);
  if (std::filesystem::exists(path) && !force) {
    std::cerr << "mfdpg: a vault already exists at " << path << " (use --force to replace it)\n";
    return kVaultExists;
  }
  save_vault_file(path, vault);
  std::cerr << "mfdpg: vault imported to " << path << '\n';
  return kOk;
}

int cmd_policy_list(const Globals& globals) {
  for (const auto& entry : load_policy_corpus(globals.policy_path())) {
    std::cout << entry.service << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-factor deterministic password generator"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Globals globals;
  app.add_option("--state", globals.state, "Vault file (env MFDPG_STATE, default ~/.mfdpg/vault.mfdpg)");
  app.add_option("--at", globals.at, "Clock override in Unix seconds");
  app.add_option("--policies", globals.policies, "Policy corpus JSON file (env MFDPG_POLICIES)");

  InitOptions init;
  auto* init_cmd = app.add_subcommand("init", "Create a new vault");
  init_cmd->add_option("--factor", init.factors, "Factor as KIND[:ID]; KIND is password, hotp, totp or hmac")
      ->required();
  init_cmd->add_option("--threshold", init.threshold, "Factors required to derive (default: all)")
      ->check(CLI::PositiveNumber);
  init_cmd->add_flag("--force", init.force, "Replace an existing vault");
  init_cmd->add_option("--secret", init.secrets, "Enroll an existing OTP secret as ID=BASE32");
  init_cmd->add_option("--hmac-secret-file", init.hmac_files, "HMAC factor secret as [ID=]PATH");
  init_cmd->add_option("--password", init.password, "Password factor value (env MFDPG_PASSWORD)");
  init_cmd->add_option("--max-revocations", init.max_revocations, "Revocation capacity N")
      ->check(CLI::Range(1u, 1u << 20));
  init_cmd->add_option("--kdf-time", init.kdf_time, "Argon2id passes")->check(CLI::Range(1u, 64u));
  init_cmd->add_option("--kdf-memory", init.kdf_memory, "Argon2id memory in KiB")
      ->check(CLI::Range(8u, 4u << 20));

  WitnessFlags gen_flags;
  std::string gen_service;
  std::optional<std::string> gen_policy;
  std::optional<int> gen_max_length;
  auto* gen_cmd = app.add_subcommand("generate", "Print the password for a service");
  gen_cmd->add_option("service", gen_service, "Service name")->required();
  gen_cmd->add_option("--policy", gen_policy, "Corpus policy name or inline must-match regex");
  gen_cmd->add_option("--max-length", gen_max_length, "Override the policy length bound")
      ->check(CLI::Range(1, 1000));
  add_witness_flags(gen_cmd, gen_flags);

  WitnessFlags rev_flags;
  std::string rev_service;
  auto* rev_cmd = app.add_subcommand("revoke", "Retire the current password for a service");
  rev_cmd->add_option("service", rev_service, "Service name")->required();
  add_witness_flags(rev_cmd, rev_flags);

  auto* export_cmd = app.add_subcommand("export", "Print the vault as a portable string");

  std::string import_text;
  bool import_force = false;
  auto* import_cmd = app.add_subcommand("import", "Install a vault from an exported string");
  import_cmd->add_option("data", import_text, "Exported string, or - to read standard input");
  import_cmd->add_flag("--force", import_force, "Replace an existing vault");

  auto* policy_cmd = app.add_subcommand("policy", "Inspect the policy corpus");
  policy_cmd->require_subcommand(1);
  auto* policy_list = policy_cmd->add_subcommand("list", "List bundled policy names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*init_cmd) return cmd_init(globals, init);
    if (*gen_cmd) return cmd_generate(globals, gen_service, gen_policy, gen_max_length, gen_flags);
    if (*rev_cmd) return cmd_revoke(globals, rev_service, rev_flags);
    if (*export_cmd) return cmd_export(globals);
    if (*import_cmd) return cmd_import(globals, import_text, import_force);
    if (*policy_list) return cmd_policy_list(globals);
  } catch (const UsageError& e) {
    std::cerr << "mfdpg: " << e.what() << '\n';
    return kUsage;
  } catch (const SyntaxError& e) {
    std::cerr << "mfdpg: policy syntax error at offset " << e.offset() << ": " << e.what() << '\n';
    return kPolicyError;
  } catch (const Error& e) {
    std::cerr << "mfdpg: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "mfdpg: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
