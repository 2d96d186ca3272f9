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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfdpg/automata.hpp"
#include "mfdpg/bytes.hpp"
#include "mfdpg/drbg.hpp"

namespace mfdpg {

inline constexpr int kDefaultMaxLength = 64;

// A password must match `must_match`, must not match any of `must_not_match`
// (whole-string), and is at most max_length characters long.
struct PasswordPolicy {
  std::string must_match;
  std::vector<std::string> must_not_match;
  int max_length = kDefaultMaxLength;

  friend bool operator==(const PasswordPolicy&, const PasswordPolicy&) = default;
};

// Expands REPEATk(class) into (?:ccc|ddd|...) with one k-fold run per member
// of the class, so "no k identical characters in a row" stays regular:
// must_not_match ".*REPEAT3(.).*".
std::string expand_macros(std::string_view source);

// must_match ∩ length<=max_length ∩ ¬must_not_match[0] ∩ ..., trimmed and
// canonical. Throws kPolicyEmpty, kStateExplosion, SyntaxError,
// kUnsupportedFeature.
Dfa compile_policy(const PasswordPolicy& policy);

// Compiles a single regex (macros expanded) to a canonical DFA.
Dfa compile_regex(std::string_view source);

// Seeded random walk over a compiled policy. At each step the candidates are
// the outgoing characters, in ascending order, whose target can still reach
// acceptance within the remaining budget, followed by STOP when the current
// state accepts; one is drawn uniformly from the DRBG.
class PolicyWalker {
 public:
  PolicyWalker(Dfa dfa, int max_length);

  std::string walk(HmacDrbg& drbg) const;
  const Dfa& dfa() const { return dfa_; }
  int max_length() const { return max_length_; }

 private:
  Dfa dfa_;
  std::vector<int> distance_;
  int max_length_;
};

std::string walk(const Dfa& dfa, HmacDrbg& drbg, int max_length);

// walk(compile_policy(policy), HmacDrbg(preimage), policy.max_length)
std::string generate_password(ByteView preimage, const PasswordPolicy& policy);

struct PolicyEntry {
  std::string service;
  PasswordPolicy policy;
};

// JSON array of {"service", "must_match", "must_not_match"?, "max_length"?}.
std::vector<PolicyEntry> parse_policy_corpus(std::string_view json_text);
std::vector<PolicyEntry> load_policy_corpus(const std::filesystem::path& path);
std::optional<PasswordPolicy> find_policy(const std::vector<PolicyEntry>& corpus,
                                          std::string_view service);

}  // namespace mfdpg
