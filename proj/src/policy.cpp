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

#include "mfdpg/policy.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mfdpg/error.hpp"
#include "mfdpg/regex.hpp"

namespace mfdpg {
namespace {

constexpr std::string_view kRepeatMacro = "REPEAT";
constexpr std::string_view kMeta = "\\.[]()|*+?{}^$";

// Index one past the ')' closing the '(' at `open`, honouring escapes and
// bracket classes.
std::size_t closing_paren(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_class = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (c == '\\') {
      ++i;
      continue;
    }
    if (in_class) {
      if (c == ']') in_class = false;
      continue;
    }
    if (c == '[') {
      in_class = true;
      if (i + 1 < s.size() && s[i + 1] == ']') ++i;
      if (i + 1 < s.size() && s[i + 1] == '^') {
        ++i;
        if (i + 1 < s.size() && s[i + 1] == ']') ++i;
      }
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth == 0) return i + 1;
    }
  }
  throw SyntaxError(open, "unterminated macro argument");
}

}  // namespace

std::string expand_macros(std::string_view source) {
  std::string out;
  std::size_t i = 0;
  while (i < source.size()) {
    if (source[i] == '\\') {
      out.append(source.substr(i, 2));
      i += 2;
      continue;
    }
    if (source.substr(i).starts_with(kRepeatMacro)) {
      std::size_t j = i + kRepeatMacro.size();
      std::size_t digits_start = j;
      while (j < source.size() && std::isdigit(static_cast<unsigned char>(source[j]))) ++j;
      if (j > digits_start && j < source.size() && source[j] == '(') {
        int count = std::stoi(std::string(source.substr(digits_start, j - digits_start)));
        if (count < 1 || count > 16) throw SyntaxError(i, "REPEAT count must be in 1..16");
        std::size_t end = closing_paren(source, j);
        regex::Node arg = regex::parse(source.substr(j + 1, end - j - 2));
        regex::CharSet set;
        if (arg.kind == regex::Node::Kind::kClass) {
          set = arg.chars;
        } else if (arg.kind == regex::Node::Kind::kLiteral) {
          set.set(static_cast<std::size_t>(regex::symbol_of(arg.literal)));
        } else {
          throw SyntaxError(j + 1, "REPEAT argument must be a single character class");
        }
        out += "(?:";
        bool first = true;
        for (int sym = 0; sym < regex::kAlphabetSize; ++sym) {
          if (!set.test(static_cast<std::size_t>(sym))) continue;
          if (!first) out.push_back('|');
          first = false;
          char c = regex::char_of(sym);
          for (int k = 0; k < count; ++k) {
            if (kMeta.find(c) != std::string_view::npos) out.push_back('\\');
            out.push_back(c);
          }
        }
        out += ")";
        i = end;
        continue;
      }
    }
    out.push_back(source[i++]);
  }
  return out;
}

Dfa compile_regex(std::string_view source) {
  return determinize(thompson(regex::parse(expand_macros(source))));
}

Dfa compile_policy(const PasswordPolicy& policy) {
  if (policy.max_length < 1 || policy.max_length > regex::kMaxRepeat) {
    throw Error(ErrorCode::kInvalidArgument, "max_length must be in 1..1000");
  }
  Dfa result = intersect(compile_regex(policy.must_match), length_bound(policy.max_length));
  for (const auto& excluded : policy.must_not_match) {
    if (is_empty(result)) break;
    result = intersect(result, complement(compile_regex(excluded)));
  }
  if (is_empty(result)) throw Error(ErrorCode::kPolicyEmpty, "policy accepts no password");
  return result;
}

PolicyWalker::PolicyWalker(Dfa dfa, int max_length)
    : dfa_(std::move(dfa)), distance_(distance_to_accept(dfa_)), max_length_(max_length) {
  if (dfa_.size() == 0 || distance_[0] < 0 || distance_[0] > max_length_) {
    throw Error(ErrorCode::kPolicyEmpty, "no accepted string within the length bound");
  }
}

std::string PolicyWalker::walk(HmacDrbg& drbg) const {
  std::string out;
  std::int32_t state = 0;
  std::vector<int> candidates;
  candidates.reserve(regex::kAlphabetSize);
  for (;;) {
    int remaining = max_length_ - static_cast<int>(out.size());
    candidates.clear();
    for (int sym = 0; sym < regex::kAlphabetSize; ++sym) {
      std::int32_t t = dfa_.next(state, sym);
      if (t == Dfa::kDead) continue;
      int d = distance_[static_cast<std::size_t>(t)];
      if (d >= 0 && d <= remaining - 1) candidates.push_back(sym);
    }
    bool can_stop = dfa_.accept[static_cast<std::size_t>(state)];
    auto count = static_cast<std::uint32_t>(candidates.size() + (can_stop ? 1 : 0));
    if (count == 0) throw std::logic_error("walk reached a state with no way to accept");
    std::uint32_t pick = drbg.uniform(count);
    if (pick == candidates.size()) return out;
    int sym = candidates[pick];
    state = dfa_.next(state, sym);
    out.push_back(regex::char_of(sym));
    int d = distance_[static_cast<std::size_t>(state)];
    if (d < 0 || d > max_length_ - static_cast<int>(out.size())) {
      throw std::logic_error("walk entered a state that cannot accept within budget");
    }
  }
}

std::string walk(const Dfa& dfa, HmacDrbg& drbg, int max_length) {
  return PolicyWalker(dfa, max_length).walk(drbg);
}

std::string generate_password(ByteView preimage, const PasswordPolicy& policy) {
  HmacDrbg drbg(preimage);
  return walk(compile_policy(policy), drbg, policy.max_length);
}

std::vector<PolicyEntry> parse_policy_corpus(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedEncoding, std::string("policy file: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kMalformedEncoding, "policy file must be a JSON array");
  std::vector<PolicyEntry> out;
  for (const auto& record : doc) {
    try {
      PolicyEntry entry;
      entry.service = record.at("service").get<std::string>();
      entry.policy.must_match = record.at("must_match").get<std::string>();
      if (record.contains("must_not_match")) {
        entry.policy.must_not_match = record.at("must_not_match").get<std::vector<std::string>>();
      }
      if (record.contains("max_length")) entry.policy.max_length = record.at("max_length").get<int>();
      out.push_back(std::move(entry));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedEncoding, std::string("policy record: ") + e.what());
    }
  }
  return out;
}

std::vector<PolicyEntry> load_policy_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open policy file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_policy_corpus(buffer.str());
}

std::optional<PasswordPolicy> find_policy(const std::vector<PolicyEntry>& corpus,
                                          std::string_view service) {
  for (const auto& entry : corpus) {
    if (entry.service == service) return entry.policy;
  }
  return std::nullopt;
}

}  // namespace mfdpg
