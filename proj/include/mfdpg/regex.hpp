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

#include <bitset>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mfdpg::regex {

// Printable ASCII, 0x20..0x7E.
inline constexpr int kAlphabetSize = 95;
inline constexpr char kFirstChar = 0x20;
inline constexpr char kLastChar = 0x7e;

inline bool in_alphabet(char c) { return c >= kFirstChar && c <= kLastChar; }
inline int symbol_of(char c) { return c - kFirstChar; }
inline char char_of(int symbol) { return static_cast<char>(symbol + kFirstChar); }

using CharSet = std::bitset<kAlphabetSize>;

CharSet char_range(char lo, char hi);
CharSet any_char();

inline constexpr int kUnbounded = -1;
inline constexpr int kMaxRepeat = 1000;

struct Node {
  enum class Kind { kLiteral, kClass, kConcat, kAlternate, kRepeat, kGroup };

  Kind kind = Kind::kConcat;
  char literal = 0;                 // kLiteral
  CharSet chars;                    // kClass
  std::vector<Node> children;       // kConcat, kAlternate; one child for kRepeat/kGroup
  int min = 0;                      // kRepeat
  int max = 0;                      // kRepeat, kUnbounded for no upper bound

  static Node make_literal(char c);
  static Node make_class(CharSet set);
  static Node make_concat(std::vector<Node> parts);
  static Node make_alternate(std::vector<Node> options);
  static Node make_repeat(Node child, int min, int max);
  static Node make_group(Node child);

  friend bool operator==(const Node&, const Node&) = default;
};

// Parses the supported subset: literals, escapes (\d \w \s and their
// negations, escaped punctuation), '.', bracket classes with ranges and
// negation, '|', groups (plain or "?:"), and the quantifiers * + ? {m}
// {m,} {m,n}. '^' and '$' are accepted only at the very ends; matching is
// always whole-string. Throws SyntaxError (with byte offset) or
// kUnsupportedFeature for backreferences and lookaround.
Node parse(std::string_view source);

// Renders an AST back to source accepted by parse().
std::string to_source(const Node& node);

}  // namespace mfdpg::regex
