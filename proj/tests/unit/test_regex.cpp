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

#include <random>

#include "mfdpg/error.hpp"
#include "mfdpg/regex.hpp"
#include "oracles.hpp"

namespace mfdpg {
namespace {

using regex::Node;

regex::CharSet chars(std::string_view s) {
  regex::CharSet set;
  for (char c : s) set.set(static_cast<std::size_t>(regex::symbol_of(c)));
  return set;
}

TEST(RegexParse, Alternation) {
  EXPECT_EQ(regex::parse("a|b"),
            Node::make_alternate({Node::make_literal('a'), Node::make_literal('b')}));
}

TEST(RegexParse, BoundedClassRepeat) {
  EXPECT_EQ(regex::parse("[a-c]{2,3}"), Node::make_repeat(Node::make_class(chars("abc")), 2, 3));
}

TEST(RegexParse, Quantifiers) {
  Node a = Node::make_literal('a');
  EXPECT_EQ(regex::parse("a*"), Node::make_repeat(a, 0, regex::kUnbounded));
  EXPECT_EQ(regex::parse("a+"), Node::make_repeat(a, 1, regex::kUnbounded));
  EXPECT_EQ(regex::parse("a?"), Node::make_repeat(a, 0, 1));
  EXPECT_EQ(regex::parse("a{3}"), Node::make_repeat(a, 3, 3));
  EXPECT_EQ(regex::parse("a{3,}"), Node::make_repeat(a, 3, regex::kUnbounded));
}

TEST(RegexParse, ClassesAndEscapes) {
  EXPECT_EQ(regex::parse("[^ -~]").chars.count(), 0u);
  EXPECT_EQ(regex::parse(".").chars, regex::any_char());
  EXPECT_EQ(regex::parse("\\d").chars, chars("0123456789"));
  EXPECT_EQ(regex::parse("[ab-]").chars, chars("ab-"));
  EXPECT_EQ(regex::parse("[]a]").chars, chars("]a"));
  EXPECT_EQ(regex::parse("\\x41"), Node::make_literal('A'));
  EXPECT_EQ(regex::parse("\\."), Node::make_literal('.'));
  EXPECT_EQ(regex::parse("[\\d_]").chars, chars("0123456789_"));
  EXPECT_EQ(regex::parse("\\W").chars.count(), 95u - 63u);
  EXPECT_EQ(regex::parse("\\s").chars, chars(" "));
}

TEST(RegexParse, AnchorsOnlyAtEnds) {
  EXPECT_EQ(regex::parse("^ab$"), regex::parse("ab"));
  EXPECT_THROW(regex::parse("a^b"), SyntaxError);
  EXPECT_THROW(regex::parse("a$b"), SyntaxError);
}

ErrorCode error_of(std::string_view src) {
  try {
    regex::parse(src);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

TEST(RegexParse, UnsupportedFeatures) {
  for (const char* src : {"(?=x)y", "(?!x)y", "(?<=x)y", "(?<!x)y", "(a)\\1", "\\bfoo", "(?i)a",
                          "[[:alpha:]]", "\\k<n>"}) {
    EXPECT_EQ(error_of(src), ErrorCode::kUnsupportedFeature) << src;
  }
}

TEST(RegexParse, SyntaxErrorsCarryOffsets) {
  struct Case {
    const char* src;
    std::size_t offset;
  };
  for (Case c : {Case{"ab(", 2}, Case{"ab)", 2}, Case{"*a", 0}, Case{"a{3,2}", 1}, Case{"[b-a]", 1},
                 Case{"[abc", 0}, Case{"a\\", 1}, Case{"a{1001}", 2}, Case{"a\\q", 1}}) {
    try {
      regex::parse(c.src);
      ADD_FAILURE() << c.src;
    } catch (const SyntaxError& e) {
      EXPECT_EQ(e.offset(), c.offset) << c.src;
      EXPECT_EQ(e.code(), ErrorCode::kSyntaxError);
    }
  }
  EXPECT_EQ(error_of("caf\xc3\xa9"), ErrorCode::kSyntaxError);
}

TEST(RegexPrint, PrintedSourceDenotesTheSameLanguage) {
  std::mt19937_64 rng(1);
  auto strings = testing::all_strings("abc", 4);
  for (int i = 0; i < 200; ++i) {
    Node ast = testing::random_ast(rng, 4, "abc");
    std::string src = regex::to_source(ast);
    Node reparsed = regex::parse(src);
    for (const auto& s : strings) {
      ASSERT_EQ(testing::ast_matches(ast, s), testing::ast_matches(reparsed, s)) << src << " on " << s;
    }
    EXPECT_EQ(regex::to_source(reparsed), regex::to_source(regex::parse(regex::to_source(reparsed))));
  }
}

}  // namespace
}  // namespace mfdpg
