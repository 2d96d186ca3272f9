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

#include "mfdpg/regex.hpp"

#include <cctype>

#include "mfdpg/error.hpp"

namespace mfdpg::regex {

CharSet char_range(char lo, char hi) {
  CharSet set;
  for (int c = lo; c <= hi; ++c) {
    if (in_alphabet(static_cast<char>(c))) set.set(static_cast<std::size_t>(symbol_of(static_cast<char>(c))));
  }
  return set;
}

CharSet any_char() { return CharSet{}.set(); }

Node Node::make_literal(char c) {
  Node n;
  n.kind = Kind::kLiteral;
  n.literal = c;
  return n;
}

Node Node::make_class(CharSet set) {
  Node n;
  n.kind = Kind::kClass;
  n.chars = set;
  return n;
}

Node Node::make_concat(std::vector<Node> parts) {
  Node n;
  n.kind = Kind::kConcat;
  n.children = std::move(parts);
  return n;
}

Node Node::make_alternate(std::vector<Node> options) {
  Node n;
  n.kind = Kind::kAlternate;
  n.children = std::move(options);
  return n;
}

Node Node::make_repeat(Node child, int min, int max) {
  Node n;
  n.kind = Kind::kRepeat;
  n.children.push_back(std::move(child));
  n.min = min;
  n.max = max;
  return n;
}

Node Node::make_group(Node child) {
  Node n;
  n.kind = Kind::kGroup;
  n.children.push_back(std::move(child));
  return n;
}

namespace {

CharSet digit_class() { return char_range('0', '9'); }
CharSet word_class() {
  return char_range('a', 'z') | char_range('A', 'Z') | char_range('0', '9') | char_range('_', '_');
}
CharSet space_class() { return char_range(' ', ' '); }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Node run() {
    for (std::size_t i = 0; i < src_.size(); ++i) {
      if (!in_alphabet(src_[i])) throw SyntaxError(i, "character outside printable ASCII");
    }
    if (!src_.empty() && src_.front() == '^') pos_ = 1;
    end_ = src_.size();
    if (end_ > pos_ && src_[end_ - 1] == '$' && !escaped(end_ - 1)) --end_;
    Node root = alternation();
    if (pos_ != end_) {
      if (src_[pos_] == ')') throw SyntaxError(pos_, "unbalanced ')'");
      throw SyntaxError(pos_, "unexpected character");
    }
    return root;
  }

 private:
  // Whether the character at i is preceded by an odd number of backslashes.
  bool escaped(std::size_t i) const {
    std::size_t n = 0;
    while (i > n && src_[i - n - 1] == '\\') ++n;
    return n % 2 == 1;
  }

  bool at_end() const { return pos_ >= end_; }
  char peek() const { return src_[pos_]; }

  Node alternation() {
    std::vector<Node> options;
    options.push_back(concatenation());
    while (!at_end() && peek() == '|') {
      ++pos_;
      options.push_back(concatenation());
    }
    if (options.size() == 1) return std::move(options.front());
    return Node::make_alternate(std::move(options));
  }

  Node concatenation() {
    std::vector<Node> parts;
    while (!at_end() && peek() != '|' && peek() != ')') parts.push_back(quantified());
    if (parts.size() == 1) return std::move(parts.front());
    return Node::make_concat(std::move(parts));
  }

  Node quantified() {
    Node node = atom();
    while (!at_end()) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        node = Node::make_repeat(std::move(node), 0, kUnbounded);
      } else if (c == '+') {
        ++pos_;
        node = Node::make_repeat(std::move(node), 1, kUnbounded);
      } else if (c == '?') {
        ++pos_;
        node = Node::make_repeat(std::move(node), 0, 1);
      } else if (c == '{') {
        auto [min, max] = bounds();
        node = Node::make_repeat(std::move(node), min, max);
      } else {
        break;
      }
    }
    return node;
  }

  std::size_t number() {
    std::size_t begin = pos_;
    std::size_t value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + static_cast<std::size_t>(peek() - '0');
      if (value > static_cast<std::size_t>(kMaxRepeat)) {
        throw SyntaxError(begin, "repetition bound exceeds " + std::to_string(kMaxRepeat));
      }
      ++pos_;
    }
    if (pos_ == begin) throw SyntaxError(pos_, "expected repetition bound");
    return value;
  }

  std::pair<int, int> bounds() {
    std::size_t open = pos_;
    ++pos_;  // '{'
    int min = static_cast<int>(number());
    int max = min;
    if (!at_end() && peek() == ',') {
      ++pos_;
      if (!at_end() && peek() == '}') {
        max = kUnbounded;
      } else {
        max = static_cast<int>(number());
      }
    }
    if (at_end() || peek() != '}') throw SyntaxError(pos_, "unterminated repetition bound");
    ++pos_;
    if (max != kUnbounded && max < min) throw SyntaxError(open, "repetition bounds out of order");
    return {min, max};
  }

  Node atom() {
    std::size_t here = pos_;
    char c = peek();
    switch (c) {
      case '(':
        return group();
      case '[':
        return Node::make_class(bracket());
      case '.':
        ++pos_;
        return Node::make_class(any_char());
      case '\\':
        return escape_atom();
      case '*':
      case '+':
      case '?':
      case '{':
        throw SyntaxError(here, "quantifier without operand");
      case '^':
      case '$':
        throw SyntaxError(here, "anchors are only permitted at the ends of the pattern");
      case ']':
      case '}':
        throw SyntaxError(here, "unescaped delimiter");
      default:
        ++pos_;
        return Node::make_literal(c);
    }
  }

  Node group() {
    std::size_t open = pos_;
    ++pos_;  // '('
    if (!at_end() && peek() == '?') {
      std::string_view rest = src_.substr(pos_ + 1);
      if (rest.starts_with("=") || rest.starts_with("!") || rest.starts_with("<=") ||
          rest.starts_with("<!")) {
        throw Error(ErrorCode::kUnsupportedFeature,
                    "lookaround at offset " + std::to_string(open) + " is not regular");
      }
      if (!rest.starts_with(":")) {
        throw Error(ErrorCode::kUnsupportedFeature,
                    "group modifier at offset " + std::to_string(open) + " is not supported");
      }
      pos_ += 2;
    }
    Node inner = alternation();
    if (at_end() || peek() != ')') throw SyntaxError(open, "unbalanced '('");
    ++pos_;
    return Node::make_group(std::move(inner));
  }

  // Handles an escape and reports either a class or a single character.
  struct Escaped {
    bool is_class = false;
    CharSet set;
    char ch = 0;
  };

  Escaped escape(bool in_class) {
    std::size_t here = pos_;
    ++pos_;  // '\\'
    if (pos_ >= src_.size()) throw SyntaxError(here, "dangling backslash");
    char c = src_[pos_++];
    Escaped out;
    switch (c) {
      case 'd': out.is_class = true; out.set = digit_class(); return out;
      case 'D': out.is_class = true; out.set = ~digit_class(); return out;
      case 'w': out.is_class = true; out.set = word_class(); return out;
      case 'W': out.is_class = true; out.set = ~word_class(); return out;
      case 's': out.is_class = true; out.set = space_class(); return out;
      case 'S': out.is_class = true; out.set = ~space_class(); return out;
      case 'b':
      case 'B':
        if (in_class) throw SyntaxError(here, "unsupported escape in class");
        throw Error(ErrorCode::kUnsupportedFeature,
                    "word-boundary assertion at offset " + std::to_string(here));
      case 'k':
        throw Error(ErrorCode::kUnsupportedFeature,
                    "named backreference at offset " + std::to_string(here));
      case 'x': {
        if (pos_ + 2 > src_.size() || !std::isxdigit(static_cast<unsigned char>(src_[pos_])) ||
            !std::isxdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
          throw SyntaxError(here, "malformed \\x escape");
        }
        char value = static_cast<char>(std::stoi(std::string(src_.substr(pos_, 2)), nullptr, 16));
        pos_ += 2;
        if (!in_alphabet(value)) throw SyntaxError(here, "\\x escape outside printable ASCII");
        out.ch = value;
        return out;
      }
      default:
        break;
    }
    if (c >= '1' && c <= '9') {
      throw Error(ErrorCode::kUnsupportedFeature,
                  "backreference at offset " + std::to_string(here) + " is not regular");
    }
    if (std::isalnum(static_cast<unsigned char>(c))) {
      throw SyntaxError(here, std::string("unknown escape \\") + c);
    }
    out.ch = c;
    return out;
  }

  Node escape_atom() {
    Escaped e = escape(false);
    if (e.is_class) return Node::make_class(e.set);
    return Node::make_literal(e.ch);
  }

  CharSet bracket() {
    std::size_t open = pos_;
    ++pos_;  // '['
    bool negate = false;
    if (pos_ < end_ && peek() == '^') {
      negate = true;
      ++pos_;
    }
    CharSet set;
    bool first = true;
    for (;;) {
      if (pos_ >= end_) throw SyntaxError(open, "unterminated character class");
      char c = peek();
      if (c == ']' && !first) {
        ++pos_;
        break;
      }
      first = false;
      if (c == '[' && pos_ + 1 < end_ && src_[pos_ + 1] == ':') {
        throw Error(ErrorCode::kUnsupportedFeature,
                    "POSIX class at offset " + std::to_string(pos_) + " is not supported");
      }
      std::size_t item_start = pos_;
      Escaped lo;
      if (c == '\\') {
        lo = escape(true);
      } else {
        lo.ch = c;
        ++pos_;
      }
      if (lo.is_class) {
        set |= lo.set;
        continue;
      }
      // range a-b, unless '-' is the last character before ']'
      if (pos_ + 1 < end_ && peek() == '-' && src_[pos_ + 1] != ']') {
        ++pos_;
        Escaped hi;
        if (peek() == '\\') {
          hi = escape(true);
        } else {
          hi.ch = peek();
          ++pos_;
        }
        if (hi.is_class) throw SyntaxError(item_start, "class escape used as range bound");
        if (hi.ch < lo.ch) throw SyntaxError(item_start, "character range out of order");
        set |= char_range(lo.ch, hi.ch);
      } else {
        set.set(static_cast<std::size_t>(symbol_of(lo.ch)));
      }
    }
    return negate ? ~set : set;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
};

constexpr std::string_view kMeta = "\\.[]()|*+?{}^$";
constexpr std::string_view kClassMeta = "\\]^-[";

void emit_class_char(std::string& out, char c) {
  if (kClassMeta.find(c) != std::string_view::npos) out.push_back('\\');
  out.push_back(c);
}

std::string class_source(const CharSet& set) {
  if (set.all()) return ".";
  std::string out = "[";
  if (set.none()) {
    // the empty class has no bracket spelling; the negated full range is one
    return "[^ -~]";
  }
  int i = 0;
  while (i < kAlphabetSize) {
    if (!set.test(static_cast<std::size_t>(i))) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < kAlphabetSize && set.test(static_cast<std::size_t>(j + 1))) ++j;
    emit_class_char(out, char_of(i));
    if (j > i) {
      if (j > i + 1) out.push_back('-');
      emit_class_char(out, char_of(j));
    }
    i = j + 1;
  }
  out.push_back(']');
  return out;
}

bool needs_group_for_repeat(const Node& n) {
  switch (n.kind) {
    case Node::Kind::kLiteral:
    case Node::Kind::kClass:
    case Node::Kind::kGroup:
      return false;
    default:
      return true;
  }
}

}  // namespace

Node parse(std::string_view source) { return Parser(source).run(); }

std::string to_source(const Node& node) {
  switch (node.kind) {
    case Node::Kind::kLiteral: {
      std::string out;
      if (kMeta.find(node.literal) != std::string_view::npos) out.push_back('\\');
      out.push_back(node.literal);
      return out;
    }
    case Node::Kind::kClass:
      return class_source(node.chars);
    case Node::Kind::kConcat: {
      std::string out;
      for (const auto& child : node.children) {
        if (child.kind == Node::Kind::kAlternate) {
          out += "(?:" + to_source(child) + ")";
        } else {
          out += to_source(child);
        }
      }
      return out;
    }
    case Node::Kind::kAlternate: {
      std::string out;
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out.push_back('|');
        out += to_source(node.children[i]);
      }
      return out;
    }
    case Node::Kind::kRepeat: {
      const Node& child = node.children.front();
      std::string out = needs_group_for_repeat(child) ? "(?:" + to_source(child) + ")"
                                                      : to_source(child);
      out += "{" + std::to_string(node.min);
      if (node.max == kUnbounded) {
        out += ",}";
      } else if (node.max != node.min) {
        out += "," + std::to_string(node.max) + "}";
      } else {
        out += "}";
      }
      return out;
    }
    case Node::Kind::kGroup:
      return "(" + to_source(node.children.front()) + ")";
  }
  return {};
}

}  // namespace mfdpg::regex
