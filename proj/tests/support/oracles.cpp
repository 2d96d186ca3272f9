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

#include "oracles.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <nlohmann/json.hpp>

namespace mfdpg::testing {

using regex::Node;

RandomSource seeded_random(std::uint64_t seed) {
  auto engine = std::make_shared<std::mt19937_64>(seed);
  return [engine](std::span<std::uint8_t> out) {
    for (auto& b : out) b = static_cast<std::uint8_t>((*engine)() >> 56);
  };
}

Key32 random_key(std::mt19937_64& rng) {
  Key32 k{};
  for (auto& b : k) b = static_cast<std::uint8_t>(rng() >> 56);
  return k;
}

KdfParams cheap_kdf() { return KdfParams{1, 8, 1}; }

std::set<std::size_t> ast_ends(const Node& node, std::string_view s, std::size_t pos) {
  std::set<std::size_t> out;
  switch (node.kind) {
    case Node::Kind::kLiteral:
      if (pos < s.size() && s[pos] == node.literal) out.insert(pos + 1);
      break;
    case Node::Kind::kClass:
      if (pos < s.size() && regex::in_alphabet(s[pos]) &&
          node.chars.test(static_cast<std::size_t>(s[pos] - 0x20))) {
        out.insert(pos + 1);
      }
      break;
    case Node::Kind::kGroup:
      return ast_ends(node.children.at(0), s, pos);
    case Node::Kind::kConcat: {
      std::set<std::size_t> frontier{pos};
      for (const auto& child : node.children) {
        std::set<std::size_t> next;
        for (auto p : frontier) {
          auto e = ast_ends(child, s, p);
          next.insert(e.begin(), e.end());
        }
        frontier = std::move(next);
      }
      return frontier;
    }
    case Node::Kind::kAlternate:
      for (const auto& child : node.children) {
        auto e = ast_ends(child, s, pos);
        out.insert(e.begin(), e.end());
      }
      break;
    case Node::Kind::kRepeat: {
      // Iterate the child; an unbounded repeat stops once no new end appears.
      std::set<std::size_t> frontier{pos};
      std::set<std::size_t> seen;
      if (node.min == 0) out.insert(pos);
      int limit = node.max == regex::kUnbounded ? static_cast<int>(s.size()) + node.min + 1 : node.max;
      for (int i = 1; i <= limit && !frontier.empty(); ++i) {
        std::set<std::size_t> next;
        for (auto p : frontier) {
          auto e = ast_ends(node.children.at(0), s, p);
          next.insert(e.begin(), e.end());
        }
        if (i >= node.min) out.insert(next.begin(), next.end());
        if (node.max == regex::kUnbounded && i >= node.min) {
          std::set<std::size_t> fresh;
          for (auto p : next) {
            if (seen.insert(p).second) fresh.insert(p);
          }
          next = std::move(fresh);
        }
        frontier = std::move(next);
      }
      break;
    }
  }
  return out;
}

bool ast_matches(const Node& node, std::string_view s) {
  return ast_ends(node, s, 0).contains(s.size());
}

Node random_ast(std::mt19937_64& rng, int depth, std::string_view alphabet) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  auto leaf = [&]() {
    if (pick(3) == 0) {
      regex::CharSet set;
      for (char c : alphabet) {
        if (pick(2) == 0) set.set(static_cast<std::size_t>(c - 0x20));
      }
      if (set.none()) set.set(static_cast<std::size_t>(alphabet[0] - 0x20));
      return Node::make_class(set);
    }
    return Node::make_literal(alphabet[static_cast<std::size_t>(pick(static_cast<int>(alphabet.size())))]);
  };
  if (depth <= 1 || pick(4) == 0) return leaf();
  switch (pick(4)) {
    case 0: {
      std::vector<Node> parts;
      int n = 2 + pick(2);
      for (int i = 0; i < n; ++i) parts.push_back(random_ast(rng, depth - 1, alphabet));
      return Node::make_concat(std::move(parts));
    }
    case 1: {
      std::vector<Node> options;
      int n = 2 + pick(2);
      for (int i = 0; i < n; ++i) options.push_back(random_ast(rng, depth - 1, alphabet));
      return Node::make_alternate(std::move(options));
    }
    case 2: {
      static constexpr int kShapes[][2] = {
          {0, regex::kUnbounded}, {1, regex::kUnbounded}, {0, 1}, {2, 2}, {1, 3}, {2, regex::kUnbounded}, {0, 2}};
      const auto& shape = kShapes[pick(7)];
      return Node::make_repeat(random_ast(rng, depth - 1, alphabet), shape[0], shape[1]);
    }
    default:
      return Node::make_group(random_ast(rng, depth - 1, alphabet));
  }
}

std::vector<std::string> all_strings(std::string_view alphabet, int max_length) {
  std::vector<std::string> out{""};
  std::size_t level_start = 0;
  for (int len = 1; len <= max_length; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_start; i < level_end; ++i) {
      for (char c : alphabet) out.push_back(out[i] + c);
    }
    level_start = level_end;
  }
  return out;
}

std::uint32_t reference_hotp(ByteView secret, std::uint64_t counter) {
  unsigned char message[8];
  for (int i = 7; i >= 0; --i) {
    message[i] = static_cast<unsigned char>(counter & 0xff);
    counter >>= 8;
  }
  unsigned char mac[EVP_MAX_MD_SIZE];
  unsigned int mac_len = 0;
  if (HMAC(EVP_sha1(), secret.data(), static_cast<int>(secret.size()), message, sizeof message, mac,
           &mac_len) == nullptr) {
    throw std::runtime_error("HMAC failed");
  }
  unsigned offset = mac[mac_len - 1] & 0xfu;
  std::uint32_t dbc = ((mac[offset] & 0x7fu) << 24) | (mac[offset + 1] << 16) | (mac[offset + 2] << 8) |
                      mac[offset + 3];
  return dbc % 1'000'000u;
}

int hamming_distance(ByteView a, ByteView b) {
  int bits = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    bits += std::popcount(static_cast<unsigned>(a[i] ^ b[i]));
  }
  return bits;
}

double chi_square_p(double statistic, double degrees_of_freedom) {
  boost::math::chi_squared dist(degrees_of_freedom);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double uniform_chi_square_p(const std::vector<std::uint64_t>& counts) {
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  double expected = total / static_cast<double>(counts.size());
  double stat = 0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return chi_square_p(stat, static_cast<double>(counts.size() - 1));
}

double two_sample_chi_square_p(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  double na = 0, nb = 0;
  for (auto c : a) na += static_cast<double>(c);
  for (auto c : b) nb += static_cast<double>(c);
  double stat = 0;
  int bins = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double col = static_cast<double>(a[i] + b[i]);
    if (col == 0) continue;
    ++bins;
    double ea = col * na / (na + nb);
    double eb = col * nb / (na + nb);
    stat += (static_cast<double>(a[i]) - ea) * (static_cast<double>(a[i]) - ea) / ea;
    stat += (static_cast<double>(b[i]) - eb) * (static_cast<double>(b[i]) - eb) / eb;
  }
  return chi_square_p(stat, static_cast<double>(bins - 1));
}

namespace {

void collect_fields(const nlohmann::json& j, Bytes& out) {
  if (j.is_string()) {
    if (auto decoded = crypto::base64_decode(j.get<std::string>())) append(out, *decoded);
    append(out, j.get<std::string>());
  } else if (j.is_structured()) {
    for (const auto& item : j) collect_fields(item, out);
  }
}

}  // namespace

Bytes export_haystack(std::string_view exported) {
  Bytes out;
  append(out, exported);
  auto payload = crypto::base64_decode(exported.substr(exported.find(':') + 1));
  if (!payload) throw std::runtime_error("export payload is not base64");
  append(out, *payload);
  collect_fields(nlohmann::json::parse(as_chars(*payload)), out);
  return out;
}

}  // namespace mfdpg::testing
