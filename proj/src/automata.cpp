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

#include "mfdpg/automata.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "mfdpg/error.hpp"

namespace mfdpg {

using regex::CharSet;
using regex::kAlphabetSize;
using regex::Node;

namespace {

constexpr std::size_t kMaxNfaStates = 2'000'000;

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x);
      h *= 1099511628211ULL;
    }
    return h;
  }
};

class ThompsonBuilder {
 public:
  struct Fragment {
    int start;
    int end;
  };

  explicit ThompsonBuilder(Nfa& nfa) : nfa_(nfa) {}

  Fragment build(const Node& node) {
    switch (node.kind) {
      case Node::Kind::kLiteral: {
        CharSet set;
        set.set(static_cast<std::size_t>(regex::symbol_of(node.literal)));
        return labelled(set);
      }
      case Node::Kind::kClass:
        return labelled(node.chars);
      case Node::Kind::kConcat: {
        if (node.children.empty()) return empty();
        Fragment whole = build(node.children.front());
        for (std::size_t i = 1; i < node.children.size(); ++i) {
          Fragment next = build(node.children[i]);
          link(whole.end, next.start);
          whole.end = next.end;
        }
        return whole;
      }
      case Node::Kind::kAlternate: {
        std::vector<Fragment> options;
        options.reserve(node.children.size());
        for (const auto& child : node.children) options.push_back(build(child));
        int end = state();
        for (const auto& f : options) link(f.end, end);
        return {split_tree(options, 0, options.size()), end};
      }
      case Node::Kind::kRepeat:
        return repeat(node.children.front(), node.min, node.max);
      case Node::Kind::kGroup:
        return build(node.children.front());
    }
    return empty();
  }

 private:
  int state() {
    if (nfa_.states.size() >= kMaxNfaStates) {
      throw Error(ErrorCode::kStateExplosion, "regex expands to too many NFA states");
    }
    return nfa_.add_state();
  }

  void link(int from, int to) { nfa_.states[static_cast<std::size_t>(from)].epsilon.push_back(to); }

  Fragment labelled(const CharSet& set) {
    int s = state();
    int e = state();
    nfa_.states[static_cast<std::size_t>(s)].edges.push_back({set, e});
    return {s, e};
  }

  Fragment empty() {
    int s = state();
    int e = state();
    link(s, e);
    return {s, e};
  }

  // Binary tree of epsilon splits so no state exceeds two out-edges.
  int split_tree(const std::vector<Fragment>& options, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return options[lo].start;
    std::size_t mid = lo + (hi - lo) / 2;
    int s = state();
    int left = split_tree(options, lo, mid);
    int right = split_tree(options, mid, hi);
    link(s, left);
    link(s, right);
    return s;
  }

  Fragment star(const Node& child) {
    int s = state();
    Fragment body = build(child);
    int e = state();
    link(s, body.start);
    link(s, e);
    link(body.end, body.start);
    link(body.end, e);
    return {s, e};
  }

  // (x(x(...)?)?)? with `count` nested copies
  Fragment optional_chain(const Node& child, int count) {
    int s = state();
    Fragment body = build(child);
    int e = state();
    link(s, body.start);
    link(s, e);
    if (count > 1) {
      Fragment rest = optional_chain(child, count - 1);
      link(body.end, rest.start);
      link(rest.end, e);
    } else {
      link(body.end, e);
    }
    return {s, e};
  }

  Fragment repeat(const Node& child, int min, int max) {
    std::vector<Fragment> parts;
    for (int i = 0; i < min; ++i) parts.push_back(build(child));
    if (max == regex::kUnbounded) {
      parts.push_back(star(child));
    } else if (max > min) {
      parts.push_back(optional_chain(child, max - min));
    }
    if (parts.empty()) return empty();
    for (std::size_t i = 1; i < parts.size(); ++i) link(parts[i - 1].end, parts[i].start);
    return {parts.front().start, parts.back().end};
  }

  Nfa& nfa_;
};

void check_size(std::size_t states) {
  if (states > Dfa::kMaxStates) {
    throw Error(ErrorCode::kStateExplosion,
                "automaton exceeds " + std::to_string(Dfa::kMaxStates) + " states");
  }
}

}  // namespace

int Nfa::add_state() {
  states.emplace_back();
  accept.push_back(false);
  return static_cast<int>(states.size() - 1);
}

std::vector<int> Nfa::closure(std::vector<int> seeds) const {
  std::vector<bool> seen(states.size(), false);
  std::vector<int> stack;
  std::vector<int> out;
  for (int s : seeds) {
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    out.push_back(s);
    for (int t : states[static_cast<std::size_t>(s)].epsilon) {
      if (!seen[static_cast<std::size_t>(t)]) {
        seen[static_cast<std::size_t>(t)] = true;
        stack.push_back(t);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Nfa::matches(std::string_view s) const {
  std::vector<int> current = closure({start});
  for (char c : s) {
    if (!regex::in_alphabet(c)) return false;
    int sym = regex::symbol_of(c);
    std::vector<int> moved;
    for (int q : current) {
      for (const auto& edge : states[static_cast<std::size_t>(q)].edges) {
        if (edge.label.test(static_cast<std::size_t>(sym))) moved.push_back(edge.target);
      }
    }
    current = closure(std::move(moved));
    if (current.empty()) return false;
  }
  return std::any_of(current.begin(), current.end(),
                     [&](int q) { return accept[static_cast<std::size_t>(q)]; });
}

std::int32_t Dfa::add_state(bool accepting) {
  check_size(accept.size() + 1);
  accept.push_back(accepting);
  transitions.resize(transitions.size() + kAlphabetSize, kDead);
  return static_cast<std::int32_t>(accept.size() - 1);
}

Nfa thompson(const Node& ast) {
  Nfa nfa;
  ThompsonBuilder builder(nfa);
  auto fragment = builder.build(ast);
  nfa.start = fragment.start;
  nfa.accept[static_cast<std::size_t>(fragment.end)] = true;
  return nfa;
}

Dfa determinize(const Nfa& nfa) {
  Dfa dfa;
  std::unordered_map<std::vector<int>, std::int32_t, VectorHash> ids;
  std::vector<std::vector<int>> subsets;

  auto intern = [&](std::vector<int> subset) -> std::int32_t {
    auto it = ids.find(subset);
    if (it != ids.end()) return it->second;
    bool accepting = std::any_of(subset.begin(), subset.end(),
                                 [&](int q) { return nfa.accept[static_cast<std::size_t>(q)]; });
    std::int32_t id = dfa.add_state(accepting);
    ids.emplace(subset, id);
    subsets.push_back(std::move(subset));
    return id;
  };

  intern(nfa.closure({nfa.start}));
  for (std::size_t current = 0; current < subsets.size(); ++current) {
    std::vector<const Nfa::Edge*> edges;
    for (int q : subsets[current]) {
      for (const auto& e : nfa.states[static_cast<std::size_t>(q)].edges) edges.push_back(&e);
    }
    for (int sym = 0; sym < kAlphabetSize; ++sym) {
      std::vector<int> moved;
      for (const auto* e : edges) {
        if (e->label.test(static_cast<std::size_t>(sym))) moved.push_back(e->target);
      }
      if (moved.empty()) continue;
      std::int32_t target = intern(nfa.closure(std::move(moved)));
      dfa.set(static_cast<std::int32_t>(current), sym, target);
    }
  }
  return dfa;
}

Dfa canonicalize(const Dfa& dfa) {
  Dfa out;
  if (dfa.size() == 0) {
    out.add_state(false);
    return out;
  }
  std::vector<std::int32_t> renumber(dfa.size(), Dfa::kDead);
  std::vector<std::int32_t> order;
  renumber[0] = out.add_state(dfa.accept[0]);
  order.push_back(0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::int32_t old = order[i];
    for (int sym = 0; sym < kAlphabetSize; ++sym) {
      std::int32_t t = dfa.next(old, sym);
      if (t == Dfa::kDead) continue;
      if (renumber[static_cast<std::size_t>(t)] == Dfa::kDead) {
        renumber[static_cast<std::size_t>(t)] = out.add_state(dfa.accept[static_cast<std::size_t>(t)]);
        order.push_back(t);
      }
      out.set(static_cast<std::int32_t>(i), sym, renumber[static_cast<std::size_t>(t)]);
    }
  }
  return out;
}

std::vector<int> distance_to_accept(const Dfa& dfa) {
  std::vector<std::vector<std::int32_t>> reverse(dfa.size());
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    for (int sym = 0; sym < kAlphabetSize; ++sym) {
      std::int32_t t = dfa.next(static_cast<std::int32_t>(s), sym);
      if (t != Dfa::kDead) reverse[static_cast<std::size_t>(t)].push_back(static_cast<std::int32_t>(s));
    }
  }
  std::vector<int> dist(dfa.size(), -1);
  std::deque<std::int32_t> queue;
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    if (dfa.accept[s]) {
      dist[s] = 0;
      queue.push_back(static_cast<std::int32_t>(s));
    }
  }
  while (!queue.empty()) {
    std::int32_t s = queue.front();
    queue.pop_front();
    for (std::int32_t p : reverse[static_cast<std::size_t>(s)]) {
      if (dist[static_cast<std::size_t>(p)] < 0) {
        dist[static_cast<std::size_t>(p)] = dist[static_cast<std::size_t>(s)] + 1;
        queue.push_back(p);
      }
    }
  }
  return dist;
}

Dfa trim(const Dfa& dfa) {
  std::vector<int> dist = distance_to_accept(dfa);
  if (dfa.size() == 0 || dist[0] < 0) {
    Dfa empty;
    empty.add_state(false);
    return empty;
  }
  Dfa pruned = dfa;
  for (std::size_t s = 0; s < pruned.size(); ++s) {
    for (int sym = 0; sym < kAlphabetSize; ++sym) {
      std::int32_t t = pruned.next(static_cast<std::int32_t>(s), sym);
      if (t != Dfa::kDead && dist[static_cast<std::size_t>(t)] < 0) {
        pruned.set(static_cast<std::int32_t>(s), sym, Dfa::kDead);
      }
    }
  }
  return canonicalize(pruned);
}

Dfa complement(const Dfa& dfa) {
  Dfa completed = dfa;
  std::int32_t sink = Dfa::kDead;
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    for (int sym = 0; sym < kAlphabetSize; ++sym) {
      if (completed.next(static_cast<std::int32_t>(s), sym) != Dfa::kDead) continue;
      if (sink == Dfa::kDead) {
        sink = completed.add_state(false);
        for (int k = 0; k < kAlphabetSize; ++k) completed.set(sink, k, sink);
      }
      completed.set(static_cast<std::int32_t>(s), sym, sink);
    }
  }
  for (std::size_t s = 0; s < completed.size(); ++s) completed.accept[s] = !completed.accept[s];
  return canonicalize(completed);
}

Dfa intersect(const Dfa& a, const Dfa& b) {
  Dfa product;
  std::unordered_map<std::uint64_t, std::int32_t> ids;
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  auto key = [](std::int32_t x, std::int32_t y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint32_t>(y);
  };
  auto intern = [&](std::int32_t x, std::int32_t y) {
    auto [it, inserted] = ids.try_emplace(key(x, y), 0);
    if (inserted) {
      it->second = product.add_state(a.accept[static_cast<std::size_t>(x)] &&
                                     b.accept[static_cast<std::size_t>(y)]);
      pairs.emplace_back(x, y);
    }
    return it->second;
  };
  intern(0, 0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    for (int sym = 0; sym < kAlphabetSize; ++sym) {
      std::int32_t tx = a.next(x, sym);
      std::int32_t ty = b.next(y, sym);
      if (tx == Dfa::kDead || ty == Dfa::kDead) continue;
      product.set(static_cast<std::int32_t>(i), sym, intern(tx, ty));
    }
  }
  return trim(product);
}

Dfa length_bound(int max_length) {
  if (max_length < 0) throw Error(ErrorCode::kInvalidArgument, "negative length bound");
  Dfa dfa;
  for (int i = 0; i <= max_length; ++i) dfa.add_state(true);
  for (int i = 0; i < max_length; ++i) {
    for (int sym = 0; sym < kAlphabetSize; ++sym) dfa.set(i, sym, i + 1);
  }
  return dfa;
}

Nfa as_nfa(const Dfa& dfa) {
  Nfa nfa;
  for (std::size_t s = 0; s < dfa.size(); ++s) nfa.add_state();
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    nfa.accept[s] = dfa.accept[s];
    std::vector<std::pair<std::int32_t, CharSet>> grouped;
    for (int sym = 0; sym < kAlphabetSize; ++sym) {
      std::int32_t t = dfa.next(static_cast<std::int32_t>(s), sym);
      if (t == Dfa::kDead) continue;
      auto it = std::find_if(grouped.begin(), grouped.end(), [&](auto& g) { return g.first == t; });
      if (it == grouped.end()) {
        grouped.emplace_back(t, CharSet{});
        it = grouped.end() - 1;
      }
      it->second.set(static_cast<std::size_t>(sym));
    }
    for (auto& [target, label] : grouped) nfa.states[s].edges.push_back({label, target});
  }
  nfa.start = 0;
  return nfa;
}

bool is_empty(const Dfa& dfa) {
  std::vector<int> dist = distance_to_accept(dfa);
  return dfa.size() == 0 || dist[0] < 0;
}

bool matches(const Dfa& dfa, std::string_view s) {
  if (dfa.size() == 0) return false;
  std::int32_t state = 0;
  for (char c : s) {
    if (!regex::in_alphabet(c)) return false;
    state = dfa.next(state, regex::symbol_of(c));
    if (state == Dfa::kDead) return false;
  }
  return dfa.accept[static_cast<std::size_t>(state)];
}

}  // namespace mfdpg
