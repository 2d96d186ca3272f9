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

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mfdpg/regex.hpp"

namespace mfdpg {

// Epsilon-NFA. States built by thompson() have at most two outgoing
// transitions (either one labelled edge or up to two epsilon edges).
struct Nfa {
  struct Edge {
    regex::CharSet label;
    int target = -1;
  };
  struct State {
    std::vector<Edge> edges;
    std::vector<int> epsilon;
  };

  std::vector<State> states;
  int start = 0;
  std::vector<bool> accept;

  int add_state();
  bool matches(std::string_view s) const;
  // Sorted epsilon-closure of `seeds`.
  std::vector<int> closure(std::vector<int> seeds) const;
};

// Deterministic automaton over the printable-ASCII alphabet. State 0 is the
// start state; a transition of kDead means the string is rejected.
//
// Canonical form: states are numbered in breadth-first discovery order from
// the start state, scanning symbols in ascending character code.
struct Dfa {
  static constexpr std::int32_t kDead = -1;
  static constexpr std::size_t kMaxStates = 1'000'000;

  std::vector<std::int32_t> transitions;  // size() * kAlphabetSize
  std::vector<bool> accept;

  std::size_t size() const { return accept.size(); }
  std::int32_t next(std::int32_t state, int symbol) const {
    return transitions[static_cast<std::size_t>(state) * regex::kAlphabetSize +
                       static_cast<std::size_t>(symbol)];
  }
  std::int32_t add_state(bool accepting);
  void set(std::int32_t state, int symbol, std::int32_t target) {
    transitions[static_cast<std::size_t>(state) * regex::kAlphabetSize +
                static_cast<std::size_t>(symbol)] = target;
  }

  friend bool operator==(const Dfa&, const Dfa&) = default;
};

Nfa thompson(const regex::Node& ast);

// Subset construction. Throws kStateExplosion past Dfa::kMaxStates.
Dfa determinize(const Nfa& nfa);

// Renumbers reachable states into canonical order.
Dfa canonicalize(const Dfa& dfa);

// Removes states that cannot reach an accepting state, then canonicalizes.
// The empty language is a single non-accepting state with no transitions.
Dfa trim(const Dfa& dfa);

Dfa complement(const Dfa& dfa);

// Product construction restricted to reachable pairs, trimmed and
// canonical. Throws kStateExplosion past Dfa::kMaxStates.
Dfa intersect(const Dfa& a, const Dfa& b);

// Accepts every string of length <= max_length.
Dfa length_bound(int max_length);

// Expresses the DFA as an NFA (no epsilon-free guarantee) for round trips.
Nfa as_nfa(const Dfa& dfa);

bool is_empty(const Dfa& dfa);
bool matches(const Dfa& dfa, std::string_view s);

// Shortest number of symbols from each state to acceptance; -1 when none.
std::vector<int> distance_to_accept(const Dfa& dfa);

}  // namespace mfdpg
