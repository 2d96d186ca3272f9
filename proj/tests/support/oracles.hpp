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

// Independent oracles and fixtures shared by the unit and acceptance tests.
// Nothing here calls the library code it is used to check.

#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mfdpg/bytes.hpp"
#include "mfdpg/crypto.hpp"
#include "mfdpg/regex.hpp"

namespace mfdpg::testing {

// Deterministic entropy for reproducible vaults.
RandomSource seeded_random(std::uint64_t seed);

Key32 random_key(std::mt19937_64& rng);

// Cheapest Argon2id parameters libsodium accepts.
KdfParams cheap_kdf();

// Set of positions where a match of `node` starting at `pos` can end.
std::set<std::size_t> ast_ends(const regex::Node& node, std::string_view s, std::size_t pos);
bool ast_matches(const regex::Node& node, std::string_view s);

// Random AST over `alphabet` with nesting depth <= depth.
regex::Node random_ast(std::mt19937_64& rng, int depth, std::string_view alphabet);

// Every string over `alphabet` with length <= max_length.
std::vector<std::string> all_strings(std::string_view alphabet, int max_length);

// RFC 4226 HOTP computed with a one-shot OpenSSL HMAC-SHA-1.
std::uint32_t reference_hotp(ByteView secret, std::uint64_t counter);

int hamming_distance(ByteView a, ByteView b);

// Upper-tail p-value of a chi-square statistic.
double chi_square_p(double statistic, double degrees_of_freedom);

// Goodness of fit against uniform expectation across the bins.
double uniform_chi_square_p(const std::vector<std::uint64_t>& counts);

// Homogeneity test for two histograms over the same bins.
double two_sample_chi_square_p(const std::vector<std::uint64_t>& a,
                               const std::vector<std::uint64_t>& b);

// All binary-ish fields of an export decoded and concatenated, plus the raw
// JSON payload and the export text itself.
Bytes export_haystack(std::string_view exported);

}  // namespace mfdpg::testing
