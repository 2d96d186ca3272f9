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
#include <set>

#include "mfdpg/error.hpp"
#include "mfdpg/revocation.hpp"
#include "oracles.hpp"

namespace mfdpg {
namespace {

RevocationConfig config_with(std::uint32_t n) {
  RevocationConfig c;
  c.max_revocations = n;
  return c;
}

TEST(CuckooFilter, GeometryForDefaultCapacity) {
  EXPECT_EQ(CuckooFilter::buckets_for(4096), 2048u);
  EXPECT_EQ(CuckooFilter::buckets_for(1), 1u);
  EXPECT_EQ(CuckooFilter::buckets_for(5), 2u);
  CuckooFilter f(2048);
  std::size_t bits = std::size_t{2048} * 4 * 20;
  EXPECT_LE(bits / 8, 64u * 1024);
  EXPECT_EQ(f.serialize().size(), 11 + bits / 8);
}

TEST(CuckooFilter, NoFalseNegativesUnderChurn) {
  std::mt19937_64 rng(1);
  CuckooFilter f(256);
  std::multiset<Key32> live;
  for (int step = 0; step < 20000; ++step) {
    if (live.size() < 900 && (live.empty() || rng() % 3 != 0)) {
      Key32 k = testing::random_key(rng);
      if (f.insert(k)) live.insert(k);
    } else {
      auto it = live.begin();
      std::advance(it, static_cast<long>(rng() % live.size()));
      ASSERT_TRUE(f.remove(*it));
      live.erase(it);
    }
    if (step % 500 == 0) {
      for (const auto& k : live) ASSERT_TRUE(f.contains(k));
      ASSERT_EQ(f.size(), live.size());
      ASSERT_EQ(f.count_occupied(), live.size());
    }
  }
}

TEST(CuckooFilter, FailedInsertLeavesFilterUntouched) {
  std::mt19937_64 rng(2);
  CuckooFilter f(4);
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    CuckooFilter before = f;
    if (!f.insert(testing::random_key(rng))) {
      ++failures;
      EXPECT_EQ(f, before);
    }
  }
  EXPECT_GT(failures, 0);
  EXPECT_LE(f.size(), 16u);
}

TEST(CuckooFilter, InsertionIsReproducible) {
  std::mt19937_64 a(3), b(3);
  CuckooFilter x(512), y(512);
  for (int i = 0; i < 1900; ++i) {
    x.insert(testing::random_key(a));
    y.insert(testing::random_key(b));
  }
  EXPECT_EQ(x.serialize(), y.serialize());
}

TEST(CuckooFilter, SerializationRoundTrip) {
  std::mt19937_64 rng(4);
  CuckooFilter f(128);
  for (int i = 0; i < 400; ++i) f.insert(testing::random_key(rng));
  Bytes bytes = f.serialize();
  EXPECT_EQ(as_chars(ByteView(bytes).first(4)), "MFCF");
  CuckooFilter g = CuckooFilter::deserialize(bytes);
  EXPECT_EQ(f, g);
  EXPECT_EQ(g.serialize(), bytes);
  for (int i = 0; i < 1000; ++i) {
    Key32 probe = testing::random_key(rng);
    ASSERT_EQ(f.contains(probe), g.contains(probe));
  }
}

ErrorCode deserialize_error(const Bytes& bytes) {
  try {
    CuckooFilter::deserialize(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

TEST(CuckooFilter, RejectsTampering) {
  CuckooFilter f(64);
  f.insert(Key32{});
  Bytes good = f.serialize();

  Bytes length = good;
  length[7] ^= 0x01;  // bucket count
  EXPECT_EQ(deserialize_error(length), ErrorCode::kCorruptLength);
  Bytes truncated(good.begin(), good.end() - 1);
  EXPECT_EQ(deserialize_error(truncated), ErrorCode::kCorruptLength);
  Bytes extended = good;
  extended.push_back(0);
  EXPECT_EQ(deserialize_error(extended), ErrorCode::kCorruptLength);
  EXPECT_EQ(deserialize_error(Bytes(good.begin(), good.begin() + 5)), ErrorCode::kCorruptLength);

  Bytes magic = good;
  magic[0] = 'X';
  EXPECT_EQ(deserialize_error(magic), ErrorCode::kVersionMismatch);
  Bytes version = good;
  version[4] = 2;
  EXPECT_EQ(deserialize_error(version), ErrorCode::kVersionMismatch);
  Bytes fp_bits = good;
  fp_bits[5] = 40;
  EXPECT_EQ(deserialize_error(fp_bits), ErrorCode::kVersionMismatch);
  Bytes doubled = good;
  doubled[7] = 128;  // valid geometry, payload too short for it
  EXPECT_EQ(deserialize_error(doubled), ErrorCode::kCorruptLength);
  Bytes padding = CuckooFilter(1, 20, 1).serialize();  // 20 payload bits in 3 bytes
  padding.back() |= 0x80;
  EXPECT_EQ(deserialize_error(padding), ErrorCode::kCorruptLength);
}

TEST(RevocationFilter, SingleEntry) {
  Key32 mk{};
  mk.fill(9);
  auto filter = RevocationFilter::setup(mk, config_with(1));
  EXPECT_EQ(filter.entry_count(), 1u);
  EXPECT_EQ(filter.filter().count_occupied(), 1u);
  EXPECT_TRUE(filter.check(RevocationFilter::fictitious_entry(mk, 0)));
}

TEST(RevocationFilter, FictitiousEntryEncoding) {
  Key32 mk{};
  mk.fill(1);
  Bytes msg;
  append(msg, mk);
  append(msg, std::string_view("mfdpg/fict"));
  append_le64(msg, 5);
  EXPECT_EQ(RevocationFilter::fictitious_entry(mk, 5), crypto::sha256(msg));
}

TEST(RevocationFilter, DefaultCapacityFitsBound) {
  std::mt19937_64 rng(5);
  Key32 mk = testing::random_key(rng);
  auto filter = RevocationFilter::setup(mk, RevocationConfig{});
  EXPECT_EQ(filter.entry_count(), 4096u);
  EXPECT_EQ(filter.filter().count_occupied(), 4096u);
  EXPECT_LE(filter.serialize().size(), 64u * 1024 + 11);
  for (std::uint64_t i = 0; i < 4096; ++i) ASSERT_TRUE(filter.check(RevocationFilter::fictitious_entry(mk, i)));
}

TEST(RevocationFilter, DistinctKeysGiveDistinctDecoys) {
  Key32 a{}, b{};
  b[31] = 1;
  std::set<Key32> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    seen.insert(RevocationFilter::fictitious_entry(a, i));
    seen.insert(RevocationFilter::fictitious_entry(b, i));
  }
  EXPECT_EQ(seen.size(), 2000u);
}

TEST(RevocationFilter, RevokeKeepsCardinalityUntilExhausted) {
  std::mt19937_64 rng(6);
  Key32 mk = testing::random_key(rng);
  auto filter = RevocationFilter::setup(mk, config_with(8));
  std::vector<Key32> revoked;
  for (int i = 0; i < 8; ++i) {
    Key32 p = testing::random_key(rng);
    auto before = filter;
    filter = filter.revoke(mk, p);
    EXPECT_EQ(before.entry_count(), 8u);
    EXPECT_EQ(filter.entry_count(), 8u);
    EXPECT_EQ(filter.filter().count_occupied(), 8u);
    revoked.push_back(p);
    for (const auto& r : revoked) EXPECT_TRUE(filter.check(r));
  }
  try {
    (void)filter.revoke(mk, testing::random_key(rng));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRevocationCapacityExhausted);
  }
  EXPECT_EQ(filter.entry_count(), 8u);
}

TEST(RevocationFilter, RemovesLowestIndexDecoyFirst) {
  std::mt19937_64 rng(7);
  Key32 mk = testing::random_key(rng);
  auto filter = RevocationFilter::setup(mk, config_with(64));
  filter = filter.revoke(mk, testing::random_key(rng));
  filter = filter.revoke(mk, testing::random_key(rng));
  EXPECT_FALSE(filter.check(RevocationFilter::fictitious_entry(mk, 0)));
  EXPECT_FALSE(filter.check(RevocationFilter::fictitious_entry(mk, 1)));
  EXPECT_TRUE(filter.check(RevocationFilter::fictitious_entry(mk, 2)));
}

TEST(RevocationFilter, FalsePositiveRateAtFullLoad) {
  std::mt19937_64 rng(8);
  Key32 mk = testing::random_key(rng);
  auto filter = RevocationFilter::setup(mk, RevocationConfig{});
  filter = filter.revoke(mk, testing::random_key(rng));
  const int probes = 1'000'000;
  int hits = 0;
  for (int i = 0; i < probes; ++i) hits += filter.check(testing::random_key(rng)) ? 1 : 0;
  EXPECT_LE(static_cast<double>(hits) / probes, 2e-4);
}

TEST(RevocationFilter, SerializationPreservesMembership) {
  std::mt19937_64 rng(9);
  Key32 mk = testing::random_key(rng);
  auto filter = RevocationFilter::setup(mk, config_with(100));
  Key32 p = testing::random_key(rng);
  filter = filter.revoke(mk, p);
  auto copy = RevocationFilter::deserialize(filter.serialize(), config_with(100));
  EXPECT_EQ(copy, filter);
  EXPECT_TRUE(copy.check(p));
}

}  // namespace
}  // namespace mfdpg
