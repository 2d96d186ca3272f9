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
#include <vector>

#include "mfdpg/bytes.hpp"

namespace mfdpg {

// Partial-key cuckoo filter over 32-byte items (Fan et al. geometry: b slots
// per bucket, f-bit fingerprints, power-of-two bucket count). Fingerprint 0
// marks an empty slot.
class CuckooFilter {
 public:
  static constexpr int kDefaultFingerprintBits = 20;
  static constexpr int kDefaultSlots = 4;
  static constexpr int kMaxKicks = 500;

  explicit CuckooFilter(std::uint32_t bucket_count, int fingerprint_bits = kDefaultFingerprintBits,
                        int slots_per_bucket = kDefaultSlots);

  // Smallest power-of-two bucket count keeping the load factor <= max_load.
  static std::uint32_t buckets_for(std::size_t entries, int slots_per_bucket = kDefaultSlots,
                                   double max_load = 0.95);

  // Returns false (leaving the filter untouched) when no slot is found
  // within kMaxKicks evictions. Eviction choices come from a generator
  // seeded with the item's fingerprint, so the resulting bytes depend only
  // on the insertion sequence.
  bool insert(const Key32& item);
  bool contains(const Key32& item) const;
  // Removes one copy of the item's fingerprint; false if absent.
  bool remove(const Key32& item);

  std::size_t size() const { return count_; }
  std::size_t count_occupied() const;
  std::uint32_t bucket_count() const { return bucket_count_; }
  int fingerprint_bits() const { return fingerprint_bits_; }
  int slots_per_bucket() const { return slots_per_bucket_; }
  const std::vector<std::uint32_t>& slots() const { return slots_; }

  Bytes serialize() const;
  // Throws kVersionMismatch (magic, version or geometry) or kCorruptLength.
  static CuckooFilter deserialize(ByteView bytes);

  friend bool operator==(const CuckooFilter&, const CuckooFilter&) = default;

 private:
  struct Location {
    std::uint32_t bucket;
    std::uint32_t fingerprint;
  };

  Location locate(const Key32& item) const;
  std::uint32_t alternate(std::uint32_t bucket, std::uint32_t fingerprint) const;
  bool try_place(std::uint32_t bucket, std::uint32_t fingerprint);
  bool bucket_has(std::uint32_t bucket, std::uint32_t fingerprint) const;

  std::uint32_t bucket_count_;
  int fingerprint_bits_;
  int slots_per_bucket_;
  std::vector<std::uint32_t> slots_;
  std::size_t count_ = 0;
};

struct RevocationConfig {
  std::uint32_t max_revocations = 4096;
  double target_fpr = 1e-4;

  friend bool operator==(const RevocationConfig&, const RevocationConfig&) = default;
};

// Fixed-cardinality revocation set. Setup stores N fictitious entries
// derived from the master key; each revocation adds a real preimage and
// drops the lowest-indexed fictitious entry still present, so the filter
// always holds exactly N fingerprints.
class RevocationFilter {
 public:
  static RevocationFilter setup(const Key32& master_key, const RevocationConfig& config);

  // SHA-256(master_key || "mfdpg/fict" || le64(index))
  static Key32 fictitious_entry(const Key32& master_key, std::uint64_t index);

  // Throws kRevocationCapacityExhausted once all N fictitious entries are
  // consumed; *this is never modified.
  RevocationFilter revoke(const Key32& master_key, const Key32& preimage) const;
  bool check(const Key32& preimage) const { return filter_.contains(preimage); }

  std::size_t entry_count() const { return filter_.size(); }
  const CuckooFilter& filter() const { return filter_; }
  const RevocationConfig& config() const { return config_; }

  Bytes serialize() const { return filter_.serialize(); }
  static RevocationFilter deserialize(ByteView bytes, const RevocationConfig& config);

  friend bool operator==(const RevocationFilter&, const RevocationFilter&) = default;

 private:
  RevocationFilter(CuckooFilter filter, RevocationConfig config)
      : filter_(std::move(filter)), config_(config) {}

  CuckooFilter filter_;
  RevocationConfig config_;
};

}  // namespace mfdpg
