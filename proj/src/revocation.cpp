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

#include "mfdpg/revocation.hpp"

#include <algorithm>
#include <bit>
#include <string_view>

#include "mfdpg/crypto.hpp"
#include "mfdpg/error.hpp"

namespace mfdpg {
namespace {

constexpr std::string_view kMagic = "MFCF";
constexpr std::uint8_t kFormatVersion = 1;
constexpr std::size_t kHeaderSize = 4 + 1 + 1 + 1 + 4;

// SplitMix64; only used to pick eviction victims.
class KickRng {
 public:
  explicit KickRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

std::size_t packed_size(std::uint32_t buckets, int fp_bits, int slots) {
  std::size_t bits = static_cast<std::size_t>(buckets) * slots * fp_bits;
  return (bits + 7) / 8;
}

}  // namespace

CuckooFilter::CuckooFilter(std::uint32_t bucket_count, int fingerprint_bits, int slots_per_bucket)
    : bucket_count_(bucket_count),
      fingerprint_bits_(fingerprint_bits),
      slots_per_bucket_(slots_per_bucket) {
  if (bucket_count == 0 || !std::has_single_bit(bucket_count)) {
    throw Error(ErrorCode::kInvalidArgument, "bucket count must be a power of two");
  }
  if (fingerprint_bits < 1 || fingerprint_bits > 32 || slots_per_bucket < 1 || slots_per_bucket > 8) {
    throw Error(ErrorCode::kInvalidArgument, "unsupported cuckoo filter geometry");
  }
  slots_.assign(static_cast<std::size_t>(bucket_count) * slots_per_bucket, 0);
}

std::uint32_t CuckooFilter::buckets_for(std::size_t entries, int slots_per_bucket, double max_load) {
  std::uint32_t buckets = 1;
  while (static_cast<double>(entries) >
         max_load * static_cast<double>(buckets) * slots_per_bucket) {
    buckets <<= 1;
  }
  return buckets;
}

CuckooFilter::Location CuckooFilter::locate(const Key32& item) const {
  Key32 h = crypto::sha256(item);
  std::uint32_t mask = fingerprint_bits_ == 32 ? 0xffffffffu : ((1u << fingerprint_bits_) - 1);
  std::uint32_t fp = load_le32(h.data() + 4) & mask;
  if (fp == 0) fp = 1;
  return {load_le32(h.data()) & (bucket_count_ - 1), fp};
}

std::uint32_t CuckooFilter::alternate(std::uint32_t bucket, std::uint32_t fingerprint) const {
  Bytes encoded;
  append_le32(encoded, fingerprint);
  Key32 h = crypto::sha256(encoded);
  return bucket ^ (load_le32(h.data()) & (bucket_count_ - 1));
}

bool CuckooFilter::bucket_has(std::uint32_t bucket, std::uint32_t fingerprint) const {
  auto begin = slots_.begin() + static_cast<std::ptrdiff_t>(bucket) * slots_per_bucket_;
  return std::find(begin, begin + slots_per_bucket_, fingerprint) != begin + slots_per_bucket_;
}

bool CuckooFilter::try_place(std::uint32_t bucket, std::uint32_t fingerprint) {
  std::size_t base = static_cast<std::size_t>(bucket) * slots_per_bucket_;
  for (int s = 0; s < slots_per_bucket_; ++s) {
    if (slots_[base + s] == 0) {
      slots_[base + s] = fingerprint;
      return true;
    }
  }
  return false;
}

bool CuckooFilter::insert(const Key32& item) {
  auto [first, fp] = locate(item);
  std::uint32_t second = alternate(first, fp);
  if (try_place(first, fp) || try_place(second, fp)) {
    ++count_;
    return true;
  }

  struct Undo {
    std::size_t slot;
    std::uint32_t previous;
  };
  std::vector<Undo> undo;
  KickRng rng(fp);
  std::uint32_t bucket = (rng.next() & 1) ? second : first;
  std::uint32_t carried = fp;
  for (int kick = 0; kick < kMaxKicks; ++kick) {
    std::size_t slot = static_cast<std::size_t>(bucket) * slots_per_bucket_ +
                       static_cast<std::size_t>(rng.next() % static_cast<std::uint64_t>(slots_per_bucket_));
    undo.push_back({slot, slots_[slot]});
    std::swap(carried, slots_[slot]);
    bucket = alternate(bucket, carried);
    std::size_t base = static_cast<std::size_t>(bucket) * slots_per_bucket_;
    for (int s = 0; s < slots_per_bucket_; ++s) {
      if (slots_[base + s] == 0) {
        slots_[base + s] = carried;
        ++count_;
        return true;
      }
    }
  }
  for (auto it = undo.rbegin(); it != undo.rend(); ++it) slots_[it->slot] = it->previous;
  return false;
}

bool CuckooFilter::contains(const Key32& item) const {
  auto [first, fp] = locate(item);
  return bucket_has(first, fp) || bucket_has(alternate(first, fp), fp);
}

bool CuckooFilter::remove(const Key32& item) {
  auto [first, fp] = locate(item);
  for (std::uint32_t bucket : {first, alternate(first, fp)}) {
    std::size_t base = static_cast<std::size_t>(bucket) * slots_per_bucket_;
    for (int s = 0; s < slots_per_bucket_; ++s) {
      if (slots_[base + s] == fp) {
        slots_[base + s] = 0;
        --count_;
        return true;
      }
    }
  }
  return false;
}

std::size_t CuckooFilter::count_occupied() const {
  return static_cast<std::size_t>(
      std::count_if(slots_.begin(), slots_.end(), [](std::uint32_t v) { return v != 0; }));
}

Bytes CuckooFilter::serialize() const {
  Bytes out;
  out.reserve(kHeaderSize + packed_size(bucket_count_, fingerprint_bits_, slots_per_bucket_));
  append(out, kMagic);
  out.push_back(kFormatVersion);
  out.push_back(static_cast<std::uint8_t>(fingerprint_bits_));
  out.push_back(static_cast<std::uint8_t>(slots_per_bucket_));
  append_le32(out, bucket_count_);

  std::size_t start = out.size();
  out.resize(start + packed_size(bucket_count_, fingerprint_bits_, slots_per_bucket_), 0);
  std::size_t bit = 0;
  for (std::uint32_t fp : slots_) {
    for (int b = 0; b < fingerprint_bits_; ++b, ++bit) {
      if ((fp >> b) & 1u) out[start + bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
    }
  }
  return out;
}

CuckooFilter CuckooFilter::deserialize(ByteView bytes) {
  if (bytes.size() < kHeaderSize) throw Error(ErrorCode::kCorruptLength, "filter header truncated");
  if (as_chars(bytes.first(4)) != kMagic || bytes[4] != kFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch, "unrecognised filter magic or version");
  }
  int fp_bits = bytes[5];
  int slots = bytes[6];
  std::uint32_t buckets = load_le32(bytes.data() + 7);
  if (fp_bits < 1 || fp_bits > 32 || slots < 1 || slots > 8) {
    throw Error(ErrorCode::kVersionMismatch, "unsupported filter geometry");
  }
  if (!std::has_single_bit(buckets) || buckets > (1u << 24)) {
    throw Error(ErrorCode::kCorruptLength, "bucket count must be a power of two up to 2^24");
  }
  std::size_t expected = kHeaderSize + packed_size(buckets, fp_bits, slots);
  if (bytes.size() != expected) {
    throw Error(ErrorCode::kCorruptLength, "filter payload length does not match geometry");
  }
  CuckooFilter filter(buckets, fp_bits, slots);
  std::size_t bit = 0;
  for (auto& fp : filter.slots_) {
    std::uint32_t v = 0;
    for (int b = 0; b < fp_bits; ++b, ++bit) {
      if ((bytes[kHeaderSize + bit / 8] >> (bit % 8)) & 1u) v |= (1u << b);
    }
    fp = v;
  }
  // trailing pad bits must be zero for the encoding to be canonical
  for (; bit % 8 != 0; ++bit) {
    if ((bytes[kHeaderSize + bit / 8] >> (bit % 8)) & 1u) {
      throw Error(ErrorCode::kCorruptLength, "non-zero padding bits in filter payload");
    }
  }
  filter.count_ = filter.count_occupied();
  return filter;
}

RevocationFilter RevocationFilter::setup(const Key32& master_key, const RevocationConfig& config) {
  if (config.max_revocations < 1) throw Error(ErrorCode::kInvalidArgument, "N must be at least 1");
  std::uint32_t buckets = CuckooFilter::buckets_for(config.max_revocations);
  for (int attempt = 0; attempt < 8; ++attempt, buckets <<= 1) {
    CuckooFilter filter(buckets);
    bool ok = true;
    for (std::uint64_t i = 0; i < config.max_revocations && ok; ++i) {
      ok = filter.insert(fictitious_entry(master_key, i));
    }
    if (ok) return RevocationFilter(std::move(filter), config);
  }
  throw Error(ErrorCode::kInsertionFailure, "could not place fictitious entries");
}

Key32 RevocationFilter::fictitious_entry(const Key32& master_key, std::uint64_t index) {
  Bytes msg(master_key.begin(), master_key.end());
  append(msg, "mfdpg/fict");
  append_le64(msg, index);
  Key32 out = crypto::sha256(msg);
  crypto::wipe(msg);
  return out;
}

RevocationFilter RevocationFilter::revoke(const Key32& master_key, const Key32& preimage) const {
  RevocationFilter next = *this;
  if (!next.filter_.insert(preimage)) {
    throw Error(ErrorCode::kInsertionFailure, "revocation filter insertion failed");
  }
  for (std::uint64_t i = 0; i < config_.max_revocations; ++i) {
    Key32 entry = fictitious_entry(master_key, i);
    if (next.filter_.contains(entry)) {
      next.filter_.remove(entry);
      return next;
    }
  }
  throw Error(ErrorCode::kRevocationCapacityExhausted, "no fictitious entries remain");
}

RevocationFilter RevocationFilter::deserialize(ByteView bytes, const RevocationConfig& config) {
  return RevocationFilter(CuckooFilter::deserialize(bytes), config);
}

}  // namespace mfdpg
