// Copyright 2026 The relfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Stacked havoc mutations in the AFL mould. Every edit is expressed as a
// MutationOp and routed through structured apply, so inputs that carry
// relations have them re-indexed; inputs without relations are edited raw.

#ifndef RELFUZZ_HAVOC_HPP_
#define RELFUZZ_HAVOC_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>

#include "relfuzz/error.hpp"
#include "relfuzz/relation.hpp"
#include "relfuzz/rng.hpp"
#include "relfuzz/structured_mutation.hpp"

namespace relfuzz {

struct HavocConfig {
  size_t min_depth = 1;
  size_t max_depth = 16;
  size_t max_len = 4096;  // inserts never grow an input past this

  void validate() const {
    if (min_depth < 1 || max_depth < min_depth) {
      throw Error(ErrorCode::kConfigError,
                  "havoc depth range must satisfy 1 <= min <= max");
    }
    if (max_len < 1) throw Error(ErrorCode::kConfigError, "max_len must be >= 1");
  }
};

enum class HavocKind {
  kBitflip,
  kByteSet,
  kArith,
  kInteresting,
  kBlockInsert,
  kBlockRemove,
  kBlockReplace,
};
inline constexpr size_t kHavocKinds = 7;
inline constexpr uint64_t kArithMax = 35;

namespace internal {

inline constexpr std::array<int64_t, 9> kInteresting8 = {-128, -1, 0,  1,  16,
                                                         32,   64, 100, 127};
inline constexpr std::array<int64_t, 10> kInteresting16 = {
    -32768, -129, 128, 255, 256, 512, 1000, 1024, 4096, 32767};
inline constexpr std::array<int64_t, 8> kInteresting32 = {
    -2147483648LL, -100663046, -32769, 32768, 65535, 65536, 100663045,
    2147483647};

inline uint64_t mask_for(size_t w) {
  return w >= 8 ? ~uint64_t{0} : (uint64_t{1} << (8 * w)) - 1;
}

inline size_t pick_width(Rng &rng, size_t len) {
  static constexpr std::array<size_t, 3> kWidths = {1, 2, 4};
  size_t w = kWidths[rng.below(kWidths.size())];
  while (w > len) w /= 2;
  return w;
}

inline Endianness pick_endianness(Rng &rng) {
  return rng.coin() ? Endianness::kBig : Endianness::kLittle;
}

inline Bytes encode(uint64_t v, size_t w, Endianness e) {
  Bytes out(w);
  write_field(out, 0, w, e, v & mask_for(w));
  return out;
}

// Mostly short blocks, occasionally longer ones.
inline size_t block_len(Rng &rng, size_t limit) {
  static constexpr std::array<size_t, 4> kCaps = {8, 8, 32, 128};
  return static_cast<size_t>(
      rng.between(1, std::min(limit, kCaps[rng.below(kCaps.size())])));
}

inline Bytes block_payload(Rng &rng, size_t n, ByteSpan self, ByteSpan donor) {
  Bytes out;
  out.reserve(n);
  const uint64_t source = rng.below(4);
  if (source == 3 && donor.empty()) return block_payload(rng, n, self, self);
  ByteSpan from = source == 3 ? donor : self;
  if ((source == 2 || source == 3) && !from.empty()) {
    const size_t take = std::min(n, from.size());
    const size_t at = rng.below(from.size() - take + 1);
    out.assign(from.begin() + static_cast<std::ptrdiff_t>(at),
               from.begin() + static_cast<std::ptrdiff_t>(at + take));
    while (out.size() < n) out.push_back(out[out.size() - take]);
    return out;
  }
  if (source == 1) {
    const uint8_t b = !self.empty() && rng.coin()
                          ? self[rng.below(self.size())]
                          : rng.byte();
    out.assign(n, b);
    return out;
  }
  for (size_t i = 0; i < n; ++i) out.push_back(rng.byte());
  return out;
}

}  // namespace internal

// One random edit of `bytes`, or nullopt when the drawn kind cannot apply
// (an empty input, a full-length input asked to grow, ...).
inline std::optional<MutationOp> draw_op(ByteSpan bytes, Rng &rng,
                                         const HavocConfig &cfg,
                                         ByteSpan donor = {}) {
  using namespace internal;
  const size_t len = bytes.size();
  const auto kind = static_cast<HavocKind>(rng.below(kHavocKinds));
  if (len == 0 && kind != HavocKind::kBlockInsert) return std::nullopt;
  switch (kind) {
    case HavocKind::kBitflip: {
      const size_t at = rng.below(len);
      const auto bit = static_cast<uint8_t>(1u << rng.below(8));
      return MutationOp::replace(at, Bytes{static_cast<uint8_t>(bytes[at] ^ bit)});
    }
    case HavocKind::kByteSet: {
      const size_t at = rng.below(len);
      return MutationOp::replace(at, Bytes{rng.byte()});
    }
    case HavocKind::kArith: {
      const size_t w = pick_width(rng, len);
      const size_t at = rng.below(len - w + 1);
      const Endianness e = pick_endianness(rng);
      const uint64_t delta = rng.between(1, kArithMax);
      const uint64_t v = read_field(bytes, at, w, e);
      return MutationOp::replace(
          at, encode(rng.coin() ? v + delta : v - delta, w, e));
    }
    case HavocKind::kInteresting: {
      const size_t w = pick_width(rng, len);
      const size_t at = rng.below(len - w + 1);
      int64_t v = 0;
      if (w == 1) {
        v = kInteresting8[rng.below(kInteresting8.size())];
      } else if (w == 2) {
        const uint64_t k = rng.below(kInteresting8.size() + kInteresting16.size());
        v = k < kInteresting8.size() ? kInteresting8[k]
                                     : kInteresting16[k - kInteresting8.size()];
      } else {
        const uint64_t k = rng.below(kInteresting16.size() + kInteresting32.size());
        v = k < kInteresting16.size() ? kInteresting16[k]
                                      : kInteresting32[k - kInteresting16.size()];
      }
      return MutationOp::replace(
          at, encode(static_cast<uint64_t>(v), w, pick_endianness(rng)));
    }
    case HavocKind::kBlockInsert: {
      if (len >= cfg.max_len) return std::nullopt;
      const size_t n = block_len(rng, cfg.max_len - len);
      const size_t at = rng.below(len + 1);
      return MutationOp::insert(at, block_payload(rng, n, bytes, donor));
    }
    case HavocKind::kBlockRemove: {
      if (len < 2) return std::nullopt;
      const size_t n = block_len(rng, len - 1);
      return MutationOp::remove(rng.below(len - n + 1), n);
    }
    case HavocKind::kBlockReplace: {
      const size_t n = block_len(rng, len);
      const size_t at = rng.below(len - n + 1);
      return MutationOp::replace(at, block_payload(rng, n, bytes, donor));
    }
  }
  return std::nullopt;
}

// Applies a stack of min_depth..max_depth ops. Ops that cannot apply are
// skipped, not redrawn. Returns how many were applied. Commit is the
// caller's job.
inline size_t havoc(StructuredInput &s, Rng &rng, const HavocConfig &cfg,
                    ByteSpan donor = {}) {
  const size_t depth = rng.between(cfg.min_depth, cfg.max_depth);
  size_t applied = 0;
  for (size_t i = 0; i < depth; ++i) {
    auto op = draw_op(s.bytes, rng, cfg, donor);
    if (!op) continue;
    apply(s, *op);
    ++applied;
  }
  return applied;
}

}  // namespace relfuzz

#endif  // RELFUZZ_HAVOC_HPP_
