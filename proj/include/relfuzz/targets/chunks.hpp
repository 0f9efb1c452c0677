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

// PNG-style chunk stream:
//
//   "CHNK" { size u32 BE, type[4], data[size] }*
//
// FIXD chunks must have size 8; anything else aborts the parse, exactly like
// a fixed-size header chunk that cannot be resized. VARD chunks take any
// size. "END\0" stops the parse; trailing bytes are ignored. An unknown type
// is fatal.
//
// Feature ids: 0 entry, 1 err_short_magic, 2 err_magic, 3 magic_ok,
// 4 err_trunc_header, 5 err_trunc_data, 6 type_fixd, 7 fixd_pass,
// 8 fixd_abort, 9 type_vard, 10 type_end, 11 type_unknown,
// 12 eof_without_end, 13..20 chunk index (cap 7),
// 21..28 VARD bucket floor(size / 16) (cap 7).

#ifndef RELFUZZ_TARGETS_CHUNKS_HPP_
#define RELFUZZ_TARGETS_CHUNKS_HPP_

#include <algorithm>
#include <array>
#include <cstring>
#include <string>

#include "relfuzz/target.hpp"

namespace relfuzz::targets {

class Chunks final : public ToyTarget {
 public:
  enum : Feature {
    kEntry = 0,
    kErrShortMagic,
    kErrMagic,
    kMagicOk,
    kErrTruncHeader,
    kErrTruncData,
    kTypeFixd,
    kFixdPass,
    kFixdAbort,
    kTypeVard,
    kTypeEnd,
    kTypeUnknown,
    kEofWithoutEnd,
    kChunkIndexBase,
    kVardBucketBase = kChunkIndexBase + 8,
    kFeatureCount = kVardBucketBase + 8,
  };
  static constexpr size_t kFixedSize = 8;

  std::string_view name() const override { return "chunks"; }

  CoverageSet execute(ByteSpan in) const override {
    using internal::be;
    internal::FeatureSink out;
    out.add(kEntry);
    const size_t len = in.size();
    if (len < 4) {
      out.add(kErrShortMagic);
      return std::move(out).finish();
    }
    if (!has_tag(in, 0, "CHNK")) {
      out.add(kErrMagic);
      return std::move(out).finish();
    }
    out.add(kMagicOk);
    size_t pos = 4;
    for (size_t index = 0;; ++index) {
      if (pos == len) {
        out.add(kEofWithoutEnd);
        break;
      }
      if (len - pos < 8) {
        out.add(kErrTruncHeader);
        break;
      }
      const uint64_t size = be(in, pos, 4);
      out.add(kChunkIndexBase + static_cast<Feature>(std::min<size_t>(index, 7)));
      // Fixed-size chunks are rejected on their declared size alone.
      if (has_tag(in, pos + 4, "FIXD")) {
        out.add(kTypeFixd);
        if (size != kFixedSize) {
          out.add(kFixdAbort);
          break;
        }
      }
      if (size > len - pos - 8) {
        out.add(kErrTruncData);
        break;
      }
      if (has_tag(in, pos + 4, "FIXD")) {
        out.add(kFixdPass);
      } else if (has_tag(in, pos + 4, "VARD")) {
        out.add(kTypeVard);
        out.add(kVardBucketBase +
                static_cast<Feature>(std::min<uint64_t>(size / 16, 7)));
      } else if (has_tag(in, pos + 4, std::string_view("END\0", 4))) {
        out.add(kTypeEnd);
        break;
      } else {
        out.add(kTypeUnknown);
        break;
      }
      pos += 8 + size;
    }
    return std::move(out).finish();
  }

  Bytes seed() const override {
    using internal::put_be;
    using internal::put_str;
    Bytes out;
    put_str(out, "CHNK");
    put_be(out, kFixedSize, 4);
    put_str(out, "FIXD");
    for (uint8_t i = 0; i < kFixedSize; ++i) out.push_back(0xf0 + i);
    put_be(out, 20, 4);
    put_str(out, "VARD");
    for (uint8_t i = 0; i < 20; ++i) out.push_back(0xa0 + i);
    put_be(out, 0, 4);
    put_str(out, std::string_view("END\0", 4));
    return out;
  }

  std::vector<RelationField> ground_truth() const override {
    // The span starts right after the size field, so it covers the type tag
    // and stops 4 bytes short of the data's end.
    return {make_relation(24, 44, 20, 4, Endianness::kBig)};
  }

  std::vector<Checkpoint> checkpoints() const override {
    return {{"fixd_pass", kFixdPass, {0}},
            {"vard_parsed", kTypeVard, {0, 1}},
            {"end_reached", kTypeEnd, {0, 1, 2}}};
  }

  std::vector<PayloadRegion> payload_regions() const override {
    return {{12, 20}, {28, 48}};
  }

  // Sizes of the first three chunks.
  std::vector<std::optional<uint64_t>> size_signature(
      ByteSpan in) const override {
    std::vector<std::optional<uint64_t>> sig(3);
    if (in.size() < 4 || !has_tag(in, 0, "CHNK")) return sig;
    size_t pos = 4;
    for (auto &slot : sig) {
      if (in.size() - pos < 8) break;
      const uint64_t size = internal::be(in, pos, 4);
      slot = size;
      if (size > in.size() - pos - 8) break;
      pos += 8 + size;
    }
    return sig;
  }

  std::string feature_name(Feature f) const override {
    static constexpr std::array<std::string_view, kChunkIndexBase> kNames = {
        "entry",     "err_short_magic", "err_magic",      "magic_ok",
        "err_trunc_header", "err_trunc_data", "type_fixd", "fixd_pass",
        "fixd_abort", "type_vard",     "type_end",       "type_unknown",
        "eof_without_end"};
    if (f < kChunkIndexBase) return std::string(kNames[f]);
    if (f < kVardBucketBase) {
      return "chunk_index_" + std::to_string(f - kChunkIndexBase);
    }
    return "vard_bucket_" + std::to_string(f - kVardBucketBase);
  }

 private:
  static bool has_tag(ByteSpan in, size_t at, std::string_view tag) {
    return at + tag.size() <= in.size() &&
           std::memcmp(in.data() + at, tag.data(), tag.size()) == 0;
  }
};

}  // namespace relfuzz::targets

#endif  // RELFUZZ_TARGETS_CHUNKS_HPP_
