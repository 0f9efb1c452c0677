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

// ELF-style object file: a header pointing at a section table that sits
// after the section data, each entry locating one blob by offset and size.
//
//   off  size  field
//   0    4     magic "OBJF"
//   4    2     entry_count   (BE)
//   6    4     table_offset  (BE)  check: table_offset + 8 * count <= len
//   T    8*n   entries { data_offset u32 BE, data_size u32 BE }
//                               check: data_offset + data_size <= len
//
// A passing entry is "loaded" only when its blob overlaps neither the header,
// the table nor another entry's blob; only loaded blobs contribute content
// features.
//
// Feature ids (entry index i capped at 3):
//   0 entry, 1 err_short_header, 2 err_magic, 3 magic_ok, 4 empty_table,
//   5 table_ok, 6 err_table, 7 table_in_header, 8..11 entry_pass(i),
//   12..15 entry_fail(i), 16..19 entry_empty(i), 20..23 entry_disjoint(i),
//   24..27 entry_overlap(i), 28..59 size bucket (i * 8 + min(size / 8, 7)),
//   60..443 content (i * 96 + j * 3 + byte class, j < 32),
//   444..448 entry count (capped at 4).

#ifndef RELFUZZ_TARGETS_OBJFILE_HPP_
#define RELFUZZ_TARGETS_OBJFILE_HPP_

#include <algorithm>
#include <array>
#include <cstring>
#include <string>

#include "relfuzz/target.hpp"

namespace relfuzz::targets {

class ObjFile final : public ToyTarget {
 public:
  enum : Feature {
    kEntry = 0,
    kErrShortHeader,
    kErrMagic,
    kMagicOk,
    kEmptyTable,
    kTableOk,
    kErrTable,
    kTableInHeader,
    kEntryPassBase,
    kEntryFailBase = kEntryPassBase + 4,
    kEntryEmptyBase = kEntryFailBase + 4,
    kEntryDisjointBase = kEntryEmptyBase + 4,
    kEntryOverlapBase = kEntryDisjointBase + 4,
    kBucketBase = kEntryOverlapBase + 4,
    kContentBase = kBucketBase + 4 * 8,
    kCountBase = kContentBase + 4 * 96,
    kFeatureCount = kCountBase + 5,
  };
  static constexpr size_t kHeaderLen = 10;
  static constexpr size_t kEntryLen = 8;
  static constexpr size_t kContentBytes = 32;
  // Entries beyond this many are still validated but not cross-checked.
  static constexpr size_t kOverlapWindow = 64;

  std::string_view name() const override { return "objfile"; }

  CoverageSet execute(ByteSpan in) const override {
    using internal::be;
    internal::FeatureSink out;
    out.add(kEntry);
    const size_t len = in.size();
    if (len < kHeaderLen) {
      out.add(kErrShortHeader);
      return std::move(out).finish();
    }
    if (std::memcmp(in.data(), "OBJF", 4) != 0) {
      out.add(kErrMagic);
      return std::move(out).finish();
    }
    out.add(kMagicOk);
    const uint64_t count = be(in, 4, 2);
    const uint64_t table = be(in, 6, 4);
    out.add(kCountBase + static_cast<Feature>(std::min<uint64_t>(count, 4)));
    if (count == 0) {
      out.add(kEmptyTable);
      return std::move(out).finish();
    }
    if (table > len || count * kEntryLen > len - table) {
      out.add(kErrTable);
      return std::move(out).finish();
    }
    out.add(kTableOk);
    if (table < kHeaderLen) out.add(kTableInHeader);

    struct Blob {
      uint64_t begin, end;
      bool live;
    };
    std::vector<Blob> blobs(count);
    for (size_t i = 0; i < count; ++i) {
      const uint64_t off = be(in, table + i * kEntryLen, 4);
      const uint64_t size = be(in, table + i * kEntryLen + 4, 4);
      blobs[i] = {off, off + size, off <= len && size <= len - off && size > 0};
    }
    auto overlaps = [](uint64_t b0, uint64_t e0, uint64_t b1, uint64_t e1) {
      return b0 < e1 && b1 < e0;
    };
    const uint64_t table_end = table + count * kEntryLen;
    for (size_t i = 0; i < count; ++i) {
      const Feature fi = static_cast<Feature>(std::min<size_t>(i, 3));
      const Blob &blob = blobs[i];
      if (!blob.live) {
        out.add(blob.begin <= len && blob.end - blob.begin <= len - blob.begin
                    ? kEntryEmptyBase + fi
                    : kEntryFailBase + fi);
        continue;
      }
      out.add(kEntryPassBase + fi);
      const uint64_t size = blob.end - blob.begin;
      out.add(kBucketBase + fi * 8 +
              static_cast<Feature>(std::min<uint64_t>(size / 8, 7)));
      bool disjoint = !overlaps(blob.begin, blob.end, 0, kHeaderLen) &&
                      !overlaps(blob.begin, blob.end, table, table_end);
      for (size_t j = 0; disjoint && j < std::min<size_t>(count, kOverlapWindow);
           ++j) {
        if (j != i && blobs[j].live &&
            overlaps(blob.begin, blob.end, blobs[j].begin, blobs[j].end)) {
          disjoint = false;
        }
      }
      if (!disjoint) {
        out.add(kEntryOverlapBase + fi);
        continue;
      }
      out.add(kEntryDisjointBase + fi);
      for (size_t j = 0; j < std::min<uint64_t>(size, kContentBytes); ++j) {
        out.add(kContentBase + fi * 96 + static_cast<Feature>(j) * 3 +
                internal::byte_class(in[blob.begin + j]));
      }
    }
    return std::move(out).finish();
  }

  Bytes seed() const override {
    using internal::put_be;
    using internal::put_str;
    Bytes out;
    put_str(out, "OBJF");
    put_be(out, 2, 2);
    put_be(out, 64, 4);
    out.resize(32, 0x00);  // alignment padding
    for (uint8_t i = 0; i < 12; ++i) out.push_back(0xc0 + i);
    for (uint8_t i = 0; i < 20; ++i) out.push_back(0xd0 + i);
    put_be(out, 32, 4);
    put_be(out, 12, 4);
    put_be(out, 44, 4);
    put_be(out, 20, 4);
    return out;
  }

  std::vector<RelationField> ground_truth() const override {
    return {
        make_relation(0, 64, 6, 4, Endianness::kBig),   // table_offset
        make_relation(0, 32, 64, 4, Endianness::kBig),  // entry 0 offset
        make_relation(32, 44, 68, 4, Endianness::kBig), // entry 0 size
        make_relation(0, 44, 72, 4, Endianness::kBig),  // entry 1 offset
        make_relation(44, 64, 76, 4, Endianness::kBig), // entry 1 size
    };
  }

  std::vector<Checkpoint> checkpoints() const override {
    return {{"table_ok", kTableOk, {0, 1}},
            {"entry0_loaded", kEntryDisjointBase + 0, {1, 2, 3}},
            {"entry1_loaded", kEntryDisjointBase + 1, {1, 4, 5}}};
  }

  std::vector<PayloadRegion> payload_regions() const override {
    return {{10, 32}, {32, 44}, {44, 64}};
  }

  // entry_count, table_offset, then offset/size of the first two entries.
  std::vector<std::optional<uint64_t>> size_signature(
      ByteSpan in) const override {
    using internal::be;
    std::vector<std::optional<uint64_t>> sig(6);
    if (in.size() < kHeaderLen) return sig;
    sig[0] = be(in, 4, 2);
    sig[1] = be(in, 6, 4);
    for (size_t i = 0; i < 2 && i < *sig[0]; ++i) {
      const uint64_t at = *sig[1] + i * kEntryLen;
      if (at > in.size() || in.size() - at < kEntryLen) break;
      sig[2 + 2 * i] = be(in, at, 4);
      sig[3 + 2 * i] = be(in, at + 4, 4);
    }
    return sig;
  }

  std::string feature_name(Feature f) const override {
    static constexpr std::array<std::string_view, kEntryPassBase> kNames = {
        "entry",    "err_short_header", "err_magic", "magic_ok",
        "empty_table", "table_ok",      "err_table", "table_in_header"};
    auto idx = [](Feature base, Feature v) { return std::to_string(v - base); };
    if (f < kEntryPassBase) return std::string(kNames[f]);
    if (f < kEntryFailBase) return "entry_pass_" + idx(kEntryPassBase, f);
    if (f < kEntryEmptyBase) return "entry_fail_" + idx(kEntryFailBase, f);
    if (f < kEntryDisjointBase) return "entry_empty_" + idx(kEntryEmptyBase, f);
    if (f < kEntryOverlapBase) {
      return "entry_disjoint_" + idx(kEntryDisjointBase, f);
    }
    if (f < kBucketBase) return "entry_overlap_" + idx(kEntryOverlapBase, f);
    if (f < kContentBase) {
      Feature k = f - kBucketBase;
      return "bucket_e" + std::to_string(k / 8) + "_" + std::to_string(k % 8);
    }
    if (f < kCountBase) {
      Feature k = f - kContentBase;
      return "content_e" + std::to_string(k / 96) + "_b" +
             std::to_string(k % 96 / 3) + "_c" + std::to_string(k % 3);
    }
    return "count_" + idx(kCountBase, f);
  }
};

}  // namespace relfuzz::targets

#endif  // RELFUZZ_TARGETS_OBJFILE_HPP_
