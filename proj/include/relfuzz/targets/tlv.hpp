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

// DER-style type-length-value tree.
//
//   node   := type u8, length, value[length]
//   length := u8 < 0x80                       (short form)
//           | 0x80 + k, k-byte BE value, k<=2 (long form)
//
// Type 0x30 is a sequence whose value is a list of child nodes that must
// exactly fill it. 0x04 (octet string), 0x03 (bit string) and 0x13
// (printable string) are leaves. Any other type is an error. The shipped
// seed uses the two-byte long form throughout, so its length fields are
// recovered through their low-order bytes.
//
// Feature ids: 0 entry, 1 err_empty, 2 err_trunc_len, 3 err_bad_len_form,
// 4 err_trunc_value, 5 err_unknown_type, 6 err_depth, 7 trailing_garbage,
// 8 parse_ok, 9 long_form_len, 10..13 seq_open(depth), 14..17 seq_ok(depth),
// 18..20 leaf kind, 21..44 leaf length bucket (kind * 8 + min(len / 4, 7)),
// 45..116 leaf content (kind * 24 + j * 3 + byte class, j < 8),
// 117..148 child index (depth * 8 + min(index, 7)).

#ifndef RELFUZZ_TARGETS_TLV_HPP_
#define RELFUZZ_TARGETS_TLV_HPP_

#include <algorithm>
#include <array>
#include <optional>
#include <string>

#include "relfuzz/target.hpp"

namespace relfuzz::targets {

class Tlv final : public ToyTarget {
 public:
  enum : Feature {
    kEntry = 0,
    kErrEmpty,
    kErrTruncLen,
    kErrBadLenForm,
    kErrTruncValue,
    kErrUnknownType,
    kErrDepth,
    kTrailingGarbage,
    kParseOk,
    kLongFormLen,
    kSeqOpenBase,
    kSeqOkBase = kSeqOpenBase + 4,
    kLeafBase = kSeqOkBase + 4,
    kLeafBucketBase = kLeafBase + 3,
    kLeafContentBase = kLeafBucketBase + 3 * 8,
    kChildIndexBase = kLeafContentBase + 3 * 24,
    kFeatureCount = kChildIndexBase + 4 * 8,
  };
  static constexpr uint8_t kSequence = 0x30;
  static constexpr uint8_t kOctetString = 0x04;
  static constexpr uint8_t kBitString = 0x03;
  static constexpr uint8_t kPrintable = 0x13;
  static constexpr size_t kMaxDepth = 4;

  std::string_view name() const override { return "tlv"; }

  CoverageSet execute(ByteSpan in) const override {
    internal::FeatureSink out;
    out.add(kEntry);
    if (in.empty()) {
      out.add(kErrEmpty);
      return std::move(out).finish();
    }
    if (auto end = parse_node(in, 0, in.size(), 0, out)) {
      out.add(kParseOk);
      if (*end < in.size()) out.add(kTrailingGarbage);
    }
    return std::move(out).finish();
  }

  Bytes seed() const override {
    using internal::put_be;
    using internal::put_str;
    auto node = [](Bytes &out, uint8_t type, const Bytes &value) {
      out.push_back(type);
      out.push_back(0x82);
      put_be(out, value.size(), 2);
      out.insert(out.end(), value.begin(), value.end());
    };
    Bytes children;
    node(children, kOctetString, {9, 9, 9});
    node(children, kBitString, {0, 1, 2, 3, 4});
    node(children, kPrintable, {'f', 'u', 'z', 'z', 'e', 'r'});
    Bytes out;
    node(out, kSequence, children);
    return out;
  }

  std::vector<RelationField> ground_truth() const override {
    return {
        make_relation(4, 30, 2, 2, Endianness::kBig),
        make_relation(8, 11, 6, 2, Endianness::kBig),
        make_relation(15, 20, 13, 2, Endianness::kBig),
        make_relation(24, 30, 22, 2, Endianness::kBig),
    };
  }

  std::vector<Checkpoint> checkpoints() const override {
    return {{"octet_parsed", kLeafBase + 0, {0, 1}},
            {"bitstr_parsed", kLeafBase + 1, {0, 1, 2}},
            {"printable_parsed", kLeafBase + 2, {0, 1, 2, 3}},
            {"seq_ok", kSeqOkBase + 0, {0, 1, 2, 3}},
            {"parse_ok", kParseOk, {0, 1, 2, 3}}};
  }

  std::vector<PayloadRegion> payload_regions() const override {
    return {{8, 11}, {15, 20}, {24, 30}};
  }

  // Root length, then the lengths of up to three top-level children.
  std::vector<std::optional<uint64_t>> size_signature(
      ByteSpan in) const override {
    std::vector<std::optional<uint64_t>> sig(4);
    auto root = read_header(in, 0, in.size());
    if (!root) return sig;
    sig[0] = root->length;
    if (root->value_at + root->length > in.size()) return sig;
    size_t pos = root->value_at;
    const size_t end = root->value_at + root->length;
    for (size_t i = 1; i < sig.size() && pos < end; ++i) {
      auto child = read_header(in, pos, end);
      if (!child) break;
      sig[i] = child->length;
      if (child->length > end - child->value_at) break;
      pos = child->value_at + child->length;
    }
    return sig;
  }

  std::string feature_name(Feature f) const override {
    static constexpr std::array<std::string_view, kSeqOpenBase> kNames = {
        "entry",           "err_empty",    "err_trunc_len",
        "err_bad_len_form", "err_trunc_value", "err_unknown_type",
        "err_depth",       "trailing_garbage", "parse_ok",
        "long_form_len"};
    static constexpr std::array<std::string_view, 3> kKinds = {
        "octet", "bitstr", "printable"};
    if (f < kSeqOpenBase) return std::string(kNames[f]);
    if (f < kSeqOkBase) return "seq_open_" + std::to_string(f - kSeqOpenBase);
    if (f < kLeafBase) return "seq_ok_" + std::to_string(f - kSeqOkBase);
    if (f < kLeafBucketBase) return "leaf_" + std::string(kKinds[f - kLeafBase]);
    if (f < kLeafContentBase) {
      Feature k = f - kLeafBucketBase;
      return std::string(kKinds[k / 8]) + "_bucket_" + std::to_string(k % 8);
    }
    if (f < kChildIndexBase) {
      Feature k = f - kLeafContentBase;
      return std::string(kKinds[k / 24]) + "_byte" +
             std::to_string(k % 24 / 3) + "_class" + std::to_string(k % 3);
    }
    Feature k = f - kChildIndexBase;
    return "child_d" + std::to_string(k / 8) + "_i" + std::to_string(k % 8);
  }

 private:
  struct Header {
    uint8_t type;
    uint64_t length;
    size_t value_at;
    bool long_form;
  };

  enum class HeaderError { kTruncLen, kBadLenForm };

  // Reads type and length at `pos`; the value itself is not bounds-checked.
  static std::optional<Header> read_header(ByteSpan in, size_t pos,
                                           size_t limit,
                                           HeaderError *error = nullptr) {
    auto fail = [&](HeaderError e) -> std::optional<Header> {
      if (error != nullptr) *error = e;
      return std::nullopt;
    };
    if (limit - pos < 2) return fail(HeaderError::kTruncLen);
    Header h{in[pos], 0, pos + 2, false};
    const uint8_t first = in[pos + 1];
    if (first < 0x80) {
      h.length = first;
      return h;
    }
    const size_t k = first - 0x80;
    if (k == 0 || k > 2) return fail(HeaderError::kBadLenForm);
    if (limit - h.value_at < k) return fail(HeaderError::kTruncLen);
    h.length = internal::be(in, h.value_at, k);
    h.value_at += k;
    h.long_form = true;
    return h;
  }

  static std::optional<size_t> parse_node(ByteSpan in, size_t pos,
                                          size_t limit, size_t depth,
                                          internal::FeatureSink &out) {
    HeaderError error{};
    auto h = read_header(in, pos, limit, &error);
    if (!h) {
      out.add(error == HeaderError::kTruncLen ? kErrTruncLen : kErrBadLenForm);
      return std::nullopt;
    }
    if (h->long_form) out.add(kLongFormLen);
    if (h->length > limit - h->value_at) {
      out.add(kErrTruncValue);
      return std::nullopt;
    }
    const size_t end = h->value_at + h->length;
    switch (h->type) {
      case kSequence: {
        if (depth >= kMaxDepth) {
          out.add(kErrDepth);
          return std::nullopt;
        }
        out.add(kSeqOpenBase + static_cast<Feature>(depth));
        size_t cur = h->value_at;
        for (size_t index = 0; cur < end; ++index) {
          out.add(kChildIndexBase +
                  static_cast<Feature>(depth * 8 + std::min<size_t>(index, 7)));
          auto next = parse_node(in, cur, end, depth + 1, out);
          if (!next) return std::nullopt;
          cur = *next;
        }
        out.add(kSeqOkBase + static_cast<Feature>(depth));
        return end;
      }
      case kOctetString:
      case kBitString:
      case kPrintable: {
        const Feature kind =
            h->type == kOctetString ? 0 : (h->type == kBitString ? 1 : 2);
        out.add(kLeafBase + kind);
        out.add(kLeafBucketBase + kind * 8 +
                static_cast<Feature>(std::min<uint64_t>(h->length / 4, 7)));
        for (size_t j = 0; j < std::min<uint64_t>(h->length, 8); ++j) {
          out.add(kLeafContentBase + kind * 24 + static_cast<Feature>(j) * 3 +
                  internal::byte_class(in[h->value_at + j]));
        }
        return end;
      }
      default:
        out.add(kErrUnknownType);
        return std::nullopt;
    }
  }
};

}  // namespace relfuzz::targets

#endif  // RELFUZZ_TARGETS_TLV_HPP_
