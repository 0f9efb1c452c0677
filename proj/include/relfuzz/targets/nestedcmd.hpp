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

// A TPM-style command packet with three nested size fields:
//
//   off  size  field
//   0    2     tag        == 0x8001
//   2    4     cmdSize    check 1: == total length
//   6    4     cmdCode    0x13c (PCR_Event) or 0x144
//   10   4     handle     unchecked
//   14   4     authSize   check 2: 9 <= authSize <= length - 18
//   18   n     authData   n = authSize
//   18+n 2     eventSize  check 3: == bytes remaining after it, and > 0
//   20+n m     data       m = eventSize
//
// All integers are big endian. Feature ids, in declaration order:
//   0 entry, 1 err_short_header, 2 tag_ok, 3 err_tag, 4 chk1_pass,
//   5 err_chk1, 6 code_pcr_event, 7 code_alt, 8 err_code, 9 chk2_pass,
//   10 err_chk2, 11 err_auth_short, 12 auth_session, 13 err_short_event,
//   14 chk3_pass, 15 err_chk3, 16 handler_pcr_event, 17 handler_alt,
//   18 err_empty_event, 19..34 event bucket floor(eventSize / 8), capped
//   at 15.

#ifndef RELFUZZ_TARGETS_NESTEDCMD_HPP_
#define RELFUZZ_TARGETS_NESTEDCMD_HPP_

#include <algorithm>
#include <array>
#include <string>

#include "relfuzz/target.hpp"

namespace relfuzz::targets {

class NestedCmd final : public ToyTarget {
 public:
  enum : Feature {
    kEntry = 0,
    kErrShortHeader,
    kTagOk,
    kErrTag,
    kChk1Pass,
    kErrChk1,
    kCodePcrEvent,
    kCodeAlt,
    kErrCode,
    kChk2Pass,
    kErrChk2,
    kErrAuthShort,
    kAuthSession,
    kErrShortEvent,
    kChk3Pass,
    kErrChk3,
    kHandlerPcrEvent,
    kHandlerAlt,
    kErrEmptyEvent,
    kBucketBase,
  };
  static constexpr size_t kBuckets = 16;
  static constexpr size_t kHeaderLen = 18;
  // Session handle, nonce size, attributes, hmac size.
  static constexpr size_t kMinAuth = 9;
  static constexpr uint32_t kPcrEvent = 0x13c;
  static constexpr uint32_t kAltCode = 0x144;

  std::string_view name() const override { return "nestedcmd"; }

  CoverageSet execute(ByteSpan in) const override {
    using internal::be;
    internal::FeatureSink out;
    out.add(kEntry);
    const size_t len = in.size();
    if (len < kHeaderLen) {
      out.add(kErrShortHeader);
      return std::move(out).finish();
    }
    if (be(in, 0, 2) != 0x8001) {
      out.add(kErrTag);
      return std::move(out).finish();
    }
    out.add(kTagOk);
    if (be(in, 2, 4) != len) {
      out.add(kErrChk1);
      return std::move(out).finish();
    }
    out.add(kChk1Pass);
    const uint64_t code = be(in, 6, 4);
    if (code == kPcrEvent) {
      out.add(kCodePcrEvent);
    } else if (code == kAltCode) {
      out.add(kCodeAlt);
    } else {
      out.add(kErrCode);
      return std::move(out).finish();
    }
    const uint64_t auth_size = be(in, 14, 4);
    if (auth_size > len - kHeaderLen) {
      out.add(kErrChk2);
      return std::move(out).finish();
    }
    if (auth_size < kMinAuth) {
      out.add(kErrAuthShort);
      return std::move(out).finish();
    }
    out.add(kChk2Pass);
    out.add(kAuthSession);
    const size_t event_at = kHeaderLen + auth_size;
    if (len - event_at < 2) {
      out.add(kErrShortEvent);
      return std::move(out).finish();
    }
    const uint64_t event_size = be(in, event_at, 2);
    if (event_size != len - event_at - 2) {
      out.add(kErrChk3);
      return std::move(out).finish();
    }
    if (event_size == 0) {
      out.add(kErrEmptyEvent);
      return std::move(out).finish();
    }
    out.add(kChk3Pass);
    out.add(code == kPcrEvent ? kHandlerPcrEvent : kHandlerAlt);
    out.add(kBucketBase +
            static_cast<Feature>(std::min<uint64_t>(event_size / 8,
                                                    kBuckets - 1)));
    return std::move(out).finish();
  }

  Bytes seed() const override {
    using internal::put_be;
    using internal::put_str;
    constexpr std::string_view kAuth = "AUTHTOKEN";
    constexpr std::string_view kEvent = "Hello World Event!";
    const size_t total = kHeaderLen + kAuth.size() + 2 + kEvent.size();
    Bytes out;
    put_be(out, 0x8001, 2);
    put_be(out, total, 4);
    put_be(out, kPcrEvent, 4);
    put_be(out, 0x40000007, 4);
    put_be(out, kAuth.size(), 4);
    put_str(out, kAuth);
    put_be(out, kEvent.size(), 2);
    put_str(out, kEvent);
    return out;
  }

  std::vector<RelationField> ground_truth() const override {
    // 47-byte seed: 9 bytes of auth data, 18 bytes of event data.
    return {
        make_relation(0, 47, 2, 4, Endianness::kBig),
        make_relation(18, 27, 14, 4, Endianness::kBig),
        make_relation(29, 47, 27, 2, Endianness::kBig),
    };
  }

  std::vector<Checkpoint> checkpoints() const override {
    return {{"chk1_pass", kChk1Pass, {0}},
            {"chk2_pass", kChk2Pass, {0, 1}},
            {"chk3_pass", kChk3Pass, {0, 1, 2}}};
  }

  std::vector<PayloadRegion> payload_regions() const override {
    return {{18, 27}, {29, 47}};
  }

  std::vector<std::optional<uint64_t>> size_signature(
      ByteSpan in) const override {
    using internal::be;
    std::vector<std::optional<uint64_t>> sig(3);
    if (in.size() < kHeaderLen) return sig;
    sig[0] = be(in, 2, 4);
    sig[1] = be(in, 14, 4);
    const size_t rest = in.size() - kHeaderLen;
    if (*sig[1] <= rest && rest - *sig[1] >= 2) {
      sig[2] = be(in, kHeaderLen + *sig[1], 2);
    }
    return sig;
  }

  std::string feature_name(Feature f) const override {
    static constexpr std::array<std::string_view, kBucketBase> kNames = {
        "entry",          "err_short_header", "tag_ok",
        "err_tag",        "chk1_pass",        "err_chk1",
        "code_pcr_event", "code_alt",         "err_code",
        "chk2_pass",      "err_chk2",         "err_auth_short",
        "auth_session",   "err_short_event",  "chk3_pass",
        "err_chk3",       "handler_pcr_event", "handler_alt",
        "err_empty_event"};
    if (f < kBucketBase) return std::string(kNames[f]);
    return "bucket_" + std::to_string(f - kBucketBase);
  }
};

}  // namespace relfuzz::targets

#endif  // RELFUZZ_TARGETS_NESTEDCMD_HPP_
