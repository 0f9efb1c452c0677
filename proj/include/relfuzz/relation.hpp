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

// A relation field ties an unsigned integer serialized at [p, p+s) to the
// length of the input span [a, b). Size fields and offset fields are the same
// thing here: an offset is a size whose span starts at 0.

#ifndef RELFUZZ_RELATION_HPP_
#define RELFUZZ_RELATION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relfuzz/error.hpp"

namespace relfuzz {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;

enum class Endianness : uint8_t { kBig, kLittle };

constexpr std::string_view to_string(Endianness e) {
  return e == Endianness::kBig ? "big" : "little";
}

inline Endianness parse_endianness(std::string_view s) {
  if (s == "big") return Endianness::kBig;
  if (s == "little") return Endianness::kLittle;
  throw Error(ErrorCode::kInvalidRelation,
              "bad endianness '" + std::string(s) + "'");
}

constexpr bool is_valid_width(size_t s) {
  return s == 1 || s == 2 || s == 4 || s == 8;
}

struct RelationField {
  size_t a = 0;  // span start, inclusive
  size_t b = 0;  // span end, exclusive
  size_t p = 0;  // first byte of the serialized field
  uint8_t s = 1;
  Endianness e = Endianness::kBig;

  uint64_t span_length() const { return b - a; }
  size_t field_end() const { return p + s; }

  bool fits(size_t input_len) const {
    return a < b && b <= input_len && p + s <= input_len;
  }

  friend bool operator==(const RelationField &,
                         const RelationField &) = default;
};

// Checked construction; bookkeeping code works on the aggregate directly
// because intermediate states may be transiently invalid.
inline RelationField make_relation(size_t a, size_t b, size_t p, size_t s,
                                   Endianness e) {
  if (a >= b) {
    throw Error(ErrorCode::kInvalidRelation,
                "span start must precede end: a=" + std::to_string(a) +
                    " b=" + std::to_string(b));
  }
  if (!is_valid_width(s)) {
    throw Error(ErrorCode::kInvalidRelation,
                "field width must be 1, 2, 4 or 8: " + std::to_string(s));
  }
  return RelationField{a, b, p, static_cast<uint8_t>(s), e};
}

inline uint64_t read_field(ByteSpan input, size_t p, size_t s, Endianness e) {
  if (!is_valid_width(s) || p > input.size() || s > input.size() - p) {
    throw Error(ErrorCode::kFieldOutOfRange);
  }
  uint64_t v = 0;
  for (size_t k = 0; k < s; ++k) {
    size_t idx = e == Endianness::kBig ? p + k : p + s - 1 - k;
    v = (v << 8) | input[idx];
  }
  return v;
}

constexpr bool fits_width(uint64_t v, size_t s) {
  return s >= 8 || v < (uint64_t{1} << (8 * s));
}

inline void write_field(std::span<uint8_t> input, size_t p, size_t s,
                        Endianness e, uint64_t v) {
  if (!is_valid_width(s) || p > input.size() || s > input.size() - p) {
    throw Error(ErrorCode::kFieldOutOfRange);
  }
  if (!fits_width(v, s)) throw Error(ErrorCode::kValueOverflow);
  for (size_t k = 0; k < s; ++k) {
    size_t idx = e == Endianness::kBig ? p + s - 1 - k : p + k;
    input[idx] = static_cast<uint8_t>(v & 0xff);
    v >>= 8;
  }
}

inline uint64_t read_field(ByteSpan input, const RelationField &r) {
  return read_field(input, r.p, r.s, r.e);
}

enum class RelationForm {
  kOffsetA,
  kSizePostB,
  kSizeInclusiveC,
  kSizeIndirectD,
  kSizeTotalE,
};

constexpr std::string_view to_string(RelationForm f) {
  switch (f) {
    case RelationForm::kOffsetA: return "A";
    case RelationForm::kSizePostB: return "B";
    case RelationForm::kSizeInclusiveC: return "C";
    case RelationForm::kSizeIndirectD: return "D";
    case RelationForm::kSizeTotalE: return "E";
  }
  return "?";
}

// Diagnostic only: overlapping shapes resolve E, B, C, A, then D.
inline RelationForm classify_form(const RelationField &r, size_t input_len) {
  if (r.a == 0 && r.b == input_len) return RelationForm::kSizeTotalE;
  if (r.a == r.p + r.s) return RelationForm::kSizePostB;
  if (r.a != 0 && r.a <= r.p && r.p + r.s <= r.b) {
    return RelationForm::kSizeInclusiveC;
  }
  if (r.a == 0) return RelationForm::kOffsetA;
  return RelationForm::kSizeIndirectD;
}

}  // namespace relfuzz

#endif  // RELFUZZ_RELATION_HPP_
