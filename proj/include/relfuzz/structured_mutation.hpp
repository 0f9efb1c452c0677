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

// Replace / Insert / Remove over an input that carries relation fields.
//
// The raw edit is applied to the bytes and every relation is re-indexed so
// that it keeps pointing at the same field and the same span. Nothing is
// written into the field bytes until commit(), which runs once, right before
// the mutant is executed. Relations an edit cannot be reconciled with (an
// insertion splitting the field, a removal eating into it, a span collapsing
// to nothing) are parked in `dropped` for the rest of the session.

#ifndef RELFUZZ_STRUCTURED_MUTATION_HPP_
#define RELFUZZ_STRUCTURED_MUTATION_HPP_

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "relfuzz/error.hpp"
#include "relfuzz/relation.hpp"

namespace relfuzz {

struct StructuredInput {
  Bytes bytes;
  std::vector<RelationField> relations;
  std::vector<RelationField> dropped;
};

struct MutationOp {
  enum class Kind { kReplace, kInsert, kRemove };

  Kind kind = Kind::kReplace;
  size_t index = 0;
  Bytes payload;     // replace / insert
  size_t count = 0;  // remove

  static MutationOp replace(size_t i, Bytes v) {
    return {Kind::kReplace, i, std::move(v), 0};
  }
  static MutationOp insert(size_t i, Bytes v) {
    return {Kind::kInsert, i, std::move(v), 0};
  }
  static MutationOp remove(size_t i, size_t n) {
    return {Kind::kRemove, i, {}, n};
  }
};

inline RelationField on_insert(RelationField r, size_t i, size_t v_len) {
  if (i <= r.p) r.p += v_len;
  if (i < r.a) r.a += v_len;
  if (i <= r.b) r.b += v_len;
  return r;
}

inline RelationField on_remove(RelationField r, size_t i, size_t n) {
  if (i <= r.p) r.p -= std::min(r.p - i, n);
  if (i <= r.a) r.a -= std::min(r.a - i, n);
  if (i <= r.b) r.b -= std::min(r.b - i, n);
  return r;
}

enum class Compatibility { kKeep, kDrop };

// `input_len` is the byte length before the op is applied.
inline Compatibility check_compatibility(const RelationField &r,
                                         const MutationOp &op,
                                         size_t input_len) {
  switch (op.kind) {
    case MutationOp::Kind::kReplace:
      return Compatibility::kKeep;
    case MutationOp::Kind::kInsert: {
      if (op.index > r.p && op.index < r.p + r.s) return Compatibility::kDrop;
      RelationField moved = on_insert(r, op.index, op.payload.size());
      return moved.fits(input_len + op.payload.size()) ? Compatibility::kKeep
                                                       : Compatibility::kDrop;
    }
    case MutationOp::Kind::kRemove: {
      if (op.count > 0 && op.index < r.p + r.s && r.p < op.index + op.count) {
        return Compatibility::kDrop;
      }
      if (op.count > input_len) return Compatibility::kDrop;
      RelationField moved = on_remove(r, op.index, op.count);
      return moved.fits(input_len - op.count) ? Compatibility::kKeep
                                              : Compatibility::kDrop;
    }
  }
  return Compatibility::kDrop;
}

inline bool op_in_bounds(const MutationOp &op, size_t len) {
  switch (op.kind) {
    case MutationOp::Kind::kReplace:
      return op.index <= len && op.payload.size() <= len - op.index;
    case MutationOp::Kind::kInsert:
      return op.index <= len;
    case MutationOp::Kind::kRemove:
      return op.index <= len && op.count <= len - op.index;
  }
  return false;
}

// Raw byte edit only.
inline void apply_raw(Bytes &bytes, const MutationOp &op) {
  if (!op_in_bounds(op, bytes.size())) {
    throw Error(ErrorCode::kInvalidOp,
                "index " + std::to_string(op.index) + " on length " +
                    std::to_string(bytes.size()));
  }
  auto at = bytes.begin() + static_cast<std::ptrdiff_t>(op.index);
  switch (op.kind) {
    case MutationOp::Kind::kReplace:
      std::copy(op.payload.begin(), op.payload.end(), at);
      break;
    case MutationOp::Kind::kInsert:
      bytes.insert(at, op.payload.begin(), op.payload.end());
      break;
    case MutationOp::Kind::kRemove:
      bytes.erase(at, at + static_cast<std::ptrdiff_t>(op.count));
      break;
  }
}

inline void apply(StructuredInput &s, const MutationOp &op) {
  const size_t len = s.bytes.size();
  apply_raw(s.bytes, op);
  if (op.kind == MutationOp::Kind::kReplace) return;

  std::vector<RelationField> kept;
  kept.reserve(s.relations.size());
  for (const RelationField &r : s.relations) {
    if (check_compatibility(r, op, len) == Compatibility::kDrop) {
      s.dropped.push_back(r);
    } else if (op.kind == MutationOp::Kind::kInsert) {
      kept.push_back(on_insert(r, op.index, op.payload.size()));
    } else {
      kept.push_back(on_remove(r, op.index, op.count));
    }
  }
  s.relations = std::move(kept);
}

// Writes b - a into every surviving field. A relation is dropped instead of
// written when its length does not fit in the field, or when its field bytes
// overlap a field already written in this commit (first writer wins).
// Returns the final bytes; `changed` reports whether any byte moved.
inline const Bytes &commit(StructuredInput &s, bool *changed = nullptr) {
  bool any_change = false;
  std::vector<RelationField> written;
  written.reserve(s.relations.size());
  for (const RelationField &r : s.relations) {
    bool collides = std::any_of(
        written.begin(), written.end(), [&](const RelationField &w) {
          return r.p < w.p + w.s && w.p < r.p + r.s;
        });
    if (collides || !r.fits(s.bytes.size()) ||
        !fits_width(r.span_length(), r.s)) {
      s.dropped.push_back(r);
      continue;
    }
    uint64_t want = r.span_length();
    if (read_field(s.bytes, r) != want) {
      write_field(s.bytes, r.p, r.s, r.e, want);
      any_change = true;
    }
    written.push_back(r);
  }
  s.relations = std::move(written);
  if (changed != nullptr) *changed = any_change;
  return s.bytes;
}

// Re-arms relations parked during the last session, if they still fit the
// current bytes; the rest are forgotten.
inline void restore_session(StructuredInput &s) {
  for (const RelationField &r : s.dropped) {
    if (r.fits(s.bytes.size()) &&
        std::find(s.relations.begin(), s.relations.end(), r) ==
            s.relations.end()) {
      s.relations.push_back(r);
    }
  }
  s.dropped.clear();
}

}  // namespace relfuzz

#endif  // RELFUZZ_STRUCTURED_MUTATION_HPP_
