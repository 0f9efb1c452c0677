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

// The executor contract: bytes in, coverage out. Executors must be
// deterministic, side-effect free and total. Anything callable that way works
// with the analysis and the fuzzing loop; `Target` is the runtime-polymorphic
// flavour used by the CLI.

#ifndef RELFUZZ_TARGET_HPP_
#define RELFUZZ_TARGET_HPP_

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relfuzz/coverage.hpp"
#include "relfuzz/relation.hpp"

namespace relfuzz {

template <typename E>
concept Executor = requires(const E &exec, ByteSpan input) {
  { exec(input) } -> std::convertible_to<CoverageSet>;
};

class Target {
 public:
  virtual ~Target() = default;
  virtual std::string_view name() const = 0;
  virtual CoverageSet execute(ByteSpan input) const = 0;

  CoverageSet operator()(ByteSpan input) const { return execute(input); }
};

// A named parser checkpoint whose feature marks a passed validation check.
// `governing` indexes into size_signature(): the size fields that must agree
// with the data for this check to pass.
struct Checkpoint {
  std::string name;
  Feature feature;
  std::vector<size_t> governing;
};

// Byte range [begin, end) of free-form payload in a seed.
struct PayloadRegion {
  size_t begin;
  size_t end;
};

// Targets whose format, seed and relation fields are known by construction.
class ToyTarget : public Target {
 public:
  virtual Bytes seed() const = 0;
  // Relation fields of seed(), in no particular order.
  virtual std::vector<RelationField> ground_truth() const = 0;
  virtual std::vector<Checkpoint> checkpoints() const = 0;
  virtual std::vector<PayloadRegion> payload_regions() const = 0;
  // Values of the format's size/offset fields as this target's parser sees
  // them, nullopt per field the parser never gets to.
  virtual std::vector<std::optional<uint64_t>> size_signature(
      ByteSpan input) const = 0;
  virtual std::string feature_name(Feature f) const = 0;
};

namespace internal {

// Collects features during one execution.
class FeatureSink {
 public:
  void add(Feature f) { features_.push_back(f); }
  CoverageSet finish() && { return CoverageSet(std::move(features_)); }

 private:
  std::vector<Feature> features_;
};

inline uint64_t be(ByteSpan in, size_t p, size_t s) {
  return read_field(in, p, s, Endianness::kBig);
}

inline void put_be(Bytes &out, uint64_t v, size_t s) {
  for (size_t k = 0; k < s; ++k) {
    out.push_back(static_cast<uint8_t>(v >> (8 * (s - 1 - k))));
  }
}

inline void put_str(Bytes &out, std::string_view s) {
  out.insert(out.end(), s.begin(), s.end());
}

// Coarse byte class used by content features: zero, low, high.
inline uint32_t byte_class(uint8_t b) {
  return b == 0 ? 0 : (b < 0x80 ? 1 : 2);
}

}  // namespace internal
}  // namespace relfuzz

#endif  // RELFUZZ_TARGET_HPP_
