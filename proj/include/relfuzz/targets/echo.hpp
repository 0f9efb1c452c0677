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

// Negative control: parses nothing and covers one block for every input.

#ifndef RELFUZZ_TARGETS_ECHO_HPP_
#define RELFUZZ_TARGETS_ECHO_HPP_

#include <string>

#include "relfuzz/target.hpp"

namespace relfuzz::targets {

class Echo final : public ToyTarget {
 public:
  static constexpr Feature kEntry = 0;

  std::string_view name() const override { return "echo"; }
  CoverageSet execute(ByteSpan) const override { return {kEntry}; }

  Bytes seed() const override {
    const std::string_view text = "no metadata in here, just bytes\n";
    return Bytes(text.begin(), text.end());
  }
  std::vector<RelationField> ground_truth() const override { return {}; }
  std::vector<Checkpoint> checkpoints() const override { return {}; }
  std::vector<PayloadRegion> payload_regions() const override {
    return {{0, seed().size()}};
  }
  std::vector<std::optional<uint64_t>> size_signature(
      ByteSpan) const override {
    return {};
  }
  std::string feature_name(Feature) const override { return "entry"; }
};

}  // namespace relfuzz::targets

#endif  // RELFUZZ_TARGETS_ECHO_HPP_
