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

#ifndef RELFUZZ_RNG_HPP_
#define RELFUZZ_RNG_HPP_

#include <cstdint>
#include <random>

namespace relfuzz {

// mt19937_64 output is fixed by the standard; the distributions are not, so
// ranges are reduced by plain modulo to keep campaigns bit-reproducible
// across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }
  // Uniform-ish in [0, n). n must be > 0.
  uint64_t below(uint64_t n) { return engine_() % n; }
  // Inclusive range.
  uint64_t between(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }
  bool coin() { return (engine_() & 1) != 0; }
  uint8_t byte() { return static_cast<uint8_t>(engine_()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace relfuzz

#endif  // RELFUZZ_RNG_HPP_
