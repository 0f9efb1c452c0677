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

// Coverage as a plain set of opaque feature ids, and the two predicates the
// relation analysis is built on:
//
//   destructive:  |orig - mutated|              >= t_loss    * |orig|
//   restorative:  |restored & (orig - mutated)| >= t_restore * |orig - mutated|
//
// Thresholds are rationals and both comparisons are done on integers by
// cross-multiplication, so the inclusive boundary is exact.

#ifndef RELFUZZ_COVERAGE_HPP_
#define RELFUZZ_COVERAGE_HPP_

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "relfuzz/error.hpp"

namespace relfuzz {

using Feature = uint32_t;

// Immutable-by-convention sorted set of features. Hit counts never make it in
// here; duplicates collapse on construction.
class CoverageSet {
 public:
  CoverageSet() = default;
  CoverageSet(std::initializer_list<Feature> features)
      : features_(features) {
    normalize();
  }
  explicit CoverageSet(std::vector<Feature> features)
      : features_(std::move(features)) {
    normalize();
  }

  size_t size() const noexcept { return features_.size(); }
  bool empty() const noexcept { return features_.empty(); }
  bool contains(Feature f) const {
    return std::binary_search(features_.begin(), features_.end(), f);
  }
  const std::vector<Feature> &features() const noexcept { return features_; }
  auto begin() const noexcept { return features_.begin(); }
  auto end() const noexcept { return features_.end(); }

  friend bool operator==(const CoverageSet &, const CoverageSet &) = default;

 private:
  void normalize() {
    std::sort(features_.begin(), features_.end());
    features_.erase(std::unique(features_.begin(), features_.end()),
                    features_.end());
  }

  std::vector<Feature> features_;
};

inline CoverageSet set_difference(const CoverageSet &a, const CoverageSet &b) {
  std::vector<Feature> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return CoverageSet(std::move(out));
}

inline size_t intersection_size(const CoverageSet &a, const CoverageSet &b) {
  size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

// A non-negative rational. Thresholds in (0, 1] are the only use.
struct Fraction {
  uint64_t num = 0;
  uint64_t den = 1;

  double value() const { return static_cast<double>(num) / den; }

  // Parses "0.05", "1", "1/20". Decimal input is converted exactly.
  static Fraction parse(std::string_view text) {
    auto fail = [&] {
      throw Error(ErrorCode::kConfigError,
                  "not a fraction: '" + std::string(text) + "'");
    };
    auto to_u64 = [&](std::string_view s) {
      uint64_t v = 0;
      if (s.empty()) fail();
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) fail();
      return v;
    };
    Fraction f;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      f = {to_u64(text.substr(0, slash)), to_u64(text.substr(slash + 1))};
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
      std::string_view whole = text.substr(0, dot);
      std::string_view frac = text.substr(dot + 1);
      if (frac.size() > 9) fail();
      uint64_t scale = 1;
      for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
      f = {(whole.empty() ? 0 : to_u64(whole)) * scale +
               (frac.empty() ? 0 : to_u64(frac)),
           scale};
    } else {
      f = {to_u64(text), 1};
    }
    if (f.den == 0) fail();
    uint64_t g = std::gcd(f.num, f.den);
    if (g > 1) {
      f.num /= g;
      f.den /= g;
    }
    return f;
  }

  std::string to_string() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend bool operator==(const Fraction &, const Fraction &) = default;
};

// count >= fraction * total, exactly.
inline bool meets(size_t count, Fraction fraction, size_t total) {
  return static_cast<unsigned __int128>(count) * fraction.den >=
         static_cast<unsigned __int128>(fraction.num) * total;
}

struct AnalysisThresholds {
  Fraction t_loss{1, 20};    // 0.05
  Fraction t_restore{1, 5};  // 0.2

  void validate() const {
    for (const Fraction &f : {t_loss, t_restore}) {
      if (f.num == 0 || f.num > f.den) {
        throw Error(ErrorCode::kConfigError,
                    "threshold must lie in (0, 1]: " + f.to_string());
      }
    }
  }
};

inline CoverageSet lost_features(const CoverageSet &orig,
                                 const CoverageSet &mutated) {
  return set_difference(orig, mutated);
}

// Throws kNoBaselineCoverage when `orig` is empty.
inline bool is_destructive(const CoverageSet &orig, const CoverageSet &mutated,
                           const AnalysisThresholds &th) {
  if (orig.empty()) throw Error(ErrorCode::kNoBaselineCoverage);
  return meets(lost_features(orig, mutated).size(), th.t_loss, orig.size());
}

inline size_t restored_amount(const CoverageSet &orig,
                              const CoverageSet &mutated,
                              const CoverageSet &restored) {
  return intersection_size(restored, lost_features(orig, mutated));
}

// Throws kNothingToRestore when `mutated` lost nothing.
inline bool is_restorative(const CoverageSet &orig, const CoverageSet &mutated,
                           const CoverageSet &restored,
                           const AnalysisThresholds &th) {
  CoverageSet lost = lost_features(orig, mutated);
  if (lost.empty()) throw Error(ErrorCode::kNothingToRestore);
  return meets(intersection_size(restored, lost), th.t_restore, lost.size());
}

// Same predicate when the lost set is already at hand.
inline bool is_restorative_lost(const CoverageSet &lost,
                                const CoverageSet &restored,
                                const AnalysisThresholds &th) {
  if (lost.empty()) throw Error(ErrorCode::kNothingToRestore);
  return meets(intersection_size(restored, lost), th.t_restore, lost.size());
}

}  // namespace relfuzz

#endif  // RELFUZZ_COVERAGE_HPP_
