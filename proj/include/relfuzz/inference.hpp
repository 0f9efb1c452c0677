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

// Relation discovery by double mutants.
//
// Every (position, width, endianness) whose value could be a length of
// something in the input is a candidate. A candidate is probed by bumping its
// value: if that costs enough coverage, the probe may have frameshifted the
// parser. The probe is then answered by inserting exactly as many filler
// bytes as the value grew, at `start + v` for a handful of plausible span
// starts. If one of those insertions wins back enough of the lost coverage,
// the candidate is a relation whose span is [start, start + v).
//
// Plausible starts are 0 (offsets, whole-input sizes), p (sizes that count
// themselves), p + s (sizes that precede their data), and the p, a, b of
// every relation already known, which is how sizes whose data lives
// elsewhere get found. Known relations are fixed up during the restoring
// insertion, so discovery proceeds in rounds: a round only sees the
// relations known when it started, and candidates that failed are retried
// only after a round that found something new.

#ifndef RELFUZZ_INFERENCE_HPP_
#define RELFUZZ_INFERENCE_HPP_

#include <algorithm>
#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <vector>

#include "relfuzz/coverage.hpp"
#include "relfuzz/error.hpp"
#include "relfuzz/relation.hpp"
#include "relfuzz/structured_mutation.hpp"
#include "relfuzz/target.hpp"

namespace relfuzz {

struct AnalysisConfig {
  AnalysisThresholds thresholds;
  size_t max_invocations = 20000;
  size_t max_input_len = 4096;
  size_t max_rounds = 4;
  uint8_t filler = 0x00;

  void validate() const {
    thresholds.validate();
    if (max_invocations < 1) {
      throw Error(ErrorCode::kConfigError, "max_invocations must be >= 1");
    }
    if (max_rounds < 1) {
      throw Error(ErrorCode::kConfigError, "max_rounds must be >= 1");
    }
  }
};

struct CandidateField {
  size_t p = 0;
  uint8_t s = 1;
  Endianness e = Endianness::kBig;
  uint64_t v = 0;
  uint64_t delta = 0;

  friend bool operator==(const CandidateField &,
                         const CandidateField &) = default;
};

struct DiscoveredRelation {
  RelationField field;
  size_t round = 0;     // 1-based
  size_t lost = 0;      // features lost by the probe
  size_t restored = 0;  // of those, won back by the winning insertion
};

struct AnalysisReport {
  std::vector<DiscoveredRelation> relations;
  size_t invocations = 0;
  std::chrono::milliseconds elapsed{0};
  size_t rejected = 0;
  size_t rounds = 0;
  bool budget_exhausted = false;
  bool skipped = false;

  std::vector<RelationField> fields() const {
    std::vector<RelationField> out;
    out.reserve(relations.size());
    for (const auto &r : relations) out.push_back(r.field);
    return out;
  }
};

// Counts every execution against a fixed budget. Once the budget is spent
// the executor returns nullopt without running the target.
template <Executor E>
class BudgetedExecutor {
 public:
  BudgetedExecutor(const E &exec, size_t budget)
      : exec_(exec), budget_(budget) {}

  // Throws kTargetError if the target itself throws; the call still counts.
  std::optional<CoverageSet> operator()(ByteSpan input) {
    if (used_ >= budget_) {
      exhausted_ = true;
      return std::nullopt;
    }
    ++used_;
    try {
      return CoverageSet(exec_(input));
    } catch (const std::exception &e) {
      throw Error(ErrorCode::kTargetError, e.what());
    }
  }

  size_t used() const { return used_; }
  bool exhausted() const { return exhausted_; }

 private:
  const E &exec_;
  size_t budget_;
  size_t used_ = 0;
  bool exhausted_ = false;
};

inline constexpr std::array<uint8_t, 4> kCandidateWidths = {8, 4, 2, 1};

// The probe increment: 0xff for multi-byte fields so the low byte carries,
// and a step that stays inside the byte for single-byte fields.
inline uint64_t probe_delta(uint8_t s, uint64_t v) {
  if (s > 1) return 0xff;
  return std::min<uint64_t>(0x20, 0xff - v);
}

// Widest first, then by position, then big before little. Single-byte
// fields read the same either way and are emitted once, as big endian.
inline std::vector<CandidateField> scan_candidates(ByteSpan input,
                                                   const AnalysisConfig &) {
  std::vector<CandidateField> out;
  const size_t len = input.size();
  for (uint8_t s : kCandidateWidths) {
    if (s > len) continue;
    for (size_t p = 0; p + s <= len; ++p) {
      for (Endianness e : {Endianness::kBig, Endianness::kLittle}) {
        if (s == 1 && e == Endianness::kLittle) continue;
        const uint64_t v = read_field(input, p, s, e);
        if (v == 0 || v > len) continue;
        const uint64_t delta = probe_delta(s, v);
        if (delta == 0) continue;
        out.push_back({p, s, e, v, delta});
      }
    }
  }
  return out;
}

// I-minus: the input with the candidate's value bumped by delta. Written raw;
// no other field is touched.
inline Bytes build_probe(ByteSpan input, const CandidateField &c) {
  Bytes out(input.begin(), input.end());
  write_field(out, c.p, c.s, c.e, c.v + c.delta);
  return out;
}

// I-plus: `delta` filler bytes inserted at start + v, with the known relations
// carried along and re-serialized. A known field sharing bytes with the
// candidate is left alone; rewriting it would undo the probe.
inline Bytes build_restorer(ByteSpan probed, const CandidateField &c,
                            size_t start,
                            std::span<const RelationField> known,
                            uint8_t filler) {
  StructuredInput s{Bytes(probed.begin(), probed.end()), {}, {}};
  for (const RelationField &r : known) {
    if (r.p < c.p + c.s && c.p < r.p + r.s) continue;
    s.relations.push_back(r);
  }
  apply(s, MutationOp::insert(start + c.v, Bytes(c.delta, filler)));
  commit(s);
  return std::move(s.bytes);
}

// Span starts to try for one candidate, in priority order, duplicates removed.
inline std::vector<size_t> anchor_starts(const CandidateField &c,
                                         std::span<const RelationField> known) {
  std::vector<size_t> out;
  auto push = [&](size_t x) {
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  };
  push(c.p + c.s);
  push(c.p);
  push(0);
  for (const RelationField &r : known) {
    push(r.p);
    push(r.a);
    push(r.b);
  }
  return out;
}

enum class ProbeStatus { kDestructive, kNotDestructive, kTargetError,
                         kBudgetExceeded };

struct ProbeResult {
  ProbeStatus status;
  CoverageSet lost;
};

template <Executor E>
ProbeResult destructive_probe(ByteSpan input, const CoverageSet &baseline,
                              const CandidateField &c,
                              BudgetedExecutor<E> &exec,
                              const AnalysisConfig &cfg) {
  std::optional<CoverageSet> mutated;
  try {
    mutated = exec(build_probe(input, c));
  } catch (const Error &) {
    return {ProbeStatus::kTargetError, {}};
  }
  if (!mutated) return {ProbeStatus::kBudgetExceeded, {}};
  if (!is_destructive(baseline, *mutated, cfg.thresholds)) {
    return {ProbeStatus::kNotDestructive, {}};
  }
  return {ProbeStatus::kDestructive, lost_features(baseline, *mutated)};
}

struct InsertionResult {
  RelationField field;
  size_t restored = 0;
};

// Tries every anchor; the start whose insertion restores the most of `lost`
// wins, ties going to the earlier anchor. nullopt if none is restorative or
// the budget ran out first (check exec.exhausted()).
template <Executor E>
std::optional<InsertionResult> find_insertion_point(
    ByteSpan probed, const CandidateField &c, const CoverageSet &lost,
    std::span<const RelationField> known, BudgetedExecutor<E> &exec,
    const AnalysisConfig &cfg) {
  if (lost.empty()) throw Error(ErrorCode::kNothingToRestore);
  std::optional<InsertionResult> best;
  for (size_t start : anchor_starts(c, known)) {
    if (start + c.v > probed.size()) continue;
    std::optional<CoverageSet> cov;
    try {
      cov = exec(build_restorer(probed, c, start, known, cfg.filler));
    } catch (const Error &) {
      continue;
    }
    if (!cov) return std::nullopt;
    const size_t restored = intersection_size(*cov, lost);
    if (!is_restorative_lost(lost, *cov, cfg.thresholds)) continue;
    if (!best || restored > best->restored) {
      best = InsertionResult{
          RelationField{start, static_cast<size_t>(start + c.v), c.p, c.s, c.e},
          restored};
    }
  }
  return best;
}

namespace internal {

// A narrower reading of bytes that already belong to an accepted wider field.
inline bool nested_in_accepted(const CandidateField &c,
                               const std::vector<DiscoveredRelation> &accepted) {
  return std::any_of(accepted.begin(), accepted.end(),
                     [&](const DiscoveredRelation &d) {
                       const RelationField &r = d.field;
                       return r.s > c.s && r.p <= c.p && c.p + c.s <= r.p + r.s;
                     });
}

}  // namespace internal

template <Executor E>
AnalysisReport analyze(ByteSpan input, const E &exec,
                       const AnalysisConfig &cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  AnalysisReport report;
  auto finish = [&]() -> AnalysisReport {
    report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - t0);
    return std::move(report);
  };
  if (input.size() > cfg.max_input_len) {
    report.skipped = true;
    return finish();
  }

  BudgetedExecutor<E> budget(exec, cfg.max_invocations);
  std::optional<CoverageSet> baseline;
  try {
    baseline = budget(input);
  } catch (const Error &) {
    report.invocations = budget.used();
    throw;
  }
  if (!baseline || baseline->empty()) {
    throw Error(ErrorCode::kNoBaselineCoverage);
  }

  enum class State { kPending, kNotDestructive, kTargetError, kFailed,
                     kAccepted, kSkipped };
  const std::vector<CandidateField> candidates = scan_candidates(input, cfg);
  std::vector<State> state(candidates.size(), State::kPending);
  std::vector<CoverageSet> lost(candidates.size());
  std::vector<Bytes> probed(candidates.size());

  bool out_of_budget = false;
  for (size_t round = 1; round <= cfg.max_rounds && !out_of_budget; ++round) {
    const std::vector<RelationField> known = report.fields();
    bool grew = false;
    report.rounds = round;
    for (size_t i = 0; i < candidates.size() && !out_of_budget; ++i) {
      const CandidateField &c = candidates[i];
      if (state[i] != State::kPending && state[i] != State::kFailed) continue;
      if (internal::nested_in_accepted(c, report.relations)) {
        state[i] = State::kSkipped;
        continue;
      }
      if (state[i] == State::kPending) {
        ProbeResult probe = destructive_probe(input, *baseline, c, budget, cfg);
        if (probe.status == ProbeStatus::kBudgetExceeded) {
          out_of_budget = true;
          break;
        }
        if (probe.status == ProbeStatus::kTargetError) {
          state[i] = State::kTargetError;
          continue;
        }
        if (probe.status == ProbeStatus::kNotDestructive) {
          state[i] = State::kNotDestructive;
          continue;
        }
        lost[i] = std::move(probe.lost);
        probed[i] = build_probe(input, c);
      }
      auto found =
          find_insertion_point(probed[i], c, lost[i], known, budget, cfg);
      if (budget.exhausted()) {
        out_of_budget = true;
        break;
      }
      if (!found) {
        state[i] = State::kFailed;
        continue;
      }
      DiscoveredRelation d{found->field, round, lost[i].size(),
                           found->restored};
      // Same bytes read in the other byte order, same span: keep the one
      // that restored more, big endian on a tie.
      auto twin = std::find_if(
          report.relations.begin(), report.relations.end(),
          [&](const DiscoveredRelation &o) {
            return o.round == round && o.field.p == d.field.p &&
                   o.field.s == d.field.s && o.field.e != d.field.e &&
                   o.field.a == d.field.a && o.field.b == d.field.b;
          });
      state[i] = State::kAccepted;
      grew = true;
      if (twin == report.relations.end()) {
        report.relations.push_back(d);
      } else if (d.restored > twin->restored) {
        *twin = d;
      }
      probed[i].clear();
      probed[i].shrink_to_fit();
    }
    if (!grew) break;
  }

  for (State s : state) {
    if (s == State::kNotDestructive || s == State::kFailed) ++report.rejected;
  }
  report.invocations = budget.used();
  report.budget_exhausted = out_of_budget;
  return finish();
}

}  // namespace relfuzz

#endif  // RELFUZZ_INFERENCE_HPP_
