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

// A small coverage-guided loop: FIFO over the corpus, a fixed number of
// havoc trials per visit, set-coverage novelty. With relation inference on,
// each entry is analyzed once before its first trials and its mutants carry
// the relations through structured apply and commit. With it off, mutants
// are the raw op sequence and nothing is analyzed.

#ifndef RELFUZZ_CAMPAIGN_HPP_
#define RELFUZZ_CAMPAIGN_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "relfuzz/corpus.hpp"
#include "relfuzz/coverage.hpp"
#include "relfuzz/error.hpp"
#include "relfuzz/havoc.hpp"
#include "relfuzz/inference.hpp"
#include "relfuzz/rng.hpp"
#include "relfuzz/serialize.hpp"
#include "relfuzz/structured_mutation.hpp"
#include "relfuzz/target.hpp"

namespace relfuzz {

struct CampaignConfig {
  std::string target;  // recorded in stats.json only
  uint64_t rng_seed = 0;
  std::optional<uint64_t> max_execs;
  std::optional<double> max_seconds;
  bool frameshift = true;
  size_t trials_per_entry = 512;
  HavocConfig havoc;
  AnalysisConfig analysis;
  fs::path seeds_dir;  // empty: seeds are passed in
  fs::path out_dir;    // empty: nothing is written

  void validate() const {
    if (!max_execs && !max_seconds) {
      throw Error(ErrorCode::kConfigError,
                  "campaign needs an execution or a time budget");
    }
    if (max_seconds && !(*max_seconds > 0)) {
      throw Error(ErrorCode::kConfigError, "seconds must be positive");
    }
    if (trials_per_entry < 1) {
      throw Error(ErrorCode::kConfigError, "trials must be >= 1");
    }
    havoc.validate();
    analysis.validate();
  }
};

struct AnalysisCost {
  size_t entry = 0;
  size_t invocations = 0;
  size_t relations = 0;
  bool budget_exhausted = false;
  bool skipped = false;

  friend bool operator==(const AnalysisCost &, const AnalysisCost &) = default;
};

struct CampaignStats {
  uint64_t executions = 0;  // every target run, analysis included
  uint64_t analysis_invocations = 0;
  uint64_t mutants = 0;
  uint64_t fixups_fired = 0;  // mutants whose commit rewrote a field
  size_t corpus_size = 0;
  size_t feature_count = 0;
  std::vector<AnalysisCost> analysis_costs;

  friend bool operator==(const CampaignStats &, const CampaignStats &) =
      default;
};

struct CampaignResult {
  CampaignStats stats;
  std::vector<CorpusEntry> corpus;
};

inline Json to_json(const CampaignConfig &c) {
  Json j{{"target", c.target},
         {"rng_seed", c.rng_seed},
         {"execs", c.max_execs ? Json(*c.max_execs) : Json(nullptr)},
         {"seconds", c.max_seconds ? Json(*c.max_seconds) : Json(nullptr)},
         {"frameshift_enabled", c.frameshift},
         {"trials_per_entry", c.trials_per_entry},
         {"havoc", to_json(c.havoc)},
         {"analysis", to_json(c.analysis)},
         {"seeds_dir", c.seeds_dir.string()},
         {"out_dir", c.out_dir.string()}};
  return j;
}

inline Json to_json(const CampaignStats &s) {
  Json costs = Json::array();
  for (const AnalysisCost &c : s.analysis_costs) {
    costs.push_back(Json{{"entry", c.entry},
                         {"invocations", c.invocations},
                         {"relations", c.relations},
                         {"budget_exhausted", c.budget_exhausted},
                         {"skipped", c.skipped}});
  }
  return Json{{"executions", s.executions},
              {"analysis_invocations", s.analysis_invocations},
              {"mutants", s.mutants},
              {"fixups_fired", s.fixups_fired},
              {"corpus_size", s.corpus_size},
              {"feature_count", s.feature_count},
              {"analysis_costs", std::move(costs)}};
}

namespace internal {

// Union of all admitted coverage. Small ids live in a bitmap.
class FeatureUnion {
 public:
  // Adds `cov`; true if anything in it was new.
  bool merge(const CoverageSet &cov) {
    bool novel = false;
    for (Feature f : cov) {
      if (f < kDense) {
        if (f >= dense_.size()) dense_.resize(f + 1, 0);
        if (dense_[f] == 0) {
          dense_[f] = 1;
          novel = true;
          ++count_;
        }
      } else if (sparse_.insert(f).second) {
        novel = true;
        ++count_;
      }
    }
    return novel;
  }

  bool has_new(const CoverageSet &cov) const {
    for (Feature f : cov) {
      if (f < kDense ? (f >= dense_.size() || dense_[f] == 0)
                     : !sparse_.contains(f)) {
        return true;
      }
    }
    return false;
  }

  size_t size() const { return count_; }

 private:
  static constexpr Feature kDense = 1u << 20;
  std::vector<uint8_t> dense_;
  std::unordered_set<Feature> sparse_;
  size_t count_ = 0;
};

}  // namespace internal

template <Executor E>
class Campaign {
 public:
  Campaign(const E &target, const CampaignConfig &cfg)
      : target_(target), cfg_(cfg), rng_(cfg.rng_seed) {
    cfg_.validate();
  }

  // Seeds are admitted unconditionally, in order. No seeds: one empty input.
  CampaignResult run(std::vector<Bytes> seeds) {
    start_ = std::chrono::steady_clock::now();
    last_snapshot_ = start_;
    if (!cfg_.out_dir.empty()) {
      std::error_code ec;
      fs::create_directories(cfg_.out_dir / "corpus", ec);
      if (ec) {
        throw Error(ErrorCode::kIoError,
                    "cannot create " + (cfg_.out_dir / "corpus").string());
      }
    }
    if (seeds.empty()) seeds.emplace_back();
    for (Bytes &seed : seeds) {
      if (out_of_budget()) break;
      CoverageSet cov = execute(seed);
      admit(std::move(seed), std::move(cov), /*is_seed=*/true);
    }
    for (size_t visit = 0; !corpus_.empty() && !out_of_budget(); ++visit) {
      const size_t idx = visit % corpus_.size();
      if (cfg_.frameshift && !corpus_[idx].analyzed) analyze_entry(idx);
      for (size_t t = 0; t < cfg_.trials_per_entry && !out_of_budget(); ++t) {
        trial(idx);
      }
      maybe_snapshot();
    }
    write_stats();
    return {stats_, std::move(corpus_)};
  }

 private:
  bool out_of_budget() const {
    if (cfg_.max_execs && stats_.executions >= *cfg_.max_execs) return true;
    if (cfg_.max_seconds) {
      std::chrono::duration<double> spent =
          std::chrono::steady_clock::now() - start_;
      if (spent.count() >= *cfg_.max_seconds) return true;
    }
    return false;
  }

  CoverageSet execute(ByteSpan bytes) {
    ++stats_.executions;
    return CoverageSet(target_(bytes));
  }

  void admit(Bytes bytes, CoverageSet cov, bool is_seed) {
    union_.merge(cov);
    CorpusEntry e;
    e.id = corpus_.size();
    e.bytes = std::move(bytes);
    e.coverage = std::move(cov);
    e.discovery_exec = stats_.executions;
    e.seed = is_seed;
    corpus_.push_back(std::move(e));
    stats_.corpus_size = corpus_.size();
    stats_.feature_count = union_.size();
    persist(corpus_.back());
  }

  void analyze_entry(size_t idx) {
    CorpusEntry &e = corpus_[idx];
    e.analyzed = true;
    AnalysisConfig acfg = cfg_.analysis;
    if (cfg_.max_execs) {
      acfg.max_invocations = static_cast<size_t>(std::min<uint64_t>(
          acfg.max_invocations, *cfg_.max_execs - stats_.executions));
    }
    AnalysisCost cost;
    cost.entry = e.id;
    if (acfg.max_invocations == 0) return;
    size_t used = 0;
    auto counted = [&](ByteSpan in) {
      ++used;
      return CoverageSet(target_(in));
    };
    try {
      AnalysisReport report = analyze(ByteSpan(e.bytes), counted, acfg);
      e.relations = report.fields();
      cost.relations = e.relations.size();
      cost.budget_exhausted = report.budget_exhausted;
      cost.skipped = report.skipped;
    } catch (const Error &err) {
      // An input with no coverage has nothing to learn from.
      if (err.code() != ErrorCode::kNoBaselineCoverage &&
          err.code() != ErrorCode::kTargetError) {
        throw;
      }
    }
    cost.invocations = used;
    stats_.executions += used;
    stats_.analysis_invocations += used;
    stats_.analysis_costs.push_back(cost);
    persist(e);
  }

  void trial(size_t idx) {
    const CorpusEntry &parent = corpus_[idx];
    ByteSpan donor;
    if (corpus_.size() > 1) {
      size_t d = rng_.below(corpus_.size() - 1);
      if (d >= idx) ++d;
      donor = corpus_[d].bytes;
    }
    StructuredInput s{parent.bytes, {}, {}};
    if (cfg_.frameshift) s.relations = parent.relations;
    havoc(s, rng_, cfg_.havoc, donor);
    if (cfg_.frameshift) {
      bool changed = false;
      commit(s, &changed);
      if (changed) ++stats_.fixups_fired;
    }
    ++stats_.mutants;
    CoverageSet cov = execute(s.bytes);
    if (union_.has_new(cov)) admit(std::move(s.bytes), std::move(cov), false);
  }

  void persist(const CorpusEntry &e) {
    if (!cfg_.out_dir.empty()) save_entry(e, cfg_.out_dir / "corpus");
  }

  void maybe_snapshot() {
    auto now = std::chrono::steady_clock::now();
    if (now - last_snapshot_ >= std::chrono::seconds(5)) {
      last_snapshot_ = now;
      write_stats();
    }
  }

  void write_stats() const {
    if (cfg_.out_dir.empty()) return;
    Json j{{"config", to_json(cfg_)}, {"stats", to_json(stats_)}};
    write_text(cfg_.out_dir / "stats.json", j.dump(2) + "\n");
  }

  const E &target_;
  CampaignConfig cfg_;
  Rng rng_;
  CampaignStats stats_;
  std::vector<CorpusEntry> corpus_;
  internal::FeatureUnion union_;
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point last_snapshot_;
};

// Seeds come from cfg.seeds_dir when it is set.
template <Executor E>
CampaignResult run_campaign(const E &target, const CampaignConfig &cfg,
                            std::vector<Bytes> seeds = {}) {
  Campaign<E> campaign(target, cfg);
  if (!cfg.seeds_dir.empty()) seeds = load_seeds(cfg.seeds_dir);
  return campaign.run(std::move(seeds));
}

}  // namespace relfuzz

#endif  // RELFUZZ_CAMPAIGN_HPP_
