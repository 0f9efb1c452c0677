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


// Acceptance runner: one PASS/FAIL line per criterion, exit 1 if any fail.
// Pass a list of criterion numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "relfuzz/campaign.hpp"
#include "relfuzz/cli.hpp"
#include "relfuzz/inference.hpp"
#include "relfuzz/report.hpp"
#include "relfuzz/targets/registry.hpp"
#include "toy_checks.hpp"

namespace relfuzz {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string &why) {
    if (pass) detail = why;
    pass = false;
  }
};

// ---- 1: predicate fidelity ----

Verdict formula_fidelity() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 gen(20260101);
  size_t cases = 0, boundary = 0, mismatches = 0;
  auto one = [&](const std::vector<Feature> &o, const std::vector<Feature> &m,
                 const std::vector<Feature> &r, Fraction tl, Fraction tr) {
    const CoverageSet co(o), cm(m), cr(r);
    const auto want = oracle::set_verdict(oracle::to_set(co),
                                          oracle::to_set(cm),
                                          oracle::to_set(cr), tl, tr);
    const AnalysisThresholds th{tl, tr};
    bool ok = is_destructive(co, cm, th) == want.destructive &&
              restored_amount(co, cm, cr) == want.restored &&
              lost_features(co, cm) ==
                  CoverageSet(std::vector<Feature>(want.lost.begin(),
                                                   want.lost.end()));
    if (!want.lost.empty()) {
      ok = ok && is_restorative(co, cm, cr, th) == want.restorative;
    }
    ++cases;
    if (!ok) ++mismatches;
  };
  // Random sets and thresholds.
  for (int i = 0; i < 10000; ++i) {
    const Feature universe = 1 + static_cast<Feature>(gen() % 200);
    std::vector<Feature> o, m, r;
    const uint64_t po = 1 + gen() % 9, pm = gen() % 10, pr = gen() % 10;
    for (Feature f = 0; f < universe; ++f) {
      if (gen() % 10 < po) o.push_back(f * 7 + 3);
      if (gen() % 10 < pm) m.push_back(f * 7 + 3);
      if (gen() % 10 < pr) r.push_back(f * 7 + 3);
    }
    if (o.empty()) o.push_back(3);
    const uint64_t dl = 1 + gen() % 100, dr = 1 + gen() % 100;
    one(o, m, r, {1 + gen() % dl, dl}, {1 + gen() % dr, dr});
  }
  // Exact boundaries: lose k where k * d == n * |orig|, then one fewer.
  for (int i = 0; i < 5000; ++i) {
    const uint64_t d = 1 + gen() % 50;
    const uint64_t n = 1 + gen() % d;
    const uint64_t size = d * (1 + gen() % 8);
    const uint64_t k = n * size / d;
    for (uint64_t lose : {k, k == 0 ? 0 : k - 1}) {
      std::vector<Feature> o, m, r;
      for (Feature f = 0; f < size; ++f) {
        o.push_back(f);
        if (f >= lose) m.push_back(f);
      }
      const uint64_t need = (lose * n + d - 1) / d;
      for (Feature f = 0; f < std::min(need, lose); ++f) r.push_back(f);
      one(o, m, r, {n, d}, {n, d});
      ++boundary;
    }
  }
  const double secs = seconds_since(t0);
  if (mismatches != 0) v.fail(std::to_string(mismatches) + " mismatches");
  if (secs >= 10) v.fail("took " + std::to_string(secs) + " s");
  std::ostringstream d;
  d << cases << " cases (" << boundary << " at boundaries), " << mismatches
    << " mismatches, " << secs << " s";
  if (v.pass) v.detail = d.str();
  return v;
}

// ---- 2: bookkeeping vs marked positions ----

Verdict bookkeeping_oracle() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 gen(77);
  size_t ops_total = 0, survivors = 0, mismatches = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const size_t len = 1 + gen() % 256;
    Bytes bytes(len);
    for (auto &b : bytes) b = static_cast<uint8_t>(gen());
    std::vector<RelationField> rels;
    const size_t nrel = 1 + gen() % 4;
    for (size_t k = 0; k < nrel; ++k) {
      const uint8_t s = std::array<uint8_t, 4>{1, 2, 4, 8}[gen() % 4];
      if (s > len || len < 2) continue;
      const size_t p = gen() % (len - s + 1);
      const size_t a = gen() % len;
      const size_t b = a + 1 + gen() % (len - a);
      rels.push_back({a, b, p, s,
                      gen() % 2 ? Endianness::kBig : Endianness::kLittle});
    }
    StructuredInput si{bytes, rels, {}};
    oracle::MarkedInput m(bytes, rels);
    const size_t nops = 1 + gen() % 32;
    bool ok = true;
    for (size_t i = 0; i < nops && ok; ++i) {
      const size_t n = si.bytes.size();
      const uint64_t kind = gen() % 3;
      if (kind == 0 && n + 8 <= 256) {
        const size_t at = gen() % (n + 1);
        Bytes payload(1 + gen() % 8);
        for (auto &b : payload) b = static_cast<uint8_t>(gen());
        apply(si, MutationOp::insert(at, payload));
        m.insert(at, payload);
      } else if (kind == 1 && n > 1) {
        const size_t at = gen() % n;
        const size_t cnt = 1 + gen() % std::min<size_t>(8, n - at);
        apply(si, MutationOp::remove(at, cnt));
        m.remove(at, cnt);
      } else if (n > 0) {
        const size_t at = gen() % n;
        Bytes payload(1 + gen() % std::min<size_t>(4, n - at));
        for (auto &b : payload) b = static_cast<uint8_t>(gen());
        apply(si, MutationOp::replace(at, payload));
        m.replace(at, payload);
      } else {
        continue;
      }
      ++ops_total;
      ok = si.relations == m.relations() && si.bytes == m.bytes();
    }
    if (ok) {
      const Bytes want = m.committed();
      commit(si);
      ok = si.bytes == want;
      for (const RelationField &r : si.relations) {
        ok = ok && read_field(si.bytes, r) == r.b - r.a;
        ++survivors;
      }
    }
    if (!ok) ++mismatches;
  }
  const double secs = seconds_since(t0);
  if (mismatches != 0) v.fail(std::to_string(mismatches) + " mismatching sequences");
  if (secs >= 30) v.fail("took " + std::to_string(secs) + " s");
  std::ostringstream d;
  d << "10000 sequences, " << ops_total << " ops, " << survivors
    << " committed survivors, " << mismatches << " mismatches, " << secs
    << " s";
  if (v.pass) v.detail = d.str();
  return v;
}

// ---- 3: ground truth ----

const DiscoveredRelation *at_p(const AnalysisReport &r, size_t p) {
  for (const auto &d : r.relations) {
    if (d.field.p == p) return &d;
  }
  return nullptr;
}

bool same_set(std::vector<RelationField> x, std::vector<RelationField> y) {
  auto key = [](const RelationField &r) {
    return std::tie(r.p, r.s, r.e, r.a, r.b);
  };
  auto less = [&](const RelationField &l, const RelationField &r) {
    return key(l) < key(r);
  };
  std::sort(x.begin(), x.end(), less);
  std::sort(y.begin(), y.end(), less);
  return x == y;
}

Verdict ground_truth() {
  Verdict v;
  std::ostringstream d;
  for (std::string_view name : {"nestedcmd", "objfile", "tlv", "chunks"}) {
    auto t = targets::make_toy_target(name);
    const Bytes seed = t->seed();
    const auto t0 = Clock::now();
    const AnalysisReport r = analyze(ByteSpan(seed), *t, {});
    const double secs = seconds_since(t0);
    const std::vector<RelationField> truth = t->ground_truth();
    d << name << ": " << r.relations.size() << " rel, " << r.invocations
      << " inv, " << secs * 1000 << " ms; ";
    if (r.invocations > 20000) v.fail(std::string(name) + ": too many invocations");
    if (secs > 2) v.fail(std::string(name) + ": slower than 2 s");
    if (name == "nestedcmd" && !same_set(r.fields(), truth)) {
      v.fail("nestedcmd: relations differ from ground truth");
    }
    if (name == "objfile") {
      const DiscoveredRelation *table = at_p(r, 6);
      if (table == nullptr ||
          classify_form(table->field, seed.size()) != RelationForm::kOffsetA) {
        v.fail("objfile: table offset not found");
      } else {
        for (const auto &rel : r.relations) {
          if (classify_form(rel.field, seed.size()) ==
                  RelationForm::kSizeIndirectD &&
              rel.round <= table->round) {
            v.fail("objfile: a size was found no later than the offset");
          }
        }
        size_t sizes = 0;
        for (size_t p : {68u, 76u}) {
          const DiscoveredRelation *s = at_p(r, p);
          if (s != nullptr && std::find(truth.begin(), truth.end(), s->field) !=
                                  truth.end()) {
            ++sizes;
          }
        }
        if (sizes != 2) v.fail("objfile: entry sizes not recovered");
      }
    }
    if (name == "tlv") {
      for (const RelationField &g : truth) {
        const auto got = r.fields();
        if (std::find(got.begin(), got.end(), g) == got.end()) {
          v.fail("tlv: length at p=" + std::to_string(g.p) + " missing");
        }
      }
    }
    if (name == "chunks") {
      for (const RelationField &g : truth) {
        const auto got = r.fields();
        if (std::find(got.begin(), got.end(), g) == got.end()) {
          v.fail("chunks: VARD size missing");
        }
      }
      if (at_p(r, 4) != nullptr) v.fail("chunks: FIXD size reported");
      if (at_p(r, 48) != nullptr) v.fail("chunks: END size reported");
    }
  }
  if (v.pass) {
    v.detail = d.str();
    v.detail.resize(v.detail.size() - 2);
  }
  return v;
}

// ---- 4: heuristic vs exhaustive ----

Verdict heuristic_vs_exhaustive() {
  Verdict v;
  const auto t0 = Clock::now();
  size_t checked = 0;
  for (std::string_view name : {"nestedcmd", "chunks", "tlv", "objfile"}) {
    auto t = targets::make_toy_target(name);
    const Bytes seed = t->seed();
    const AnalysisReport r = analyze(ByteSpan(seed), *t, {});
    const AnalysisThresholds th;
    for (const DiscoveredRelation &d : r.relations) {
      std::vector<RelationField> known;
      for (const DiscoveredRelation &o : r.relations) {
        if (o.round < d.round) known.push_back(o.field);
      }
      const auto scan = oracle::exhaustive_scan(
          seed, d.field.p, d.field.s, d.field.e, known, *t, th.t_loss,
          th.t_restore);
      ++checked;
      const std::string tag =
          std::string(name) + " p=" + std::to_string(d.field.p);
      if (!scan.destructive) v.fail(tag + ": probe not destructive");
      if (!scan.accepts(d.field.a)) v.fail(tag + ": start not accepted");
      if (d.field.b - d.field.a != read_field(seed, d.field)) {
        v.fail(tag + ": span length differs from value");
      }
    }
  }
  const double secs = seconds_since(t0);
  if (secs > 300) v.fail("took " + std::to_string(secs) + " s");
  if (v.pass) {
    v.detail = std::to_string(checked) + " relations confirmed, " +
               std::to_string(secs) + " s";
  }
  return v;
}

// ---- 5: A/B campaigns ----

bool has_newly_sized_chk3(const CampaignResult &r) {
  const targets::NestedCmd t;
  const CorpusSummary s = summarize_corpus(t, r.corpus);
  for (const auto &c : s.checks) {
    if (c.name == "chk3_pass") return c.newly_sized > 0;
  }
  return false;
}

Verdict ab_experiment() {
  Verdict v;
  const auto t0 = Clock::now();
  const targets::NestedCmd t;
  int frameshift_hits = 0, baseline_hits = 0;
  std::string runs;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    for (bool fs_on : {true, false}) {
      CampaignConfig cfg;
      cfg.target = "nestedcmd";
      cfg.rng_seed = seed;
      cfg.max_execs = 2000000;
      cfg.frameshift = fs_on;
      const CampaignResult r = run_campaign(t, cfg, {t.seed()});
      const bool hit = has_newly_sized_chk3(r);
      (fs_on ? frameshift_hits : baseline_hits) += hit ? 1 : 0;
      runs += hit ? (fs_on ? "F" : "B") : ".";
    }
    std::fprintf(stderr, "  a/b seed %llu done (%.0f s)\n",
                 static_cast<unsigned long long>(seed), seconds_since(t0));
  }
  const double secs = seconds_since(t0);
  if (baseline_hits != 0) v.fail("baseline hit in " + std::to_string(baseline_hits) + "/10");
  if (frameshift_hits < 8) v.fail("frameshift hit in only " + std::to_string(frameshift_hits) + "/10");
  std::ostringstream d;
  d << "frameshift " << frameshift_hits << "/10, baseline " << baseline_hits
    << "/10, " << secs << " s";
  if (v.pass) {
    v.detail = d.str();
  } else {
    v.detail += " (" + d.str() + ")";
  }
  return v;
}

// ---- 6: resize closure ----

Verdict resize_closure() {
  Verdict v;
  const auto t0 = Clock::now();
  size_t mutants = 0;
  for (std::string_view name : targets::kToyTargetNames) {
    auto t = targets::make_toy_target(name);
    size_t n = 0;
    auto fails = testing::resize_closure_failures(*t, {1, 7, 255}, &n);
    mutants += n;
    if (!fails.empty()) v.fail(fails.front());
    if (!t->ground_truth().empty() && n == 0) {
      v.fail(std::string(name) + ": no insertion point exercised");
    }
    fails = testing::collapse_failures(*t);
    if (!fails.empty()) v.fail(fails.front());
  }
  const double secs = seconds_since(t0);
  if (secs >= 10) v.fail("took " + std::to_string(secs) + " s");
  if (v.pass) {
    v.detail = std::to_string(mutants) + " resized mutants, " +
               std::to_string(secs) + " s";
  }
  return v;
}

// ---- 7: determinism ----

std::map<std::string, Bytes> snapshot(const fs::path &dir) {
  std::map<std::string, Bytes> out;
  for (const auto &item : fs::recursive_directory_iterator(dir)) {
    if (item.is_regular_file()) {
      out[fs::relative(item.path(), dir).string()] = read_file(item.path());
    }
  }
  return out;
}

int run_cli(std::vector<std::string> args, std::string *out) {
  args.insert(args.begin(), "relfuzz");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  *out = o.str() + e.str();
  return code;
}

Verdict determinism() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "relfuzz_acceptance_det";
  fs::remove_all(root);
  fs::create_directories(root);
  size_t files = 0;
  for (std::string_view name : {"nestedcmd", "objfile"}) {
    for (const char *mode : {"", "--no-frameshift"}) {
      const fs::path out = root / "campaign";
      std::vector<std::map<std::string, Bytes>> snaps;
      std::vector<std::string> stdouts;
      for (int rep = 0; rep < 2; ++rep) {
        fs::remove_all(out);
        std::vector<std::string> args = {
            "fuzz",  "--target", std::string(name), "--out",
            out.string(), "--execs", "200000", "--rng-seed", "11"};
        if (*mode) args.push_back(mode);
        std::string text;
        if (run_cli(args, &text) != 0) {
          v.fail(std::string(name) + ": fuzz failed: " + text);
          return v;
        }
        snaps.push_back(snapshot(out));
        stdouts.push_back(text);
      }
      files += snaps[0].size();
      if (snaps[0] != snaps[1]) {
        v.fail(std::string(name) + " " + mode + ": campaign directories differ");
      }
      if (stdouts[0] != stdouts[1]) {
        v.fail(std::string(name) + " " + mode + ": stats differ");
      }
    }
  }
  const fs::path seeds = root / "seeds";
  fs::create_directories(seeds);
  for (std::string_view name : targets::kToyTargetNames) {
    const fs::path seed = seeds / (std::string(name) + ".bin");
    write_file(seed, targets::make_toy_target(name)->seed());
    std::vector<Json> reports;
    for (int rep = 0; rep < 2; ++rep) {
      std::string text;
      if (run_cli({"analyze", "--target", std::string(name), "--seed",
                   seed.string(), "--json", "--hexdump"},
                  &text) != 0) {
        v.fail(std::string(name) + ": analyze failed");
        return v;
      }
      Json j = Json::parse(text);
      j.erase("elapsed_ms");
      reports.push_back(std::move(j));
    }
    if (reports[0] != reports[1]) {
      v.fail(std::string(name) + ": analyze reports differ");
    }
  }
  fs::remove_all(root);
  if (v.pass) {
    v.detail = "4 fuzz configurations x2 (" + std::to_string(files) +
               " files compared), 5 analyze reports x2";
  }
  return v;
}

}  // namespace
}  // namespace relfuzz

int main(int argc, char **argv) {
  using relfuzz::Verdict;
  const std::vector<std::pair<const char *, std::function<Verdict()>>> all = {
      {"formula fidelity", relfuzz::formula_fidelity},
      {"bookkeeping oracle", relfuzz::bookkeeping_oracle},
      {"toy ground-truth recovery", relfuzz::ground_truth},
      {"heuristic vs exhaustive", relfuzz::heuristic_vs_exhaustive},
      {"scaled A/B experiment", relfuzz::ab_experiment},
      {"resize closure", relfuzz::resize_closure},
      {"determinism", relfuzz::determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  bool ok = true;
  for (size_t i = 0; i < all.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!wanted.empty() && wanted.count(id) == 0) continue;
    Verdict v;
    try {
      v = all[i].second();
    } catch (const std::exception &e) {
      v.fail(std::string("exception: ") + e.what());
    }
    std::printf("criterion %d: %s %s: %s\n", id, v.pass ? "PASS" : "FAIL",
                all[i].first, v.detail.c_str());
    std::fflush(stdout);
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}
