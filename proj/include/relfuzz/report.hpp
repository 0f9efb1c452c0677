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

// Human-facing renderings: the annotated hexdump, and the per-checkpoint
// "newly sized" corpus summary.

#ifndef RELFUZZ_REPORT_HPP_
#define RELFUZZ_REPORT_HPP_

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "relfuzz/corpus.hpp"
#include "relfuzz/relation.hpp"
#include "relfuzz/serialize.hpp"
#include "relfuzz/target.hpp"

namespace relfuzz {

inline constexpr size_t kHexdumpWidth = 16;

// 16 bytes per row with an ASCII gutter. Under each row, one lane per
// relation touching it: "^^" marks the field's own bytes, "--" its span.
// Lanes with nothing on the row are omitted. Output depends only on the
// arguments.
//
//   [0] a=0 b=8 p=0 s=1 e=big form=E
//   00000000  08 41 42 43 44 45 46 47                          |.ABCDEFG|
//        [0]  ^^ -- -- -- -- -- -- --
inline std::string render_hexdump(ByteSpan bytes,
                                  const std::vector<RelationField> &rels) {
  std::string out;
  char buf[64];
  for (size_t i = 0; i < rels.size(); ++i) {
    const RelationField &r = rels[i];
    std::snprintf(buf, sizeof(buf), "[%zu] ", i);
    out += buf;
    out += "a=" + std::to_string(r.a) + " b=" + std::to_string(r.b) +
           " p=" + std::to_string(r.p) + " s=" + std::to_string(r.s) +
           " e=" + std::string(to_string(r.e)) +
           " form=" + std::string(to_string(classify_form(r, bytes.size()))) +
           "\n";
  }
  for (size_t row = 0; row < bytes.size(); row += kHexdumpWidth) {
    const size_t end = std::min(bytes.size(), row + kHexdumpWidth);
    std::snprintf(buf, sizeof(buf), "%08zx  ", row);
    out += buf;
    std::string ascii;
    for (size_t k = row; k < row + kHexdumpWidth; ++k) {
      if (k < end) {
        std::snprintf(buf, sizeof(buf), "%02x ", bytes[k]);
        out += buf;
        ascii += (bytes[k] >= 0x20 && bytes[k] < 0x7f)
                     ? static_cast<char>(bytes[k])
                     : '.';
      } else {
        out += "   ";
      }
    }
    out += " |" + ascii + "|\n";
    for (size_t i = 0; i < rels.size(); ++i) {
      const RelationField &r = rels[i];
      std::string lane;
      bool any = false;
      for (size_t k = row; k < end; ++k) {
        const char *cell = "   ";
        if (k >= r.p && k < r.p + r.s) {
          cell = "^^ ";
        } else if (k >= r.a && k < r.b) {
          cell = "-- ";
        }
        any = any || cell[0] != ' ';
        lane += cell;
      }
      if (!any) continue;
      while (!lane.empty() && lane.back() == ' ') lane.pop_back();
      std::snprintf(buf, sizeof(buf), "%8s  ",
                    ("[" + std::to_string(i) + "]").c_str());
      out += buf + lane + "\n";
    }
  }
  return out;
}

struct CheckpointSummary {
  std::string name;
  size_t covered = 0;       // entries reaching the checkpoint
  size_t newly_sized = 0;   // ... whose governing size fields differ
};

struct CorpusSummary {
  std::string target;
  size_t entries = 0;
  std::vector<CheckpointSummary> checks;
};

// True if any governing field of `sig` differs from the reference.
inline bool newly_sized(const std::vector<std::optional<uint64_t>> &sig,
                        const std::vector<std::optional<uint64_t>> &ref,
                        const std::vector<size_t> &governing) {
  for (size_t g : governing) {
    std::optional<uint64_t> x = g < sig.size() ? sig[g] : std::nullopt;
    std::optional<uint64_t> y = g < ref.size() ? ref[g] : std::nullopt;
    if (x != y) return true;
  }
  return false;
}

// Coverage is recomputed from the bytes. "Newly sized" is judged against
// every seed entry of the corpus, or the target's own seed if there are none.
inline CorpusSummary summarize_corpus(const ToyTarget &target,
                                      const std::vector<CorpusEntry> &corpus) {
  CorpusSummary summary;
  summary.target = std::string(target.name());
  summary.entries = corpus.size();
  std::vector<std::vector<std::optional<uint64_t>>> refs;
  for (const CorpusEntry &e : corpus) {
    if (e.seed) refs.push_back(target.size_signature(e.bytes));
  }
  if (refs.empty()) refs.push_back(target.size_signature(target.seed()));
  const std::vector<Checkpoint> checks = target.checkpoints();
  for (const Checkpoint &c : checks) summary.checks.push_back({c.name, 0, 0});
  for (const CorpusEntry &e : corpus) {
    const CoverageSet cov = target.execute(e.bytes);
    const auto sig = target.size_signature(e.bytes);
    for (size_t i = 0; i < checks.size(); ++i) {
      if (!cov.contains(checks[i].feature)) continue;
      ++summary.checks[i].covered;
      bool differs_from_all = true;
      for (const auto &ref : refs) {
        differs_from_all =
            differs_from_all && newly_sized(sig, ref, checks[i].governing);
      }
      if (differs_from_all) ++summary.checks[i].newly_sized;
    }
  }
  return summary;
}

inline std::string render_summary(const CorpusSummary &s) {
  std::string out = "target " + s.target + ", " + std::to_string(s.entries) +
                    " corpus entries\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-20s %8s %12s\n", "checkpoint", "covered",
                "newly_sized");
  out += buf;
  for (const CheckpointSummary &c : s.checks) {
    std::snprintf(buf, sizeof(buf), "%-20s %8zu %12zu\n", c.name.c_str(),
                  c.covered, c.newly_sized);
    out += buf;
  }
  return out;
}

inline Json to_json(const CorpusSummary &s) {
  Json checks = Json::array();
  for (const CheckpointSummary &c : s.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"covered", c.covered},
                          {"newly_sized", c.newly_sized}});
  }
  return Json{{"target", s.target},
              {"entries", s.entries},
              {"checkpoints", std::move(checks)}};
}

}  // namespace relfuzz

#endif  // RELFUZZ_REPORT_HPP_
