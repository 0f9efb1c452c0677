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

// The relfuzz command line: analyze, fuzz, report, seed.
//
// Exit status is 0 on success and 2 on any usage, configuration or I/O
// error. Every JSON document written carries a "config" object with the
// fully resolved settings.

#ifndef RELFUZZ_CLI_HPP_
#define RELFUZZ_CLI_HPP_

#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relfuzz/campaign.hpp"
#include "relfuzz/corpus.hpp"
#include "relfuzz/error.hpp"
#include "relfuzz/inference.hpp"
#include "relfuzz/report.hpp"
#include "relfuzz/serialize.hpp"
#include "relfuzz/targets/registry.hpp"

namespace relfuzz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;

struct AnalysisFlags {
  std::string t_loss = "1/20";
  std::string t_restore = "1/5";
  size_t max_invocations = AnalysisConfig{}.max_invocations;
  size_t max_input_len = AnalysisConfig{}.max_input_len;
  size_t max_rounds = AnalysisConfig{}.max_rounds;
  std::string filler = "0x00";

  void attach(CLI::App &app) {
    app.add_option("--t-loss", t_loss,
                   "fraction of coverage a probe must lose (0.05 or 1/20)")
        ->capture_default_str();
    app.add_option("--t-restore", t_restore,
                   "fraction of the loss a restoring insert must win back")
        ->capture_default_str();
    app.add_option("--max-invocations", max_invocations,
                   "target executions allowed per analysis")
        ->capture_default_str();
    app.add_option("--max-input-len", max_input_len,
                   "inputs longer than this are not analyzed")
        ->capture_default_str();
    app.add_option("--max-rounds", max_rounds, "fixpoint round cap")
        ->capture_default_str();
    app.add_option("--filler", filler, "byte used for restoring inserts")
        ->capture_default_str();
  }

  AnalysisConfig resolve() const {
    AnalysisConfig c;
    c.thresholds.t_loss = Fraction::parse(t_loss);
    c.thresholds.t_restore = Fraction::parse(t_restore);
    c.max_invocations = max_invocations;
    c.max_input_len = max_input_len;
    c.max_rounds = max_rounds;
    size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(filler, &used, 0);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != filler.size() || v > 0xff) {
      throw Error(ErrorCode::kConfigError,
                  "--filler must be a byte value, got '" + filler + "'");
    }
    c.filler = static_cast<uint8_t>(v);
    c.validate();
    return c;
  }
};

inline std::unique_ptr<Target> make_target(const std::string &name) {
  return targets::TargetRegistry::instance().make(name);
}

struct AnalyzeCommand {
  std::string target;
  std::string seed;
  std::string out_path;
  bool json = false;
  bool hexdump = false;
  AnalysisFlags flags;

  void attach(CLI::App &app) {
    app.add_option("--target", target, "target name")->required();
    app.add_option("--seed", seed, "input file to analyze")->required();
    app.add_option("--out", out_path, "write the JSON report here");
    app.add_flag("--json", json, "print the JSON report on stdout");
    app.add_flag("--hexdump", hexdump, "annotated hexdump of the input");
    flags.attach(app);
  }

  int run(std::ostream &out) const {
    const AnalysisConfig cfg = flags.resolve();
    std::unique_ptr<Target> t = make_target(target);
    const Bytes input = read_file(seed);
    const AnalysisReport report = analyze(ByteSpan(input), *t, cfg);
    Json config = to_json(cfg);
    config["target"] = target;
    config["seed"] = seed;
    Json doc{{"config", std::move(config)}, {"input_len", input.size()}};
    doc.update(to_json(report, input.size()));
    const std::string dump =
        hexdump ? render_hexdump(input, report.fields()) : std::string();
    if (hexdump) doc["hexdump"] = dump;
    if (!out_path.empty()) write_text(out_path, doc.dump(2) + "\n");
    if (json) {
      out << doc.dump(2) << "\n";
      return kExitOk;
    }
    out << target << ": " << report.relations.size() << " relation(s), "
        << report.invocations << " invocations, " << report.elapsed.count()
        << " ms, " << report.rounds << " round(s)"
        << (report.budget_exhausted ? ", budget exhausted" : "")
        << (report.skipped ? ", skipped (input too long)" : "") << "\n";
    for (const DiscoveredRelation &d : report.relations) {
      const RelationField &r = d.field;
      out << "  a=" << r.a << " b=" << r.b << " p=" << r.p
          << " s=" << int(r.s) << " e=" << to_string(r.e)
          << " form=" << to_string(classify_form(r, input.size()))
          << " round=" << d.round << "\n";
    }
    if (hexdump) out << dump;
    return kExitOk;
  }
};

struct FuzzCommand {
  std::string target;
  std::string seeds;
  std::string out_dir;
  std::optional<uint64_t> execs;
  std::optional<double> seconds;
  uint64_t rng_seed = 0;
  bool no_frameshift = false;
  size_t trials = CampaignConfig{}.trials_per_entry;
  size_t havoc_min = HavocConfig{}.min_depth;
  size_t havoc_max = HavocConfig{}.max_depth;
  size_t max_len = HavocConfig{}.max_len;
  AnalysisFlags flags;

  void attach(CLI::App &app) {
    app.add_option("--target", target, "target name")->required();
    app.add_option("--seeds", seeds,
                   "seed directory (default: <out>/seeds, created from the "
                   "target's own seed when absent)");
    app.add_option("--out", out_dir, "campaign directory")->required();
    app.add_option("--execs", execs, "execution budget");
    app.add_option("--seconds", seconds, "wall-clock budget");
    app.add_option("--rng-seed", rng_seed, "random seed")
        ->capture_default_str();
    app.add_flag("--no-frameshift", no_frameshift,
                 "baseline arm: no analysis, raw mutations");
    app.add_option("--trials", trials, "havoc trials per corpus visit")
        ->capture_default_str();
    app.add_option("--havoc-min", havoc_min, "fewest stacked ops per mutant")
        ->capture_default_str();
    app.add_option("--havoc-max", havoc_max, "most stacked ops per mutant")
        ->capture_default_str();
    app.add_option("--max-len", max_len, "mutants never grow past this")
        ->capture_default_str();
    flags.attach(app);
  }

  int run(std::ostream &out) const {
    CampaignConfig cfg;
    cfg.target = target;
    cfg.rng_seed = rng_seed;
    cfg.max_execs = execs;
    cfg.max_seconds = seconds;
    cfg.frameshift = !no_frameshift;
    cfg.trials_per_entry = trials;
    cfg.havoc = {havoc_min, havoc_max, max_len};
    cfg.analysis = flags.resolve();
    cfg.out_dir = out_dir;
    cfg.validate();
    std::unique_ptr<Target> t = make_target(target);
    if (!seeds.empty()) {
      cfg.seeds_dir = seeds;
    } else {
      cfg.seeds_dir = fs::path(out_dir) / "seeds";
      std::error_code ec;
      if (!fs::exists(cfg.seeds_dir, ec)) {
        auto *toy = dynamic_cast<const ToyTarget *>(t.get());
        fs::create_directories(cfg.seeds_dir, ec);
        if (ec) {
          throw Error(ErrorCode::kIoError,
                      "cannot create " + cfg.seeds_dir.string());
        }
        if (toy != nullptr) {
          write_file(cfg.seeds_dir / (target + ".bin"), toy->seed());
        }
      }
    }
    CampaignResult result = run_campaign(*t, cfg);
    Json doc{{"config", to_json(cfg)}, {"stats", to_json(result.stats)}};
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
};

struct ReportCommand {
  std::string dir;
  std::string target;
  bool json = false;

  void attach(CLI::App &app) {
    app.add_option("dir", dir, "campaign directory written by fuzz")
        ->required();
    app.add_option("--target", target,
                   "target name (default: from stats.json)");
    app.add_flag("--json", json, "print JSON instead of a table");
  }

  int run(std::ostream &out) const {
    const fs::path root(dir);
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
      throw Error(ErrorCode::kIoError, dir + " is not a directory");
    }
    std::string name = target;
    const fs::path stats = root / "stats.json";
    if (name.empty() && fs::exists(stats, ec)) {
      try {
        name = Json::parse(read_text(stats))
                   .at("config")
                   .at("target")
                   .get<std::string>();
      } catch (const Json::exception &e) {
        throw Error(ErrorCode::kIoError,
                    "malformed " + stats.string() + ": " + e.what());
      }
    }
    if (name.empty()) {
      throw Error(ErrorCode::kConfigError,
                  "no stats.json in " + dir + "; pass --target");
    }
    std::unique_ptr<Target> t = make_target(name);
    auto *toy = dynamic_cast<const ToyTarget *>(t.get());
    if (toy == nullptr) {
      throw Error(ErrorCode::kConfigError,
                  "report needs a target with known checkpoints");
    }
    const fs::path corpus_dir = root / "corpus";
    std::vector<CorpusEntry> corpus;
    if (fs::is_directory(corpus_dir, ec)) corpus = load_corpus(corpus_dir);
    const CorpusSummary summary = summarize_corpus(*toy, corpus);
    if (json) {
      Json doc{{"config", Json{{"target", name}, {"dir", dir}}}};
      doc.update(to_json(summary));
      out << doc.dump(2) << "\n";
    } else {
      out << render_summary(summary);
    }
    return kExitOk;
  }
};

struct SeedCommand {
  std::string target;
  std::string out_path;

  void attach(CLI::App &app) {
    app.add_option("--target", target, "toy target name")->required();
    app.add_option("--out", out_path, "file to write")->required();
  }

  int run(std::ostream &) const {
    write_file(out_path, targets::make_toy_target(target)->seed());
    return kExitOk;
  }
};

// Entry point shared by the binary and the tests.
inline int run(int argc, const char *const *argv, std::ostream &out,
               std::ostream &err) {
  CLI::App app{"relfuzz: length/offset relation inference and fuzzing",
               "relfuzz"};
  app.require_subcommand(1);
  AnalyzeCommand analyze_cmd;
  FuzzCommand fuzz_cmd;
  ReportCommand report_cmd;
  SeedCommand seed_cmd;
  CLI::App *analyze_app =
      app.add_subcommand("analyze", "infer relation fields of one input");
  CLI::App *fuzz_app = app.add_subcommand("fuzz", "run a fuzzing campaign");
  CLI::App *report_app =
      app.add_subcommand("report", "checkpoint table for a campaign corpus");
  CLI::App *seed_app =
      app.add_subcommand("seed", "write a toy target's shipped seed");
  analyze_cmd.attach(*analyze_app);
  fuzz_cmd.attach(*fuzz_app);
  report_cmd.attach(*report_app);
  seed_cmd.attach(*seed_app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (analyze_app->parsed()) return analyze_cmd.run(out);
    if (fuzz_app->parsed()) return fuzz_cmd.run(out);
    if (report_app->parsed()) return report_cmd.run(out);
    if (seed_app->parsed()) return seed_cmd.run(out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace relfuzz::cli

#endif  // RELFUZZ_CLI_HPP_
