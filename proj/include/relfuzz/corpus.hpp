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

// Corpus entries and their on-disk form: <id>.bin holds the bytes,
// <id>.relations.json the sidecar.

#ifndef RELFUZZ_CORPUS_HPP_
#define RELFUZZ_CORPUS_HPP_

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "relfuzz/coverage.hpp"
#include "relfuzz/error.hpp"
#include "relfuzz/relation.hpp"
#include "relfuzz/serialize.hpp"

namespace relfuzz {

namespace fs = std::filesystem;

struct CorpusEntry {
  size_t id = 0;
  Bytes bytes;
  CoverageSet coverage;  // not persisted; re-execute to recover
  std::vector<RelationField> relations;
  bool analyzed = false;
  uint64_t discovery_exec = 0;
  bool seed = false;
};

inline Bytes read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in),
               std::istreambuf_iterator<char>());
}

inline std::string read_text(const fs::path &path) {
  Bytes b = read_file(path);
  return std::string(b.begin(), b.end());
}

// Written to a temporary name and renamed into place.
inline void write_file(const fs::path &path, ByteSpan bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

inline void write_text(const fs::path &path, std::string_view text) {
  write_file(path, ByteSpan(reinterpret_cast<const uint8_t *>(text.data()),
                            text.size()));
}

inline std::string entry_stem(size_t id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", id);
  return buf;
}

inline Json sidecar_json(const CorpusEntry &e) {
  return Json{{"id", e.id},
              {"analyzed", e.analyzed},
              {"seed", e.seed},
              {"discovery_exec", e.discovery_exec},
              {"relations", relations_to_json(e.relations)}};
}

inline void save_entry(const CorpusEntry &e, const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());
  const std::string stem = entry_stem(e.id);
  write_file(dir / (stem + ".bin"), e.bytes);
  write_text(dir / (stem + ".relations.json"), sidecar_json(e).dump(2) + "\n");
}

inline CorpusEntry load_entry(const fs::path &dir, size_t id) {
  const std::string stem = entry_stem(id);
  CorpusEntry e;
  e.id = id;
  e.bytes = read_file(dir / (stem + ".bin"));
  const fs::path sidecar = dir / (stem + ".relations.json");
  if (!fs::exists(sidecar)) return e;
  try {
    Json j = Json::parse(read_text(sidecar));
    e.analyzed = j.at("analyzed").get<bool>();
    e.seed = j.value("seed", false);
    e.discovery_exec = j.value("discovery_exec", uint64_t{0});
    e.relations = relations_from_json(j.at("relations"));
  } catch (const Json::exception &ex) {
    throw Error(ErrorCode::kIoError,
                "malformed sidecar " + sidecar.string() + ": " + ex.what());
  } catch (const Error &ex) {
    throw Error(ErrorCode::kIoError,
                "malformed sidecar " + sidecar.string() + ": " + ex.what());
  }
  return e;
}

// Every <id>.bin in `dir`, ordered by id.
inline std::vector<CorpusEntry> load_corpus(const fs::path &dir) {
  std::vector<size_t> ids;
  std::error_code ec;
  for (const auto &item : fs::directory_iterator(dir, ec)) {
    const fs::path &path = item.path();
    if (path.extension() != ".bin") continue;
    const std::string stem = path.stem().string();
    if (stem.empty() ||
        !std::all_of(stem.begin(), stem.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(ErrorCode::kIoError, "unexpected file " + path.string());
    }
    ids.push_back(std::stoull(stem));
  }
  if (ec) throw Error(ErrorCode::kIoError, "cannot list " + dir.string());
  std::sort(ids.begin(), ids.end());
  std::vector<CorpusEntry> out;
  out.reserve(ids.size());
  for (size_t id : ids) out.push_back(load_entry(dir, id));
  return out;
}

// Regular files in `dir` by file name; each is one seed input.
inline std::vector<Bytes> load_seeds(const fs::path &dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIoError, "seed directory " + dir.string() +
                                         " is not readable");
  }
  std::vector<fs::path> files;
  for (const auto &item : fs::directory_iterator(dir, ec)) {
    if (item.is_regular_file()) files.push_back(item.path());
  }
  if (ec) throw Error(ErrorCode::kIoError, "cannot list " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<Bytes> out;
  for (const fs::path &f : files) out.push_back(read_file(f));
  return out;
}

}  // namespace relfuzz

#endif  // RELFUZZ_CORPUS_HPP_
