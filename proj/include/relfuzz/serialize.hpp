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

// JSON forms of relations, configs and analysis reports.

#ifndef RELFUZZ_SERIALIZE_HPP_
#define RELFUZZ_SERIALIZE_HPP_

#include <string>
#include <vector>

#include "json.hpp"
#include "relfuzz/coverage.hpp"
#include "relfuzz/error.hpp"
#include "relfuzz/havoc.hpp"
#include "relfuzz/inference.hpp"
#include "relfuzz/relation.hpp"

namespace relfuzz {

using Json = nlohmann::ordered_json;

inline Json relation_to_json(const RelationField &r) {
  return Json{{"a", r.a},
              {"b", r.b},
              {"p", r.p},
              {"s", r.s},
              {"e", to_string(r.e)}};
}

// Throws kInvalidRelation on a malformed object.
inline RelationField relation_from_json(const Json &j) {
  try {
    return make_relation(j.at("a").get<size_t>(), j.at("b").get<size_t>(),
                         j.at("p").get<size_t>(), j.at("s").get<size_t>(),
                         parse_endianness(j.at("e").get<std::string>()));
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::kInvalidRelation, e.what());
  }
}

inline Json relations_to_json(const std::vector<RelationField> &rs) {
  Json out = Json::array();
  for (const RelationField &r : rs) out.push_back(relation_to_json(r));
  return out;
}

inline std::vector<RelationField> relations_from_json(const Json &j) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kInvalidRelation, "relations must be an array");
  }
  std::vector<RelationField> out;
  for (const Json &item : j) out.push_back(relation_from_json(item));
  return out;
}

inline Json to_json(const AnalysisThresholds &t) {
  return Json{{"t_loss", t.t_loss.to_string()},
              {"t_restore", t.t_restore.to_string()}};
}

inline Json to_json(const AnalysisConfig &c) {
  return Json{{"thresholds", to_json(c.thresholds)},
              {"max_invocations", c.max_invocations},
              {"max_input_len", c.max_input_len},
              {"max_rounds", c.max_rounds},
              {"filler", c.filler}};
}

inline Json to_json(const HavocConfig &c) {
  return Json{{"min_depth", c.min_depth},
              {"max_depth", c.max_depth},
              {"max_len", c.max_len}};
}

// `input_len` classifies each relation's form.
inline Json to_json(const AnalysisReport &r, size_t input_len) {
  Json rels = Json::array();
  for (const DiscoveredRelation &d : r.relations) {
    Json j = relation_to_json(d.field);
    j["form"] = to_string(classify_form(d.field, input_len));
    j["round"] = d.round;
    j["lost"] = d.lost;
    j["restored"] = d.restored;
    rels.push_back(std::move(j));
  }
  return Json{{"relations", std::move(rels)},
              {"invocations", r.invocations},
              {"elapsed_ms", r.elapsed.count()},
              {"rejected", r.rejected},
              {"rounds", r.rounds},
              {"budget_exhausted", r.budget_exhausted},
              {"skipped", r.skipped}};
}

}  // namespace relfuzz

#endif  // RELFUZZ_SERIALIZE_HPP_
