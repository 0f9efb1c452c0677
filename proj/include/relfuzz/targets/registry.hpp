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

#ifndef RELFUZZ_TARGETS_REGISTRY_HPP_
#define RELFUZZ_TARGETS_REGISTRY_HPP_

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "relfuzz/error.hpp"
#include "relfuzz/targets/chunks.hpp"
#include "relfuzz/targets/echo.hpp"
#include "relfuzz/targets/nestedcmd.hpp"
#include "relfuzz/targets/objfile.hpp"
#include "relfuzz/targets/tlv.hpp"

namespace relfuzz::targets {

inline constexpr std::array<std::string_view, 5> kToyTargetNames = {
    "nestedcmd", "chunks", "tlv", "objfile", "echo"};

inline std::unique_ptr<ToyTarget> make_toy_target(std::string_view name) {
  if (name == "nestedcmd") return std::make_unique<NestedCmd>();
  if (name == "chunks") return std::make_unique<Chunks>();
  if (name == "tlv") return std::make_unique<Tlv>();
  if (name == "objfile") return std::make_unique<ObjFile>();
  if (name == "echo") return std::make_unique<Echo>();
  throw Error(ErrorCode::kConfigError,
              "unknown target '" + std::string(name) + "'");
}

// Extension point for in-process targets supplied by the embedding program.
// Toy target names are reserved.
class TargetRegistry {
 public:
  using Factory = std::function<std::unique_ptr<Target>()>;

  static TargetRegistry &instance() {
    static TargetRegistry registry;
    return registry;
  }

  void add(std::string name, Factory factory) {
    for (std::string_view toy : kToyTargetNames) {
      if (name == toy) {
        throw Error(ErrorCode::kConfigError,
                    "target name '" + name + "' is reserved");
      }
    }
    factories_[std::move(name)] = std::move(factory);
  }

  std::unique_ptr<Target> make(std::string_view name) const {
    if (auto it = factories_.find(std::string(name)); it != factories_.end()) {
      return it->second();
    }
    return make_toy_target(name);
  }

 private:
  std::map<std::string, Factory> factories_;
};

}  // namespace relfuzz::targets

#endif  // RELFUZZ_TARGETS_REGISTRY_HPP_
