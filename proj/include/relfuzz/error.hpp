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

#ifndef RELFUZZ_ERROR_HPP_
#define RELFUZZ_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace relfuzz {

enum class ErrorCode {
  kNoBaselineCoverage,
  kNothingToRestore,
  kFieldOutOfRange,
  kValueOverflow,
  kInvalidRelation,
  kInvalidOp,
  kTargetError,
  kBudgetExceeded,
  kIoError,
  kConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoBaselineCoverage: return "no-baseline-coverage";
    case ErrorCode::kNothingToRestore: return "nothing-to-restore";
    case ErrorCode::kFieldOutOfRange: return "field-out-of-range";
    case ErrorCode::kValueOverflow: return "value-overflow";
    case ErrorCode::kInvalidRelation: return "invalid-relation";
    case ErrorCode::kInvalidOp: return "invalid-op";
    case ErrorCode::kTargetError: return "target-error";
    case ErrorCode::kBudgetExceeded: return "budget-exceeded";
    case ErrorCode::kIoError: return "io-error";
    case ErrorCode::kConfigError: return "config-error";
  }
  return "unknown";
}

// All recoverable failures in the library are reported through this type;
// `code()` is what callers branch on, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &detail)
      : std::runtime_error(std::string(to_string(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}
  explicit Error(ErrorCode code) : Error(code, "") {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace relfuzz

#endif  // RELFUZZ_ERROR_HPP_
