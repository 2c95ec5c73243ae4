// Copyright 2026 The prodinv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRODINV_ERROR_HPP_
#define PRODINV_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace prodinv {

enum class ErrorCode {
  kInvalidParams,
  kUnprofitable,
  kInvalidState,
  kControlBounds,
  kUncoveredInitialCondition,
  kScenarioMismatch,
  kNoOpJump,
  kDomain,
  kInfeasiblePolicy,
  kConfiguration,
  kAmbiguousRoot,
  kNoFeasibleCandidate,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams: return "invalid parameters";
    case ErrorCode::kUnprofitable: return "unprofitable parameters";
    case ErrorCode::kInvalidState: return "invalid state";
    case ErrorCode::kControlBounds: return "control out of bounds";
    case ErrorCode::kUncoveredInitialCondition: return "uncovered initial condition";
    case ErrorCode::kScenarioMismatch: return "scenario does not match initial state";
    case ErrorCode::kNoOpJump: return "jump requested without debt";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kInfeasiblePolicy: return "policy infeasible for these inputs";
    case ErrorCode::kConfiguration: return "configuration error";
    case ErrorCode::kAmbiguousRoot: return "ambiguous zero crossing";
    case ErrorCode::kNoFeasibleCandidate: return "no feasible candidate";
  }
  return "unknown error";
}

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace prodinv

#endif  // PRODINV_ERROR_HPP_
