// Copyright 2026 The dtstat Authors.
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

#ifndef DTSTAT_ERRORS_H_
#define DTSTAT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dtstat {

enum class ErrorKind {
  kInvalidArgument,
  kNotATree,
  kInvalidLength,
  kMultiplicityOverflow,
  kParseError,
  kSizeTooLarge,
  kSearchBudgetExceeded,
  kInfeasibleConfig,
  kEmptyFamily,
  kRateOutOfRange,
  kBudgetExceeded,
  kConfigurationUnsupported,
  kShapeUnsupported,
  kDegenerateCalibration,
  kInvalidConfig,
};

const char* ErrorKindName(ErrorKind kind);

// True for the kinds the CLI reports with the "budget" exit code.
bool IsBudgetError(ErrorKind kind);

// True for the kinds the CLI reports with the "config" exit code.
bool IsConfigError(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dtstat

#endif  // DTSTAT_ERRORS_H_
