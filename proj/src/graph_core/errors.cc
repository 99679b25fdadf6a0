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

#include "dtstat/errors.h"

namespace dtstat {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return "InvalidArgument";
    case ErrorKind::kNotATree:
      return "NotATree";
    case ErrorKind::kInvalidLength:
      return "InvalidLength";
    case ErrorKind::kMultiplicityOverflow:
      return "MultiplicityOverflow";
    case ErrorKind::kParseError:
      return "ParseError";
    case ErrorKind::kSizeTooLarge:
      return "SizeTooLarge";
    case ErrorKind::kSearchBudgetExceeded:
      return "SearchBudgetExceeded";
    case ErrorKind::kInfeasibleConfig:
      return "InfeasibleConfig";
    case ErrorKind::kEmptyFamily:
      return "EmptyFamily";
    case ErrorKind::kRateOutOfRange:
      return "RateOutOfRange";
    case ErrorKind::kBudgetExceeded:
      return "BudgetExceeded";
    case ErrorKind::kConfigurationUnsupported:
      return "ConfigurationUnsupported";
    case ErrorKind::kShapeUnsupported:
      return "ShapeUnsupported";
    case ErrorKind::kDegenerateCalibration:
      return "DegenerateCalibration";
    case ErrorKind::kInvalidConfig:
      return "InvalidConfig";
  }
  return "Unknown";
}

bool IsBudgetError(ErrorKind kind) {
  return kind == ErrorKind::kBudgetExceeded ||
         kind == ErrorKind::kSearchBudgetExceeded ||
         kind == ErrorKind::kSizeTooLarge;
}

bool IsConfigError(ErrorKind kind) {
  return kind == ErrorKind::kInvalidConfig || kind == ErrorKind::kParseError ||
         kind == ErrorKind::kInfeasibleConfig ||
         kind == ErrorKind::kEmptyFamily ||
         kind == ErrorKind::kRateOutOfRange;
}

}  // namespace dtstat
