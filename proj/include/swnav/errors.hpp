// Copyright 2026 The swnav Authors
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

#ifndef SWNAV_ERRORS_HPP_
#define SWNAV_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace swnav {

/// Base class for all domain errors raised by the toolkit.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SWNAV_DEFINE_ERROR(NAME)                              \
  struct NAME : Error {                                       \
    explicit NAME(const std::string& msg) : Error(msg) {}     \
  }

SWNAV_DEFINE_ERROR(DimensionMismatch);
SWNAV_DEFINE_ERROR(LengthMismatch);
SWNAV_DEFINE_ERROR(ShapeMismatch);
SWNAV_DEFINE_ERROR(TooShort);
SWNAV_DEFINE_ERROR(TooFewPoints);
SWNAV_DEFINE_ERROR(EmptyInput);
SWNAV_DEFINE_ERROR(EmptyDataset);
SWNAV_DEFINE_ERROR(IndivisibleHorizon);
SWNAV_DEFINE_ERROR(DegenerateSigma);
SWNAV_DEFINE_ERROR(HorizonExceedsPrediction);
SWNAV_DEFINE_ERROR(InsufficientCoverage);
SWNAV_DEFINE_ERROR(Infeasible);
SWNAV_DEFINE_ERROR(IoError);

#undef SWNAV_DEFINE_ERROR

}  // namespace swnav

#endif  // SWNAV_ERRORS_HPP_
