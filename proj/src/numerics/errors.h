// numerics/errors.h

// Copyright 2026 The lfvctc Authors
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

#ifndef LFVCTC_NUMERICS_ERRORS_H_
#define LFVCTC_NUMERICS_ERRORS_H_

#include <stdexcept>
#include <string>

namespace lfv {

enum class ErrorKind {
  kUsage,
  kConfig,
  kFormat,
  kIo,
  kShape,
  kInfeasible,
  kTraining,
};

// Base of every error thrown by the library. The C API maps kind() onto its
// status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define LFV_DEFINE_ERROR(Name, Kind)                                     \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

LFV_DEFINE_ERROR(UsageError, kUsage)
LFV_DEFINE_ERROR(ConfigError, kConfig)
LFV_DEFINE_ERROR(FormatError, kFormat)
LFV_DEFINE_ERROR(IoError, kIo)
LFV_DEFINE_ERROR(ShapeError, kShape)
LFV_DEFINE_ERROR(InfeasibleLabelError, kInfeasible)
LFV_DEFINE_ERROR(TrainingError, kTraining)

#undef LFV_DEFINE_ERROR

}  // namespace lfv

#endif  // LFVCTC_NUMERICS_ERRORS_H_
