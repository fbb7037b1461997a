// Copyright 2026 The qmeas Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qmeas {

enum class ErrorKind {
  DimensionMismatch,
  NotHermitian,
  InvalidSpec,
  OutOfLattice,
  SupportLeak,
  NonIntegerShift,
  GridTooCoarse,
  ParityViolation,
  NotInImage,
  ZeroProbability,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Single exception type for every library failure; `kind()` lets callers
/// and tests tell the contract violations apart.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qmeas
