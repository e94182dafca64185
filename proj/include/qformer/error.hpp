// Copyright 2026 The qformer Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file error.hpp
 * Error type shared by every module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace qformer {

enum class ErrorKind {
    InvalidInput,
    FactorTooSmall,
    DimensionMismatch,
    InvalidModel,
    Degenerate,
    Unsupported,
    ContractViolation,
    Resource,
    UnreachablePrecision,
    OutOfRange,
    FileNotFound,
    Parse,
    InvariantFailure,
};

auto to_string(ErrorKind kind) -> const char *;

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          kind_(kind) {}

    [[nodiscard]] auto kind() const noexcept -> ErrorKind { return kind_; }

  private:
    ErrorKind kind_;
};

/// Throws Error(kind, msg) unless cond holds.
inline void require(bool cond, ErrorKind kind, const std::string &msg) {
    if (!cond) {
        throw Error(kind, msg);
    }
}

} // namespace qformer
