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
 * @file experiment.hpp
 * Subcommand dispatch for the command-line front end.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qformer/error.hpp"

namespace qformer {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFileNotFound = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitViolation = 4;

auto exit_code_for(ErrorKind kind) -> int;

struct ExperimentConfig {
    /// verify, run-layer, run-multilayer, scaling, approx, profile,
    /// dequant-compare.
    std::string command;
    std::optional<std::string> matrix;
    std::optional<std::string> weights;
    /// Qubits for verify, sequence length otherwise.
    std::optional<long long> n;
    long long d = 4;
    long long d_ff = 16;
    int layers = 1;
    long long j = 0;
    std::optional<double> eps;
    double delta = 0.05;
    std::string factor_model = "frobenius";
    std::uint64_t seed = 0;
    bool masked = false;
    /// Report path; stdout when empty.
    std::string out;
};

/// Throws InvalidInput for an unusable config.
void validate(const ExperimentConfig &config);

/// Writes the report to config.out (or `out`), returns the exit status.
/// Errors go to `err` as one line.
auto run_experiment(const ExperimentConfig &config, std::ostream &out,
                    std::ostream &err) -> int;

} // namespace qformer
