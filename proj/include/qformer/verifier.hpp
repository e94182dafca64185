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
 * @file verifier.hpp
 * Explicit unitaries for checking the lazy calculus at tiny sizes.
 *
 * Qubit 0 is the most significant bit of a basis index throughout.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qformer/encoding.hpp"

namespace qformer {

inline constexpr int kMaxVerifyQubits = 12;

struct ExplicitEncoding {
    DenseMatrix unitary;
    double alpha = 1.0;
    int ancillas = 0;
    int system_qubits = 0;

    /// alpha times the <0^a| U |0^a> block.
    [[nodiscard]] auto encoded() const -> DenseMatrix;
};

auto dilate(const DenseMatrix &a, double alpha) -> ExplicitEncoding;

/// P = sum_{i,j} |i><i| (x) |i xor j><j| on 2n qubits.
auto build_cnot_permutation(int n) -> DenseMatrix;

/// Embeds an operator acting on `targets` (in order) into `total` qubits.
auto embed_operator(const DenseMatrix &op, const std::vector<int> &targets,
                    int total) -> DenseMatrix;

enum class CompositionKind { Product, Hadamard, Lcu, Dilation };

auto to_string(CompositionKind kind) -> const char *;

struct VerifyReport {
    CompositionKind kind = CompositionKind::Product;
    double deviation = 0.0;
    double unitarity = 0.0;
    int total_qubits = 0;
    bool pass = false;
};

/**
 * @brief Builds the circuit for `kind` from dilations of the operand blocks
 * and compares the extracted block with the lazy result.
 *
 * Product and Hadamard take two operands, Dilation one, Lcu takes any number
 * with coefficients y.
 */
auto verify_composition(CompositionKind kind,
                        const std::vector<BlockEncoding> &operands,
                        double tolerance, const DenseVector &y = {})
    -> VerifyReport;

struct VerifySuiteReport {
    std::vector<VerifyReport> reports;
    int instances = 0;
    int failures = 0;
    double max_deviation = 0.0;
};

/// Random operands at system size n for every kind, `trials` each.
auto run_verify_suite(int n, int trials, double tolerance, std::uint64_t seed)
    -> VerifySuiteReport;

} // namespace qformer
