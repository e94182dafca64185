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
 * @file dequant.hpp
 * Sample-and-query access to a real matrix and the sampled matrix-vector
 * product built on it.
 */
#pragma once

#include <cstdint>
#include <optional>

#include "qformer/linalg.hpp"

namespace qformer {

/// Immutable after build; safe to share between threads.
class SQAccess {
  public:
    explicit SQAccess(RealMatrix a);

    [[nodiscard]] auto matrix() const -> const RealMatrix & { return a_; }
    [[nodiscard]] auto frobenius() const -> double { return frobenius_; }
    /// Cumulative squared row norms; back() equals frobenius^2.
    [[nodiscard]] auto row_norm_prefix() const -> const RealVector & {
        return row_prefix_;
    }
    [[nodiscard]] auto col_norm_prefix() const -> const RealVector & {
        return col_prefix_;
    }
    /// Row i holds the cumulative squared entries of row i.
    [[nodiscard]] auto entry_prefix() const -> const RealMatrix & {
        return entry_prefix_;
    }

    /// Row i with probability ||A_i||^2 / ||A||_F^2, from u in [0, 1).
    [[nodiscard]] auto sample_row(double u) const -> Index;
    /// Column j with probability ||A_{*j}||^2 / ||A||_F^2.
    [[nodiscard]] auto sample_col(double u) const -> Index;
    /// Entry k of row i with probability A_ik^2 / ||A_i||^2.
    [[nodiscard]] auto sample_entry(Index row, double u) const -> Index;
    [[nodiscard]] auto query(Index row, Index col) const -> double {
        return a_(row, col);
    }

  private:
    RealMatrix a_;
    RealVector row_prefix_;
    RealVector col_prefix_;
    RealMatrix entry_prefix_;
    double frobenius_ = 0.0;
};

/// Throws Degenerate on an all-zero matrix.
auto build_sq(const RealMatrix &a) -> SQAccess;

struct MatvecOptions {
    /// Replaces ||A||_F in the sample count, for bounds known from factors.
    std::optional<double> frobenius_bound;
    /// Replaces ||x|| in the sample count.
    std::optional<double> x_norm_bound;
    /// Constant in tau = ceil(c F^2 |x|^2 ln(1/delta) / eps^2).
    double c = 4.0;
};

struct MatvecResult {
    RealVector vector;
    std::uint64_t tau = 0;
    std::uint64_t groups = 0;
    double eps_target = 0.0;
    double delta_target = 0.0;
};

/// Sample count of approx_matvec.
auto matvec_samples(double frobenius, double x_norm, double eps, double delta,
                    double c = 4.0) -> std::uint64_t;

/**
 * @brief Estimate of A x from tau column samples j ~ ||A_{*j}||^2, split
 * into max(1, ceil(ln 1/delta)) groups. The group mean closest (in median
 * distance) to the others is returned; one group gives the plain mean.
 */
auto approx_matvec(const SQAccess &sq, const RealVector &x, double eps,
                   double delta, std::uint64_t seed,
                   const MatvecOptions &options = {}) -> MatvecResult;

/// A x from full row queries; queries counts the entries read.
struct ExactMatvec {
    RealVector vector;
    std::uint64_t queries = 0;
};
auto exact_matvec(const SQAccess &sq, const RealVector &x) -> ExactMatvec;

struct DequantAttention {
    MatvecResult estimate;
    /// softmax_row V computed directly.
    RealVector exact;
    double error = 0.0;
    double frobenius_s = 0.0;
    double frobenius_wv = 0.0;
};

/**
 * @brief Estimate of softmax_row (S W_v) by sampling the columns of
 * (S W_v)^T. The sample count uses ||S||_F ||W_v||_F and the worst-case
 * ||softmax_row|| <= 1, the bound available without the partition function.
 */
auto dequant_attention(const RealMatrix &s, const RealMatrix &w_v,
                       const RealVector &softmax_row, double eps, double delta,
                       std::uint64_t seed) -> DequantAttention;

} // namespace qformer
