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
 * @file classical.hpp
 * Exact single-head transformer forward pass and a matrix norm profiler.
 *
 * Row-vector convention: Q = S W_q, FFN(x) = GELU(x M1) M2 with M1 d x d_ff
 * and M2 d_ff x d.
 */
#pragma once

#include <cstdint>
#include <optional>

#include "qformer/linalg.hpp"

namespace qformer {

struct ClassicalWeights {
    RealMatrix S;
    RealMatrix Wq;
    RealMatrix Wk;
    RealMatrix Wv;
    RealMatrix M1;
    RealMatrix M2;
    /// Softmax temperature; sqrt(d) in the usual convention.
    double alpha0 = 1.0;
    /// LayerNorm scale, 1/sqrt(d) when unset so that outputs are unit vectors.
    std::optional<double> gamma;
    double beta = 0.0;
};

struct ClassicalStages {
    RealVector softmax;
    RealVector attention;
    RealVector ln1;
    RealVector ffn;
    RealVector output;
};

/// Throws Degenerate when the centered vector has L2 norm below this.
inline constexpr double kLayerNormFloor = 1e-9;

void check_shapes(const ClassicalWeights &w);

/// Max-subtracted softmax of row j of S Wq (S Wk)^T / alpha0.
auto classical_softmax_row(const ClassicalWeights &w, Index j, bool masked)
    -> RealVector;

/// gamma (x - mean) / std + beta with the population std.
auto classical_layernorm(const RealVector &x, double gamma, double beta)
    -> RealVector;

/// Zero biases, matching the quantum path.
auto classical_ffn(const RealVector &x, const RealMatrix &m1,
                   const RealMatrix &m2) -> RealVector;

/// LN(FFN(x) + x) with x = LN(Attention(S)_j + S_j), token j 0-based.
auto classical_transformer(const ClassicalWeights &w, Index j, bool masked)
    -> ClassicalStages;

struct NormProfile {
    double spectral = 0.0;
    double frobenius = 0.0;
    double column_l2_mean = 0.0;
    double column_l2_var = 0.0;
};

/// Population variance of the column L2 norms.
auto profile_matrix(const DenseMatrix &a) -> NormProfile;

/// Gaussian weights drawn before S: S and the d x d maps ~ N(0, 1/d), M1 ~ N(0, 1/d),
/// M2 ~ N(0, 1/d_ff); alpha0 = sqrt(d).
auto random_weights(Index n, Index d, Index d_ff, std::uint64_t seed)
    -> ClassicalWeights;

} // namespace qformer
