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
 * @file transformer.hpp
 * Single-head transformer layer on block encodings: softmax state
 * preparation, self-attention, residual + LayerNorm, GELU feed-forward,
 * tomography readout and the multilayer loop.
 *
 * Every matrix lives in one padded dimension D = 2^ceil(log2 max(N, d, d_ff)).
 * Token rows beyond N and feature columns beyond d are zero and get projected
 * out where they would leak into a softmax or a mean.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qformer/classical.hpp"
#include "qformer/encoding.hpp"
#include "qformer/polyapprox.hpp"

namespace qformer {

inline const std::string kLabelS = "U_S";
inline const std::string kLabelWq = "U_Wq";
inline const std::string kLabelWk = "U_Wk";
inline const std::string kLabelWv = "U_Wv";
inline const std::string kLabelM1 = "U_M1";
inline const std::string kLabelM2 = "U_M2";

struct TransformerInputs {
    BlockEncoding S_be;
    BlockEncoding Wq_be;
    BlockEncoding Wk_be;
    BlockEncoding Wv_be;
    BlockEncoding M1_be;
    BlockEncoding M2_be;
    double alpha0 = 1.0;
    Index N = 0;
    Index d = 0;
    Index d_ff = 0;
    /// Padded working dimension shared by all blocks.
    Index dim = 0;
};

/// Leaf encodings of the six inputs, padded to dim x dim, before the factor
/// unification done by assemble_inputs.
struct RawEncodings {
    BlockEncoding S_be;
    BlockEncoding Wq_be;
    BlockEncoding Wk_be;
    BlockEncoding Wv_be;
    BlockEncoding M1_be;
    BlockEncoding M2_be;
    Index N = 0;
    Index d = 0;
    Index d_ff = 0;
    Index dim = 0;
};

auto working_dimension(Index n, Index d, Index d_ff) -> Index;

auto encode_weights(const ClassicalWeights &w,
                    const FactorModel &s_model = FactorModel::frobenius(),
                    const FactorModel &w_model = FactorModel::spectral())
    -> RawEncodings;

/// Raises W_q, W_k, W_v to a shared factor alpha_w and M1, M2 to alpha_m,
/// then sets alpha0 = alpha_s^2 alpha_w^2.
auto assemble_inputs(const RawEncodings &raw) -> TransformerInputs;

auto make_inputs(const ClassicalWeights &w,
                 const FactorModel &s_model = FactorModel::frobenius(),
                 const FactorModel &w_model = FactorModel::spectral())
    -> TransformerInputs;

/// The classical weights with alpha0 taken from the quantum inputs.
auto classical_view(const ClassicalWeights &w, const TransformerInputs &in)
    -> ClassicalWeights;

enum class SoftmaxRoute { Elementwise, Nonlinear };

struct AttentionReport {
    SoftmaxRoute route = SoftmaxRoute::Elementwise;
    Index row = 0;
    /// Tokens that receive attention: N, or j+1 when masked.
    Index limit = 0;
    double Z_j = 0.0;
    std::uint64_t amplification_rounds = 1;
    int poly_degree = 0;
    double taylor_tail = 0.0;
    /// Queries to the softmax argument per amplified state.
    std::uint64_t queries_per_state = 0;
    double eps_bound = 0.0;
    int ancillas = 0;
};

struct SoftmaxResult {
    StateEncoding state;
    AttentionReport report;
};

/// ceil(n log2(1/eps)), at least 1.
auto softmax_degree(Index dim, double eps) -> int;

/**
 * @brief State with amplitudes exp(A_jk / 2 alpha) / sqrt(Z_j), k < limit.
 *
 * Built from the entrywise Taylor polynomial of exp(x/2), row j isolated by
 * projectors, then amplified ceil(sqrt(w / Z_j)) times where w is the padded
 * width of the attended prefix.
 */
auto softmax_state(const BlockEncoding &a_be, Index j, double eps,
                   std::optional<Index> limit = std::nullopt)
    -> SoftmaxResult;

/// Same target through diag(A_j) and an eigenvalue transform.
auto softmax_state_nat(const BlockEncoding &a_be, Index j, double eps,
                       std::optional<Index> limit = std::nullopt)
    -> SoftmaxResult;

/// product(product(S, Wq), adjoint(product(S, Wk))), factor alpha0.
auto attention_scores(const TransformerInputs &in) -> BlockEncoding;

struct AttentionResult {
    /// Row j holds softmax(QK^T / alpha0)_j V, factor alpha_s alpha_w.
    BlockEncoding G_be;
    SoftmaxResult softmax;
};

auto self_attention(const TransformerInputs &in, Index j, double eps)
    -> AttentionResult;
/// Tokens after j receive no attention.
auto masked_self_attention(const TransformerInputs &in, Index j, double eps)
    -> AttentionResult;

/// P_d - u u^T with u the normalized all-ones vector on the first d
/// coordinates, as H (P_d - P_0) H with H the Walsh-Hadamard transform on
/// those coordinates. Exact, factor 1.
auto centering_encoding(Index d, Index dim) -> BlockEncoding;

struct LayerNormResult {
    /// Unamplified; amplitudes are the standardized row over unit length.
    StateEncoding state;
    /// L2 norm of the centered residual row.
    double varsigma = 0.0;
};

/// LN(G_j + S_j) with gamma = 1/sqrt(d), beta = 0.
auto residual_layernorm(const BlockEncoding &g_be, const BlockEncoding &s_be,
                        Index j, Index d) -> LayerNormResult;

/// State proportional to c g(x_k) + x_k.
auto residual_polynomial(const StateEncoding &x, const Polynomial &g, double c)
    -> StateEncoding;

struct FfnResult {
    /// Column 0 holds M2^T GELU(M1^T psi) at its true scale.
    BlockEncoding block;
    StateEncoding state;
    int poly_degree = 0;
    double poly_error = 0.0;
    double normalization = 0.0;
};

/// Zero biases. Throws Degenerate when the output norm is below 1e-12.
auto ffn_gelu(const StateEncoding &psi, const BlockEncoding &m1_be,
              const BlockEncoding &m2_be, double eps) -> FfnResult;

struct StageBounds {
    double softmax = 0.0;
    double attention = 0.0;
    double ln1 = 0.0;
    double ffn = 0.0;
    double output = 0.0;
};

struct StageVectors {
    RealVector softmax_amplitudes;
    RealVector attention;
    RealVector ln1;
    RealVector ffn;
    RealVector output;
};

struct PipelineReport {
    Index row = 0;
    bool masked = false;
    double alpha0 = 0.0;
    AttentionReport attention;
    double varsigma = 0.0;
    double varsigma2 = 0.0;
    std::uint64_t rounds_ln1 = 1;
    std::uint64_t rounds_ln2 = 1;
    int ffn_degree = 0;
    StageBounds bounds;
    /// Realized vectors, length d (the softmax has length N).
    StageVectors stages;
    QueryLedger ledger;
    /// U_S queries divided by the softmax rounds and the elementwise schedule.
    double normalized_queries = 0.0;
    /// log10 of the block precision schedule with unit constants.
    double eps_block_log10 = 0.0;
    std::optional<double> cosine;
    StateEncoding output;
};

/// LN(FFN(x) + x) with x = LN(Attention(S)_j + S_j).
auto single_layer(const TransformerInputs &in, Index j, double eps,
                  bool masked = false) -> PipelineReport;

/// Fills report.cosine from the classical pass on the same alpha0.
void attach_classical(PipelineReport &report, const ClassicalWeights &w);

/// L-infinity distance of each realized stage from the classical one. The
/// softmax stage compares amplitudes with sqrt(softmax), the FFN stage the
/// normalized output.
auto stage_deviations(const PipelineReport &report, const ClassicalStages &st)
    -> StageBounds;

auto within_bounds(const StageBounds &deviation, const StageBounds &bound)
    -> bool;

enum class SignMode { Oracle, Sampled };

struct TomographyResult {
    RealVector vector;
    std::uint64_t samples = 0;
    std::uint64_t preparations = 0;
    QueryLedger ledger;
};

/// ceil(36 ln d / eps^2), at least 1.
auto tomography_samples(Index d, double eps) -> std::uint64_t;

/// Multinomial counts through a chain of binomial draws.
auto sample_counts(const RealVector &probabilities, std::uint64_t shots,
                   std::uint64_t seed) -> std::vector<std::uint64_t>;

/// Unit vector within eps of psi in L-infinity norm with high probability.
/// With `support`, only the leading entries are read and the sample count
/// follows that length; the rest of psi must be zero.
auto tomography(const StateEncoding &psi, double eps, SignMode mode,
                std::uint64_t seed, std::optional<Index> support = std::nullopt)
    -> TomographyResult;

struct MultilayerConfig {
    int layers = 1;
    double eps = 1e-3;
    double tomography_eps = 0.05;
    SignMode sign_mode = SignMode::Oracle;
    FactorModel s_model = FactorModel::frobenius();
    std::uint64_t seed = 0;
};

struct MultilayerResult {
    /// N x d output sequence of the last layer.
    RealMatrix output;
    /// Per layer, one report per row.
    std::vector<std::vector<PipelineReport>> reports;
    /// alpha0 used by each layer.
    std::vector<double> alpha0;
    QueryLedger ledger;
    double normalized_queries = 0.0;
    std::uint64_t samples_per_row = 0;
};

/// Rows run on up to worker_count() threads.
auto multilayer(const ClassicalWeights &w, const MultilayerConfig &config)
    -> MultilayerResult;

} // namespace qformer
