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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qformer/error.hpp"
#include "qformer/transformer.hpp"

namespace qformer {

namespace {

auto embed(const RealMatrix &m, Index dim) -> DenseMatrix {
    require(m.rows() <= dim && m.cols() <= dim, ErrorKind::DimensionMismatch,
            "matrix larger than the working dimension");
    DenseMatrix out = DenseMatrix::Zero(dim, dim);
    out.topLeftCorner(m.rows(), m.cols()) = m.cast<Complex>();
    return out;
}

auto prefix_set(Index count) -> std::set<Index> {
    std::set<Index> s;
    for (Index k = 0; k < count; ++k) {
        s.insert(k);
    }
    return s;
}

auto unify(const BlockEncoding &a, const BlockEncoding &b,
           const BlockEncoding &c) -> double {
    return std::max({a.alpha, b.alpha, c.alpha});
}

/// sum_{k < limit} exp(A_jk / alpha) from the realized scores.
auto partition_function(const BlockEncoding &a_be, Index j, Index limit)
    -> double {
    double z = 0.0;
    for (Index k = 0; k < limit; ++k) {
        z += std::exp(a_be.block(j, k).real() / a_be.alpha);
    }
    return z;
}

struct SoftmaxSetup {
    Index dim;
    Index limit;
};

auto check_softmax_args(const BlockEncoding &a_be, Index j, double eps,
                        std::optional<Index> limit) -> SoftmaxSetup {
    require(a_be.rows() == a_be.cols(), ErrorKind::DimensionMismatch,
            "softmax argument must be square");
    const Index dim = a_be.rows();
    static_cast<void>(log2_exact(dim));
    require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidInput,
            "eps must lie in (0, 1)");
    const Index lim = limit.value_or(dim);
    require(lim >= 1 && lim <= dim, ErrorKind::OutOfRange,
            "attention limit out of range");
    require(j >= 0 && j < dim, ErrorKind::OutOfRange, "row out of range");
    return {dim, lim};
}

auto attention_impl(const TransformerInputs &in, Index j, double eps,
                    Index limit) -> AttentionResult {
    require(j >= 0 && j < in.N, ErrorKind::OutOfRange,
            "token index out of range");
    const BlockEncoding scores = attention_scores(in);
    AttentionResult out;
    out.softmax = softmax_state(scores, j, eps, limit);
    const BlockEncoding col = state_block(out.softmax.state, j, in.dim);
    const BlockEncoding probs = hadamard_product(col, col);
    const BlockEncoding v = product(in.S_be, in.Wv_be);
    out.G_be = product(adjoint(probs), v);
    return out;
}

} // namespace

auto working_dimension(Index n, Index d, Index d_ff) -> Index {
    require(n >= 1 && d >= 1 && d_ff >= 1, ErrorKind::InvalidInput,
            "dimensions must be positive");
    return next_pow2(std::max({n, d, d_ff}));
}

auto encode_weights(const ClassicalWeights &w, const FactorModel &s_model,
                    const FactorModel &w_model) -> RawEncodings {
    check_shapes(w);
    RawEncodings raw;
    raw.N = w.S.rows();
    raw.d = w.S.cols();
    raw.d_ff = w.M1.cols();
    raw.dim = working_dimension(raw.N, raw.d, raw.d_ff);
    raw.S_be = from_matrix(embed(w.S, raw.dim), s_model, kLabelS);
    raw.Wq_be = from_matrix(embed(w.Wq, raw.dim), w_model, kLabelWq);
    raw.Wk_be = from_matrix(embed(w.Wk, raw.dim), w_model, kLabelWk);
    raw.Wv_be = from_matrix(embed(w.Wv, raw.dim), w_model, kLabelWv);
    raw.M1_be = from_matrix(embed(w.M1, raw.dim), w_model, kLabelM1);
    raw.M2_be = from_matrix(embed(w.M2, raw.dim), w_model, kLabelM2);
    return raw;
}

auto assemble_inputs(const RawEncodings &raw) -> TransformerInputs {
    for (const auto *be : {&raw.S_be, &raw.Wq_be, &raw.Wk_be, &raw.Wv_be,
                           &raw.M1_be, &raw.M2_be}) {
        require(be->rows() == raw.dim && be->cols() == raw.dim,
                ErrorKind::DimensionMismatch,
                "input encodings must share the working dimension");
    }
    TransformerInputs in;
    in.N = raw.N;
    in.d = raw.d;
    in.d_ff = raw.d_ff;
    in.dim = raw.dim;
    in.S_be = raw.S_be;
    const double alpha_w = unify(raw.Wq_be, raw.Wk_be, raw.Wv_be);
    in.Wq_be = relax_factor(raw.Wq_be, alpha_w);
    in.Wk_be = relax_factor(raw.Wk_be, alpha_w);
    in.Wv_be = relax_factor(raw.Wv_be, alpha_w);
    const double alpha_m = std::max(raw.M1_be.alpha, raw.M2_be.alpha);
    in.M1_be = relax_factor(raw.M1_be, alpha_m);
    in.M2_be = relax_factor(raw.M2_be, alpha_m);
    in.alpha0 = in.S_be.alpha * in.S_be.alpha * alpha_w * alpha_w;
    return in;
}

auto make_inputs(const ClassicalWeights &w, const FactorModel &s_model,
                 const FactorModel &w_model) -> TransformerInputs {
    return assemble_inputs(encode_weights(w, s_model, w_model));
}

auto classical_view(const ClassicalWeights &w, const TransformerInputs &in)
    -> ClassicalWeights {
    ClassicalWeights out = w;
    out.alpha0 = in.alpha0;
    return out;
}

auto softmax_degree(Index dim, double eps) -> int {
    require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidInput,
            "eps must lie in (0, 1)");
    const double n = std::max(1, ceil_log2(dim));
    return std::max(1, static_cast<int>(std::ceil(n * std::log2(1.0 / eps))));
}

auto softmax_state(const BlockEncoding &a_be, Index j, double eps,
                   std::optional<Index> limit) -> SoftmaxResult {
    const auto [dim, lim] = check_softmax_args(a_be, j, eps, limit);
    const int ell = softmax_degree(dim, eps);
    const Index width = next_pow2(lim);

    BlockEncoding e = elementwise_poly(a_be, taylor_exp(ell, true), j, width);
    e = product(projector_encoding({j}, dim), e);
    if (lim < dim) {
        e = product(e, projector_encoding(prefix_set(lim), dim));
    }
    const double tail = taylor_exp_tail(ell, true);
    // 1e-12 covers rounding in the simulated Hadamard powers.
    e = add_error(e, std::sqrt(static_cast<double>(lim)) * tail + 1e-12);

    const StateEncoding raw = state_from_column(adjoint(e), j);
    SoftmaxResult out;
    out.report.route = SoftmaxRoute::Elementwise;
    out.report.row = j;
    out.report.limit = lim;
    out.report.Z_j = partition_function(a_be, j, lim);
    out.report.amplification_rounds = amplification_rounds(
        std::max(1.0, std::sqrt(static_cast<double>(width) / out.report.Z_j)));
    out.report.poly_degree = ell;
    out.report.taylor_tail = tail;
    out.report.queries_per_state = mul_checked(
        out.report.amplification_rounds, elementwise_query_schedule(ell));
    out.state = amplify(raw, out.report.amplification_rounds);
    out.report.eps_bound = out.state.eps_bound;
    out.report.ancillas = out.state.ancillas;
    return out;
}

auto softmax_state_nat(const BlockEncoding &a_be, Index j, double eps,
                       std::optional<Index> limit) -> SoftmaxResult {
    const auto [dim, lim] = check_softmax_args(a_be, j, eps, limit);
    // exp(x/2) / (2 sqrt(e)) keeps |f| <= 1/2 on [-1, 1].
    const double shrink = 0.5 / std::sqrt(std::numbers::e);
    int ell = 1;
    while (taylor_exp_tail(ell, true) * shrink > eps) {
        ++ell;
        require(ell <= kMaxApproxDegree, ErrorKind::UnreachablePrecision,
                "softmax degree exceeds the cap");
    }
    std::vector<long double> coeffs = taylor_exp(ell, true).coeffs();
    for (auto &c : coeffs) {
        c *= static_cast<long double>(shrink);
    }
    const double tail = taylor_exp_tail(ell, true);

    BlockEncoding f = eigen_transform(diag_from_row(a_be, j), Polynomial(coeffs));
    f = add_error(f, tail * shrink);
    if (lim < dim) {
        f = product(f, projector_encoding(prefix_set(lim), dim));
    }
    f = product(f, walsh_hadamard_encoding(dim));

    const StateEncoding raw = state_from_column(f, 0);
    SoftmaxResult out;
    out.report.route = SoftmaxRoute::Nonlinear;
    out.report.row = j;
    out.report.limit = lim;
    out.report.Z_j = partition_function(a_be, j, lim);
    out.report.amplification_rounds = amplification_rounds(raw.alpha);
    out.report.poly_degree = ell;
    out.report.taylor_tail = tail;
    out.report.queries_per_state = mul_checked(
        out.report.amplification_rounds, 2 * static_cast<std::uint64_t>(ell));
    out.state = amplify(raw, out.report.amplification_rounds);
    out.report.eps_bound = out.state.eps_bound;
    out.report.ancillas = out.state.ancillas;
    return out;
}

auto attention_scores(const TransformerInputs &in) -> BlockEncoding {
    const BlockEncoding q = product(in.S_be, in.Wq_be);
    const BlockEncoding k = product(in.S_be, in.Wk_be);
    return product(q, adjoint(k));
}

auto self_attention(const TransformerInputs &in, Index j, double eps)
    -> AttentionResult {
    return attention_impl(in, j, eps, in.N);
}

auto masked_self_attention(const TransformerInputs &in, Index j, double eps)
    -> AttentionResult {
    return attention_impl(in, j, eps, j + 1);
}

} // namespace qformer
