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
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qformer/error.hpp"
#include "qformer/transformer.hpp"

namespace {

using namespace qformer;

/// softmax of Re(A_jk / alpha) over k < limit, by loops.
auto reference_softmax(const BlockEncoding &a, Index j, Index limit) -> std::vector<double> {
    std::vector<double> z;
    for (Index k = 0; k < limit; ++k) {
        z.push_back(a.block(j, k).real() / a.alpha);
    }
    return oracle::softmax(z);
}

auto squared_gap(const StateEncoding &psi, const std::vector<double> &p) -> double {
    double worst = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double a = psi.amplitudes(static_cast<Index>(k));
        worst = std::max(worst, std::abs(a * a - p[k]));
    }
    return worst;
}

TEST(SoftmaxDegree, Formula) {
    EXPECT_EQ(softmax_degree(16, 1e-3), static_cast<int>(std::ceil(4 * std::log2(1e3))));
    EXPECT_EQ(softmax_degree(1, 0.5), 1);
    EXPECT_EQ(softmax_degree(2, 0.5), 1);
    EXPECT_THROW(static_cast<void>(softmax_degree(8, 1.5)), Error);
}

// Amplitudes squared match the softmax row within the tracked bound.
TEST(SoftmaxProperty, ElementwiseRouteWithinBound) {
    oracle::Gen gen(81);
    for (int t = 0; t < 40; ++t) {
        const Index n = Index{1} << gen.integer(1, 4);
        const auto a = from_matrix(to_complex(gen.gaussian(n, n)), FactorModel::spectral(), "U_A");
        const Index j = gen.integer(0, static_cast<int>(n) - 1);
        const double eps = std::pow(10.0, -gen.uniform(2.0, 8.0));
        const auto r = softmax_state(a, j, eps);
        ASSERT_NO_THROW(check_invariants(r.state));
        const auto p = reference_softmax(a, j, n);
        const double b = r.state.eps_bound;
        EXPECT_LE(squared_gap(r.state, p), 2 * b + b * b) << t;
        EXPECT_GE(r.report.Z_j, static_cast<double>(n) / std::numbers::e);
        EXPECT_EQ(r.report.poly_degree, softmax_degree(n, eps));
        EXPECT_EQ(r.state.ledger.count("U_A"),
                  r.report.amplification_rounds * oracle::schedule(r.report.poly_degree));
    }
}

TEST(SoftmaxProperty, PrefixLimitZeroesTail) {
    oracle::Gen gen(82);
    for (int t = 0; t < 20; ++t) {
        const Index n = 8;
        const auto a = from_matrix(to_complex(gen.gaussian(n, n)), FactorModel::frobenius(), "U_A");
        const Index limit = gen.integer(1, 7);
        const Index j = gen.integer(0, 7);
        const auto r = softmax_state(a, j, 1e-6, limit);
        EXPECT_LT(r.state.amplitudes.tail(n - limit).cwiseAbs().maxCoeff(), 1e-15);
        const auto p = reference_softmax(a, j, limit);
        const double b = r.state.eps_bound;
        EXPECT_LE(squared_gap(r.state, p), 2 * b + b * b);
        // ceil(sqrt(w / Z_j)) rounds with w the padded prefix width.
        double z = 0.0;
        for (Index k = 0; k < limit; ++k) {
            z += std::exp(a.block(j, k).real() / a.alpha);
        }
        EXPECT_NEAR(r.report.Z_j, z, 1e-12 * z);
        const double w = static_cast<double>(next_pow2(limit));
        EXPECT_EQ(r.report.amplification_rounds,
                  static_cast<std::uint64_t>(std::max(1.0, std::ceil(std::sqrt(w / z) - 1e-12))));
    }
}

TEST(SoftmaxProperty, NonlinearRouteAgrees) {
    oracle::Gen gen(83);
    for (int t = 0; t < 30; ++t) {
        const Index n = 16;
        const auto a = from_matrix(to_complex(gen.gaussian(n, n)), FactorModel::spectral(), "U_A");
        const Index j = gen.integer(0, 15);
        const auto e = softmax_state(a, j, 1e-5);
        const auto x = softmax_state_nat(a, j, 1e-5);
        const double gap = (e.state.amplitudes - x.state.amplitudes).cwiseAbs().maxCoeff();
        EXPECT_LE(gap, e.state.eps_bound + x.state.eps_bound);
        EXPECT_EQ(x.state.ledger.count("U_A"),
                  x.report.amplification_rounds * 2 * static_cast<std::uint64_t>(x.report.poly_degree));
        const auto p = reference_softmax(a, j, n);
        EXPECT_LE(squared_gap(x.state, p), 2 * x.state.eps_bound + x.state.eps_bound * x.state.eps_bound);
    }
}

TEST(Softmax, ArgumentChecks) {
    const auto a = identity_encoding(4);
    EXPECT_THROW(static_cast<void>(softmax_state(a, 4, 1e-3)), Error);
    EXPECT_THROW(static_cast<void>(softmax_state(a, 0, 0.0)), Error);
    EXPECT_THROW(static_cast<void>(softmax_state(a, 0, 1e-3, Index{0})), Error);
    EXPECT_THROW(static_cast<void>(softmax_state(identity_encoding(3), 0, 1e-3)), Error);
}

TEST(Inputs, PaddingAndFactors) {
    const auto w = random_weights(5, 3, 6, 1);
    const auto in = make_inputs(w);
    EXPECT_EQ(in.dim, 8);
    EXPECT_EQ(in.N, 5);
    EXPECT_NEAR(in.S_be.alpha, w.S.norm(), 1e-12);
    EXPECT_DOUBLE_EQ(in.Wq_be.alpha, in.Wk_be.alpha);
    EXPECT_DOUBLE_EQ(in.Wq_be.alpha, in.Wv_be.alpha);
    EXPECT_DOUBLE_EQ(in.M1_be.alpha, in.M2_be.alpha);
    const double aw = std::max({oracle::spectral_norm(to_complex(w.Wq)),
                                oracle::spectral_norm(to_complex(w.Wk)),
                                oracle::spectral_norm(to_complex(w.Wv))});
    EXPECT_NEAR(in.Wq_be.alpha, aw, 1e-6);
    EXPECT_NEAR(in.alpha0, in.S_be.alpha * in.S_be.alpha * aw * aw, 1e-5);
    EXPECT_EQ(in.S_be.block.bottomRows(3).cwiseAbs().sum(), 0.0);
    EXPECT_EQ(classical_view(w, in).alpha0, in.alpha0);
}

TEST(Attention, ScoresBlock) {
    const auto w = random_weights(4, 4, 4, 2);
    const auto in = make_inputs(w);
    const auto s = attention_scores(in);
    const RealMatrix ref = (w.S * w.Wq) * (w.S * w.Wk).transpose();
    EXPECT_LT((s.block.real().topLeftCorner(4, 4) - ref).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_EQ(s.ledger.count(kLabelS), 2u);
    EXPECT_EQ(s.ledger.count(kLabelWq), 1u);
    EXPECT_EQ(s.ledger.count(kLabelWk), 1u);
}

TEST(AttentionProperty, RowMatchesLoopReference) {
    oracle::Gen gen(84);
    for (int t = 0; t < 30; ++t) {
        const Index n = gen.integer(2, 12);
        const auto w = random_weights(n, 4, 8, gen.seed());
        const auto in = make_inputs(w);
        const Index j = gen.integer(0, static_cast<int>(n) - 1);
        const bool masked = gen.integer(0, 1) == 1;
        const auto r = masked ? masked_self_attention(in, j, 1e-6) : self_attention(in, j, 1e-6);
        const auto ref = oracle::transformer(w.S, w.Wq, w.Wk, w.Wv, w.M1, w.M2, in.alpha0, j, masked);
        const RealVector row = r.G_be.block.row(j).real().head(4).transpose();
        EXPECT_LE(oracle::max_abs_diff(ref.attention, row), r.G_be.eps_bound + 1e-12) << t;
        EXPECT_EQ(r.softmax.report.limit, masked ? j + 1 : n);
        ASSERT_NO_THROW(check_invariants(r.G_be));
    }
}

TEST(Attention, MaskedLastRowEqualsUnmasked) {
    const auto w = random_weights(8, 4, 16, 5);
    const auto in = make_inputs(w);
    const auto a = self_attention(in, 7, 1e-6);
    const auto b = masked_self_attention(in, 7, 1e-6);
    EXPECT_LT((a.G_be.block - b.G_be.block).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Centering, ProjectsOutMean) {
    for (const Index d : {2, 3, 4, 5, 8}) {
        const Index dim = next_pow2(std::max<Index>(d, 8));
        const auto c = centering_encoding(d, dim);
        EXPECT_DOUBLE_EQ(c.alpha, 1.0);
        DenseMatrix ref = DenseMatrix::Zero(dim, dim);
        for (Index i = 0; i < d; ++i) {
            for (Index k = 0; k < d; ++k) {
                ref(i, k) = (i == k ? 1.0 : 0.0) - 1.0 / static_cast<double>(d);
            }
        }
        EXPECT_LT((c.block - ref).cwiseAbs().maxCoeff(), 1e-14) << d;
    }
}

} // namespace
