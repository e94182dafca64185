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

#include "oracles.hpp"
#include "qformer/classical.hpp"
#include "qformer/error.hpp"

namespace {

using namespace qformer;

auto stages_of(const ClassicalWeights &w, Index j, bool masked) -> oracle::Stages {
    return oracle::transformer(w.S, w.Wq, w.Wk, w.Wv, w.M1, w.M2, w.alpha0, j, masked);
}

TEST(Classical, MatchesLoopReference) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto w = random_weights(6, 4, 8, seed);
        for (Index j = 0; j < 6; ++j) {
            for (const bool masked : {false, true}) {
                const auto st = classical_transformer(w, j, masked);
                const auto ref = stages_of(w, j, masked);
                EXPECT_LT(oracle::max_abs_diff(ref.softmax, st.softmax), 1e-13);
                EXPECT_LT(oracle::max_abs_diff(ref.attention, st.attention), 1e-13);
                EXPECT_LT(oracle::max_abs_diff(ref.ln1, st.ln1), 1e-12);
                EXPECT_LT(oracle::max_abs_diff(ref.ffn, st.ffn), 1e-12);
                EXPECT_LT(oracle::max_abs_diff(ref.output, st.output), 1e-12);
            }
        }
    }
}

TEST(Classical, MaskedSoftmaxHasPrefixSupport) {
    const auto w = random_weights(8, 4, 16, 3);
    const RealVector p = classical_softmax_row(w, 2, true);
    ASSERT_EQ(p.size(), 8);
    EXPECT_NEAR(p.head(3).sum(), 1.0, 1e-14);
    EXPECT_EQ(p.tail(5).cwiseAbs().sum(), 0.0);
    // Last row: masked equals unmasked.
    EXPECT_LT((classical_softmax_row(w, 7, true) - classical_softmax_row(w, 7, false))
                  .cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Classical, SoftmaxStableForLargeScores) {
    auto w = random_weights(4, 2, 2, 4);
    w.S *= 1e3;
    const RealVector p = classical_softmax_row(w, 0, false);
    EXPECT_TRUE(p.allFinite());
    EXPECT_NEAR(p.sum(), 1.0, 1e-12);
}

TEST(Classical, LayerNormIsUnitWithDefaultGamma) {
    oracle::Gen gen(51);
    for (int t = 0; t < 50; ++t) {
        const Index d = gen.integer(2, 12);
        const RealVector x = gen.gaussian(d, 1).col(0);
        const RealVector y = classical_layernorm(x, 1.0 / std::sqrt(static_cast<double>(d)), 0.0);
        EXPECT_NEAR(y.norm(), 1.0, 1e-12);
        EXPECT_NEAR(y.sum(), 0.0, 1e-12);
        // Shift invariance.
        const RealVector z = classical_layernorm(x.array() + 3.0, 1.0 / std::sqrt(static_cast<double>(d)), 0.0);
        EXPECT_LT((y - z).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Classical, LayerNormConstantIsDegenerate) {
    try {
        static_cast<void>(classical_layernorm(RealVector::Constant(4, 2.0), 1.0, 0.0));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
    }
}

TEST(Classical, ShapeChecks) {
    auto w = random_weights(4, 3, 5, 0);
    w.Wk = RealMatrix::Zero(2, 3);
    try {
        check_shapes(w);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(Classical, RandomWeightsShareWeightsAcrossN) {
    const auto a = random_weights(8, 4, 16, 9);
    const auto b = random_weights(64, 4, 16, 9);
    EXPECT_EQ(a.Wq, b.Wq);
    EXPECT_EQ(a.M2, b.M2);
    EXPECT_EQ(a.S, b.S.topRows(8));
    EXPECT_DOUBLE_EQ(a.alpha0, 2.0);
}

TEST(Profile, KnownMatrix) {
    DenseMatrix a = DenseMatrix::Zero(2, 2);
    a(0, 0) = 3.0;
    a(1, 1) = 4.0;
    const auto p = profile_matrix(a);
    EXPECT_NEAR(p.spectral, 4.0, 1e-12);
    EXPECT_NEAR(p.frobenius, 5.0, 1e-12);
    EXPECT_NEAR(p.column_l2_mean, 3.5, 1e-12);
    EXPECT_NEAR(p.column_l2_var, 0.25, 1e-12);
}

TEST(ProfileProperty, NormsAreOrdered) {
    oracle::Gen gen(52);
    for (int t = 0; t < 40; ++t) {
        const DenseMatrix a = gen.complex(gen.integer(1, 7), gen.integer(1, 7));
        const auto p = profile_matrix(a);
        EXPECT_NEAR(p.spectral, oracle::spectral_norm(a), 1e-6 * p.spectral);
        EXPECT_LE(p.spectral, p.frobenius * (1 + 1e-12));
        EXPECT_GE(p.column_l2_var, 0.0);
        // Mean of squared column norms equals F^2 / cols.
        EXPECT_NEAR(p.column_l2_var + p.column_l2_mean * p.column_l2_mean,
                    p.frobenius * p.frobenius / static_cast<double>(a.cols()), 1e-10);
    }
}

} // namespace
