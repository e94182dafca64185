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

#include "oracles.hpp"
#include "qformer/error.hpp"
#include "qformer/transformer.hpp"

namespace {

using namespace qformer;

auto ref_stages(const ClassicalWeights &w, const TransformerInputs &in, Index j, bool masked)
    -> oracle::Stages {
    return oracle::transformer(w.S, w.Wq, w.Wk, w.Wv, w.M1, w.M2, in.alpha0, j, masked);
}

auto leaf(const RealMatrix &m, Index dim, const std::string &label) -> BlockEncoding {
    RealMatrix p = RealMatrix::Zero(dim, dim);
    p.topLeftCorner(m.rows(), m.cols()) = m;
    return from_matrix(to_complex(p), FactorModel::frobenius(), label);
}

TEST(LayerNorm, ResidualRowIsStandardized) {
    oracle::Gen gen(91);
    for (int t = 0; t < 30; ++t) {
        const Index d = gen.integer(2, 8);
        const Index dim = next_pow2(d);
        const Index j = gen.integer(0, static_cast<int>(dim) - 1);
        const RealMatrix g = gen.gaussian(dim, d);
        const RealMatrix s = gen.gaussian(dim, d);
        const auto r = residual_layernorm(leaf(g, dim, "G"), leaf(s, dim, "S"), j, d);
        std::vector<double> x;
        for (Index k = 0; k < d; ++k) {
            x.push_back(g(j, k) + s(j, k));
        }
        const auto ref = oracle::layernorm(x);
        EXPECT_LT(oracle::max_abs_diff(ref, r.state.amplitudes), 1e-12) << t;
        EXPECT_NEAR(r.state.amplitudes.norm(), 1.0, 1e-12);
        EXPECT_EQ(r.state.ledger.count("G"), 1u);
        EXPECT_EQ(r.state.ledger.count("S"), 1u);
    }
}

TEST(LayerNorm, ConstantRowIsDegenerate) {
    RealMatrix g = RealMatrix::Zero(4, 4);
    g.row(1).setConstant(2.0);
    g(0, 0) = 1.0;
    try {
        static_cast<void>(residual_layernorm(leaf(g, 4, "G"), leaf(RealMatrix::Zero(4, 4), 4, "S"), 1, 4));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
    }
}

TEST(ResidualPolynomial, OddAndConstantCases) {
    oracle::Gen gen(92);
    for (int t = 0; t < 20; ++t) {
        StateEncoding x;
        x.amplitudes = gen.unit_vector(8);
        const double c = gen.uniform(0.1, 2.0);
        for (const bool with_constant : {false, true}) {
            const Polynomial g = with_constant ? Polynomial({0.3L, 0.0L, 1.0L})
                                               : Polynomial({0.0L, 0.5L, 0.0L, -1.0L});
            const auto r = residual_polynomial(x, g, c);
            RealVector want(8);
            for (Index k = 0; k < 8; ++k) {
                want(k) = c * eval_poly(g, x.amplitudes(k)) + x.amplitudes(k);
            }
            want /= want.norm();
            EXPECT_LT((r.amplitudes - want).cwiseAbs().maxCoeff(), 1e-10) << t;
        }
    }
}

TEST(Ffn, ColumnIsGeluMap) {
    oracle::Gen gen(93);
    for (int t = 0; t < 20; ++t) {
        const auto w = random_weights(4, 4, 16, gen.seed());
        const auto in = make_inputs(w);
        StateEncoding psi;
        psi.amplitudes = RealVector::Zero(in.dim);
        psi.amplitudes.head(4) = gen.unit_vector(4);
        const double eps = 1e-6;
        const auto r = ffn_gelu(psi, in.M1_be, in.M2_be, eps);
        std::vector<double> h(16);
        for (Index f = 0; f < 16; ++f) {
            double acc = 0.0;
            for (Index c = 0; c < 4; ++c) {
                acc += psi.amplitudes(c) * w.M1(c, f);
            }
            h[static_cast<std::size_t>(f)] = oracle::gelu(acc);
        }
        for (Index c = 0; c < 4; ++c) {
            double y = 0.0;
            for (Index f = 0; f < 16; ++f) {
                y += h[static_cast<std::size_t>(f)] * w.M2(f, c);
            }
            EXPECT_LE(std::abs(r.block.block(c, 0).real() - y), r.block.eps_bound + 1e-12);
        }
        EXPECT_NEAR(r.state.amplitudes.norm(), 1.0, 1e-12);
        EXPECT_EQ(r.poly_degree % 2, 1);
        EXPECT_LE(r.poly_error, eps);
    }
}

TEST(SingleLayer, CosineAndBoundsOverSeeds) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto w = random_weights(8, 4, 16, seed);
        const auto in = make_inputs(w);
        const Index j = static_cast<Index>(seed % 8);
        auto rep = single_layer(in, j, 1e-4);
        attach_classical(rep, w);
        ASSERT_TRUE(rep.cosine.has_value());
        EXPECT_GE(*rep.cosine, 1.0 - 1e-6);
        const auto ref = ref_stages(w, in, j, false);
        EXPECT_GE(oracle::cosine(ref.output, rep.stages.output), 1.0 - 1e-6);
        const auto dev = stage_deviations(rep, classical_transformer(classical_view(w, in), j, false));
        EXPECT_TRUE(within_bounds(dev, rep.bounds)) << seed;
        EXPECT_NO_THROW(check_invariants(rep.output));
        EXPECT_GT(rep.ledger.count(kLabelS), 0u);
        EXPECT_GT(rep.ledger.count(kLabelM2), 0u);
        EXPECT_GT(rep.normalized_queries, 0.0);
        EXPECT_LT(rep.eps_block_log10, 0.0);
    }
}

TEST(SingleLayer, MaskedMatchesMaskedReference) {
    const auto w = random_weights(8, 4, 16, 7);
    const auto in = make_inputs(w);
    for (Index j = 0; j < 8; ++j) {
        const auto rep = single_layer(in, j, 1e-5, true);
        const auto ref = ref_stages(w, in, j, true);
        EXPECT_GE(oracle::cosine(ref.output, rep.stages.output), 1.0 - 1e-6);
        EXPECT_EQ(rep.attention.limit, j + 1);
    }
    const auto last_m = single_layer(in, 7, 1e-5, true);
    const auto last_u = single_layer(in, 7, 1e-5, false);
    EXPECT_LT((last_m.stages.output - last_u.stages.output).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(SingleLayer, TokenOutOfRange) {
    const auto in = make_inputs(random_weights(4, 4, 4, 0));
    try {
        static_cast<void>(single_layer(in, 4, 1e-3));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
    }
}

TEST(StageBounds, WithinBoundsIsComponentwise) {
    StageBounds b{1, 1, 1, 1, 1};
    StageBounds d{0.5, 0.5, 0.5, 0.5, 0.5};
    EXPECT_TRUE(within_bounds(d, b));
    d.ffn = 2.0;
    EXPECT_FALSE(within_bounds(d, b));
}

TEST(Tomography, SampleCount) {
    EXPECT_EQ(tomography_samples(16, 0.1), 9982u);
    EXPECT_EQ(tomography_samples(1, 0.1), 1u);
}

TEST(Tomography, CountsSumToShots) {
    oracle::Gen gen(94);
    for (int t = 0; t < 20; ++t) {
        const RealVector v = gen.unit_vector(gen.integer(1, 20));
        const std::uint64_t shots = static_cast<std::uint64_t>(gen.integer(1, 5000));
        const auto c = sample_counts(v.cwiseAbs2(), shots, gen.seed());
        std::uint64_t sum = 0;
        for (const auto x : c) {
            sum += x;
        }
        EXPECT_EQ(sum, shots);
    }
}

TEST(Tomography, BasisStatesExact) {
    for (Index k = 0; k < 16; ++k) {
        for (const SignMode mode : {SignMode::Oracle, SignMode::Sampled}) {
            StateEncoding psi;
            psi.amplitudes = RealVector::Zero(16);
            psi.amplitudes(k) = (k % 2) ? -1.0 : 1.0;
            const auto r = tomography(psi, 0.1, mode, static_cast<std::uint64_t>(k));
            EXPECT_EQ(r.vector, psi.amplitudes) << k;
        }
    }
}

TEST(TomographyProperty, LinfErrorMostlyWithinEps) {
    oracle::Gen gen(95);
    int fails = 0;
    const int runs = 200;
    for (int t = 0; t < runs; ++t) {
        StateEncoding psi;
        psi.amplitudes = gen.unit_vector(8);
        psi.ledger.counts["U"] = 3;
        const auto mode = t % 2 ? SignMode::Sampled : SignMode::Oracle;
        const auto r = tomography(psi, 0.1, mode, gen.seed());
        EXPECT_NEAR(r.vector.norm(), 1.0, 1e-12);
        EXPECT_EQ(r.ledger.count("U"), 3 * r.preparations);
        EXPECT_EQ(r.preparations, (mode == SignMode::Sampled ? 2 : 1) * r.samples);
        fails += (r.vector - psi.amplitudes).cwiseAbs().maxCoeff() > 0.1 ? 1 : 0;
    }
    EXPECT_LE(fails, runs / 20);
}

TEST(Tomography, SupportRestriction) {
    StateEncoding psi;
    psi.amplitudes = RealVector::Zero(16);
    psi.amplitudes.head(4) << 0.5, -0.5, 0.5, 0.5;
    const auto r = tomography(psi, 0.05, SignMode::Oracle, 1, Index{4});
    EXPECT_EQ(r.vector.size(), 4);
    EXPECT_EQ(r.samples, tomography_samples(4, 0.05));
    psi.amplitudes(9) = 0.1;
    EXPECT_THROW(static_cast<void>(tomography(psi, 0.05, SignMode::Oracle, 1, Index{4})), Error);
}

TEST(Multilayer, OneLayerTracksClassical) {
    const auto w = random_weights(6, 4, 8, 3);
    MultilayerConfig c;
    c.layers = 1;
    c.tomography_eps = 0.05;
    const auto r = multilayer(w, c);
    ASSERT_EQ(r.alpha0.size(), 1u);
    ASSERT_EQ(r.reports.size(), 1u);
    EXPECT_EQ(r.reports.front().size(), 6u);
    EXPECT_EQ(r.samples_per_row, tomography_samples(4, 0.05));
    ClassicalWeights cw = w;
    cw.alpha0 = r.alpha0.front();
    for (Index j = 0; j < 6; ++j) {
        const auto st = classical_transformer(cw, j, false);
        EXPECT_NEAR(r.output.row(j).norm(), 1.0, 1e-12);
        EXPECT_LT((r.output.row(j).transpose() - st.output).cwiseAbs().maxCoeff(), 2 * c.tomography_eps);
    }
    EXPECT_GT(r.ledger.count(kLabelS), 0u);
}

TEST(Multilayer, DeterministicPerSeed) {
    const auto w = random_weights(4, 4, 4, 8);
    MultilayerConfig c;
    c.layers = 2;
    c.sign_mode = SignMode::Sampled;
    c.seed = 17;
    const auto a = multilayer(w, c);
    const auto b = multilayer(w, c);
    EXPECT_EQ(a.output, b.output);
    EXPECT_EQ(a.ledger, b.ledger);
    EXPECT_EQ(a.alpha0.size(), 2u);
}

} // namespace
