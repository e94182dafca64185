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
#include "qformer/error.hpp"
#include "qformer/verifier.hpp"

namespace {

using namespace qformer;

TEST(Verifier, CnotPermutationMatchesDefinition) {
    for (int n = 1; n <= 3; ++n) {
        const Index dim = Index{1} << n;
        const DenseMatrix p = build_cnot_permutation(n);
        DenseMatrix ref = DenseMatrix::Zero(dim * dim, dim * dim);
        for (Index i = 0; i < dim; ++i) {
            for (Index j = 0; j < dim; ++j) {
                ref(i * dim + (i ^ j), i * dim + j) = 1.0;
            }
        }
        EXPECT_EQ(p, ref) << "n=" << n;
        EXPECT_LT(unitarity_error(p), 1e-15);
    }
}

TEST(Verifier, CnotPermutationExtractsHadamardProduct) {
    // <0| P (A (x) B) P^+ |0> restricted to the diagonal pairs is A o B.
    oracle::Gen gen(31);
    const int n = 2;
    const Index dim = 4;
    const DenseMatrix a = gen.complex(dim, dim);
    const DenseMatrix b = gen.complex(dim, dim);
    const DenseMatrix p = build_cnot_permutation(n);
    const DenseMatrix m = p * oracle::kron(a, b) * p.adjoint();
    DenseMatrix block(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            block(i, j) = m(i * dim, j * dim);
        }
    }
    EXPECT_LT((block - oracle::entrywise(a, b)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Verifier, EmbedOperatorMatchesKron) {
    oracle::Gen gen(32);
    const DenseMatrix x = gen.complex(2, 2);
    const DenseMatrix id = DenseMatrix::Identity(2, 2);
    EXPECT_LT((embed_operator(x, {1}, 3) - oracle::kron(oracle::kron(id, x), id))
                  .cwiseAbs().maxCoeff(), 1e-14);
    const DenseMatrix two = gen.complex(4, 4);
    EXPECT_LT((embed_operator(two, {0, 1}, 3) - oracle::kron(two, id)).cwiseAbs().maxCoeff(),
              1e-14);
    // Reversed targets swap the roles of the two qubits.
    DenseMatrix swap = DenseMatrix::Zero(4, 4);
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    EXPECT_LT((embed_operator(two, {1, 0}, 2) - swap * two * swap).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Verifier, DilateEncodesBlock) {
    oracle::Gen gen(33);
    const DenseMatrix a = gen.complex(4, 4);
    const auto e = dilate(a, 2.0 * oracle::spectral_norm(a));
    EXPECT_LT(unitarity_error(e.unitary), 1e-10);
    EXPECT_LT((e.encoded() - a).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Verifier, EveryKindPasses) {
    for (int n = 1; n <= 2; ++n) {
        const auto suite = run_verify_suite(n, 6, 1e-9, 100 + static_cast<std::uint64_t>(n));
        EXPECT_EQ(suite.instances, 24);
        EXPECT_EQ(suite.failures, 0);
        EXPECT_LT(suite.max_deviation, 1e-9);
        for (const auto &r : suite.reports) {
            EXPECT_LT(r.unitarity, 1e-9) << to_string(r.kind);
        }
    }
}

TEST(Verifier, LcuWithThreeTerms) {
    oracle::Gen gen(34);
    std::vector<BlockEncoding> ops;
    for (int k = 0; k < 3; ++k) {
        ops.push_back(from_matrix(gen.complex(2, 2), FactorModel::spectral(), ""));
    }
    DenseVector y(3);
    y << 0.5, -0.25, 0.125;
    const auto r = verify_composition(CompositionKind::Lcu, ops, 1e-9, y);
    EXPECT_TRUE(r.pass) << r.deviation;
}

TEST(Verifier, QubitCeiling) {
    const auto big = identity_encoding(Index{1} << 7);
    try {
        static_cast<void>(verify_composition(CompositionKind::Hadamard, {big, big}, 1e-9));
        FAIL() << "expected Resource";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Resource);
    }
}

} // namespace
