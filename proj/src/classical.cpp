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
#include "qformer/classical.hpp"

#include <cmath>
#include <random>

#include "qformer/error.hpp"
#include "qformer/polyapprox.hpp"

namespace qformer {

namespace {

auto gaussian(Index rows, Index cols, double stddev, std::mt19937_64 &rng)
    -> RealMatrix {
    std::normal_distribution<double> g(0.0, stddev);
    RealMatrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) {
            m(r, c) = g(rng);
        }
    }
    return m;
}

} // namespace

void check_shapes(const ClassicalWeights &w) {
    const Index n = w.S.rows();
    const Index d = w.S.cols();
    const Index dff = w.M1.cols();
    require(n >= 1 && d >= 1 && dff >= 1, ErrorKind::InvalidInput,
            "empty weights");
    auto square_d = [d](const RealMatrix &m) {
        return m.rows() == d && m.cols() == d;
    };
    require(square_d(w.Wq) && square_d(w.Wk) && square_d(w.Wv),
            ErrorKind::DimensionMismatch, "attention weights must be d x d");
    require(w.M1.rows() == d && w.M2.rows() == dff && w.M2.cols() == d,
            ErrorKind::DimensionMismatch,
            "FFN weights must be d x d_ff and d_ff x d");
    require(w.alpha0 > 0.0 && std::isfinite(w.alpha0), ErrorKind::InvalidInput,
            "alpha0 must be positive");
}

auto classical_softmax_row(const ClassicalWeights &w, Index j, bool masked)
    -> RealVector {
    check_shapes(w);
    const Index n = w.S.rows();
    require(j >= 0 && j < n, ErrorKind::OutOfRange, "token index out of range");
    const RealVector q = (w.S.row(j) * w.Wq).transpose();
    const RealMatrix k = w.S * w.Wk;
    RealVector scores = k * q / w.alpha0;
    const Index limit = masked ? j + 1 : n;
    const double top = scores.head(limit).maxCoeff();
    RealVector out = RealVector::Zero(n);
    for (Index t = 0; t < limit; ++t) {
        out(t) = std::exp(scores(t) - top);
    }
    return out / out.sum();
}

auto classical_layernorm(const RealVector &x, double gamma, double beta)
    -> RealVector {
    const double d = static_cast<double>(x.size());
    const RealVector centered = x.array() - x.mean();
    const double norm = centered.norm();
    require(norm >= kLayerNormFloor, ErrorKind::Degenerate,
            "layer norm of a constant row");
    const double stddev = norm / std::sqrt(d);
    return (gamma * centered / stddev).array() + beta;
}

auto classical_ffn(const RealVector &x, const RealMatrix &m1,
                   const RealMatrix &m2) -> RealVector {
    require(x.size() == m1.rows() && m1.cols() == m2.rows(),
            ErrorKind::DimensionMismatch, "FFN shapes");
    RealVector hidden = m1.transpose() * x;
    for (Index k = 0; k < hidden.size(); ++k) {
        hidden(k) = gelu(hidden(k));
    }
    return m2.transpose() * hidden;
}

auto classical_transformer(const ClassicalWeights &w, Index j, bool masked)
    -> ClassicalStages {
    ClassicalStages st;
    st.softmax = classical_softmax_row(w, j, masked);
    const double gamma =
        w.gamma.value_or(1.0 / std::sqrt(static_cast<double>(w.S.cols())));
    const RealMatrix v = w.S * w.Wv;
    st.attention = v.transpose() * st.softmax;
    st.ln1 = classical_layernorm(st.attention + w.S.row(j).transpose(), gamma,
                                 w.beta);
    st.ffn = classical_ffn(st.ln1, w.M1, w.M2);
    st.output = classical_layernorm(st.ffn + st.ln1, gamma, w.beta);
    return st;
}

auto profile_matrix(const DenseMatrix &a) -> NormProfile {
    require(a.size() > 0, ErrorKind::InvalidInput, "empty matrix");
    require_finite(a, "profiled matrix");
    NormProfile p;
    p.spectral = spectral_norm(a);
    p.frobenius = frobenius_norm(a);
    const RealVector cols = a.colwise().norm().transpose();
    p.column_l2_mean = cols.mean();
    p.column_l2_var = (cols.array() - p.column_l2_mean).square().mean();
    return p;
}

auto random_weights(Index n, Index d, Index d_ff, std::uint64_t seed)
    -> ClassicalWeights {
    require(n >= 1 && d >= 1 && d_ff >= 1, ErrorKind::InvalidInput,
            "dimensions must be positive");
    std::mt19937_64 rng(seed);
    const double sd = 1.0 / std::sqrt(static_cast<double>(d));
    ClassicalWeights w;
    // Weights first, so one seed gives the same weights for every N.
    w.Wq = gaussian(d, d, sd, rng);
    w.Wk = gaussian(d, d, sd, rng);
    w.Wv = gaussian(d, d, sd, rng);
    w.M1 = gaussian(d, d_ff, sd, rng);
    w.M2 = gaussian(d_ff, d, 1.0 / std::sqrt(static_cast<double>(d_ff)), rng);
    w.S = gaussian(n, d, sd, rng);
    w.alpha0 = std::sqrt(static_cast<double>(d));
    return w;
}

} // namespace qformer
