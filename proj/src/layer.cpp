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
#include "qformer/parallel.hpp"
#include "qformer/transformer.hpp"

namespace qformer {

namespace {

/// Target sup of a rescaled polynomial, kept under 1/2 between grid points.
constexpr double kHalfMargin = 0.49;

auto head_real(const DenseVector &v, Index count) -> RealVector {
    return v.head(count).real();
}

/// max |p(x)| on the default grid of [-1, 1].
auto grid_sup(const Polynomial &p) -> double {
    double best = 0.0;
    for (int i = 0; i < kApproxGridPoints; ++i) {
        const double x = -1.0 + 2.0 * i / (kApproxGridPoints - 1);
        best = std::max(best, std::abs(eval_poly(p, x)));
    }
    return best;
}

/// Coefficients of p(alpha x) * factor.
auto rescaled(const Polynomial &p, double alpha, double factor) -> Polynomial {
    std::vector<long double> c = p.coeffs();
    long double pw = 1.0L;
    for (auto &v : c) {
        v *= pw * static_cast<long double>(factor);
        pw *= static_cast<long double>(alpha);
    }
    return Polynomial(c);
}

auto cosine(const RealVector &a, const RealVector &b) -> double {
    const double na = a.norm();
    const double nb = b.norm();
    require(na > 0.0 && nb > 0.0, ErrorKind::Degenerate, "zero vector");
    return a.dot(b) / (na * nb);
}

} // namespace

auto centering_encoding(Index d, Index dim) -> BlockEncoding {
    require(d >= 1 && d <= dim, ErrorKind::OutOfRange,
            "feature count outside the working dimension");
    static_cast<void>(log2_exact(dim));
    if (is_pow2(d)) {
        // H_d on the first d coordinates, identity elsewhere.
        BlockEncoding h;
        h.block = DenseMatrix::Identity(dim, dim);
        h.block.topLeftCorner(d, d) = walsh_hadamard(log2_exact(d));
        std::set<Index> keep;
        for (Index k = 1; k < d; ++k) {
            keep.insert(k);
        }
        return product(product(h, projector_encoding(keep, dim)), h);
    }
    // Same projector written out; it still needs one ancilla.
    BlockEncoding c;
    c.block = DenseMatrix::Zero(dim, dim);
    c.block.topLeftCorner(d, d) =
        DenseMatrix::Identity(d, d) -
        DenseMatrix::Constant(d, d, Complex(1.0 / static_cast<double>(d), 0.0));
    c.ancillas = 1;
    c.ledger.ancilla_peak = 1;
    return c;
}

auto residual_layernorm(const BlockEncoding &g_be, const BlockEncoding &s_be,
                        Index j, Index d) -> LayerNormResult {
    require(g_be.rows() == s_be.rows() && g_be.cols() == s_be.cols() &&
                g_be.rows() == g_be.cols(),
            ErrorKind::DimensionMismatch, "residual operands differ in shape");
    require(j >= 0 && j < g_be.rows(), ErrorKind::OutOfRange,
            "row out of range");
    DenseVector y(2);
    y << g_be.alpha, s_be.alpha;
    const BlockEncoding sum =
        lcu({normalize(g_be), normalize(s_be)}, make_state_prep_pair(y));
    const BlockEncoding centered =
        product(sum, centering_encoding(d, g_be.cols()));
    LayerNormResult out;
    out.varsigma = centered.block.row(j).norm();
    require(out.varsigma >= kLayerNormFloor, ErrorKind::Degenerate,
            "layer norm of a constant row");
    out.state = state_from_column(adjoint(centered), j);
    return out;
}

auto residual_polynomial(const StateEncoding &x, const Polynomial &g, double c)
    -> StateEncoding {
    require(c > 0.0 && std::isfinite(c), ErrorKind::InvalidInput,
            "c must be positive");
    if (g.is_zero()) {
        return x;
    }
    const Index dim = x.dim();
    const BlockEncoding xs = state_block(x, 0, dim);
    const BlockEncoding dx = diag_from_state(x, false);
    BlockEncoding combined;
    if (g.coeff(0) == 0.0L) {
        // g(t) = t h(t): apply diag(h(x)) to x itself.
        std::vector<long double> hc(g.coeffs().begin() + 1, g.coeffs().end());
        const Polynomial h(hc);
        const double eta = grid_sup(rescaled(h, x.alpha, 1.0));
        if (eta == 0.0) {
            return x;
        }
        const BlockEncoding fh = scale(
            eigen_transform(dx, rescaled(h, x.alpha, kHalfMargin / eta)),
            eta / kHalfMargin);
        const BlockEncoding gx = product(fh, xs);
        DenseVector y(2);
        y << c * gx.alpha, xs.alpha;
        combined = lcu({normalize(gx), normalize(xs)}, make_state_prep_pair(y));
    } else {
        const double gmax = grid_sup(rescaled(g, x.alpha, 1.0));
        const BlockEncoding fg = scale(
            eigen_transform(dx, rescaled(g, x.alpha, kHalfMargin / gmax)),
            gmax / kHalfMargin);
        // Column 0 of diag(g(x)) H is g(x)/sqrt(N).
        const BlockEncoding gx =
            scale(product(fg, walsh_hadamard_encoding(dim)),
                  std::sqrt(static_cast<double>(dim)));
        DenseVector y(2);
        y << c * gx.alpha, xs.alpha;
        combined = lcu({normalize(gx), normalize(xs)}, make_state_prep_pair(y));
    }
    require(combined.block.col(0).norm() > 1e-12, ErrorKind::Degenerate,
            "residual output is zero");
    return state_from_column(combined, 0);
}

auto ffn_gelu(const StateEncoding &psi, const BlockEncoding &m1_be,
              const BlockEncoding &m2_be, double eps) -> FfnResult {
    const Index dim = psi.dim();
    require(m1_be.rows() == dim && m1_be.cols() == dim && m2_be.rows() == dim &&
                m2_be.cols() == dim,
            ErrorKind::DimensionMismatch, "FFN weights must match the state");
    require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidInput,
            "eps must lie in (0, 1)");
    const BlockEncoding u = product(adjoint(m1_be), state_block(psi, 0, dim));
    const auto [erf_part, rep] =
        erf_poly(u.alpha / std::numbers::sqrt2, 1.0, eps);
    const double t = eps;
    // q = (1 + erf) / (4 (1 + t)) stays below 1/2 in magnitude.
    std::vector<long double> qc = erf_part.coeffs();
    for (auto &c : qc) {
        c /= 4.0L * (1.0L + t);
    }
    qc[0] += 1.0L / (4.0L * (1.0L + t));
    BlockEncoding half_gate = eigen_transform(diag_from_column(u, 0), Polynomial(qc));
    half_gate = add_error(scale(half_gate, 2.0 * (1.0 + t)), 0.5 * t);

    FfnResult out;
    out.block = product(adjoint(m2_be), product(half_gate, u));
    out.normalization = out.block.block.col(0).norm();
    require(out.normalization >= 1e-12, ErrorKind::Degenerate,
            "FFN output is zero");
    out.state = state_from_column(out.block, 0);
    out.poly_degree = erf_part.degree();
    out.poly_error = rep.max_error;
    return out;
}

auto single_layer(const TransformerInputs &in, Index j, double eps,
                  bool masked) -> PipelineReport {
    const AttentionResult att =
        masked ? masked_self_attention(in, j, eps) : self_attention(in, j, eps);
    const LayerNormResult ln1 = residual_layernorm(att.G_be, in.S_be, j, in.d);
    const StateEncoding psi1 = amplify(ln1.state);
    const FfnResult ffn = ffn_gelu(psi1, in.M1_be, in.M2_be, eps);
    const LayerNormResult ln2 =
        residual_layernorm(adjoint(ffn.block),
                           adjoint(state_block(psi1, 0, in.dim)), 0, in.d);
    const StateEncoding psi2 = amplify(ln2.state);

    PipelineReport rep;
    rep.row = j;
    rep.masked = masked;
    rep.alpha0 = in.alpha0;
    rep.attention = att.softmax.report;
    rep.varsigma = ln1.varsigma;
    rep.varsigma2 = ln2.varsigma;
    rep.rounds_ln1 = amplification_rounds(ln1.state.alpha);
    rep.rounds_ln2 = amplification_rounds(ln2.state.alpha);
    rep.ffn_degree = ffn.poly_degree;

    rep.bounds.softmax = att.softmax.state.eps_bound;
    rep.bounds.attention = att.G_be.eps_bound;
    rep.bounds.ln1 = psi1.eps_bound;
    rep.bounds.ffn = ffn.state.eps_bound;
    rep.bounds.output = psi2.eps_bound;

    rep.stages.softmax_amplitudes = att.softmax.state.amplitudes.head(in.N);
    rep.stages.attention =
        head_real(att.G_be.block.row(j).transpose(), in.d);
    rep.stages.ln1 = psi1.amplitudes.head(in.d);
    rep.stages.ffn = ffn.state.amplitudes.head(in.d);
    rep.stages.output = psi2.amplitudes.head(in.d);

    rep.ledger = psi2.ledger;
    const double per_softmax =
        static_cast<double>(rep.attention.amplification_rounds) *
        static_cast<double>(elementwise_query_schedule(rep.attention.poly_degree));
    rep.normalized_queries =
        static_cast<double>(rep.ledger.count(kLabelS)) / per_softmax;

    // eps^8 d^-4 a_m^-14 a_s^-6 a_w^-6 s^2 s'^8 sqrt(Z/N), unit constants.
    const double log_block =
        8.0 * std::log10(eps) - 4.0 * std::log10(static_cast<double>(in.d)) -
        14.0 * std::log10(in.M1_be.alpha) - 6.0 * std::log10(in.S_be.alpha) -
        6.0 * std::log10(in.Wq_be.alpha) + 2.0 * std::log10(rep.varsigma) +
        8.0 * std::log10(rep.varsigma2) +
        0.5 * std::log10(rep.attention.Z_j /
                         static_cast<double>(rep.attention.limit));
    rep.eps_block_log10 = log_block;
    rep.output = psi2;
    return rep;
}

void attach_classical(PipelineReport &report, const ClassicalWeights &w) {
    ClassicalWeights cw = w;
    cw.alpha0 = report.alpha0;
    const ClassicalStages st = classical_transformer(cw, report.row, report.masked);
    report.cosine = cosine(report.stages.output, st.output);
}

auto stage_deviations(const PipelineReport &report, const ClassicalStages &st)
    -> StageBounds {
    auto linf = [](const RealVector &a, const RealVector &b) {
        require(a.size() == b.size(), ErrorKind::DimensionMismatch,
                "stage lengths differ");
        return (a - b).cwiseAbs().maxCoeff();
    };
    const double fn = st.ffn.norm();
    require(fn > 0.0, ErrorKind::Degenerate, "classical FFN output is zero");
    StageBounds dev;
    dev.softmax = linf(report.stages.softmax_amplitudes, st.softmax.cwiseSqrt());
    dev.attention = linf(report.stages.attention, st.attention);
    dev.ln1 = linf(report.stages.ln1, st.ln1);
    dev.ffn = linf(report.stages.ffn, st.ffn / fn);
    dev.output = linf(report.stages.output, st.output);
    return dev;
}

auto within_bounds(const StageBounds &deviation, const StageBounds &bound)
    -> bool {
    return deviation.softmax <= bound.softmax &&
           deviation.attention <= bound.attention && deviation.ln1 <= bound.ln1 &&
           deviation.ffn <= bound.ffn && deviation.output <= bound.output;
}

auto multilayer(const ClassicalWeights &w, const MultilayerConfig &config)
    -> MultilayerResult {
    require(config.layers >= 1, ErrorKind::InvalidInput,
            "at least one layer required");
    check_shapes(w);
    const Index n = w.S.rows();
    const Index d = w.S.cols();
    MultilayerResult out;
    out.samples_per_row = tomography_samples(d, config.tomography_eps);
    ClassicalWeights cur = w;
    for (int layer = 0; layer < config.layers; ++layer) {
        const TransformerInputs in = make_inputs(cur, config.s_model);
        out.alpha0.push_back(in.alpha0);
        struct RowResult {
            PipelineReport report;
            TomographyResult tomo;
        };
        const auto rows = parallel_map(
            static_cast<std::size_t>(n), [&](std::size_t j) {
                RowResult r;
                r.report = single_layer(in, static_cast<Index>(j), config.eps);
                const std::uint64_t seed =
                    config.seed * 1000003ULL +
                    static_cast<std::uint64_t>(layer) * 65537ULL + j;
                r.tomo = tomography(r.report.output, config.tomography_eps,
                                    config.sign_mode, seed, d);
                return r;
            });
        RealMatrix next(n, d);
        std::vector<PipelineReport> reports;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            next.row(static_cast<Index>(j)) = rows[j].tomo.vector.head(d).transpose();
            out.ledger += rows[j].tomo.ledger;
            out.normalized_queries +=
                rows[j].report.normalized_queries *
                static_cast<double>(rows[j].tomo.preparations);
            reports.push_back(rows[j].report);
        }
        out.reports.push_back(std::move(reports));
        cur.S = next;
    }
    out.output = cur.S;
    return out;
}

} // namespace qformer
