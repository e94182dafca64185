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
#include "qformer/scaling.hpp"

#include <cmath>

#include "qformer/classical.hpp"
#include "qformer/dequant.hpp"
#include "qformer/error.hpp"
#include "qformer/parallel.hpp"
#include "qformer/polyapprox.hpp"
#include "qformer/transformer.hpp"

namespace qformer {

namespace {

struct Sample {
    double frobenius_s = 0.0;
    double normalized = 0.0;
    double raw = 0.0;
    double rounds = 0.0;
    int degree = 0;
    double tau = 0.0;
    double error = 0.0;
};

auto geomean(const std::vector<double> &v) -> double {
    double acc = 0.0;
    for (const double x : v) {
        acc += std::log(x);
    }
    return std::exp(acc / static_cast<double>(v.size()));
}

void check_config(const SweepConfig &c) {
    require(c.ns.size() >= 2, ErrorKind::InvalidInput,
            "a sweep needs at least two sizes");
    require(c.seeds >= 1, ErrorKind::InvalidInput, "at least one seed");
    for (const Index n : c.ns) {
        require(n > c.row, ErrorKind::OutOfRange, "row outside the sweep");
    }
}

/// Runs fn(n, seed) for every grid point and groups the results by n.
template <class Fn>
auto run_grid(const SweepConfig &c, Fn fn) -> std::vector<std::vector<Sample>> {
    const std::size_t per = static_cast<std::size_t>(c.seeds);
    const auto flat = parallel_map(c.ns.size() * per, [&](std::size_t i) {
        return fn(c.ns[i / per], c.seed + (i % per));
    });
    std::vector<std::vector<Sample>> grouped(c.ns.size());
    for (std::size_t i = 0; i < flat.size(); ++i) {
        grouped[i / per].push_back(flat[i]);
    }
    return grouped;
}

auto summarize(const SweepConfig &c,
               const std::vector<std::vector<Sample>> &grouped)
    -> ScalingResult {
    ScalingResult out;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < grouped.size(); ++k) {
        std::vector<double> f;
        std::vector<double> q;
        std::vector<double> raw;
        std::vector<double> rounds;
        for (const auto &s : grouped[k]) {
            f.push_back(s.frobenius_s);
            q.push_back(s.normalized);
            raw.push_back(s.raw);
            rounds.push_back(s.rounds);
        }
        ScalingPoint p;
        p.n = c.ns[k];
        p.frobenius_s = geomean(f);
        p.normalized_queries = geomean(q);
        p.raw_queries = geomean(raw);
        p.softmax_rounds = geomean(rounds);
        p.poly_degree = grouped[k].front().degree;
        out.points.push_back(p);
        xs.push_back(static_cast<double>(p.n));
        ys.push_back(p.normalized_queries);
    }
    out.slope = fit_loglog_slope(xs, ys);
    return out;
}

} // namespace

auto fit_loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
    -> double {
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::InvalidInput,
            "slope fit needs two or more matched points");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, ErrorKind::InvalidInput,
                "log-log fit needs positive values");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    require(sxx > 0.0, ErrorKind::InvalidInput, "all x values coincide");
    return sxy / sxx;
}

auto power_sweep(Index first, Index max_n) -> std::vector<Index> {
    require(first >= 1 && is_pow2(first), ErrorKind::InvalidInput,
            "sweep start must be a power of two");
    std::vector<Index> out;
    for (Index n = first; n <= max_n; n *= 2) {
        out.push_back(n);
    }
    return out;
}

auto query_scaling(const SweepConfig &config) -> ScalingResult {
    check_config(config);
    const auto grouped = run_grid(config, [&](Index n, std::uint64_t seed) {
        const ClassicalWeights w = random_weights(n, config.d, config.d_ff, seed);
        const TransformerInputs in = make_inputs(w);
        const PipelineReport rep = single_layer(in, config.row, config.eps);
        Sample s;
        s.frobenius_s = in.S_be.alpha;
        s.normalized = rep.normalized_queries;
        s.raw = static_cast<double>(rep.ledger.count(kLabelS));
        s.rounds = static_cast<double>(rep.attention.amplification_rounds);
        s.degree = rep.attention.poly_degree;
        return s;
    });
    return summarize(config, grouped);
}

auto multilayer_scaling(const SweepConfig &config, int layers,
                        double tomography_eps) -> ScalingResult {
    check_config(config);
    const auto grouped = run_grid(config, [&](Index n, std::uint64_t seed) {
        const ClassicalWeights w = random_weights(n, config.d, config.d_ff, seed);
        MultilayerConfig mc;
        mc.layers = layers;
        mc.eps = config.eps;
        mc.tomography_eps = tomography_eps;
        mc.seed = seed;
        const MultilayerResult res = multilayer(w, mc);
        Sample s;
        s.frobenius_s = w.S.norm();
        s.normalized = res.normalized_queries;
        s.raw = static_cast<double>(res.ledger.count(kLabelS));
        double rounds = 0.0;
        for (const auto &rep : res.reports.front()) {
            rounds += static_cast<double>(rep.attention.amplification_rounds);
        }
        s.rounds = rounds / static_cast<double>(n);
        s.degree = res.reports.front().front().attention.poly_degree;
        return s;
    });
    return summarize(config, grouped);
}

auto dequant_sweep(const SweepConfig &config, double eps, double delta)
    -> SeparationResult {
    check_config(config);
    const auto grouped = run_grid(config, [&](Index n, std::uint64_t seed) {
        const ClassicalWeights w = random_weights(n, config.d, config.d_ff, seed);
        const TransformerInputs in = make_inputs(w);
        const PipelineReport rep = single_layer(in, config.row, config.eps);
        const ClassicalWeights cw = classical_view(w, in);
        const RealVector softmax = classical_softmax_row(cw, config.row, false);
        const DequantAttention da =
            dequant_attention(w.S, w.Wv, softmax, eps, delta, seed);
        Sample s;
        s.frobenius_s = w.S.norm();
        s.normalized = rep.normalized_queries;
        s.tau = static_cast<double>(da.estimate.tau);
        s.error = da.error;
        return s;
    });
    SeparationResult out;
    std::vector<double> fx;
    std::vector<double> tc;
    std::vector<double> qq;
    for (std::size_t k = 0; k < grouped.size(); ++k) {
        std::vector<double> f;
        std::vector<double> t;
        std::vector<double> q;
        double err = 0.0;
        for (const auto &s : grouped[k]) {
            f.push_back(s.frobenius_s);
            t.push_back(s.tau);
            q.push_back(s.normalized);
            err += s.error;
        }
        SeparationRow row;
        row.n = config.ns[k];
        row.frobenius_s = geomean(f);
        row.tau_classical = geomean(t);
        row.queries_quantum = geomean(q);
        row.classical_error = err / static_cast<double>(grouped[k].size());
        out.rows.push_back(row);
        fx.push_back(row.frobenius_s);
        tc.push_back(row.tau_classical);
        qq.push_back(row.queries_quantum);
    }
    out.classical_slope = fit_loglog_slope(fx, tc);
    out.quantum_slope = fit_loglog_slope(fx, qq);
    out.gap = out.classical_slope / out.quantum_slope;
    return out;
}

auto approx_table(double k, double lambda, const std::vector<double> &eps_list)
    -> std::vector<ApproxRow> {
    std::vector<ApproxRow> rows;
    for (const double eps : eps_list) {
        const auto [p, rep] = gelu_poly(k, lambda, eps);
        rows.push_back({"gelu", eps, rep.degree, rep.max_error});
        int ell = 1;
        while (taylor_exp_tail(ell, true) > eps) {
            ++ell;
        }
        const Polynomial t = taylor_exp(ell, true);
        const double err = grid_max_error(
            [&](double x) { return eval_poly(t, x); },
            [](double x) { return std::exp(x / 2.0); }, -1.0, 1.0,
            kApproxGridPoints);
        rows.push_back({"exp_half", eps, ell, err});
    }
    return rows;
}

} // namespace qformer
