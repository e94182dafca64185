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
 * @file scaling.hpp
 * Sweeps over the sequence length: query growth of one layer and of the
 * multilayer loop, the sampled-baseline comparison, and the polynomial
 * degree table.
 *
 * Per-N values are geometric means over seeds. Seed s draws the same weights
 * for every N, so only S changes along a sweep.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qformer/linalg.hpp"

namespace qformer {

/// Least-squares slope of log y against log x.
auto fit_loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
    -> double;

/// 8, 16, ... up to max_n.
auto power_sweep(Index first, Index max_n) -> std::vector<Index>;

struct SweepConfig {
    std::vector<Index> ns;
    Index d = 4;
    Index d_ff = 16;
    double eps = 1e-3;
    int seeds = 24;
    std::uint64_t seed = 0;
    Index row = 0;
};

struct ScalingPoint {
    Index n = 0;
    double frobenius_s = 0.0;
    /// U_S queries over the softmax rounds and the elementwise schedule.
    double normalized_queries = 0.0;
    double raw_queries = 0.0;
    double softmax_rounds = 0.0;
    int poly_degree = 0;
};

struct ScalingResult {
    std::vector<ScalingPoint> points;
    double slope = 0.0;
};

auto query_scaling(const SweepConfig &config) -> ScalingResult;

/// One multilayer pass per (N, seed); queries summed over rows and
/// tomography preparations.
auto multilayer_scaling(const SweepConfig &config, int layers,
                        double tomography_eps) -> ScalingResult;

struct SeparationRow {
    Index n = 0;
    double frobenius_s = 0.0;
    double tau_classical = 0.0;
    double queries_quantum = 0.0;
    /// Mean L2 error of the sampled estimate.
    double classical_error = 0.0;
};

struct SeparationResult {
    std::vector<SeparationRow> rows;
    double classical_slope = 0.0;
    double quantum_slope = 0.0;
    double gap = 0.0;
};

/// Slopes are taken against ||S||_F.
auto dequant_sweep(const SweepConfig &config, double eps, double delta)
    -> SeparationResult;

struct ApproxRow {
    std::string function;
    double eps = 0.0;
    int degree = 0;
    double max_error = 0.0;
};

/// GELU(k x) on [-lambda, lambda] and exp(x/2) on [-1, 1] per eps.
auto approx_table(double k, double lambda, const std::vector<double> &eps_list)
    -> std::vector<ApproxRow>;

} // namespace qformer
