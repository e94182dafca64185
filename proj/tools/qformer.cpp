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
#include <iostream>

#include <CLI11.hpp>

#include "qformer/experiment.hpp"

namespace {

void add_common(CLI::App *sub, qformer::ExperimentConfig &c) {
    sub->add_option("--n", c.n, "sequence length (qubits for verify)");
    sub->add_option("--d", c.d, "model width")->check(CLI::PositiveNumber);
    sub->add_option("--dff", c.d_ff, "feed-forward width")->check(CLI::PositiveNumber);
    sub->add_option("--layers", c.layers, "layer count")->check(CLI::PositiveNumber);
    sub->add_option("--j", c.j, "token row")->check(CLI::NonNegativeNumber);
    sub->add_option("--eps", c.eps, "target precision");
    sub->add_option("--delta", c.delta, "failure probability");
    sub->add_option("--seed", c.seed, "RNG seed");
    sub->add_option("--factor-model", c.factor_model,
                    "S factor model: frobenius, spectral, dense_naive or row_sparse:<s>");
    sub->add_option("--matrix", c.matrix, "matrix CSV");
    sub->add_option("--weights", c.weights, "directory with S, Wq, Wk, Wv, M1, M2 CSVs");
    sub->add_option("--out", c.out, "report path");
    sub->add_flag("--masked", c.masked, "causal mask");
}

} // namespace

auto main(int argc, char **argv) -> int {
    CLI::App app{"qformer: transformer layers on block encodings"};
    app.require_subcommand(1);
    qformer::ExperimentConfig config;
    for (const char *name : {"verify", "run-layer", "run-multilayer", "scaling",
                             "approx", "profile", "dequant-compare"}) {
        CLI::App *sub = app.add_subcommand(name);
        add_common(sub, config);
        sub->callback([&config, name] { config.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? qformer::kExitOk : qformer::kExitUsage;
    }
    return qformer::run_experiment(config, std::cout, std::cerr);
}
