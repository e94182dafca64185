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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qformer/classical.hpp"
#include "qformer/experiment.hpp"
#include "qformer/io.hpp"

namespace {

using namespace qformer;
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

auto run(const ExperimentConfig &c) -> CliRun {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_experiment(c, out, err);
    return {code, out.str(), err.str()};
}

auto config(const std::string &command) -> ExperimentConfig {
    ExperimentConfig c;
    c.command = command;
    return c;
}

auto shell(const std::string &args) -> int {
    const std::string cmd = std::string(QFORMER_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

auto scratch(const std::string &name) -> fs::path {
    const fs::path p = fs::temp_directory_path() / ("qformer_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

TEST(Cli, ExitCodeMapping) {
    EXPECT_EQ(exit_code_for(ErrorKind::FileNotFound), 2);
    EXPECT_EQ(exit_code_for(ErrorKind::Parse), 3);
    EXPECT_EQ(exit_code_for(ErrorKind::InvariantFailure), 4);
    EXPECT_EQ(exit_code_for(ErrorKind::Degenerate), 4);
    EXPECT_EQ(exit_code_for(ErrorKind::InvalidInput), 1);
}

TEST(Cli, VerifyReport) {
    const CliRun r = run(config("verify"));
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["instances"], 52);
    EXPECT_EQ(j["failures"], 0);
    EXPECT_EQ(j["reports"].size(), 52u);
}

TEST(Cli, RunLayerReport) {
    auto c = config("run-layer");
    c.seed = 4;
    c.j = 3;
    const CliRun r = run(c);
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["N"], 8);
    EXPECT_TRUE(j["within_bounds"].get<bool>());
    EXPECT_GE(j["pipeline"]["cosine"].get<double>(), 1.0 - 1e-6);
    EXPECT_TRUE(j["pipeline"]["ledger"]["counts"].contains("U_S"));
    // Deterministic output.
    EXPECT_EQ(run(c).out, r.out);
}

TEST(Cli, RunLayerMaskedAndFactorModel) {
    auto c = config("run-layer");
    c.masked = true;
    c.factor_model = "spectral";
    c.j = 2;
    const CliRun r = run(c);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(Json::parse(r.out)["pipeline"]["attention"]["limit"], 3);
}

TEST(Cli, RunMultilayer) {
    auto c = config("run-multilayer");
    c.layers = 2;
    const CliRun r = run(c);
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["alpha0"].size(), 2u);
    EXPECT_EQ(j["output"].size(), 4u);
}

TEST(Cli, ApproxAndProfile) {
    const CliRun a = run(config("approx"));
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(Json::parse(a.out)["rows"].size(), 6u);

    const fs::path dir = scratch("profile");
    const std::string path = (dir / "m.csv").string();
    write_text(path, "3,0\n0,4\n");
    auto c = config("profile");
    c.matrix = path;
    const CliRun p = run(c);
    ASSERT_EQ(p.code, 0) << p.err;
    const Json j = Json::parse(p.out);
    EXPECT_NEAR(j["spectral"].get<double>(), 4.0, 1e-12);
    EXPECT_NEAR(j["frobenius"].get<double>(), 5.0, 1e-12);
    fs::remove_all(dir);
}

TEST(Cli, ErrorCodes) {
    EXPECT_EQ(run(config("profile")).code, kExitUsage);
    auto bad_eps = config("run-layer");
    bad_eps.eps = 2.0;
    EXPECT_EQ(run(bad_eps).code, kExitUsage);
    EXPECT_EQ(run(config("nonsense")).code, kExitUsage);
    auto bad_model = config("run-layer");
    bad_model.factor_model = "nuclear";
    EXPECT_NE(run(bad_model).code, kExitOk);

    auto missing = config("profile");
    missing.matrix = "/nonexistent/m.csv";
    const CliRun m = run(missing);
    EXPECT_EQ(m.code, kExitFileNotFound);
    EXPECT_FALSE(m.err.empty());

    const fs::path dir = scratch("errors");
    const std::string path = (dir / "bad.csv").string();
    write_text(path, "1,2\n3\n");
    auto ragged = config("profile");
    ragged.matrix = path;
    EXPECT_EQ(run(ragged).code, kExitParse);
    fs::remove_all(dir);
}

TEST(Cli, DegenerateWeightsExitFour) {
    const fs::path dir = scratch("degenerate");
    auto w = random_weights(4, 4, 4, 0);
    w.S.setZero();
    const std::pair<const char *, const RealMatrix *> files[] = {
        {"S.csv", &w.S}, {"Wq.csv", &w.Wq}, {"Wk.csv", &w.Wk},
        {"Wv.csv", &w.Wv}, {"M1.csv", &w.M1}, {"M2.csv", &w.M2}};
    for (const auto &[name, m] : files) {
        write_text((dir / name).string(), format_matrix_csv(*m));
    }
    auto c = config("run-layer");
    c.weights = dir.string();
    EXPECT_EQ(run(c).code, kExitViolation);
    fs::remove_all(dir);
}

TEST(Cli, OutFileAndCsvSidecar) {
    const fs::path dir = scratch("out");
    auto c = config("dequant-compare");
    c.n = 32;
    c.out = (dir / "sep.csv").string();
    ASSERT_EQ(run(c).code, 0);
    std::ifstream csv(c.out);
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "N,frobenius_s,tau_classical,queries_quantum");
    EXPECT_TRUE(fs::exists(dir / "sep.json"));
    fs::remove_all(dir);
}

TEST(CliBinary, ExitStatuses) {
    EXPECT_EQ(shell(""), 1);
    EXPECT_EQ(shell("--help"), 0);
    EXPECT_EQ(shell("verify --n 1"), 0);
    EXPECT_EQ(shell("profile --matrix /nonexistent/m.csv"), 2);
    EXPECT_EQ(shell("run-layer --eps abc"), 1);
    const fs::path dir = scratch("binary");
    EXPECT_EQ(shell("approx --eps 1e-3 --out " + (dir / "a.json").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "a.json"));
    fs::remove_all(dir);
}

} // namespace
