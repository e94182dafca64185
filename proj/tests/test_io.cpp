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

#include <filesystem>
#include <functional>

#include "oracles.hpp"
#include "qformer/classical.hpp"
#include "qformer/error.hpp"
#include "qformer/io.hpp"

namespace {

using namespace qformer;
namespace fs = std::filesystem;

auto kind_of(const std::function<void()> &fn) -> ErrorKind {
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::InvalidInput;
}

auto scratch_dir(const std::string &name) -> fs::path {
    const fs::path p = fs::temp_directory_path() / ("qformer_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

TEST(ParseEntry, Forms) {
    EXPECT_EQ(parse_entry("1.5"), Complex(1.5, 0.0));
    EXPECT_EQ(parse_entry(" -2e-3 "), Complex(-2e-3, 0.0));
    EXPECT_EQ(parse_entry("1+2i"), Complex(1.0, 2.0));
    EXPECT_EQ(parse_entry("0.5-1e-2i"), Complex(0.5, -1e-2));
    EXPECT_EQ(parse_entry("3i"), Complex(0.0, 3.0));
    EXPECT_EQ(parse_entry("-i"), Complex(0.0, -1.0));
    EXPECT_EQ(parse_entry("2-j"), Complex(2.0, -1.0));
    EXPECT_EQ(parse_entry("1e+2+1e+1i"), Complex(100.0, 10.0));
    EXPECT_EQ(kind_of([] { static_cast<void>(parse_entry("abc")); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { static_cast<void>(parse_entry("")); }), ErrorKind::Parse);
}

TEST(ParseMatrix, HeaderAndShape) {
    const DenseMatrix m = parse_matrix_csv("# 2 3\n1,2,3\n4,5,6\n");
    ASSERT_EQ(m.rows(), 2);
    ASSERT_EQ(m.cols(), 3);
    EXPECT_EQ(m(1, 2), Complex(6.0));
    EXPECT_EQ(parse_matrix_csv("1,2\n3,4").rows(), 2);
    EXPECT_EQ(kind_of([] { static_cast<void>(parse_matrix_csv("1,2\n3\n")); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { static_cast<void>(parse_matrix_csv("# 3 3\n1,2\n3,4\n")); }),
              ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { static_cast<void>(parse_matrix_csv("")); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { static_cast<void>(parse_matrix_csv("1,2\n# 1 2\n")); }),
              ErrorKind::Parse);
}

TEST(MatrixFile, RoundTripIsExact) {
    oracle::Gen gen(71);
    const fs::path dir = scratch_dir("roundtrip");
    for (int t = 0; t < 10; ++t) {
        const RealMatrix a = gen.gaussian(gen.integer(1, 6), gen.integer(1, 6), gen.uniform(1e-6, 1e6));
        const std::string path = (dir / "a.csv").string();
        write_text(path, format_matrix_csv(a));
        EXPECT_EQ(read_real_matrix_csv(path), a);
    }
    fs::remove_all(dir);
}

TEST(MatrixFile, Errors) {
    EXPECT_EQ(kind_of([] { static_cast<void>(read_matrix_csv("/nonexistent/qformer.csv")); }),
              ErrorKind::FileNotFound);
    const fs::path dir = scratch_dir("errors");
    const std::string path = (dir / "c.csv").string();
    write_text(path, "1,2i\n3,4\n");
    EXPECT_EQ(read_matrix_csv(path)(0, 1), Complex(0.0, 2.0));
    EXPECT_EQ(kind_of([&] { static_cast<void>(read_real_matrix_csv(path)); }), ErrorKind::Parse);
    fs::remove_all(dir);
}

TEST(WeightsDir, LoadsAndChecksShapes) {
    const auto w = random_weights(5, 3, 7, 2);
    const fs::path dir = scratch_dir("weights");
    const std::pair<const char *, const RealMatrix *> files[] = {
        {"S.csv", &w.S}, {"Wq.csv", &w.Wq}, {"Wk.csv", &w.Wk},
        {"Wv.csv", &w.Wv}, {"M1.csv", &w.M1}, {"M2.csv", &w.M2}};
    for (const auto &[name, m] : files) {
        write_text((dir / name).string(), format_matrix_csv(*m));
    }
    const auto r = read_weights_dir(dir.string());
    EXPECT_EQ(r.S, w.S);
    EXPECT_EQ(r.M2, w.M2);
    EXPECT_NEAR(r.alpha0, std::sqrt(3.0), 1e-15);

    write_text((dir / "Wk.csv").string(), format_matrix_csv(RealMatrix::Ones(2, 2)));
    EXPECT_EQ(kind_of([&] { static_cast<void>(read_weights_dir(dir.string())); }), ErrorKind::Parse);
    fs::remove(dir / "Wk.csv");
    EXPECT_EQ(kind_of([&] { static_cast<void>(read_weights_dir(dir.string())); }),
              ErrorKind::FileNotFound);
    EXPECT_EQ(kind_of([] { static_cast<void>(read_weights_dir("/nonexistent/dir")); }),
              ErrorKind::FileNotFound);
    fs::remove_all(dir);
}

} // namespace
