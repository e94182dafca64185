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
 * @file io.hpp
 * Matrix CSV files: row-major, '.' decimals, optional "# rows cols" first
 * line, complex entries as a+bi.
 */
#pragma once

#include <string>

#include "qformer/classical.hpp"
#include "qformer/linalg.hpp"

namespace qformer {

/// Parses one entry: "1.5", "-2e-3", "1+2i", "0.5-1e-2i", "3i".
auto parse_entry(const std::string &text) -> Complex;

auto parse_matrix_csv(const std::string &content) -> DenseMatrix;

/// Throws FileNotFound or Parse.
auto read_matrix_csv(const std::string &path) -> DenseMatrix;

/// Real part, Parse error when an entry has an imaginary part.
auto read_real_matrix_csv(const std::string &path) -> RealMatrix;

/// Writes the "# rows cols" header and 17 significant digits.
auto format_matrix_csv(const RealMatrix &a) -> std::string;
void write_text(const std::string &path, const std::string &content);

/// S.csv, Wq.csv, Wk.csv, Wv.csv, M1.csv, M2.csv from a directory;
/// alpha0 = sqrt(d).
auto read_weights_dir(const std::string &dir) -> ClassicalWeights;

} // namespace qformer
