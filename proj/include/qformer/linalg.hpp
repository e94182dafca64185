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
 * @file linalg.hpp
 * Dense matrix types, norms and the unitary dilation.
 */
#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace qformer {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Largest singular value (Gram eigenvalue on the smaller side).
auto spectral_norm(const DenseMatrix &a) -> double;

/// Frobenius norm accumulated in extended precision.
auto frobenius_norm(const DenseMatrix &a) -> double;

auto max_entry_norm(const DenseMatrix &a) -> double;

/**
 * @brief Unitary U = [[A/a, sqrt(I-AA^+/a^2)], [sqrt(I-A^+A/a^2), -A^+/a]].
 *
 * The ancilla is the most significant qubit, so the top-left 2^n block
 * is A/alpha.
 */
auto unitary_dilation(const DenseMatrix &a, double alpha) -> DenseMatrix;

/// Zero-pads both dimensions up to the next power of two.
auto pad_pow2(const DenseMatrix &a) -> DenseMatrix;

void require_finite(const DenseMatrix &a, const char *what);
void require_finite(const RealVector &v, const char *what);

[[nodiscard]] auto is_pow2(Index n) -> bool;
[[nodiscard]] auto next_pow2(Index n) -> Index;
/// log2 of a power of two; throws otherwise.
[[nodiscard]] auto log2_exact(Index n) -> int;
[[nodiscard]] auto ceil_log2(Index n) -> int;

auto kron(const DenseMatrix &a, const DenseMatrix &b) -> DenseMatrix;

/// V f(L) V^+ for Hermitian h. Diagonal inputs skip the eigensolver.
auto hermitian_function(const DenseMatrix &h,
                        const std::function<double(double)> &f)
    -> DenseMatrix;

/// Spectral norm of U^+U - I.
auto unitarity_error(const DenseMatrix &u) -> double;

/// Max-entry norm of A - A^+.
auto hermiticity_error(const DenseMatrix &a) -> double;

/// Normalized Walsh-Hadamard matrix on the given number of qubits.
auto walsh_hadamard(int qubits) -> DenseMatrix;

auto to_complex(const RealMatrix &a) -> DenseMatrix;

/// Real part; throws Unsupported when an imaginary part exceeds tol.
auto real_part_checked(const DenseMatrix &a, double tol = 1e-12) -> RealMatrix;

} // namespace qformer
