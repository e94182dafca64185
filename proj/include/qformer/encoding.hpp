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
 * @file encoding.hpp
 * Lazy block-encoding calculus.
 *
 * A BlockEncoding stores the matrix its (never materialized) unitary
 * actually realizes, scaled by alpha. eps_bound bounds the spectral distance
 * to the ideal target. Leaves carry a label; every composite records the
 * number of leaf uses needed for one application of itself.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qformer/ledger.hpp"
#include "qformer/linalg.hpp"

namespace qformer {

struct BlockEncoding {
    DenseMatrix block;
    double alpha = 1.0;
    int ancillas = 0;
    double eps_bound = 0.0;
    QueryLedger ledger;
    /// Input name for leaves; empty for composites.
    std::string label;

    [[nodiscard]] auto rows() const -> Index { return block.rows(); }
    [[nodiscard]] auto cols() const -> Index { return block.cols(); }
};

/// Real unit vector with an L-infinity error bound.
struct StateEncoding {
    RealVector amplitudes;
    double alpha = 1.0;
    int ancillas = 0;
    double eps_bound = 0.0;
    QueryLedger ledger;

    [[nodiscard]] auto dim() const -> Index { return amplitudes.size(); }
};

struct StatePrepPair {
    DenseVector coefficients;
    double beta = 1.0;
    int qubits = 0;
    double eps = 0.0;
};

enum class FactorModelKind { Spectral, Frobenius, DenseNaive, RowSparse };

struct FactorModel {
    FactorModelKind kind = FactorModelKind::Spectral;
    /// Declared nonzeros per row, RowSparse only.
    Index row_sparsity = 0;

    static auto spectral() -> FactorModel { return {FactorModelKind::Spectral, 0}; }
    static auto frobenius() -> FactorModel { return {FactorModelKind::Frobenius, 0}; }
    static auto dense_naive() -> FactorModel { return {FactorModelKind::DenseNaive, 0}; }
    static auto row_sparse(Index s) -> FactorModel { return {FactorModelKind::RowSparse, s}; }
};

auto to_string(const FactorModel &model) -> std::string;
/// Accepts spectral, frobenius, dense_naive, row_sparse:<s>.
auto parse_factor_model(const std::string &text) -> FactorModel;

/// Cost of one application of U: {label: 1} for leaves, the ledger otherwise.
auto usage(const BlockEncoding &u) -> QueryLedger;

/// Throws InvariantFailure when alpha, ancillas or eps_bound are unsound.
void check_invariants(const BlockEncoding &u);
void check_invariants(const StateEncoding &psi);

auto from_matrix(const DenseMatrix &a, const FactorModel &model,
                 const std::string &label) -> BlockEncoding;

auto product(const BlockEncoding &u, const BlockEncoding &v) -> BlockEncoding;
auto tensor_product(const BlockEncoding &u, const BlockEncoding &v)
    -> BlockEncoding;
auto hadamard_product(const BlockEncoding &u, const BlockEncoding &v)
    -> BlockEncoding;

/// Pair with beta = ||y||_1 and b = ceil(log2 m) qubits.
auto make_state_prep_pair(const DenseVector &y, double eps = 0.0)
    -> StatePrepPair;
auto lcu(const std::vector<BlockEncoding> &terms, const StatePrepPair &pair)
    -> BlockEncoding;

/// Exact (1, 1, 0)-encoding of the 0/1 diagonal projector on indices.
auto projector_encoding(const std::set<Index> &indices, Index n)
    -> BlockEncoding;

auto diag_from_state(const StateEncoding &psi, bool squared) -> BlockEncoding;
/// diag of one column (or row) of a block, same factor and error.
auto diag_from_column(const BlockEncoding &u, Index col) -> BlockEncoding;
auto diag_from_row(const BlockEncoding &u, Index row) -> BlockEncoding;

auto state_from_column(const BlockEncoding &u, Index j) -> StateEncoding;

/// Smallest integer round count consistent with O(alpha), ceil(alpha).
auto amplification_rounds(double alpha) -> std::uint64_t;
auto amplify(const StateEncoding &psi) -> StateEncoding;
auto amplify(const StateEncoding &psi, std::uint64_t rounds) -> StateEncoding;

/// Adds a real random E with ||E|| = delta; deterministic per seed.
auto perturb(const BlockEncoding &u, double delta, std::uint64_t seed)
    -> BlockEncoding;

/// L-infinity error after normalizing a vector of norm c known to eps
/// per entry, (sqrt(d)+1) eps / c + sqrt(2 eps sqrt(d) / c).
auto normalized_vector_error(double eps, Index d, double c) -> double;

// Reinterpretations of the same unitary.
auto adjoint(const BlockEncoding &u) -> BlockEncoding;
/// Encodes A/alpha with factor 1 and error eps/alpha.
auto normalize(const BlockEncoding &u) -> BlockEncoding;
/// Encodes cA with factor c*alpha, c > 0.
auto scale(const BlockEncoding &u, double c) -> BlockEncoding;
/// Raises the factor to alpha' >= alpha at the cost of one ancilla.
auto relax_factor(const BlockEncoding &u, double alpha) -> BlockEncoding;
auto add_error(const BlockEncoding &u, double extra) -> BlockEncoding;

auto identity_encoding(Index n) -> BlockEncoding;
auto walsh_hadamard_encoding(Index n) -> BlockEncoding;

/// n x cols block whose column `column` holds the amplitudes. The L-infinity
/// bound becomes sqrt(n) eps in spectral norm.
auto state_block(const StateEncoding &psi, Index column, Index cols)
    -> BlockEncoding;

} // namespace qformer
