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
#include "qformer/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qformer/error.hpp"

namespace qformer {

namespace {

auto shape(const DenseMatrix &a) -> std::string {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

auto max_row_sparsity(const DenseMatrix &a) -> Index {
    Index best = 0;
    for (Index r = 0; r < a.rows(); ++r) {
        Index nz = 0;
        for (Index c = 0; c < a.cols(); ++c) {
            if (a(r, c) != Complex(0.0, 0.0)) {
                ++nz;
            }
        }
        best = std::max(best, nz);
    }
    return best;
}

auto diag_of(const RealVector &v) -> DenseMatrix {
    DenseMatrix d = DenseMatrix::Zero(v.size(), v.size());
    for (Index k = 0; k < v.size(); ++k) {
        d(k, k) = v(k);
    }
    return d;
}

auto diag_of(const DenseVector &v) -> DenseMatrix {
    DenseMatrix d = DenseMatrix::Zero(v.size(), v.size());
    d.diagonal() = v;
    return d;
}

} // namespace

auto to_string(const FactorModel &model) -> std::string {
    switch (model.kind) {
    case FactorModelKind::Spectral:
        return "spectral";
    case FactorModelKind::Frobenius:
        return "frobenius";
    case FactorModelKind::DenseNaive:
        return "dense_naive";
    case FactorModelKind::RowSparse:
        return "row_sparse:" + std::to_string(model.row_sparsity);
    }
    return "unknown";
}

auto parse_factor_model(const std::string &text) -> FactorModel {
    if (text == "spectral") {
        return FactorModel::spectral();
    }
    if (text == "frobenius") {
        return FactorModel::frobenius();
    }
    if (text == "dense_naive") {
        return FactorModel::dense_naive();
    }
    const std::string prefix = "row_sparse:";
    if (text.rfind(prefix, 0) == 0) {
        try {
            const long long s = std::stoll(text.substr(prefix.size()));
            return FactorModel::row_sparse(static_cast<Index>(s));
        } catch (const std::exception &) {
            // fall through to the error below
        }
    }
    throw Error(ErrorKind::Parse, "unknown factor model '" + text + "'");
}

auto usage(const BlockEncoding &u) -> QueryLedger {
    if (!u.label.empty()) {
        QueryLedger one;
        one.counts[u.label] = 1;
        one.ancilla_peak = std::max(u.ledger.ancilla_peak, u.ancillas);
        return one;
    }
    return u.ledger.with_peak(u.ancillas);
}

void check_invariants(const BlockEncoding &u) {
    require(u.block.allFinite(), ErrorKind::InvariantFailure,
            "non-finite block");
    require(std::isfinite(u.alpha) && u.alpha > 0.0,
            ErrorKind::InvariantFailure, "factor must be positive");
    const double norm = spectral_norm(u.block);
    require(u.alpha >= norm - 1e-9 * std::max(1.0, u.alpha),
            ErrorKind::InvariantFailure,
            "factor " + std::to_string(u.alpha) + " below norm " +
                std::to_string(norm));
    require(u.ancillas >= 0, ErrorKind::InvariantFailure,
            "negative ancilla count");
    require(std::isfinite(u.eps_bound) && u.eps_bound >= 0.0,
            ErrorKind::InvariantFailure, "invalid error bound");
}

void check_invariants(const StateEncoding &psi) {
    require(psi.amplitudes.allFinite(), ErrorKind::InvariantFailure,
            "non-finite amplitudes");
    require(std::abs(psi.amplitudes.norm() - 1.0) <= 1e-9,
            ErrorKind::InvariantFailure, "state not normalized");
    require(psi.alpha >= 1.0 - 1e-12, ErrorKind::InvariantFailure,
            "state factor below one");
    require(psi.eps_bound >= 0.0, ErrorKind::InvariantFailure,
            "invalid error bound");
}

auto from_matrix(const DenseMatrix &a, const FactorModel &model,
                 const std::string &label) -> BlockEncoding {
    const DenseMatrix padded = pad_pow2(a);
    const Index dim = std::max(padded.rows(), padded.cols());
    const int n = log2_exact(dim);
    const double max_entry = max_entry_norm(padded);

    BlockEncoding out;
    out.block = padded;
    out.label = label;
    switch (model.kind) {
    case FactorModelKind::Spectral:
        out.alpha = spectral_norm(padded);
        out.ancillas = 1;
        break;
    case FactorModelKind::Frobenius:
        out.alpha = frobenius_norm(padded);
        out.ancillas = n + 2;
        break;
    case FactorModelKind::DenseNaive:
        out.alpha = static_cast<double>(dim) * max_entry;
        out.ancillas = n + 1;
        break;
    case FactorModelKind::RowSparse: {
        const Index actual = max_row_sparsity(padded);
        require(model.row_sparsity >= 1 && model.row_sparsity <= padded.cols(),
                ErrorKind::InvalidModel, "row sparsity out of range");
        require(model.row_sparsity >= actual, ErrorKind::InvalidModel,
                "declared row sparsity " + std::to_string(model.row_sparsity) +
                    " below actual " + std::to_string(actual));
        out.alpha = std::sqrt(static_cast<double>(dim) *
                              static_cast<double>(model.row_sparsity)) *
                    max_entry;
        out.ancillas = n + 3;
        break;
    }
    }
    if (out.alpha == 0.0) {
        out.alpha = 1.0; // zero matrix: any positive factor is valid
    }
    if (!label.empty()) {
        out.ledger.counts[label] = 0;
    }
    out.ledger.ancilla_peak = out.ancillas;
    return out;
}

auto product(const BlockEncoding &u, const BlockEncoding &v) -> BlockEncoding {
    require(u.cols() == v.rows(), ErrorKind::DimensionMismatch,
            "product of " + shape(u.block) + " and " + shape(v.block));
    BlockEncoding out;
    out.block = u.block * v.block;
    out.alpha = u.alpha * v.alpha;
    out.ancillas = u.ancillas + v.ancillas;
    out.eps_bound = u.alpha * v.eps_bound + v.alpha * u.eps_bound;
    out.ledger = (usage(u) + usage(v)).with_peak(out.ancillas);
    return out;
}

auto tensor_product(const BlockEncoding &u, const BlockEncoding &v)
    -> BlockEncoding {
    BlockEncoding out;
    out.block = kron(u.block, v.block);
    out.alpha = u.alpha * v.alpha;
    out.ancillas = u.ancillas + v.ancillas;
    out.eps_bound = u.alpha * v.eps_bound + v.alpha * u.eps_bound;
    out.ledger = (usage(u) + usage(v)).with_peak(out.ancillas);
    return out;
}

auto hadamard_product(const BlockEncoding &u, const BlockEncoding &v)
    -> BlockEncoding {
    require(u.rows() == v.rows() && u.cols() == v.cols() &&
                u.rows() == u.cols(),
            ErrorKind::DimensionMismatch,
            "Hadamard product of " + shape(u.block) + " and " +
                shape(v.block));
    const int n = log2_exact(u.rows());
    BlockEncoding out;
    out.block = u.block.cwiseProduct(v.block);
    out.alpha = u.alpha * v.alpha;
    out.ancillas = u.ancillas + v.ancillas + n;
    out.eps_bound = u.alpha * v.eps_bound + v.alpha * u.eps_bound;
    out.ledger = (usage(u) + usage(v)).with_peak(out.ancillas);
    return out;
}

auto make_state_prep_pair(const DenseVector &y, double eps) -> StatePrepPair {
    require(y.size() > 0, ErrorKind::InvalidInput, "empty coefficient list");
    require(y.allFinite(), ErrorKind::InvalidInput, "non-finite coefficients");
    StatePrepPair pair;
    pair.coefficients = y;
    pair.beta = y.cwiseAbs().sum();
    pair.qubits = ceil_log2(y.size());
    pair.eps = eps;
    return pair;
}

auto lcu(const std::vector<BlockEncoding> &terms, const StatePrepPair &pair)
    -> BlockEncoding {
    require(!terms.empty(), ErrorKind::InvalidInput, "empty term list");
    require(pair.coefficients.size() == static_cast<Index>(terms.size()),
            ErrorKind::DimensionMismatch,
            "coefficient count differs from term count");
    require(pair.beta >= 0.0 &&
                pair.beta >= pair.coefficients.cwiseAbs().sum() * (1.0 - 1e-12),
            ErrorKind::InvalidInput, "beta below ||y||_1");
    require((Index{1} << pair.qubits) >= pair.coefficients.size(),
            ErrorKind::InvalidInput, "too few state-preparation qubits");

    double alpha = 0.0;
    int ancillas = 0;
    for (const auto &t : terms) {
        require(t.rows() == terms.front().rows() &&
                    t.cols() == terms.front().cols(),
                ErrorKind::DimensionMismatch, "LCU terms differ in shape");
        alpha = std::max(alpha, t.alpha);
        ancillas = std::max(ancillas, t.ancillas);
    }
    double eps2 = 0.0;
    BlockEncoding out;
    out.block = DenseMatrix::Zero(terms.front().rows(), terms.front().cols());
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const auto &t = terms[k];
        out.block += pair.coefficients(static_cast<Index>(k)) * t.block;
        eps2 = std::max(eps2, t.eps_bound * (alpha / t.alpha));
        out.ledger += usage(t);
    }
    out.alpha = alpha * pair.beta;
    out.ancillas = ancillas + pair.qubits;
    out.eps_bound = alpha * pair.eps + pair.beta * eps2;
    out.ledger = out.ledger.with_peak(out.ancillas);
    return out;
}

auto projector_encoding(const std::set<Index> &indices, Index n)
    -> BlockEncoding {
    static_cast<void>(log2_exact(n));
    BlockEncoding out;
    out.block = DenseMatrix::Zero(n, n);
    for (const Index k : indices) {
        require(k >= 0 && k < n, ErrorKind::OutOfRange,
                "projector index " + std::to_string(k) + " outside [0," +
                    std::to_string(n) + ")");
        out.block(k, k) = 1.0;
    }
    out.alpha = 1.0;
    out.ancillas = 1;
    out.ledger.ancilla_peak = 1;
    return out;
}

auto diag_from_state(const StateEncoding &psi, bool squared) -> BlockEncoding {
    const int n = log2_exact(psi.dim());
    const int a = psi.ancillas;
    BlockEncoding out;
    if (squared) {
        out.block = diag_of(RealVector(psi.amplitudes.cwiseAbs2()));
        out.alpha = psi.alpha * psi.alpha;
        out.ancillas = 3 * a + 2 * n + 2;
        out.eps_bound = 3.0 * psi.eps_bound;
        out.ledger = psi.ledger.scaled(3).with_peak(out.ancillas);
    } else {
        out.block = diag_of(psi.amplitudes);
        out.alpha = psi.alpha;
        out.ancillas = 2 * a + n + 2;
        out.eps_bound = psi.eps_bound;
        out.ledger = psi.ledger.scaled(2).with_peak(out.ancillas);
    }
    return out;
}

auto diag_from_column(const BlockEncoding &u, Index col) -> BlockEncoding {
    require(col >= 0 && col < u.cols(), ErrorKind::OutOfRange,
            "column index out of range");
    const int n = log2_exact(u.rows());
    BlockEncoding out;
    out.block = diag_of(DenseVector(u.block.col(col)));
    out.alpha = u.alpha;
    out.ancillas = 2 * u.ancillas + n + 2;
    out.eps_bound = u.eps_bound;
    out.ledger = usage(u).scaled(2).with_peak(out.ancillas);
    return out;
}

auto diag_from_row(const BlockEncoding &u, Index row) -> BlockEncoding {
    require(row >= 0 && row < u.rows(), ErrorKind::OutOfRange,
            "row index out of range");
    const int n = log2_exact(u.cols());
    BlockEncoding out;
    out.block = diag_of(DenseVector(u.block.row(row).transpose()));
    out.alpha = u.alpha;
    out.ancillas = 2 * u.ancillas + n + 2;
    out.eps_bound = u.eps_bound;
    out.ledger = usage(u).scaled(2).with_peak(out.ancillas);
    return out;
}

auto normalized_vector_error(double eps, Index d, double c) -> double {
    require(c > 0.0, ErrorKind::Degenerate, "zero normalization");
    if (eps <= 0.0) {
        return 0.0;
    }
    const double sd = std::sqrt(static_cast<double>(d));
    return (sd + 1.0) * eps / c + std::sqrt(2.0 * eps * sd / c);
}

auto state_from_column(const BlockEncoding &u, Index j) -> StateEncoding {
    require(j >= 0 && j < u.cols(), ErrorKind::OutOfRange,
            "column index " + std::to_string(j) + " out of range");
    const DenseVector col = u.block.col(j);
    const double c = col.norm();
    require(c > 1e-14 * u.alpha, ErrorKind::Degenerate,
            "column " + std::to_string(j) + " is zero");
    const RealMatrix re = real_part_checked(DenseMatrix(col));
    StateEncoding out;
    out.amplitudes = re.col(0) / c;
    out.alpha = std::max(1.0, u.alpha / c);
    out.ancillas = u.ancillas;
    out.eps_bound = normalized_vector_error(u.eps_bound, u.rows(), c);
    out.ledger = usage(u).with_peak(u.ancillas);
    return out;
}

auto amplification_rounds(double alpha) -> std::uint64_t {
    require(std::isfinite(alpha) && alpha >= 1.0 - 1e-12,
            ErrorKind::InvalidInput, "state factor below one");
    const double r = std::ceil(alpha * (1.0 - 1e-12));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(r));
}

auto amplify(const StateEncoding &psi) -> StateEncoding {
    return amplify(psi, amplification_rounds(psi.alpha));
}

auto amplify(const StateEncoding &psi, std::uint64_t rounds) -> StateEncoding {
    require(rounds >= 1, ErrorKind::InvalidInput, "zero amplification rounds");
    StateEncoding out = psi;
    out.alpha = 1.0;
    out.ledger = psi.ledger.scaled(rounds);
    return out;
}

auto perturb(const BlockEncoding &u, double delta, std::uint64_t seed)
    -> BlockEncoding {
    require(std::isfinite(delta) && delta >= 0.0, ErrorKind::InvalidInput,
            "perturbation must be nonnegative");
    if (delta == 0.0) {
        return u;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    RealMatrix e(u.rows(), u.cols());
    for (Index c = 0; c < e.cols(); ++c) {
        for (Index r = 0; r < e.rows(); ++r) {
            e(r, c) = gauss(rng);
        }
    }
    const DenseMatrix ec = to_complex(e);
    const DenseMatrix scaled = ec * (delta / spectral_norm(ec));
    BlockEncoding out = u;
    out.block += scaled;
    out.alpha = std::max(u.alpha, spectral_norm(out.block));
    out.eps_bound += delta;
    return out;
}

auto adjoint(const BlockEncoding &u) -> BlockEncoding {
    BlockEncoding out = u;
    out.block = u.block.adjoint();
    return out;
}

auto normalize(const BlockEncoding &u) -> BlockEncoding {
    BlockEncoding out = u;
    out.block = u.block / u.alpha;
    out.eps_bound = u.eps_bound / u.alpha;
    out.alpha = 1.0;
    return out;
}

auto scale(const BlockEncoding &u, double c) -> BlockEncoding {
    require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidInput,
            "scale must be positive");
    BlockEncoding out = u;
    out.block = u.block * c;
    out.alpha = u.alpha * c;
    out.eps_bound = u.eps_bound * c;
    return out;
}

auto relax_factor(const BlockEncoding &u, double alpha) -> BlockEncoding {
    require(std::isfinite(alpha) && alpha >= u.alpha * (1.0 - 1e-15),
            ErrorKind::FactorTooSmall, "relaxed factor below current factor");
    BlockEncoding out = u;
    if (alpha > u.alpha * (1.0 + 1e-15)) {
        out.alpha = alpha;
        out.ancillas = u.ancillas + 1;
        out.ledger = out.ledger.with_peak(out.ancillas);
    }
    return out;
}

auto add_error(const BlockEncoding &u, double extra) -> BlockEncoding {
    require(std::isfinite(extra) && extra >= 0.0, ErrorKind::InvalidInput,
            "extra error must be nonnegative");
    BlockEncoding out = u;
    out.eps_bound += extra;
    return out;
}

auto identity_encoding(Index n) -> BlockEncoding {
    BlockEncoding out;
    out.block = DenseMatrix::Identity(n, n);
    return out;
}

auto walsh_hadamard_encoding(Index n) -> BlockEncoding {
    BlockEncoding out;
    out.block = walsh_hadamard(log2_exact(n));
    return out;
}

auto state_block(const StateEncoding &psi, Index column, Index cols)
    -> BlockEncoding {
    require(column >= 0 && column < cols, ErrorKind::OutOfRange,
            "state column out of range");
    const Index n = psi.dim();
    BlockEncoding out;
    out.block = DenseMatrix::Zero(n, cols);
    out.block.col(column) = psi.amplitudes.cast<Complex>();
    out.alpha = psi.alpha;
    out.ancillas = psi.ancillas;
    out.eps_bound = std::sqrt(static_cast<double>(n)) * psi.eps_bound;
    out.ledger = psi.ledger.with_peak(psi.ancillas);
    return out;
}

} // namespace qformer
