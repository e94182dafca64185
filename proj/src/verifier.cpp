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
#include "qformer/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qformer/error.hpp"

namespace qformer {

namespace {

auto bit(Index x, int q, int total) -> Index { return (x >> (total - 1 - q)) & 1; }

void require_qubits(int total) {
    require(total <= kMaxVerifyQubits, ErrorKind::Resource,
            "explicit verification needs " + std::to_string(total) +
                " qubits, ceiling is " + std::to_string(kMaxVerifyQubits));
}

/// Unitary whose first column is the unit vector v.
auto complete_unitary(const DenseVector &v) -> DenseMatrix {
    const Index n = v.size();
    DenseMatrix m = DenseMatrix::Identity(n, n);
    m.col(0) = v;
    Eigen::HouseholderQR<DenseMatrix> qr(m);
    DenseMatrix q = qr.householderQ();
    const Complex r00 = qr.matrixQR()(0, 0);
    q.col(0) *= r00 / std::abs(r00);
    return q;
}

auto range(int first, int count) -> std::vector<int> {
    std::vector<int> out(static_cast<std::size_t>(count));
    std::iota(out.begin(), out.end(), first);
    return out;
}

auto finish(CompositionKind kind, const DenseMatrix &extracted,
            const DenseMatrix &lazy, double unitarity, int total,
            double tolerance) -> VerifyReport {
    VerifyReport rep;
    rep.kind = kind;
    rep.deviation = (extracted - lazy).cwiseAbs().maxCoeff();
    rep.unitarity = unitarity;
    rep.total_qubits = total;
    rep.pass = rep.deviation <= tolerance && unitarity <= 1e-9;
    return rep;
}

auto random_block(std::mt19937_64 &rng, Index dim) -> BlockEncoding {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> slack(1.0, 2.0);
    DenseMatrix a(dim, dim);
    for (Index c = 0; c < dim; ++c) {
        for (Index r = 0; r < dim; ++r) {
            a(r, c) = Complex(gauss(rng), gauss(rng));
        }
    }
    BlockEncoding be;
    be.block = a;
    be.alpha = spectral_norm(a) * slack(rng);
    be.ancillas = 1;
    return be;
}

} // namespace

auto ExplicitEncoding::encoded() const -> DenseMatrix {
    const Index dim = Index{1} << system_qubits;
    return alpha * unitary.topLeftCorner(dim, dim);
}

auto dilate(const DenseMatrix &a, double alpha) -> ExplicitEncoding {
    ExplicitEncoding e;
    e.unitary = unitary_dilation(a, alpha);
    e.alpha = alpha;
    e.ancillas = 1;
    e.system_qubits = log2_exact(a.rows());
    return e;
}

auto build_cnot_permutation(int n) -> DenseMatrix {
    require(n >= 1 && n <= 6, ErrorKind::Resource,
            "CNOT permutation supports 1..6 qubits per register");
    const Index dim = Index{1} << n;
    DenseMatrix p = DenseMatrix::Zero(dim * dim, dim * dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            p(i * dim + (i ^ j), i * dim + j) = 1.0;
        }
    }
    return p;
}

auto embed_operator(const DenseMatrix &op, const std::vector<int> &targets,
                    int total) -> DenseMatrix {
    require_qubits(total);
    const int k = static_cast<int>(targets.size());
    require(op.rows() == (Index{1} << k) && op.cols() == op.rows(),
            ErrorKind::DimensionMismatch, "operator size differs from targets");
    std::vector<bool> is_target(static_cast<std::size_t>(total), false);
    Index rest_mask = (Index{1} << total) - 1;
    for (const int q : targets) {
        require(q >= 0 && q < total, ErrorKind::OutOfRange, "bad target qubit");
        is_target[static_cast<std::size_t>(q)] = true;
        rest_mask &= ~(Index{1} << (total - 1 - q));
    }
    const Index dim = Index{1} << total;
    auto sub = [&](Index x) {
        Index s = 0;
        for (const int q : targets) {
            s = (s << 1) | bit(x, q, total);
        }
        return s;
    };
    DenseMatrix out = DenseMatrix::Zero(dim, dim);
    for (Index c = 0; c < dim; ++c) {
        const Index sc = sub(c);
        for (Index r = 0; r < dim; ++r) {
            if ((r & rest_mask) == (c & rest_mask)) {
                out(r, c) = op(sub(r), sc);
            }
        }
    }
    return out;
}

auto to_string(CompositionKind kind) -> const char * {
    switch (kind) {
    case CompositionKind::Product:
        return "product";
    case CompositionKind::Hadamard:
        return "hadamard";
    case CompositionKind::Lcu:
        return "lcu";
    case CompositionKind::Dilation:
        return "dilation";
    }
    return "unknown";
}

auto verify_composition(CompositionKind kind,
                        const std::vector<BlockEncoding> &operands,
                        double tolerance, const DenseVector &y)
    -> VerifyReport {
    require(!operands.empty(), ErrorKind::InvalidInput, "no operands");
    const int n = log2_exact(operands.front().rows());
    for (const auto &op : operands) {
        require(op.rows() == op.cols() && op.rows() == operands.front().rows(),
                ErrorKind::DimensionMismatch,
                "operands must share a square shape");
    }

    switch (kind) {
    case CompositionKind::Dilation: {
        const auto &a = operands.front();
        require_qubits(n + 1);
        const ExplicitEncoding e = dilate(a.block, a.alpha);
        return finish(kind, e.encoded(), a.block, unitarity_error(e.unitary),
                      n + 1, tolerance);
    }
    case CompositionKind::Product: {
        require(operands.size() == 2, ErrorKind::InvalidInput,
                "product takes two operands");
        const int total = n + 2;
        require_qubits(total);
        const auto &u = operands[0];
        const auto &v = operands[1];
        const ExplicitEncoding eu = dilate(u.block, u.alpha);
        const ExplicitEncoding ev = dilate(v.block, v.alpha);
        std::vector<int> tu{0};
        std::vector<int> tv{1};
        for (const int q : range(2, n)) {
            tu.push_back(q);
            tv.push_back(q);
        }
        const DenseMatrix w = embed_operator(eu.unitary, tu, total) *
                              embed_operator(ev.unitary, tv, total);
        const Index dim = Index{1} << n;
        const DenseMatrix extracted =
            u.alpha * v.alpha * w.topLeftCorner(dim, dim);
        return finish(kind, extracted, product(u, v).block, unitarity_error(w),
                      total, tolerance);
    }
    case CompositionKind::Hadamard: {
        require(operands.size() == 2, ErrorKind::InvalidInput,
                "hadamard takes two operands");
        const int total = 2 * n + 2;
        require_qubits(total);
        const auto &u = operands[0];
        const auto &v = operands[1];
        const ExplicitEncoding eu = dilate(u.block, u.alpha);
        const ExplicitEncoding ev = dilate(v.block, v.alpha);
        std::vector<int> tu{0};
        std::vector<int> tv{1};
        for (const int q : range(2, n)) {
            tu.push_back(q);
        }
        for (const int q : range(2 + n, n)) {
            tv.push_back(q);
        }
        const DenseMatrix p =
            embed_operator(build_cnot_permutation(n), range(2, 2 * n), total);
        const DenseMatrix w = p * embed_operator(eu.unitary, tu, total) *
                              embed_operator(ev.unitary, tv, total) *
                              p.adjoint();
        const Index dim = Index{1} << n;
        DenseMatrix extracted(dim, dim);
        for (Index i = 0; i < dim; ++i) {
            for (Index k = 0; k < dim; ++k) {
                extracted(i, k) = w(i * dim, k * dim);
            }
        }
        extracted *= u.alpha * v.alpha;
        return finish(kind, extracted, hadamard_product(u, v).block,
                      unitarity_error(w), total, tolerance);
    }
    case CompositionKind::Lcu: {
        const Index m = static_cast<Index>(operands.size());
        require(y.size() == m, ErrorKind::DimensionMismatch,
                "one coefficient per term required");
        const StatePrepPair pair = make_state_prep_pair(y);
        require(pair.beta > 0.0, ErrorKind::Degenerate, "all-zero coefficients");
        const int b = pair.qubits;
        const int total = b + 1 + n;
        require_qubits(total);
        double alpha = 0.0;
        for (const auto &op : operands) {
            alpha = std::max(alpha, op.alpha);
        }
        const Index sel = Index{1} << b;
        const Index dsub = Index{1} << (n + 1);
        DenseMatrix select = DenseMatrix::Identity(sel * dsub, sel * dsub);
        for (Index k = 0; k < m; ++k) {
            select.block(k * dsub, k * dsub, dsub, dsub) =
                unitary_dilation(operands[static_cast<std::size_t>(k)].block,
                                 alpha);
        }
        DenseVector left = DenseVector::Zero(sel);
        DenseVector right = DenseVector::Zero(sel);
        for (Index k = 0; k < m; ++k) {
            const double mag = std::sqrt(std::abs(y(k)) / pair.beta);
            left(k) = mag;
            right(k) = std::abs(y(k)) > 0.0 ? y(k) / std::abs(y(k)) * mag
                                             : Complex(0.0, 0.0);
        }
        const DenseMatrix pl = complete_unitary(left);
        const DenseMatrix pr = complete_unitary(right);
        const DenseMatrix id = DenseMatrix::Identity(dsub, dsub);
        const DenseMatrix w = kron(pl.adjoint(), id) * select * kron(pr, id);
        const Index dim = Index{1} << n;
        const DenseMatrix extracted = alpha * pair.beta * w.topLeftCorner(dim, dim);
        return finish(kind, extracted, lcu(operands, pair).block,
                      unitarity_error(w), total, tolerance);
    }
    }
    throw Error(ErrorKind::InvalidInput, "unknown composition kind");
}

auto run_verify_suite(int n, int trials, double tolerance, std::uint64_t seed)
    -> VerifySuiteReport {
    require(n >= 1 && trials >= 1, ErrorKind::InvalidInput,
            "suite needs n >= 1 and at least one trial");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const Index dim = Index{1} << n;
    VerifySuiteReport suite;
    auto record = [&suite](const VerifyReport &rep) {
        suite.reports.push_back(rep);
        ++suite.instances;
        suite.failures += rep.pass ? 0 : 1;
        suite.max_deviation = std::max(suite.max_deviation, rep.deviation);
    };
    for (int t = 0; t < trials; ++t) {
        const BlockEncoding a = random_block(rng, dim);
        const BlockEncoding b = random_block(rng, dim);
        const BlockEncoding c = random_block(rng, dim);
        record(verify_composition(CompositionKind::Dilation, {a}, tolerance));
        record(verify_composition(CompositionKind::Product, {a, b}, tolerance));
        record(verify_composition(CompositionKind::Hadamard, {a, b}, tolerance));
        const Index m = 2 + (t % 2);
        DenseVector y(m);
        for (Index k = 0; k < m; ++k) {
            y(k) = coeff(rng);
        }
        std::vector<BlockEncoding> terms{a, b};
        if (m == 3) {
            terms.push_back(c);
        }
        record(verify_composition(CompositionKind::Lcu, terms, tolerance, y));
    }
    return suite;
}

} // namespace qformer
