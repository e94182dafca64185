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
#include "qformer/dequant.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qformer/error.hpp"

namespace qformer {

namespace {

auto search(const RealVector &prefix, double u) -> Index {
    const double target = u * prefix(prefix.size() - 1);
    const auto *begin = prefix.data();
    const auto *end = begin + prefix.size();
    const auto *it = std::upper_bound(begin, end, target);
    Index k = std::min<Index>(it - begin, prefix.size() - 1);
    // Skip zero-weight slots that upper_bound can land on at the edges.
    while (k > 0 && prefix(k) == prefix(k - 1)) {
        --k;
    }
    return k;
}

auto median(std::vector<double> v) -> double {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    return v[mid];
}

} // namespace

SQAccess::SQAccess(RealMatrix a) : a_(std::move(a)) {
    require(a_.size() > 0, ErrorKind::InvalidInput, "empty matrix");
    require(a_.allFinite(), ErrorKind::InvalidInput, "non-finite matrix");
    const RealMatrix sq = a_.array().square();
    row_prefix_ = RealVector(a_.rows());
    entry_prefix_ = RealMatrix(a_.rows(), a_.cols());
    double acc = 0.0;
    for (Index i = 0; i < a_.rows(); ++i) {
        double row_acc = 0.0;
        for (Index k = 0; k < a_.cols(); ++k) {
            row_acc += sq(i, k);
            entry_prefix_(i, k) = row_acc;
        }
        acc += row_acc;
        row_prefix_(i) = acc;
    }
    col_prefix_ = RealVector(a_.cols());
    double cacc = 0.0;
    for (Index k = 0; k < a_.cols(); ++k) {
        cacc += sq.col(k).sum();
        col_prefix_(k) = cacc;
    }
    require(acc > 0.0, ErrorKind::Degenerate, "all-zero matrix");
    frobenius_ = std::sqrt(acc);
}

auto SQAccess::sample_row(double u) const -> Index { return search(row_prefix_, u); }

auto SQAccess::sample_col(double u) const -> Index { return search(col_prefix_, u); }

auto SQAccess::sample_entry(Index row, double u) const -> Index {
    require(row >= 0 && row < a_.rows(), ErrorKind::OutOfRange,
            "row out of range");
    const RealVector prefix = entry_prefix_.row(row).transpose();
    require(prefix(prefix.size() - 1) > 0.0, ErrorKind::Degenerate,
            "sampling from a zero row");
    return search(prefix, u);
}

auto build_sq(const RealMatrix &a) -> SQAccess { return SQAccess(a); }

auto matvec_samples(double frobenius, double x_norm, double eps, double delta,
                    double c) -> std::uint64_t {
    require(eps > 0.0, ErrorKind::InvalidInput, "eps must be positive");
    require(delta > 0.0 && delta < 1.0, ErrorKind::InvalidInput,
            "delta must lie in (0, 1)");
    require(c > 0.0, ErrorKind::InvalidInput, "constant must be positive");
    const double tau = std::ceil(c * frobenius * frobenius * x_norm * x_norm *
                                 std::log(1.0 / delta) / (eps * eps));
    require(tau < 1e15, ErrorKind::Resource, "sample count overflows");
    return static_cast<std::uint64_t>(std::max(tau, 0.0));
}

auto approx_matvec(const SQAccess &sq, const RealVector &x, double eps,
                   double delta, std::uint64_t seed,
                   const MatvecOptions &options) -> MatvecResult {
    const RealMatrix &a = sq.matrix();
    require(x.size() == a.cols(), ErrorKind::DimensionMismatch,
            "vector length differs from column count");
    require_finite(x, "matvec vector");
    MatvecResult out;
    out.eps_target = eps;
    out.delta_target = delta;
    out.vector = RealVector::Zero(a.rows());
    if (x.norm() == 0.0) {
        return out;
    }
    const double fro = options.frobenius_bound.value_or(sq.frobenius());
    require(fro >= sq.frobenius() * (1.0 - 1e-12), ErrorKind::InvalidInput,
            "Frobenius bound below the actual norm");
    const double xn = options.x_norm_bound.value_or(x.norm());
    require(xn >= x.norm() * (1.0 - 1e-12), ErrorKind::InvalidInput,
            "vector norm bound below the actual norm");
    out.tau = std::max<std::uint64_t>(1, matvec_samples(fro, xn, eps, delta, options.c));
    out.groups = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::ceil(std::log(1.0 / delta))));
    out.groups = std::min(out.groups, out.tau);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double f2 = sq.frobenius() * sq.frobenius();
    const RealVector &cp = sq.col_norm_prefix();
    std::vector<RealVector> means;
    means.reserve(out.groups);
    for (std::uint64_t g = 0; g < out.groups; ++g) {
        const std::uint64_t count =
            out.tau / out.groups + (g < out.tau % out.groups ? 1 : 0);
        RealVector acc = RealVector::Zero(a.rows());
        for (std::uint64_t s = 0; s < count; ++s) {
            const Index j = sq.sample_col(unif(rng));
            const double w = cp(j) - (j > 0 ? cp(j - 1) : 0.0);
            acc += a.col(j) * (x(j) * f2 / w);
        }
        means.push_back(acc / static_cast<double>(count));
    }
    if (means.size() == 1) {
        out.vector = means.front();
        return out;
    }
    double best = 0.0;
    std::size_t pick = 0;
    for (std::size_t g = 0; g < means.size(); ++g) {
        std::vector<double> dist;
        for (std::size_t h = 0; h < means.size(); ++h) {
            if (h != g) {
                dist.push_back((means[g] - means[h]).norm());
            }
        }
        const double med = median(dist);
        if (g == 0 || med < best) {
            best = med;
            pick = g;
        }
    }
    out.vector = means[pick];
    return out;
}

auto exact_matvec(const SQAccess &sq, const RealVector &x) -> ExactMatvec {
    const RealMatrix &a = sq.matrix();
    require(x.size() == a.cols(), ErrorKind::DimensionMismatch,
            "vector length differs from column count");
    ExactMatvec out;
    out.vector = RealVector::Zero(a.rows());
    for (Index i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (Index k = 0; k < a.cols(); ++k) {
            acc += sq.query(i, k) * x(k);
        }
        out.vector(i) = acc;
    }
    out.queries = static_cast<std::uint64_t>(a.size());
    return out;
}

auto dequant_attention(const RealMatrix &s, const RealMatrix &w_v,
                       const RealVector &softmax_row, double eps, double delta,
                       std::uint64_t seed) -> DequantAttention {
    require(s.cols() == w_v.rows(), ErrorKind::DimensionMismatch,
            "S and W_v shapes");
    require(softmax_row.size() == s.rows(), ErrorKind::DimensionMismatch,
            "softmax row length differs from token count");
    require((softmax_row.array() >= -1e-15).all() &&
                std::abs(softmax_row.sum() - 1.0) <= 1e-9,
            ErrorKind::InvalidInput, "softmax row must be a probability vector");
    DequantAttention out;
    out.frobenius_s = s.norm();
    out.frobenius_wv = w_v.norm();
    const RealMatrix vt = (s * w_v).transpose();
    const SQAccess sq(vt);
    MatvecOptions opt;
    opt.frobenius_bound = std::max(out.frobenius_s * out.frobenius_wv, sq.frobenius());
    opt.x_norm_bound = 1.0;
    out.estimate = approx_matvec(sq, softmax_row, eps, delta, seed, opt);
    out.exact = vt * softmax_row;
    out.error = (out.estimate.vector - out.exact).norm();
    return out;
}

} // namespace qformer
