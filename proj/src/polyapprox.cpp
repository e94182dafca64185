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
#include "qformer/polyapprox.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qformer/error.hpp"

namespace qformer {

namespace {

constexpr int kTransformGrid = 4096;
constexpr long double kTwoOverSqrtPi =
    2.0L / 1.772453850905516027298167483341145182797549456122387128213807789853L;

/// Odd Maclaurin coefficients of erf(scale x), `terms` of them.
auto erf_series(double scale, int terms) -> Polynomial {
    std::vector<long double> c(static_cast<std::size_t>(2 * terms), 0.0L);
    const long double s = scale;
    long double pow = s;        // s^{2n+1}
    long double fact = 1.0L;    // n!
    for (int n = 0; n < terms; ++n) {
        if (n > 0) {
            pow *= s * s;
            fact *= static_cast<long double>(n);
        }
        const long double sign = (n % 2 == 0) ? 1.0L : -1.0L;
        c[static_cast<std::size_t>(2 * n + 1)] =
            kTwoOverSqrtPi * sign * pow / (fact * (2.0L * n + 1.0L));
    }
    return Polynomial(std::move(c));
}

/// Absolute tail sum bounding the Maclaurin remainder of erf on |z| <= z.
auto erf_tail_bound(double z, int terms) -> long double {
    long double term = z; // z^{2n+1}/n! at n = 0
    long double tail = 0.0L;
    for (int n = 0; n < terms + 400; ++n) {
        if (n > 0) {
            term *= static_cast<long double>(z) * z / n;
        }
        if (n >= terms) {
            const long double t = kTwoOverSqrtPi * term / (2.0L * n + 1.0L);
            tail += t;
            if (t < 1e-30L * std::max(tail, 1e-300L) && n > z * z) {
                break;
            }
        }
    }
    return tail;
}

auto gelu_from_erf(double k, const Polynomial &erf_part) -> Polynomial {
    std::vector<long double> c(
        static_cast<std::size_t>(erf_part.degree() + 2), 0.0L);
    c[1] += 0.5L * k;
    for (int i = 0; i <= erf_part.degree(); ++i) {
        c[static_cast<std::size_t>(i + 1)] += 0.5L * k * erf_part.coeff(i);
    }
    return Polynomial(std::move(c));
}

} // namespace

Polynomial::Polynomial(std::vector<long double> coeffs)
    : coeffs_(std::move(coeffs)) {
    for (const long double c : coeffs_) {
        require(std::isfinite(c), ErrorKind::InvalidInput,
                "non-finite polynomial coefficient");
    }
    while (!coeffs_.empty() && coeffs_.back() == 0.0L) {
        coeffs_.pop_back();
    }
}

auto Polynomial::degree() const -> int {
    return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1;
}

auto Polynomial::coeff(int j) const -> long double {
    if (j < 0 || j >= static_cast<int>(coeffs_.size())) {
        return 0.0L;
    }
    return coeffs_[static_cast<std::size_t>(j)];
}

auto Polynomial::parity() const -> Parity {
    bool has_even = false;
    bool has_odd = false;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (coeffs_[j] != 0.0L) {
            (j % 2 == 0 ? has_even : has_odd) = true;
        }
    }
    if (has_even && has_odd) {
        return Parity::Mixed;
    }
    return has_odd ? Parity::Odd : Parity::Even;
}

auto eval_poly_long(const Polynomial &p, long double x) -> long double {
    long double acc = 0.0L;
    const auto &c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

auto eval_poly(const Polynomial &p, double x) -> double {
    return static_cast<double>(eval_poly_long(p, x));
}

auto taylor_exp(int degree, bool half) -> Polynomial {
    require(degree >= 1, ErrorKind::InvalidInput, "Taylor degree must be >= 1");
    std::vector<long double> c(static_cast<std::size_t>(degree + 1));
    const long double s = half ? 0.5L : 1.0L;
    long double term = 1.0L;
    for (int j = 0; j <= degree; ++j) {
        if (j > 0) {
            term *= s / static_cast<long double>(j);
        }
        c[static_cast<std::size_t>(j)] = term;
    }
    return Polynomial(std::move(c));
}

auto taylor_exp_tail(int degree, bool half) -> double {
    require(degree >= 0, ErrorKind::InvalidInput, "negative degree");
    const long double s = half ? 0.5L : 1.0L;
    long double term = 1.0L;
    long double tail = 0.0L;
    for (int j = 1; j <= degree + 80; ++j) {
        term *= s / static_cast<long double>(j);
        if (j > degree) {
            tail += term;
        }
    }
    return static_cast<double>(tail);
}

auto grid_max_error(const std::function<double(double)> &f,
                    const std::function<double(double)> &g, double lo,
                    double hi, int points) -> double {
    require(points >= 2 && hi >= lo, ErrorKind::InvalidInput, "bad grid");
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * i / (points - 1);
        worst = std::max(worst, std::abs(f(x) - g(x)));
    }
    return worst;
}

auto erf_poly(double scale, double lambda, double eps)
    -> std::pair<Polynomial, ApproxReport> {
    require(scale > 0.0 && lambda > 0.0, ErrorKind::InvalidInput,
            "scale and interval must be positive");
    require(eps >= 1e-14, ErrorKind::UnreachablePrecision,
            "erf target below 1e-14");
    const double z = scale * lambda;
    auto grid = [&](const Polynomial &p) {
        return grid_max_error([&](double x) { return eval_poly(p, x); },
                              [&](double x) { return std::erf(scale * x); },
                              -lambda, lambda, kApproxGridPoints);
    };
    const int max_terms = (kMaxApproxDegree + 1) / 2;
    int terms = 1;
    while (terms <= max_terms && erf_tail_bound(z, terms) > 0.5L * eps) {
        ++terms;
    }
    require(terms <= max_terms, ErrorKind::UnreachablePrecision,
            "erf series exceeds the degree cap");
    while (terms > 1 && grid(erf_series(scale, terms - 1)) <= eps) {
        --terms;
    }
    Polynomial p = erf_series(scale, terms);
    double err = grid(p);
    while (err > eps && terms < max_terms) {
        ++terms; // rounding in the alternating sum can cost a few terms
        p = erf_series(scale, terms);
        err = grid(p);
    }
    require(err <= eps, ErrorKind::UnreachablePrecision,
            "erf series cannot reach the target in double precision");
    return {p, ApproxReport{p.degree(), err, -lambda, lambda}};
}

auto gelu(double x) -> double {
    return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2));
}

auto gelu_poly(double k, double lambda, double eps)
    -> std::pair<Polynomial, ApproxReport> {
    require(k > 0.0 && lambda > 0.0, ErrorKind::InvalidInput,
            "scale and interval must be positive");
    require(eps >= 1e-12, ErrorKind::UnreachablePrecision,
            "GELU target below 1e-12");
    const double scale = k / std::numbers::sqrt2;
    const auto [erf_part, erf_rep] = erf_poly(scale, lambda, eps / (k * lambda));
    int terms = (erf_part.degree() + 1) / 2;
    auto build = [&](int t) { return gelu_from_erf(k, erf_series(scale, t)); };
    auto grid = [&](const Polynomial &p) {
        return grid_max_error([&](double x) { return eval_poly(p, x); },
                              [&](double x) { return gelu(k * x); }, -lambda,
                              lambda, kApproxGridPoints);
    };
    while (terms > 1 && grid(build(terms - 1)) <= eps) {
        --terms;
    }
    Polynomial p = build(terms);
    const double err = grid(p);
    require(err <= eps, ErrorKind::UnreachablePrecision,
            "GELU polynomial cannot reach the target");
    return {p, ApproxReport{p.degree(), err, -lambda, lambda}};
}

auto eigen_transform(const BlockEncoding &u, const Polynomial &f,
                     double delta_circuit) -> BlockEncoding {
    require(u.rows() == u.cols(), ErrorKind::ContractViolation,
            "eigenvalue transform needs a square block");
    require(hermiticity_error(u.block) <= 1e-9, ErrorKind::ContractViolation,
            "block is not Hermitian");
    require(delta_circuit >= 0.0, ErrorKind::InvalidInput,
            "negative circuit error");
    const double bound = f.parity() == Parity::Mixed ? 0.5 : 1.0;
    for (int i = 0; i < kTransformGrid; ++i) {
        const double x = -1.0 + 2.0 * i / (kTransformGrid - 1);
        require(std::abs(eval_poly(f, x)) <= bound + 1e-12,
                ErrorKind::ContractViolation,
                "|f| exceeds " + std::to_string(bound) + " on [-1, 1]");
    }
    const int n = log2_exact(u.rows());
    const DenseMatrix h = (u.block + u.block.adjoint()) / (2.0 * u.alpha);
    BlockEncoding out;
    out.block = hermitian_function(h, [&](double x) { return eval_poly(f, x); });
    out.alpha = 1.0;
    out.ancillas = u.ancillas + n + 4;
    const int ell = f.degree();
    out.eps_bound = 4.0 * ell * std::sqrt(u.eps_bound / u.alpha) + delta_circuit;
    out.ledger = usage(u).scaled(static_cast<std::uint64_t>(ell))
                     .with_peak(out.ancillas);
    return out;
}

auto elementwise_query_schedule(int degree) -> std::uint64_t {
    if (degree <= 0) {
        return 0;
    }
    int k = 0;
    while ((2LL << k) <= degree) {
        ++k;
    }
    return ((std::uint64_t{2} << k) - 2) + static_cast<std::uint64_t>(degree);
}

auto elementwise_poly(const BlockEncoding &u, const Polynomial &f,
                      std::optional<Index> row_restrict,
                      std::optional<Index> prefix_len) -> BlockEncoding {
    require(u.rows() == u.cols(), ErrorKind::DimensionMismatch,
            "element-wise transform needs a square block");
    const Index n_dim = u.rows();
    const int n = log2_exact(n_dim);
    if (row_restrict) {
        require(*row_restrict >= 0 && *row_restrict < n_dim,
                ErrorKind::OutOfRange, "restricted row out of range");
    }
    if (prefix_len) {
        require(row_restrict.has_value(), ErrorKind::InvalidInput,
                "prefix restriction needs a row");
        require(*prefix_len >= 1 && *prefix_len <= n_dim, ErrorKind::OutOfRange,
                "prefix length out of range");
    }

    const int ell = f.degree();
    const DenseMatrix x = u.block / u.alpha;
    DenseMatrix acc = DenseMatrix::Zero(n_dim, n_dim);
    DenseMatrix power = x;
    double c_sum = 0.0;
    double weighted = 0.0;
    for (int i = 1; i <= ell; ++i) {
        const double c = static_cast<double>(f.coeff(i));
        acc += c * power;
        c_sum += std::abs(c);
        weighted += std::abs(c) * i;
        if (i < ell) {
            power = power.cwiseProduct(x);
        }
    }
    const double c0 = static_cast<double>(f.coeff(0));
    double const_factor = 0.0;
    if (c0 != 0.0) {
        if (!row_restrict) {
            acc.array() += c0;
            const_factor = static_cast<double>(n_dim);
        } else if (!prefix_len) {
            acc.row(*row_restrict).array() += c0;
            const_factor = std::sqrt(static_cast<double>(n_dim));
        } else {
            acc.row(*row_restrict).head(*prefix_len).array() += c0;
            const_factor = std::sqrt(static_cast<double>(*prefix_len));
        }
    }

    BlockEncoding out;
    out.block = acc;
    const double total = c_sum + const_factor * std::abs(c0);
    out.alpha = total > 0.0 ? total : 1.0;
    out.ancillas = ell >= 1 ? ell * u.ancillas + (ell - 1) * n + 2 * ceil_log2(ell)
                            : 1;
    out.eps_bound = (u.eps_bound / u.alpha) * weighted;
    out.ledger = usage(u).scaled(elementwise_query_schedule(ell))
                     .with_peak(out.ancillas);
    return out;
}

} // namespace qformer
