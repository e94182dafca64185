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
 * @file polyapprox.hpp
 * Polynomials, exp/erf/GELU approximations and the two polynomial
 * transforms of block encodings.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qformer/encoding.hpp"

namespace qformer {

enum class Parity { Even, Odd, Mixed };

/// Real polynomial c_0 + c_1 x + ... stored in extended precision so that
/// high-degree Taylor coefficients do not underflow.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<long double> coeffs);

    [[nodiscard]] auto degree() const -> int;
    [[nodiscard]] auto is_zero() const -> bool { return coeffs_.empty(); }
    [[nodiscard]] auto coeff(int j) const -> long double;
    [[nodiscard]] auto coeffs() const -> const std::vector<long double> & {
        return coeffs_;
    }
    [[nodiscard]] auto parity() const -> Parity;

  private:
    std::vector<long double> coeffs_;
};

struct ApproxReport {
    int degree = 0;
    double max_error = 0.0;
    double lo = -1.0;
    double hi = 1.0;
};

auto eval_poly(const Polynomial &p, double x) -> double;
auto eval_poly_long(const Polynomial &p, long double x) -> long double;

/// Degree-l truncation of e^x, or of e^{x/2} when half.
auto taylor_exp(int degree, bool half) -> Polynomial;
/// Exact sup of the truncation error on [-1, 1] (attained at x = 1).
auto taylor_exp_tail(int degree, bool half) -> double;

/// Max |f - g| on `points` evenly spaced samples of [lo, hi].
auto grid_max_error(const std::function<double(double)> &f,
                    const std::function<double(double)> &g, double lo,
                    double hi, int points) -> double;

inline constexpr int kApproxGridPoints = 10000;
inline constexpr int kMaxApproxDegree = 401;

/// Truncated Maclaurin series of erf(scale * x) on [-lambda, lambda],
/// smallest degree whose grid error meets eps.
auto erf_poly(double scale, double lambda, double eps)
    -> std::pair<Polynomial, ApproxReport>;

auto gelu(double x) -> double;

/// Approximation of GELU(k x) on [-lambda, lambda] without constant term.
auto gelu_poly(double k, double lambda, double eps)
    -> std::pair<Polynomial, ApproxReport>;

inline constexpr double kDefaultCircuitDelta = 1e-12;

/**
 * @brief f(A/alpha) of a Hermitian block through its eigendecomposition.
 *
 * Result is a (1, a+n+4, 4 l sqrt(eps/alpha) + delta)-encoding using exactly
 * l queries. |f| must stay below 1/2 on [-1, 1], or below 1 when f has
 * definite parity.
 */
auto eigen_transform(const BlockEncoding &u, const Polynomial &f,
                     double delta_circuit = kDefaultCircuitDelta)
    -> BlockEncoding;

/// sum_{j=1}^{floor(log2 l)} 2^j + l.
auto elementwise_query_schedule(int degree) -> std::uint64_t;

/**
 * @brief Entrywise f(A/alpha) via Hadamard powers and an LCU.
 *
 * With row_restrict the constant term only fills that row, with prefix_len
 * additionally only its first prefix_len entries.
 */
auto elementwise_poly(const BlockEncoding &u, const Polynomial &f,
                      std::optional<Index> row_restrict = std::nullopt,
                      std::optional<Index> prefix_len = std::nullopt)
    -> BlockEncoding;

} // namespace qformer
