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
#include <algorithm>
#include <cmath>
#include <random>

#include "qformer/error.hpp"
#include "qformer/transformer.hpp"

namespace qformer {

namespace {

/// Sign test threshold as a fraction of the expected count for a positive
/// amplitude.
constexpr double kSignThreshold = 0.5;
constexpr double kSupportTolerance = 1e-9;

auto draw_counts(const RealVector &probabilities, std::uint64_t shots,
                 std::mt19937_64 &rng) -> std::vector<std::uint64_t> {
    const Index k = probabilities.size();
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(k), 0);
    double rest = probabilities.sum();
    std::uint64_t left = shots;
    for (Index i = 0; i < k && left > 0; ++i) {
        if (i == k - 1) {
            counts[static_cast<std::size_t>(i)] = left;
            break;
        }
        const double p =
            rest > 0.0 ? std::clamp(probabilities(i) / rest, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> bin(left, p);
        const std::uint64_t c = bin(rng);
        counts[static_cast<std::size_t>(i)] = c;
        left -= c;
        rest -= probabilities(i);
    }
    return counts;
}

} // namespace

auto tomography_samples(Index d, double eps) -> std::uint64_t {
    require(d >= 1, ErrorKind::InvalidInput, "empty state");
    require(eps > 0.0, ErrorKind::InvalidInput, "eps must be positive");
    const double m = std::ceil(36.0 * std::log(static_cast<double>(d)) / (eps * eps));
    require(m < 1e15, ErrorKind::Resource, "tomography sample count overflows");
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

auto sample_counts(const RealVector &probabilities, std::uint64_t shots,
                   std::uint64_t seed) -> std::vector<std::uint64_t> {
    require(probabilities.size() >= 1 && (probabilities.array() >= 0.0).all(),
            ErrorKind::InvalidInput, "probabilities must be nonnegative");
    std::mt19937_64 rng(seed);
    return draw_counts(probabilities, shots, rng);
}

auto tomography(const StateEncoding &psi, double eps, SignMode mode,
                std::uint64_t seed, std::optional<Index> support)
    -> TomographyResult {
    require_finite(psi.amplitudes, "tomography state");
    const Index d = support.value_or(psi.dim());
    require(d >= 1 && d <= psi.dim(), ErrorKind::OutOfRange,
            "tomography support outside the state");
    const double norm = psi.amplitudes.head(d).norm();
    require(norm > 0.0, ErrorKind::Degenerate, "zero state");
    require(psi.amplitudes.tail(psi.dim() - d).norm() <= kSupportTolerance * norm,
            ErrorKind::InvariantFailure, "state has weight outside the support");
    const RealVector a = psi.amplitudes.head(d) / norm;

    TomographyResult out;
    out.samples = tomography_samples(d, eps);
    const double m = static_cast<double>(out.samples);
    std::mt19937_64 rng(seed);
    const auto counts = draw_counts(a.cwiseAbs2(), out.samples, rng);
    RealVector mag(d);
    for (Index k = 0; k < d; ++k) {
        mag(k) = std::sqrt(static_cast<double>(counts[static_cast<std::size_t>(k)]) / m);
    }

    RealVector sign = RealVector::Ones(d);
    if (mode == SignMode::Oracle) {
        for (Index k = 0; k < d; ++k) {
            sign(k) = a(k) < 0.0 ? -1.0 : 1.0;
        }
        out.preparations = out.samples;
    } else {
        // Interfere psi with the magnitude estimate and read the "+" branch:
        // P(+, k) = (a_k + mag_k)^2 / 4, near mag_k^2 when a_k > 0.
        RealVector joint(2 * d);
        for (Index k = 0; k < d; ++k) {
            joint(k) = 0.25 * (a(k) + mag(k)) * (a(k) + mag(k));
            joint(d + k) = 0.25 * (a(k) - mag(k)) * (a(k) - mag(k));
        }
        const auto branch = draw_counts(joint, out.samples, rng);
        for (Index k = 0; k < d; ++k) {
            const double plus = static_cast<double>(branch[static_cast<std::size_t>(k)]);
            sign(k) = plus >= kSignThreshold * mag(k) * mag(k) * m ? 1.0 : -1.0;
        }
        out.preparations = 2 * out.samples;
    }
    out.vector = sign.cwiseProduct(mag);
    const double vn = out.vector.norm();
    if (vn > 0.0) {
        out.vector /= vn;
    }
    out.ledger = psi.ledger.scaled(out.preparations);
    return out;
}

} // namespace qformer
