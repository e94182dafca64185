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
#include "qformer/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qformer/error.hpp"

namespace qformer {

auto to_string(ErrorKind kind) -> const char * {
    switch (kind) {
    case ErrorKind::InvalidInput:
        return "invalid input";
    case ErrorKind::FactorTooSmall:
        return "factor too small";
    case ErrorKind::DimensionMismatch:
        return "dimension mismatch";
    case ErrorKind::InvalidModel:
        return "invalid factor model";
    case ErrorKind::Degenerate:
        return "degenerate";
    case ErrorKind::Unsupported:
        return "unsupported";
    case ErrorKind::ContractViolation:
        return "contract violation";
    case ErrorKind::Resource:
        return "resource limit";
    case ErrorKind::UnreachablePrecision:
        return "unreachable precision";
    case ErrorKind::OutOfRange:
        return "out of range";
    case ErrorKind::FileNotFound:
        return "file not found";
    case ErrorKind::Parse:
        return "parse error";
    case ErrorKind::InvariantFailure:
        return "invariant failure";
    }
    return "error";
}

void require_finite(const DenseMatrix &a, const char *what) {
    require(a.size() > 0, ErrorKind::InvalidInput,
            std::string(what) + " is empty");
    require(a.allFinite(), ErrorKind::InvalidInput,
            std::string(what) + " has non-finite entries");
}

void require_finite(const RealVector &v, const char *what) {
    require(v.allFinite(), ErrorKind::InvalidInput,
            std::string(what) + " has non-finite entries");
}

auto spectral_norm(const DenseMatrix &a) -> double {
    require_finite(a, "matrix");
    const DenseMatrix gram = a.rows() <= a.cols()
                                 ? DenseMatrix(a * a.adjoint())
                                 : DenseMatrix(a.adjoint() * a);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(gram,
                                                  Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(lmax, 0.0));
}

auto frobenius_norm(const DenseMatrix &a) -> double {
    require_finite(a, "matrix");
    long double acc = 0.0L;
    for (Index c = 0; c < a.cols(); ++c) {
        for (Index r = 0; r < a.rows(); ++r) {
            acc += static_cast<long double>(std::norm(a(r, c)));
        }
    }
    return static_cast<double>(std::sqrt(acc));
}

auto max_entry_norm(const DenseMatrix &a) -> double {
    require_finite(a, "matrix");
    return a.cwiseAbs().maxCoeff();
}

auto is_pow2(Index n) -> bool { return n > 0 && (n & (n - 1)) == 0; }

auto next_pow2(Index n) -> Index {
    Index p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

auto log2_exact(Index n) -> int {
    require(is_pow2(n), ErrorKind::InvalidInput,
            "dimension " + std::to_string(n) + " is not a power of two");
    int k = 0;
    while ((Index{1} << k) < n) {
        ++k;
    }
    return k;
}

auto ceil_log2(Index n) -> int {
    int k = 0;
    while ((Index{1} << k) < n) {
        ++k;
    }
    return k;
}

auto pad_pow2(const DenseMatrix &a) -> DenseMatrix {
    require_finite(a, "matrix");
    DenseMatrix out = DenseMatrix::Zero(next_pow2(a.rows()), next_pow2(a.cols()));
    out.topLeftCorner(a.rows(), a.cols()) = a;
    return out;
}

auto unitary_dilation(const DenseMatrix &a, double alpha) -> DenseMatrix {
    require_finite(a, "matrix");
    require(a.rows() == a.cols() && is_pow2(a.rows()), ErrorKind::InvalidInput,
            "dilation needs a square power-of-two block");
    require(std::isfinite(alpha) && alpha > 0.0, ErrorKind::InvalidInput,
            "factor must be positive");
    const double norm = spectral_norm(a);
    require(alpha >= norm * (1.0 - 1e-12), ErrorKind::FactorTooSmall,
            "factor " + std::to_string(alpha) + " below spectral norm " +
                std::to_string(norm));

    const Index n = a.rows();
    const DenseMatrix b = a / alpha;
    Eigen::JacobiSVD<DenseMatrix> svd(b, Eigen::ComputeFullU |
                                             Eigen::ComputeFullV);
    RealVector comp(n);
    for (Index k = 0; k < n; ++k) {
        const double s = svd.singularValues()(k);
        comp(k) = std::sqrt(std::clamp(1.0 - s * s, 0.0, 1.0));
    }
    const DenseMatrix &w = svd.matrixU();
    const DenseMatrix &v = svd.matrixV();
    const DenseMatrix left = w * comp.asDiagonal() * w.adjoint();
    const DenseMatrix right = v * comp.asDiagonal() * v.adjoint();

    DenseMatrix u(2 * n, 2 * n);
    u.topLeftCorner(n, n) = b;
    u.topRightCorner(n, n) = left;
    u.bottomLeftCorner(n, n) = right;
    u.bottomRightCorner(n, n) = -b.adjoint();
    return u;
}

auto kron(const DenseMatrix &a, const DenseMatrix &b) -> DenseMatrix {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

auto hermitian_function(const DenseMatrix &h,
                        const std::function<double(double)> &f)
    -> DenseMatrix {
    const Index n = h.rows();
    bool diagonal = true;
    for (Index c = 0; c < n && diagonal; ++c) {
        for (Index r = 0; r < n; ++r) {
            if (r != c && h(r, c) != Complex(0.0, 0.0)) {
                diagonal = false;
                break;
            }
        }
    }
    if (diagonal) {
        DenseMatrix out = DenseMatrix::Zero(n, n);
        for (Index k = 0; k < n; ++k) {
            out(k, k) = f(h(k, k).real());
        }
        return out;
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
    RealVector mapped(n);
    for (Index k = 0; k < n; ++k) {
        mapped(k) = f(es.eigenvalues()(k));
    }
    return es.eigenvectors() * mapped.asDiagonal() *
           es.eigenvectors().adjoint();
}

auto unitarity_error(const DenseMatrix &u) -> double {
    const DenseMatrix d =
        u.adjoint() * u - DenseMatrix::Identity(u.cols(), u.cols());
    return spectral_norm(d);
}

auto hermiticity_error(const DenseMatrix &a) -> double {
    if (a.rows() != a.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

auto walsh_hadamard(int qubits) -> DenseMatrix {
    const Index n = Index{1} << qubits;
    DenseMatrix h(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index r = 0; r < n; ++r) {
        for (Index c = 0; c < n; ++c) {
            const int parity = __builtin_popcountll(
                                   static_cast<unsigned long long>(r & c)) &
                               1;
            h(r, c) = parity != 0 ? -scale : scale;
        }
    }
    return h;
}

auto to_complex(const RealMatrix &a) -> DenseMatrix {
    return a.cast<Complex>();
}

auto real_part_checked(const DenseMatrix &a, double tol) -> RealMatrix {
    if (a.size() > 0) {
        const double imag = a.imag().cwiseAbs().maxCoeff();
        require(imag <= tol * std::max(1.0, a.cwiseAbs().maxCoeff()),
                ErrorKind::Unsupported, "complex entries where real expected");
    }
    return a.real();
}

} // namespace qformer
