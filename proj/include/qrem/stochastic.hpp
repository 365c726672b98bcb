// Copyright 2026 The qrem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QREM_STOCHASTIC_HPP
#define QREM_STOCHASTIC_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrem/error.hpp"
#include "qrem/matrix.hpp"

namespace qrem {

inline constexpr double kStochasticTol = 1e-9;
inline constexpr double kSingularDetTol = 1e-12;
inline constexpr double kInverseResidualTol = 1e-8;

/// Left-stochastic readout map: column j is the outcome distribution p(i|j).
class StochasticMatrix {
   public:
    explicit StochasticMatrix(RealMatrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || m_.size() == 0) {
            throw Error(ErrorKind::ShapeMismatch,
                        "stochastic matrix must be square, got " + std::to_string(m_.rows()) + "x" +
                            std::to_string(m_.cols()));
        }
        for (Eigen::Index j = 0; j < m_.cols(); ++j) {
            for (Eigen::Index i = 0; i < m_.rows(); ++i) {
                const double x = m_(i, j);
                if (!std::isfinite(x) || x < -kStochasticTol || x > 1.0 + kStochasticTol) {
                    throw Error(ErrorKind::OutOfRange,
                                "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(x),
                                std::size_t(j), x);
                }
            }
            const double dev = m_.col(j).sum() - 1.0;
            if (std::abs(dev) > kStochasticTol) {
                throw Error(ErrorKind::ColumnSumViolation,
                            "column " + std::to_string(j) + " sums to 1" + (dev > 0 ? "+" : "") + std::to_string(dev),
                            std::size_t(j), dev);
            }
        }
    }

    static StochasticMatrix identity(std::size_t n) {
        return StochasticMatrix(RealMatrix::Identity(Eigen::Index(n), Eigen::Index(n)));
    }

    std::size_t size() const { return std::size_t(m_.rows()); }
    const RealMatrix &matrix() const { return m_; }
    double operator()(std::size_t i, std::size_t j) const { return m_(Eigen::Index(i), Eigen::Index(j)); }

   private:
    RealMatrix m_;
};

/// Max column l1 norm: the l1 -> l1 operator norm.
inline double one_to_one_norm(const RealMatrix &a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

/// Lambda^{-1} together with the map it inverts.
class CorrectionMatrix {
   public:
    const RealMatrix &matrix() const { return inv_; }
    const StochasticMatrix &source() const { return source_; }
    std::size_t size() const { return std::size_t(inv_.rows()); }
    double one_to_one_norm() const { return qrem::one_to_one_norm(inv_); }

   private:
    CorrectionMatrix(RealMatrix inv, StochasticMatrix source) : inv_(std::move(inv)), source_(std::move(source)) {}
    friend CorrectionMatrix correction_matrix(const StochasticMatrix &lambda);

    RealMatrix inv_;
    StochasticMatrix source_;
};

/// Inverse by LU with partial pivoting. Rejects |det| < 1e-12 and inverses
/// whose product with Lambda misses the identity by more than 1e-8.
inline CorrectionMatrix correction_matrix(const StochasticMatrix &lambda) {
    const Eigen::PartialPivLU<RealMatrix> lu(lambda.matrix());
    const double det = lu.determinant();
    if (!std::isfinite(det) || std::abs(det) < kSingularDetTol) {
        const double rcond = lu.rcond();
        throw Error(ErrorKind::Singular,
                    "|det| = " + std::to_string(std::abs(det)) + ", condition estimate " +
                        std::to_string(rcond > 0 ? 1.0 / rcond : INFINITY),
                    std::nullopt, rcond > 0 ? 1.0 / rcond : INFINITY);
    }
    RealMatrix inv = lu.inverse();
    const Eigen::Index n = inv.rows();
    const double residual = (inv * lambda.matrix() - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual > kInverseResidualTol) {
        throw Error(ErrorKind::Singular, "inverse residual " + std::to_string(residual), std::nullopt,
                    1.0 / lu.rcond());
    }
    return CorrectionMatrix(std::move(inv), lambda);
}

/// [[1-p, q], [p, 1-q]].
inline StochasticMatrix single_qubit_lambda(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
        throw Error(ErrorKind::OutOfRange, "error probabilities must lie in [0,1], got p=" + std::to_string(p) +
                                               " q=" + std::to_string(q));
    }
    RealMatrix m(2, 2);
    m << 1.0 - p, q, p, 1.0 - q;
    return StochasticMatrix(std::move(m));
}

/// Kronecker product with qubit 0 as the leftmost factor.
inline StochasticMatrix product_lambda(std::span<const StochasticMatrix> factors) {
    if (factors.empty()) throw Error(ErrorKind::ShapeMismatch, "product of an empty list");
    RealMatrix out = factors.front().matrix();
    for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k].matrix());
    return StochasticMatrix(std::move(out));
}

}  // namespace qrem

#endif  // QREM_STOCHASTIC_HPP
