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

#ifndef QREM_NOISE_MODEL_HPP
#define QREM_NOISE_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qrem/distances.hpp"
#include "qrem/error.hpp"
#include "qrem/matrix.hpp"
#include "qrem/povm.hpp"
#include "qrem/stochastic.hpp"

namespace qrem {

/// Column sums of an extracted Lambda further than this from 1 are rejected;
/// closer ones are renormalized.
inline constexpr double kColumnRenormTol = 1e-6;

/// measured = Lambda * ideal + residual.
struct NoiseDecomposition {
    StochasticMatrix lambda;
    std::vector<HermitianMatrix> residual_effects;
    /// D_op(measured, Lambda * ideal); the upper end of `coherent_bound`.
    double coherent_distance = 0.0;
    DistanceBound coherent_bound;
    /// Largest |column sum - 1| removed by renormalization.
    double column_residual = 0.0;
};

/// Effects sum_j Lambda(i,j) ideal_j.
inline Povm apply_lambda(const StochasticMatrix &lambda, const Povm &ideal) {
    if (lambda.size() != ideal.size()) {
        throw Error(ErrorKind::ShapeMismatch, "Lambda is " + std::to_string(lambda.size()) + "x" +
                                                  std::to_string(lambda.size()) + " but ideal POVM has " +
                                                  std::to_string(ideal.size()) + " outcomes");
    }
    std::vector<HermitianMatrix> effects;
    effects.reserve(ideal.size());
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        ComplexMatrix e = ComplexMatrix::Zero(Eigen::Index(ideal.dim()), Eigen::Index(ideal.dim()));
        for (std::size_t j = 0; j < ideal.size(); ++j) e += lambda(i, j) * ideal[j].matrix();
        effects.emplace_back(std::move(e));
    }
    return Povm::validate(std::move(effects));
}

namespace detail {

/// Basis index k such that effect j is |k><k|, or throws NotProjectiveIdeal.
inline std::vector<std::size_t> projective_support(const Povm &ideal) {
    const double tol = 1e-12;
    if (ideal.size() != ideal.dim()) {
        throw Error(ErrorKind::NotProjectiveIdeal, "ideal POVM has " + std::to_string(ideal.size()) +
                                                       " outcomes in dimension " + std::to_string(ideal.dim()));
    }
    std::vector<std::size_t> support(ideal.size());
    for (std::size_t j = 0; j < ideal.size(); ++j) {
        const auto &e = ideal[j];
        if (!e.is_diagonal(tol)) {
            throw Error(ErrorKind::NotProjectiveIdeal, "ideal effect " + std::to_string(j) + " is not diagonal", j);
        }
        std::size_t ones = 0;
        for (std::size_t k = 0; k < e.dim(); ++k) {
            const double x = e(k, k).real();
            if (std::abs(x - 1.0) < tol) {
                ++ones;
                support[j] = k;
            } else if (std::abs(x) >= tol) {
                throw Error(ErrorKind::NotProjectiveIdeal,
                            "ideal effect " + std::to_string(j) + " has diagonal entry " + std::to_string(x), j);
            }
        }
        if (ones != 1) {
            throw Error(ErrorKind::NotProjectiveIdeal, "ideal effect " + std::to_string(j) + " is not rank one", j);
        }
    }
    return support;
}

}  // namespace detail

/// Splits `measured` into its diagonal (classical) part and the off-diagonal
/// residual relative to a diagonal projective `ideal`.
inline NoiseDecomposition classical_part(const Povm &measured, const Povm &ideal, const DistanceOptions &opts = {}) {
    const auto support = detail::projective_support(ideal);
    if (measured.dim() != ideal.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "measured dim " + std::to_string(measured.dim()) + " vs ideal dim " + std::to_string(ideal.dim()));
    }
    if (measured.size() != ideal.size()) {
        throw Error(ErrorKind::LengthMismatch, "measured has " + std::to_string(measured.size()) +
                                                   " outcomes, ideal has " + std::to_string(ideal.size()));
    }
    const std::size_t n = ideal.size();
    RealMatrix lam{Eigen::Index(n), Eigen::Index(n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            lam(Eigen::Index(i), Eigen::Index(j)) = measured[i](support[j], support[j]).real();

    double residual = 0.0;
    for (Eigen::Index j = 0; j < lam.cols(); ++j) {
        const double sum = lam.col(j).sum();
        const double dev = std::abs(sum - 1.0);
        if (dev > kColumnRenormTol) {
            throw Error(ErrorKind::ColumnSumViolation,
                        "column " + std::to_string(j) + " of Lambda sums to " + std::to_string(sum), std::size_t(j),
                        sum - 1.0);
        }
        residual = std::max(residual, dev);
        lam.col(j) /= sum;
    }

    StochasticMatrix lambda(std::move(lam));
    const Povm classical = apply_lambda(lambda, ideal);
    std::vector<HermitianMatrix> delta;
    delta.reserve(n);
    for (std::size_t i = 0; i < n; ++i) delta.push_back(measured[i] - classical[i]);

    const DistanceBound bound = operational_distance(measured, classical, opts);
    return NoiseDecomposition{std::move(lambda), std::move(delta), bound.upper, bound, residual};
}

}  // namespace qrem

#endif  // QREM_NOISE_MODEL_HPP
