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

// Shared helpers for the unit tests: random instances and small oracles.

#ifndef QREM_TESTS_TESTUTIL_HPP
#define QREM_TESTS_TESTUTIL_HPP

#include <cmath>
#include <vector>

#include "qrem/qrem.hpp"

namespace qrem::testutil {

inline ComplexMatrix random_complex(std::size_t d, Rng &rng) {
    ComplexMatrix a{Eigen::Index(d), Eigen::Index(d)};
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = Complex(rng.normal(), rng.normal());
    return a;
}

inline HermitianMatrix random_hermitian(std::size_t d, Rng &rng) {
    const ComplexMatrix a = random_complex(d, rng);
    return HermitianMatrix((a + a.adjoint()) * 0.5);
}

/// A random n-outcome POVM on dimension d: G_i = A_i A_i^dagger, then
/// M_i = S^{-1/2} G_i S^{-1/2} with S = sum G_i.
inline Povm random_povm(std::size_t d, std::size_t n, Rng &rng) {
    std::vector<ComplexMatrix> g;
    ComplexMatrix s = ComplexMatrix::Zero(Eigen::Index(d), Eigen::Index(d));
    for (std::size_t i = 0; i < n; ++i) {
        const ComplexMatrix a = random_complex(d, rng);
        g.push_back(a * a.adjoint());
        s += g.back();
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
    const ComplexMatrix w = es.operatorInverseSqrt();
    std::vector<HermitianMatrix> effects;
    for (const auto &gi : g) effects.emplace_back(w * gi * w);
    return Povm::validate(std::move(effects));
}

/// Diagonal single-qubit detector with flip probabilities p (0 -> 1) and q (1 -> 0).
inline Povm classical_qubit(double p, double q) { return coherent_qubit_povm(p, q, 0.0); }

inline double abs_max_diff(const ComplexMatrix &a, const ComplexMatrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

inline double abs_max_diff(const RealMatrix &a, const RealMatrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Random point of the probability simplex (normalized exponentials).
inline std::vector<double> random_simplex_point(std::size_t n, Rng &rng) {
    std::vector<double> w(n);
    double s = 0.0;
    for (auto &x : w) {
        x = -std::log(1.0 - rng.uniform());
        s += x;
    }
    for (auto &x : w) x /= s;
    return w;
}

inline StochasticMatrix random_stochastic(std::size_t n, Rng &rng, double diag_weight = 4.0) {
    RealMatrix m{Eigen::Index(n), Eigen::Index(n)};
    for (std::size_t j = 0; j < n; ++j) {
        auto col = random_simplex_point(n, rng);
        double s = 0.0;
        col[j] += diag_weight;
        for (double x : col) s += x;
        for (std::size_t i = 0; i < n; ++i) m(Eigen::Index(i), Eigen::Index(j)) = col[i] / s;
    }
    return StochasticMatrix(m);
}


/// Squared Euclidean distance from v to the simplex point (w_0, ..., w_{n-2}, 1 - sum).
inline double simplex_gap2(const std::vector<double> &v, const std::vector<double> &w_head) {
    double last = 1.0, d2 = 0.0;
    for (std::size_t i = 0; i < w_head.size(); ++i) {
        last -= w_head[i];
        d2 += (v[i] - w_head[i]) * (v[i] - w_head[i]);
    }
    return d2 + (v.back() - last) * (v.back() - last);
}

/// Grid-search projection onto the simplex for n = 2 or 3: a 0.01 grid over
/// the whole simplex, then repeated 10x zooms around the best point. The
/// objective is convex, so zooming cannot strand the search.
inline std::vector<double> grid_projection(const std::vector<double> &v, double final_step = 1e-9) {
    const std::size_t free = v.size() - 1;
    std::vector<double> best(free, 0.0), lo(free, 0.0), hi(free, 1.0);
    double best_d2 = INFINITY;
    for (double step = 0.01; step >= final_step; step /= 10) {
        std::vector<double> w(free);
        const auto visit = [&](const std::vector<double> &cand) {
            double s = 0.0;
            for (double x : cand) {
                if (x < 0.0) return;
                s += x;
            }
            if (s > 1.0) return;
            const double d2 = simplex_gap2(v, cand);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = cand;
            }
        };
        const long steps0 = std::lround((hi[0] - lo[0]) / step);
        for (long a = 0; a <= steps0; ++a) {
            w[0] = std::min(lo[0] + double(a) * step, hi[0]);
            if (free == 1) {
                visit(w);
                continue;
            }
            const long steps1 = std::lround((hi[1] - lo[1]) / step);
            for (long b = 0; b <= steps1; ++b) {
                w[1] = std::min(lo[1] + double(b) * step, hi[1]);
                visit(w);
            }
        }
        for (std::size_t i = 0; i < free; ++i) {
            lo[i] = std::max(0.0, best[i] - 2 * step);
            hi[i] = std::min(1.0, best[i] + 2 * step);
        }
    }
    std::vector<double> out = best;
    double s = 0.0;
    for (double x : best) s += x;
    out.push_back(1.0 - s);
    return out;
}

}  // namespace qrem::testutil

#endif  // QREM_TESTS_TESTUTIL_HPP
