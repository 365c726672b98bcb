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

#ifndef QREM_DISTANCES_HPP
#define QREM_DISTANCES_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>


#include "qrem/error.hpp"
#include "qrem/matrix.hpp"
#include "qrem/povm.hpp"
#include "qrem/random.hpp"
#include "qrem/stochastic.hpp"

namespace qrem {

/// Largest outcome count for which all 2^(n-1) subsets are enumerated.
inline constexpr std::size_t kMaxExactOutcomes = 16;
inline constexpr std::size_t kDefaultSampledSubsets = std::size_t{1} << 17;

enum class DistanceMethod { exact, sampled_lower, subadditive_upper, classical_closed_form, combined };

inline std::string_view to_string(DistanceMethod m) {
    switch (m) {
        case DistanceMethod::exact: return "exact";
        case DistanceMethod::sampled_lower: return "sampled_lower";
        case DistanceMethod::subadditive_upper: return "subadditive_upper";
        case DistanceMethod::classical_closed_form: return "classical_closed_form";
        case DistanceMethod::combined: return "combined";
    }
    return "unknown";
}

inline DistanceMethod distance_method_from_string(std::string_view s) {
    for (auto m : {DistanceMethod::exact, DistanceMethod::sampled_lower, DistanceMethod::subadditive_upper,
                   DistanceMethod::classical_closed_form, DistanceMethod::combined}) {
        if (to_string(m) == s) return m;
    }
    throw Error(ErrorKind::Parse, "unknown distance method '" + std::string(s) + "'");
}

/// Interval known to contain an operational distance.
struct DistanceBound {
    double lower = 0.0;
    double upper = 0.0;
    DistanceMethod method = DistanceMethod::exact;

    static DistanceBound exact(double value, DistanceMethod method = DistanceMethod::exact) {
        return make(value, value, method);
    }

    static DistanceBound make(double lower, double upper, DistanceMethod method) {
        // Roundoff can push a value a hair outside [0, 1].
        lower = std::clamp(lower, 0.0, 1.0);
        upper = std::clamp(upper, 0.0, 1.0);
        if (lower > upper + 1e-12) {
            throw Error(ErrorKind::OutOfRange,
                        "distance lower bound " + std::to_string(lower) + " exceeds upper " + std::to_string(upper));
        }
        upper = std::max(upper, lower);
        return DistanceBound{lower, upper, method};
    }

    bool is_exact() const { return lower == upper; }

    friend bool operator==(const DistanceBound &, const DistanceBound &) = default;
};

/// Half the l1 distance. Accepts quasi-probability vectors.
inline double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw Error(ErrorKind::LengthMismatch,
                    "tv_distance of lengths " + std::to_string(p.size()) + " and " + std::to_string(q.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

inline double tv_distance(const ProbabilityVector &p, const ProbabilityVector &q) {
    return tv_distance(p.span(), q.span());
}

namespace detail {

inline void check_same_shape(const Povm &m, const Povm &n) {
    if (m.dim() != n.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "POVM dims " + std::to_string(m.dim()) + " and " + std::to_string(n.dim()));
    }
    if (m.size() != n.size()) {
        throw Error(ErrorKind::LengthMismatch,
                    "POVM outcome counts " + std::to_string(m.size()) + " and " + std::to_string(n.size()));
    }
}

inline std::vector<ComplexMatrix> effect_differences(const Povm &m, const Povm &n) {
    std::vector<ComplexMatrix> d;
    d.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) d.push_back(m[i].matrix() - n[i].matrix());
    return d;
}

/// Cholesky attempt on t I + sign * a (lower triangle only), abandoned at the
/// first non-positive pivot. Works on interleaved (re, im) doubles so the
/// inner update avoids the NaN-checking complex multiply.
inline bool shifted_positive_definite(const ComplexMatrix &a, double t, double sign, ComplexMatrix &work) {
    const Eigen::Index n = a.rows();
    work = sign * a;
    work.diagonal().array() += t;
    double *w = reinterpret_cast<double *>(work.data());
    const auto at = [&](Eigen::Index i, Eigen::Index j) { return w + 2 * (j * n + i); };
    for (Eigen::Index j = 0; j < n; ++j) {
        const double pivot = at(j, j)[0];
        if (!(pivot > 0.0)) return false;
        const double inv = 1.0 / std::sqrt(pivot);
        double *cj = at(0, j);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            cj[2 * i] *= inv;
            cj[2 * i + 1] *= inv;
        }
        for (Eigen::Index k = j + 1; k < n; ++k) {
            // column k -= column j * conj(L(k, j))
            const double cr = cj[2 * k], ci = -cj[2 * k + 1];
            double *ck = at(0, k);
            for (Eigen::Index i = k; i < n; ++i) {
                const double xr = cj[2 * i], xi = cj[2 * i + 1];
                ck[2 * i] -= xr * cr - xi * ci;
                ck[2 * i + 1] -= xr * ci + xi * cr;
            }
        }
    }
    return true;
}

/// Tracks the largest operator norm seen. ||S|| < best exactly when
/// best I - S and best I + S are positive definite; the eigen-solve only runs
/// when that test fails. Frobenius and row-sum bounds screen first.
struct SubsetMaximizer {
    double best = 0.0;
    ComplexMatrix work;

    void offer(const ComplexMatrix &sum) {
        if (sum.squaredNorm() <= best * best) return;
        // Column sums equal row sums for Hermitian sums; sqrt(abs2) avoids hypot.
        if (sum.cwiseAbs2().cwiseSqrt().colwise().sum().maxCoeff() <= best) return;
        if (best > 0.0 && shifted_positive_definite(sum, best, -1.0, work) &&
            shifted_positive_definite(sum, best, 1.0, work)) {
            return;
        }
        best = std::max(best, operator_norm(HermitianMatrix(sum)));
    }
};

inline ComplexMatrix subset_sum(const std::vector<ComplexMatrix> &diffs, const std::vector<bool> &in) {
    ComplexMatrix s = ComplexMatrix::Zero(diffs.front().rows(), diffs.front().cols());
    for (std::size_t i = 0; i < diffs.size(); ++i)
        if (in[i]) s += diffs[i];
    return s;
}

/// Singletons, {i : Tr(M_i - N_i) > 0}, and for every basis state k the set
/// {i : (M_i - N_i)(k,k) > 0}, which is optimal when both POVMs are diagonal.
inline void offer_heuristic_subsets(const std::vector<ComplexMatrix> &diffs, SubsetMaximizer &best) {
    const std::size_t n = diffs.size();
    for (const auto &d : diffs) best.offer(d);
    std::vector<bool> in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = diffs[i].trace().real() > 0;
    best.offer(subset_sum(diffs, in));
    const Eigen::Index dim = diffs.front().rows();
    for (Eigen::Index k = 0; k < dim; ++k) {
        for (std::size_t i = 0; i < n; ++i) in[i] = diffs[i](k, k).real() > 0;
        best.offer(subset_sum(diffs, in));
    }
}

}  // namespace detail

/// max over outcome subsets x of ||sum_{i in x} (M_i - N_i)||. A subset and
/// its complement give the same norm, so the last outcome is never included
/// and 2^(n-1) subsets are visited (in Gray-code order).
inline double operational_distance_exact(const Povm &m, const Povm &n) {
    detail::check_same_shape(m, n);
    const std::size_t count = m.size();
    if (count > kMaxExactOutcomes) {
        throw Error(ErrorKind::TooManyOutcomes,
                    std::to_string(count) + " outcomes exceeds the enumeration cap of " +
                        std::to_string(kMaxExactOutcomes),
                    count);
    }
    const auto diffs = detail::effect_differences(m, n);
    detail::SubsetMaximizer best;
    for (const auto &d : diffs) best.offer(d);

    const std::size_t free_bits = count - 1;
    const std::uint64_t total = std::uint64_t{1} << free_bits;
    std::vector<bool> in(count, false);
    ComplexMatrix sum = ComplexMatrix::Zero(diffs.front().rows(), diffs.front().cols());
    for (std::uint64_t step = 1; step < total; ++step) {
        const auto bit = std::size_t(std::countr_zero(step));
        in[bit] = !in[bit];
        if ((step & 0xfff) == 0) {
            sum = detail::subset_sum(diffs, in);
        } else if (in[bit]) {
            sum += diffs[bit];
        } else {
            sum -= diffs[bit];
        }
        best.offer(sum);
    }
    return best.best;
}

/// Lower bound from a seeded sample of subsets: the heuristic subsets, then
/// `num_subsets` states of a random walk that starts from a uniformly random
/// subset and flips one uniformly chosen outcome per step.
inline double operational_distance_lower(const Povm &m, const Povm &n,
                                         std::size_t num_subsets = kDefaultSampledSubsets, Seed seed = {}) {
    detail::check_same_shape(m, n);
    const auto diffs = detail::effect_differences(m, n);
    detail::SubsetMaximizer best;
    detail::offer_heuristic_subsets(diffs, best);

    const std::size_t count = diffs.size();
    Rng rng(seed);
    std::vector<bool> in(count);
    for (std::size_t i = 0; i < count; ++i) in[i] = (rng() >> 63) != 0;
    ComplexMatrix sum = detail::subset_sum(diffs, in);
    for (std::size_t s = 0; s < num_subsets; ++s) {
        if (s > 0) {
            const auto i = std::size_t(rng.below(count));
            in[i] = !in[i];
            if ((s & 0xfff) == 0) {
                sum = detail::subset_sum(diffs, in);
            } else if (in[i]) {
                sum += diffs[i];
            } else {
                sum -= diffs[i];
            }
        }
        best.offer(sum);
    }
    return best.best;
}

/// Distance between two classical readout maps: the worst column TV
/// distance, i.e. the worst computational-basis input state.
inline double classical_operational_distance(const RealMatrix &l1, const RealMatrix &l2) {
    if (l1.rows() != l2.rows() || l1.cols() != l2.cols()) {
        throw Error(ErrorKind::ShapeMismatch, "matrices are " + std::to_string(l1.rows()) + "x" +
                                                  std::to_string(l1.cols()) + " and " + std::to_string(l2.rows()) +
                                                  "x" + std::to_string(l2.cols()));
    }
    double best = 0.0;
    for (Eigen::Index j = 0; j < l1.cols(); ++j) best = std::max(best, 0.5 * (l1.col(j) - l2.col(j)).cwiseAbs().sum());
    return best;
}

inline double classical_operational_distance(const StochasticMatrix &l1, const StochasticMatrix &l2) {
    return classical_operational_distance(l1.matrix(), l2.matrix());
}

/// Column k holds the diagonal (k,k) entries of every effect, i.e. the
/// outcome distribution for basis state |k>.
inline RealMatrix diagonal_response(const Povm &m) {
    RealMatrix r(Eigen::Index(m.size()), Eigen::Index(m.dim()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t k = 0; k < m.dim(); ++k) r(Eigen::Index(i), Eigen::Index(k)) = m[i](k, k).real();
    return r;
}

/// 1 - prod(1 - d_i) for independent per-qubit classical errors.
inline double uncorrelated_product_distance(std::span<const double> per_qubit) {
    double keep = 1.0;
    for (double d : per_qubit) {
        if (!(d >= 0.0 && d <= 1.0)) throw Error(ErrorKind::OutOfRange, "distance " + std::to_string(d));
        keep *= 1.0 - d;
    }
    return 1.0 - keep;
}

/// min(1, sum d_i), valid for tensor products of POVM pairs.
inline double subadditive_upper(std::span<const double> per_factor) {
    double s = 0.0;
    for (double d : per_factor) {
        if (!(d >= 0.0 && d <= 1.0)) throw Error(ErrorKind::OutOfRange, "distance " + std::to_string(d));
        s += d;
    }
    return std::min(1.0, s);
}

/// min(1, 1/2 sum_i ||M_i - N_i||), since |Tr(rho D_i)| <= ||D_i|| for every state.
inline double effectwise_upper(const Povm &m, const Povm &n) {
    detail::check_same_shape(m, n);
    double s = 0.0;
    for (const auto &d : detail::effect_differences(m, n)) s += operator_norm(HermitianMatrix(d));
    return std::min(1.0, 0.5 * s);
}

struct DistanceOptions {
    std::size_t num_subsets = kDefaultSampledSubsets;
    Seed seed{};
};

/// Picks the evaluation path: diagonal pairs use the column closed form,
/// up to 16 outcomes are enumerated, larger pairs get a sampled lower bound
/// and the effectwise upper bound.
inline DistanceBound operational_distance(const Povm &m, const Povm &n, const DistanceOptions &opts = {}) {
    detail::check_same_shape(m, n);
    if (m.is_diagonal() && n.is_diagonal()) {
        return DistanceBound::exact(classical_operational_distance(diagonal_response(m), diagonal_response(n)),
                                    DistanceMethod::classical_closed_form);
    }
    if (m.size() <= kMaxExactOutcomes) return DistanceBound::exact(operational_distance_exact(m, n));
    return DistanceBound::make(operational_distance_lower(m, n, opts.num_subsets, opts.seed), effectwise_upper(m, n),
                               DistanceMethod::combined);
}

/// Distance between tensor(m_factors) and tensor(n_factors). The upper end
/// also uses subadditivity over the factor pairs.
inline DistanceBound product_operational_distance(std::span<const Povm> m_factors, std::span<const Povm> n_factors,
                                                  const DistanceOptions &opts = {}) {
    if (m_factors.size() != n_factors.size() || m_factors.empty()) {
        throw Error(ErrorKind::ShapeMismatch, "factor lists of sizes " + std::to_string(m_factors.size()) + " and " +
                                                  std::to_string(n_factors.size()));
    }
    std::vector<double> per_factor;
    for (std::size_t k = 0; k < m_factors.size(); ++k)
        per_factor.push_back(operational_distance(m_factors[k], n_factors[k], opts).upper);
    const Povm m = tensor(m_factors), n = tensor(n_factors);
    const DistanceBound joint = operational_distance(m, n, opts);
    if (joint.is_exact()) return joint;
    return DistanceBound::make(joint.lower, std::min(joint.upper, subadditive_upper(per_factor)),
                               DistanceMethod::combined);
}

}  // namespace qrem

#endif  // QREM_DISTANCES_HPP
