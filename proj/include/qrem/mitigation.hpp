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

#ifndef QREM_MITIGATION_HPP
#define QREM_MITIGATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrem/counts.hpp"
#include "qrem/distances.hpp"
#include "qrem/error.hpp"
#include "qrem/povm.hpp"
#include "qrem/stochastic.hpp"

namespace qrem {

inline constexpr double kRawSumTol = 1e-8;
inline constexpr double kProjectionSumTol = 1e-6;
inline constexpr double kDefaultPrErr = 0.01;

/// Lambda^{-1} applied to a frequency vector: sums to one, may be negative.
class RawCorrected {
   public:
    explicit RawCorrected(std::vector<double> v) : v_(std::move(v)) {
        double s = 0.0;
        for (double x : v_) s += x;
        if (!std::isfinite(s) || std::abs(s - 1.0) > kRawSumTol) {
            throw Error(ErrorKind::SumViolation, "corrected entries sum to " + std::to_string(s), std::nullopt, s);
        }
    }

    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }
    const std::vector<double> &values() const { return v_; }
    std::span<const double> span() const { return v_; }

    bool is_physical() const {
        return std::all_of(v_.begin(), v_.end(), [](double x) { return x >= -kProbabilityNegTol; });
    }

   private:
    std::vector<double> v_;
};

inline RawCorrected correct(const ProbabilityVector &freqs, const CorrectionMatrix &c) {
    if (freqs.size() != c.size()) {
        throw Error(ErrorKind::LengthMismatch, "frequencies have " + std::to_string(freqs.size()) +
                                                   " entries, correction matrix is " + std::to_string(c.size()) +
                                                   "x" + std::to_string(c.size()));
    }
    const Eigen::Map<const Eigen::VectorXd> f(freqs.values().data(), Eigen::Index(freqs.size()));
    const Eigen::VectorXd r = c.matrix() * f;
    return RawCorrected(std::vector<double>(r.data(), r.data() + r.size()));
}

struct SimplexProjection {
    ProbabilityVector projected;
    double alpha = 0.0;  // half the l1 distance moved
};

/// Euclidean projection onto the probability simplex by sort and threshold.
/// Input must sum to one within 1e-6. Inputs that already satisfy the
/// ProbabilityVector invariants are returned unchanged with alpha = 0.
inline SimplexProjection project_to_simplex(std::span<const double> v) {
    if (v.empty()) throw Error(ErrorKind::LengthMismatch, "empty vector");
    double sum = 0.0;
    for (double x : v) sum += x;
    if (!std::isfinite(sum) || std::abs(sum - 1.0) > kProjectionSumTol) {
        throw Error(ErrorKind::SumViolation, "entries sum to " + std::to_string(sum), std::nullopt, sum);
    }
    const bool valid = std::all_of(v.begin(), v.end(), [](double x) { return x >= -kProbabilityNegTol; });
    if (valid && std::abs(sum - 1.0) <= kProbabilitySumTol) {
        return {ProbabilityVector(std::vector<double>(v.begin(), v.end())), 0.0};
    }

    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double running = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        running += u[k];
        const double t = (running - 1.0) / double(k + 1);
        if (u[k] - t > 0.0) theta = t;
    }
    std::vector<double> w(v.size());
    double moved = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = std::max(v[i] - theta, 0.0);
        moved += std::abs(w[i] - v[i]);
    }
    return {ProbabilityVector(std::move(w)), 0.5 * moved};
}

inline SimplexProjection project_to_simplex(const RawCorrected &v) { return project_to_simplex(v.span()); }

/// TV radius that N samples of an n-outcome distribution stay within with
/// probability at least 1 - pr_err:
/// sqrt((ln(2^n - 2) - ln pr_err) / (2N)).
inline double statistical_epsilon(std::uint64_t shots, std::size_t outcomes, double pr_err) {
    if (shots < 1) throw Error(ErrorKind::OutOfRange, "shots must be at least 1");
    if (outcomes < 2) throw Error(ErrorKind::OutOfRange, "need at least 2 outcomes, got " + std::to_string(outcomes));
    if (!(pr_err > 0.0 && pr_err < 1.0)) {
        throw Error(ErrorKind::OutOfRange, "pr_err must lie in (0,1), got " + std::to_string(pr_err));
    }
    // ln(2^n - 2) without forming 2^n.
    const double n = double(outcomes);
    const double log_count = n * std::numbers::ln2 + std::log1p(-std::exp2(1.0 - n));
    return std::sqrt((log_count - std::log(pr_err)) / (2.0 * double(shots)));
}

/// ||Lambda^{-1}||_{1->1} (epsilon + D_op(M, Lambda P)).
inline double delta_bound(double norm_1to1, double coherent_distance, double epsilon) {
    if (!(norm_1to1 >= 0.0) || !(coherent_distance >= 0.0) || !(epsilon >= 0.0)) {
        throw Error(ErrorKind::OutOfRange, "delta_bound inputs must be nonnegative");
    }
    return norm_1to1 * (epsilon + coherent_distance);
}

struct ErrorBudget {
    double epsilon = 0.0;
    double norm_1to1 = 0.0;
    double coherent_distance = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    double total = 0.0;  // delta + alpha
    std::uint64_t shots = 0;  // 0 when exact probabilities were corrected
    double pr_err = kDefaultPrErr;
};

struct Verdict {
    double rhs_bound = 0.0;  // D_op(M, ideal) lower end + epsilon
    bool successful = false;
};

/// Success iff delta + alpha < D_op(M, ideal) + epsilon, using the lower
/// end of the distance bound. Ties fail.
inline Verdict assess(const ErrorBudget &budget, const DistanceBound &dop_bound) {
    const double rhs = dop_bound.lower + budget.epsilon;
    return {rhs, budget.total < rhs};
}

struct MitigationContext {
    double coherent_distance = 0.0;
    DistanceBound dop_bound;
    double pr_err = kDefaultPrErr;
};

struct MitigationReport {
    ProbabilityVector frequencies;
    RawCorrected raw_corrected;
    ProbabilityVector corrected;
    ErrorBudget budget;
    double rhs_bound = 0.0;
    bool successful = false;
    bool projection_applied = false;
};

/// Correct, project, budget, assess. `shots` empty means the frequencies
/// are exact probabilities and epsilon = 0.
inline MitigationReport mitigate(const ProbabilityVector &freqs, std::optional<std::uint64_t> shots,
                                 const CorrectionMatrix &c, const MitigationContext &ctx) {
    RawCorrected raw = correct(freqs, c);
    SimplexProjection proj = project_to_simplex(raw);
    const bool projected = proj.alpha > 0.0 || !raw.is_physical();

    ErrorBudget b;
    b.pr_err = ctx.pr_err;
    b.shots = shots.value_or(0);
    b.epsilon = shots ? statistical_epsilon(*shots, freqs.size(), ctx.pr_err) : 0.0;
    b.norm_1to1 = c.one_to_one_norm();
    b.coherent_distance = ctx.coherent_distance;
    b.delta = delta_bound(b.norm_1to1, b.coherent_distance, b.epsilon);
    b.alpha = proj.alpha;
    b.total = b.delta + b.alpha;
    const Verdict v = assess(b, ctx.dop_bound);
    return MitigationReport{freqs, std::move(raw), std::move(proj.projected), b, v.rhs_bound, v.successful, projected};
}

inline MitigationReport mitigate(const CountsVector &counts, const CorrectionMatrix &c, const MitigationContext &ctx) {
    return mitigate(counts.frequencies(), counts.shots(), c, ctx);
}

}  // namespace qrem

#endif  // QREM_MITIGATION_HPP
