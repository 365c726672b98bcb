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

#ifndef QREM_SIMULATOR_HPP
#define QREM_SIMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "qrem/distances.hpp"
#include "qrem/error.hpp"
#include "qrem/mitigation.hpp"
#include "qrem/noise_model.hpp"
#include "qrem/povm.hpp"
#include "qrem/random.hpp"
#include "qrem/sampling.hpp"
#include "qrem/stochastic.hpp"

namespace qrem {

struct FractionOptions {
    std::size_t trials = 10000;
    std::uint64_t shots = 8192;
    double pr_err = kDefaultPrErr;
    Seed seed{};
    /// Skip sampling and correct the exact Born probabilities (epsilon = 0).
    bool exact_probabilities = false;
    /// Worker threads; the report does not depend on this.
    std::size_t threads = 1;
    DistanceOptions distance{};
};

struct TvSummary {
    double mean = 0.0;
    double q05 = 0.0;
    double median = 0.0;
    double q95 = 0.0;
};

/// Outcome of the Haar-random success-fraction experiment.
struct FractionReport {
    double f = 0.0;  // successes / trials
    std::size_t successes = 0;
    std::size_t ties = 0;
    bool degenerate = false;  // every trial tied: correction is the identity
    double mean_alpha = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    double norm_1to1 = 0.0;
    double coherent_distance = 0.0;
    DistanceBound dop;  // D_op(noisy, ideal)
    double ratio = 0.0;  // (delta + <alpha>) / (D_op lower + epsilon)
    std::size_t trials = 0;
    std::uint64_t shots = 0;  // 0 in exact-probability mode
    std::size_t bound_violations = 0;  // trials with TV(corrected, ideal) > delta + alpha
    TvSummary corrected_tv;
    TvSummary raw_tv;
};

namespace detail {

struct TrialOutcome {
    double alpha = 0.0;
    double tv_corrected = 0.0;
    double tv_raw = 0.0;
};

inline TvSummary summarize(std::vector<double> v) {
    TvSummary s;
    if (v.empty()) return s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / double(v.size());
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) { return v[std::size_t(std::lround(q * double(v.size() - 1)))]; };
    s.q05 = quantile(0.05);
    s.median = quantile(0.5);
    s.q95 = quantile(0.95);
    return s;
}

}  // namespace detail

/// For each of `trials` Haar-random pure states: Born statistics on the
/// noisy and ideal detectors, N sampled shots, correction with the inverse of
/// the noisy detector's classical part, simplex projection. A trial succeeds
/// when the corrected vector is strictly closer in TV to the ideal
/// statistics than the raw frequencies. Trial t draws from Rng::stream(seed, t).
inline FractionReport fraction_f(const Povm &noisy, const Povm &ideal, const FractionOptions &opts) {
    if (opts.trials < 1) throw Error(ErrorKind::OutOfRange, "need at least one trial");
    if (!opts.exact_probabilities && opts.shots < 1) throw Error(ErrorKind::OutOfRange, "need at least one shot");
    const NoiseDecomposition decomp = classical_part(noisy, ideal, opts.distance);
    const CorrectionMatrix c = correction_matrix(decomp.lambda);

    FractionReport rep;
    rep.trials = opts.trials;
    rep.shots = opts.exact_probabilities ? 0 : opts.shots;
    rep.dop = operational_distance(noisy, ideal, opts.distance);
    rep.epsilon = opts.exact_probabilities ? 0.0 : statistical_epsilon(opts.shots, noisy.size(), opts.pr_err);
    rep.norm_1to1 = c.one_to_one_norm();
    rep.coherent_distance = decomp.coherent_distance;
    rep.delta = delta_bound(rep.norm_1to1, rep.coherent_distance, rep.epsilon);

    std::vector<detail::TrialOutcome> outcomes(opts.trials);
    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            Rng rng = Rng::stream(opts.seed, t);
            const DensityMatrix rho = haar_state(noisy.dim(), rng);
            const ProbabilityVector p_exp = born_probabilities(rho, noisy);
            const ProbabilityVector p_ideal = born_probabilities(rho, ideal);
            const ProbabilityVector freqs =
                opts.exact_probabilities ? p_exp : sample_counts(p_exp, opts.shots, rng).frequencies();
            const SimplexProjection proj = project_to_simplex(correct(freqs, c));
            outcomes[t] = {proj.alpha, tv_distance(proj.projected, p_ideal), tv_distance(freqs, p_ideal)};
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(opts.threads, 1, opts.trials);
    if (workers == 1) {
        run(0, opts.trials);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (opts.trials + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(run, std::min(w * chunk, opts.trials), std::min((w + 1) * chunk, opts.trials));
    }

    double alpha_sum = 0.0;
    std::vector<double> tv_c, tv_r;
    tv_c.reserve(opts.trials);
    tv_r.reserve(opts.trials);
    for (const auto &o : outcomes) {
        alpha_sum += o.alpha;
        if (o.tv_corrected < o.tv_raw) ++rep.successes;
        if (o.tv_corrected == o.tv_raw) ++rep.ties;
        if (o.tv_corrected > rep.delta + o.alpha + 1e-12) ++rep.bound_violations;
        tv_c.push_back(o.tv_corrected);
        tv_r.push_back(o.tv_raw);
    }
    rep.f = double(rep.successes) / double(opts.trials);
    rep.degenerate = rep.ties == opts.trials;
    rep.mean_alpha = alpha_sum / double(opts.trials);
    const double rhs = rep.dop.lower + rep.epsilon;
    rep.ratio = rhs > 0 ? (rep.delta + rep.mean_alpha) / rhs : INFINITY;
    rep.corrected_tv = detail::summarize(std::move(tv_c));
    rep.raw_tv = detail::summarize(std::move(tv_r));
    return rep;
}

struct SweepPoint {
    double z = 0.0;
    FractionReport report;
};

/// fraction_f for the detectors [[1-p, z], [z, q]], [[p, -z], [-z, 1-q]]
/// against the computational-basis measurement, one point per z.
inline std::vector<SweepPoint> coherent_sweep(double p, double q, std::span<const double> z_values,
                                              const FractionOptions &opts) {
    const Povm ideal = projective_computational(1);
    std::vector<SweepPoint> out;
    out.reserve(z_values.size());
    for (double z : z_values) {
        std::optional<Povm> noisy;
        try {
            noisy = coherent_qubit_povm(p, q, z);
        } catch (const Error &e) {
            throw Error(ErrorKind::InvalidPovm, "z = " + std::to_string(z) + ": " + e.what(), std::nullopt, z);
        }
        out.push_back({z, fraction_f(*noisy, ideal, opts)});
    }
    return out;
}

}  // namespace qrem

#endif  // QREM_SIMULATOR_HPP
