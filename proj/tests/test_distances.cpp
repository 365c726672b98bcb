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

#include <gtest/gtest.h>

#include <cmath>

#include "qrem/distances.hpp"
#include "qrem/fixtures.hpp"
#include "qrem/noise_model.hpp"
#include "qrem/sampling.hpp"
#include "testutil.hpp"

using namespace qrem;

namespace {

/// Every subset (complements included), norms from the library eigensolver.
double brute_force_distance(const Povm &m, const Povm &n) {
    const std::size_t count = m.size();
    const auto d = Eigen::Index(m.dim());
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << count); ++mask) {
        ComplexMatrix s = ComplexMatrix::Zero(d, d);
        for (std::size_t i = 0; i < count; ++i)
            if (mask >> i & 1) s += m[i].matrix() - n[i].matrix();
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s, Eigen::EigenvaluesOnly);
        best = std::max(best, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    return best;
}

/// 2x2 closed form: M_1 - P_1 = [[-p, z], [conj z, q]] has norm
/// ((q - p) + sqrt((p + q)^2 + 4|z|^2)) / 2 when q >= p.
double single_qubit_coherent_distance(double p, double q, double z) {
    const double hi = std::max(p, q), lo = std::min(p, q);
    return 0.5 * ((hi - lo) + std::sqrt((p + q) * (p + q) + 4 * z * z));
}

Povm random_classical_product(std::size_t qubits, Rng &rng, std::vector<double> *per_qubit = nullptr) {
    std::vector<Povm> f;
    for (std::size_t k = 0; k < qubits; ++k) {
        const double p = 0.5 * rng.uniform(), q = 0.5 * rng.uniform();
        f.push_back(testutil::classical_qubit(p, q));
        if (per_qubit) per_qubit->push_back(std::max(p, q));
    }
    return tensor(f);
}

}  // namespace

TEST(tv_distance, examples) {
    EXPECT_EQ(tv_distance(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0);
    EXPECT_EQ(tv_distance(std::vector<double>{0.3, 0.7}, std::vector<double>{0.3, 0.7}), 0.0);
    EXPECT_EQ(tv_distance(std::vector<double>{0.75, 0.25}, std::vector<double>{0.5, 0.5}), 0.25);
    EXPECT_NEAR(tv_distance(std::vector<double>{1.2, -0.2}, std::vector<double>{1, 0}), 0.2, 1e-15);
    try {
        tv_distance(std::vector<double>{1}, std::vector<double>{0.5, 0.5});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
    }
}

TEST(distance_bound, invariants) {
    const auto b = DistanceBound::make(0.2, 0.3, DistanceMethod::combined);
    EXPECT_FALSE(b.is_exact());
    EXPECT_TRUE(DistanceBound::exact(0.4).is_exact());
    EXPECT_THROW(DistanceBound::make(0.4, 0.3, DistanceMethod::combined), Error);
    EXPECT_EQ(DistanceBound::make(-1e-17, 1 + 1e-15, DistanceMethod::combined).upper, 1.0);
    for (auto m : {DistanceMethod::exact, DistanceMethod::sampled_lower, DistanceMethod::subadditive_upper,
                   DistanceMethod::classical_closed_form, DistanceMethod::combined})
        EXPECT_EQ(distance_method_from_string(to_string(m)), m);
    EXPECT_THROW(distance_method_from_string("nope"), Error);
}

TEST(operational_distance_exact, examples) {
    const Povm q0 = fixtures::povm("ibm_q0");
    EXPECT_EQ(operational_distance_exact(q0, q0), 0.0);
    EXPECT_NEAR(operational_distance_exact(testutil::classical_qubit(0.1, 0.2), projective_computational(1)), 0.2,
                1e-15);
    const Povm c = testutil::classical_qubit(0.1, 0.1);
    EXPECT_NEAR(operational_distance_exact(tensor(c, c), projective_computational(2)), 0.19, 1e-15);
}

TEST(operational_distance_exact, enumeration_cap) {
    const Povm p = projective_computational(4);
    EXPECT_NO_THROW(operational_distance_exact(p, p));
    try {
        const Povm big = tensor(p, projective_computational(1));
        operational_distance_exact(big, big);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooManyOutcomes);
        EXPECT_EQ(e.index(), std::optional<std::size_t>(32));
    }
    EXPECT_THROW(operational_distance_exact(p, projective_computational(1)), Error);
}

TEST(operational_distance_exact, matches_brute_force_on_random_pairs) {
    Rng rng(Seed{41});
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t d = 2 + rng.below(3), n = 2 + rng.below(7);
        const Povm a = testutil::random_povm(d, n, rng), b = testutil::random_povm(d, n, rng);
        EXPECT_NEAR(operational_distance_exact(a, b), brute_force_distance(a, b), 1e-10) << "d=" << d << " n=" << n;
    }
}

TEST(operational_distance_exact, single_qubit_closed_form) {
    Rng rng(Seed{42});
    const Povm p = projective_computational(1);
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = 0.5 * rng.uniform(), b = 0.5 * rng.uniform();
        EXPECT_NEAR(operational_distance_exact(testutil::classical_qubit(a, b), p), std::max(a, b), 1e-12);
    }
}

TEST(operational_distance_exact, appendix_fixtures_closed_form) {
    const Povm p = projective_computational(1);
    for (const auto &name : fixtures::names()) {
        const Povm m = fixtures::povm(name);
        const auto r = readout_params(m);
        EXPECT_NEAR(operational_distance_exact(m, p), single_qubit_coherent_distance(r.p, r.q, r.z_mag), 1e-12)
            << name;
    }
    // The diagonal part alone gives max{p, q}; the coherent part adds under 1e-3 for q0.
    EXPECT_NEAR(operational_distance_exact(fixtures::povm("ibm_q0"), p), 0.137, 1e-3);
}

TEST(operational_distance_exact, symmetric_and_triangle) {
    Rng rng(Seed{43});
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 2 + rng.below(2), n = 2 + rng.below(5);
        const Povm a = testutil::random_povm(d, n, rng), b = testutil::random_povm(d, n, rng),
                   c = testutil::random_povm(d, n, rng);
        const double ab = operational_distance_exact(a, b), ba = operational_distance_exact(b, a);
        EXPECT_NEAR(ab, ba, 1e-12);
        EXPECT_LE(ab, operational_distance_exact(a, c) + operational_distance_exact(c, b) + 1e-10);
    }
}

TEST(operational_distance_exact, diagonal_pairs_reduce_to_basis_states) {
    Rng rng(Seed{44});
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t qubits = 1 + rng.below(2), d = std::size_t{1} << qubits;
        const Povm ideal = projective_computational(qubits);
        const Povm a = apply_lambda(testutil::random_stochastic(d, rng, 0.5), ideal);
        const Povm b = apply_lambda(testutil::random_stochastic(d, rng, 0.5), ideal);
        double best = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index(d));
            psi(Eigen::Index(k)) = 1.0;
            const auto rho = DensityMatrix::pure(psi);
            best = std::max(best, tv_distance(born_probabilities(rho, a), born_probabilities(rho, b)));
        }
        EXPECT_NEAR(operational_distance_exact(a, b), best, 1e-12);
        EXPECT_NEAR(classical_operational_distance(diagonal_response(a), diagonal_response(b)), best, 1e-12);
    }
}

TEST(operational_distance_exact, product_formula) {
    Rng rng(Seed{45});
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t qubits = 2 + rng.below(2);
        std::vector<double> per;
        const Povm m = random_classical_product(qubits, rng, &per);
        EXPECT_NEAR(operational_distance_exact(m, projective_computational(qubits)),
                    uncorrelated_product_distance(per), 1e-10);
    }
}

TEST(operational_distance_exact, never_below_sampled_states) {
    // Any state's TV distance is a lower bound on the worst case.
    Rng rng(Seed{46});
    const Povm a = testutil::random_povm(3, 4, rng), b = testutil::random_povm(3, 4, rng);
    const double dop = operational_distance_exact(a, b);
    for (int trial = 0; trial < 500; ++trial) {
        const auto rho = haar_state(3, rng);
        EXPECT_LE(tv_distance(born_probabilities(rho, a), born_probabilities(rho, b)), dop + 1e-12);
    }
}

TEST(operational_distance_lower, examples) {
    const Povm q0 = fixtures::povm("ibm_q0");
    EXPECT_EQ(operational_distance_lower(q0, q0, 100, Seed{1}), 0.0);
    Rng rng(Seed{47});
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 2 + rng.below(3), n = 2 + rng.below(15);
        const Povm a = testutil::random_povm(d, n, rng), b = testutil::random_povm(d, n, rng);
        const double lower = operational_distance_lower(a, b, 256, Seed{std::uint64_t(trial)});
        EXPECT_LE(lower, operational_distance_exact(a, b) + 1e-12);
    }
}

TEST(operational_distance_lower, deterministic_per_seed) {
    Rng rng(Seed{48});
    const Povm a = testutil::random_povm(4, 12, rng), b = testutil::random_povm(4, 12, rng);
    EXPECT_EQ(operational_distance_lower(a, b, 1000, Seed{5}), operational_distance_lower(a, b, 1000, Seed{5}));
}

TEST(operational_distance_lower, five_qubit_classical_product) {
    Rng rng(Seed{49});
    std::vector<double> per;
    const Povm m = random_classical_product(5, rng, &per);
    const double closed = uncorrelated_product_distance(per);
    const double lower = operational_distance_lower(m, projective_computational(5), kDefaultSampledSubsets, Seed{0});
    EXPECT_LE(lower, closed + 1e-12);
    EXPECT_GE(lower, 0.95 * closed);
}

TEST(classical_operational_distance, examples) {
    const auto lam = single_qubit_lambda(0.1, 0.2);
    EXPECT_EQ(classical_operational_distance(lam, lam), 0.0);
    EXPECT_NEAR(classical_operational_distance(lam, StochasticMatrix::identity(2)), 0.2, 1e-15);
    EXPECT_NEAR(classical_operational_distance(single_qubit_lambda(0.037, 0.137), StochasticMatrix::identity(2)),
                0.137, 1e-15);
    EXPECT_NEAR(classical_operational_distance(lam, StochasticMatrix::identity(2)),
                operational_distance_exact(apply_lambda(lam, projective_computational(1)), projective_computational(1)),
                1e-15);
    try {
        classical_operational_distance(RealMatrix::Identity(2, 2), RealMatrix::Identity(3, 3));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
    }
}

TEST(uncorrelated_product_distance, examples) {
    EXPECT_NEAR(uncorrelated_product_distance(std::vector<double>{0.1, 0.1}), 0.19, 1e-15);
    EXPECT_EQ(uncorrelated_product_distance(std::vector<double>{}), 0.0);
    EXPECT_THROW(uncorrelated_product_distance(std::vector<double>{1.2}), Error);
    EXPECT_EQ(subadditive_upper(std::vector<double>{0.6, 0.7}), 1.0);
    EXPECT_THROW(subadditive_upper(std::vector<double>{-0.1}), Error);
}

TEST(operational_distance, routes_by_shape) {
    const Povm p1 = projective_computational(1);
    EXPECT_EQ(operational_distance(testutil::classical_qubit(0.1, 0.2), p1).method,
              DistanceMethod::classical_closed_form);
    const auto q0 = operational_distance(fixtures::povm("ibm_q0"), p1);
    EXPECT_EQ(q0.method, DistanceMethod::exact);
    EXPECT_TRUE(q0.is_exact());

    std::vector<Povm> f, id;
    for (const auto &name : {"ibm_q0", "ibm_q1", "ibm_q2", "ibm_q3", "ibm_q4"}) {
        f.push_back(fixtures::povm(name));
        id.push_back(p1);
    }
    const auto five = product_operational_distance(f, id, {4096, Seed{0}});
    EXPECT_EQ(five.method, DistanceMethod::combined);
    EXPECT_LT(five.lower, five.upper);
    double closed_lower = 0.0;
    std::vector<double> per;
    for (const auto &m : f) per.push_back(operational_distance_exact(m, p1));
    closed_lower = uncorrelated_product_distance(per);
    // The diagonal part's closed form is attained by a basis state, so the
    // heuristic subsets should land near it.
    EXPECT_NEAR(five.lower, closed_lower, 0.01);
    EXPECT_LE(five.upper, subadditive_upper(per) + 1e-12);
}

TEST(product_operational_distance, lower_exact_subadditive) {
    Rng rng(Seed{50});
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Povm> a, b;
        std::vector<double> per;
        std::size_t outcomes = 1;
        while (a.empty() || outcomes * 2 <= 16) {
            const std::size_t n = 2;
            a.push_back(testutil::random_povm(2, n, rng));
            b.push_back(testutil::random_povm(2, n, rng));
            per.push_back(operational_distance_exact(a.back(), b.back()));
            outcomes *= n;
            if (rng.below(3) == 0) break;
        }
        const Povm ma = tensor(a), mb = tensor(b);
        const double exact = operational_distance_exact(ma, mb);
        EXPECT_LE(operational_distance_lower(ma, mb, 512, Seed{std::uint64_t(trial)}), exact + 1e-12);
        EXPECT_LE(exact, subadditive_upper(per) + 1e-12);
        EXPECT_GE(effectwise_upper(ma, mb), exact - 1e-12);
    }
}
