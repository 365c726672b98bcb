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

#include "qrem/fixtures.hpp"
#include "qrem/povm.hpp"
#include "qrem/sampling.hpp"
#include "testutil.hpp"

using namespace qrem;

namespace {

Povm q0() { return fixtures::povm("ibm_q0"); }

DensityMatrix basis_state(std::size_t dim, std::size_t k) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index(dim));
    psi(Eigen::Index(k)) = 1.0;
    return DensityMatrix::pure(psi);
}

}  // namespace

TEST(povm_validate, projective_pair_is_valid) {
    const Povm p = Povm::validate({HermitianMatrix::diagonal({1, 0}), HermitianMatrix::diagonal({0, 1})});
    EXPECT_EQ(p.size(), 2u);
    EXPECT_EQ(p.dim(), 2u);
    EXPECT_TRUE(p.is_diagonal());
}

TEST(povm_validate, negative_effect_reports_index_and_eigenvalue) {
    try {
        Povm::validate({HermitianMatrix::diagonal({1.2, 0}), HermitianMatrix::diagonal({-0.2, 1})});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPositive);
        EXPECT_EQ(e.index(), std::optional<std::size_t>(1));
        ASSERT_TRUE(e.value());
        EXPECT_NEAR(*e.value(), -0.2, 1e-12);
    }
}

TEST(povm_validate, incomplete_effects) {
    try {
        Povm::validate({HermitianMatrix::diagonal({0.5, 0}), HermitianMatrix::diagonal({0, 1})});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotComplete);
        ASSERT_TRUE(e.value());
        EXPECT_NEAR(*e.value(), 0.5, 1e-12);
    }
}

TEST(povm_validate, dimension_mismatch) {
    try {
        Povm::validate({HermitianMatrix::identity(2), HermitianMatrix::zero(3)});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(povm_validate, tolerances_at_the_edges) {
    EXPECT_NO_THROW(Povm::validate({HermitianMatrix::diagonal({1 + 5e-10, -5e-10}), HermitianMatrix::diagonal({-5e-10, 1 + 5e-10})}));
    EXPECT_THROW(Povm::validate({HermitianMatrix::diagonal({1 + 5e-9, -5e-9}), HermitianMatrix::diagonal({-5e-9, 1 + 5e-9})}),
                 Error);
}

TEST(povm_validate, appendix_fixtures_are_valid) {
    for (const auto &d : fixtures::all()) {
        ComplexMatrix m1(2, 2);
        m1 << d.m00, d.m01, std::conj(d.m01), d.m11;
        const ComplexMatrix m2 = ComplexMatrix::Identity(2, 2) - m1;
        EXPECT_NO_THROW(Povm::validate(std::vector<ComplexMatrix>{m1, m2})) << d.name;
    }
    EXPECT_EQ(fixtures::names().size(), 10u);
}

TEST(projective_computational, one_and_two_qubits) {
    const Povm p1 = projective_computational(1);
    ASSERT_EQ(p1.size(), 2u);
    EXPECT_EQ(p1[0].matrix(), HermitianMatrix::diagonal({1, 0}).matrix());
    EXPECT_EQ(p1[1].matrix(), HermitianMatrix::diagonal({0, 1}).matrix());
    EXPECT_EQ((p1[0] + p1[1]).matrix(), ComplexMatrix::Identity(2, 2));

    const Povm p2 = projective_computational(2);
    ASSERT_EQ(p2.size(), 4u);
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<double> diag(4, 0.0);
        diag[k] = 1.0;
        EXPECT_EQ(p2[k].matrix(), HermitianMatrix::diagonal(diag).matrix());
    }
}

TEST(tensor, projective_factors_and_flat_index) {
    const Povm p = projective_computational(1);
    const Povm t = tensor(p, p);
    ASSERT_EQ(t.size(), 4u);
    const Povm p2 = projective_computational(2);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(t[i].matrix(), p2[i].matrix());

    const Povm a = q0(), b = fixtures::povm("ibm_q1");
    const Povm ab = tensor(a, b);
    ASSERT_EQ(ab.size(), 4u);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(ab[i * 2 + j].matrix(), kron(a[i], b[j]).matrix());
    EXPECT_NO_THROW(Povm::validate(ab.effects()));
}

TEST(tensor, born_statistics_factor) {
    Rng rng(Seed{21});
    for (int trial = 0; trial < 20; ++trial) {
        const Povm a = testutil::random_povm(2, 3, rng), b = testutil::random_povm(3, 2, rng);
        const DensityMatrix ra = haar_state(2, rng), rb = haar_state(3, rng);
        const auto pa = born_probabilities(ra, a), pb = born_probabilities(rb, b);
        const auto pab = born_probabilities(kron(ra, rb), tensor(a, b));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(pab[i * 2 + j], pa[i] * pb[j], 1e-12);
    }
}

TEST(born_probabilities, examples) {
    const auto p = born_probabilities(basis_state(2, 0), projective_computational(1));
    EXPECT_EQ(p.values(), (std::vector<double>{1, 0}));

    const DensityMatrix mixed(HermitianMatrix::diagonal({0.5, 0.5}));
    const auto pm = born_probabilities(mixed, q0());
    EXPECT_NEAR(pm[0], 0.55, 1e-15);
    EXPECT_NEAR(pm[1], 0.45, 1e-15);

    const auto p1 = born_probabilities(basis_state(2, 1), q0());
    EXPECT_NEAR(p1[0], 0.137, 1e-15);
    EXPECT_NEAR(p1[1], 0.863, 1e-15);

    EXPECT_THROW(born_probabilities(basis_state(4, 0), q0()), Error);
}

TEST(born_probabilities, always_a_probability_vector) {
    Rng rng(Seed{22});
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 2 + rng.below(4);
        const Povm m = testutil::random_povm(d, 2 + rng.below(6), rng);
        const auto p = born_probabilities(haar_state(d, rng), m);
        double s = 0.0;
        for (double x : p.values()) {
            EXPECT_GE(x, -1e-12);
            s += x;
        }
        EXPECT_NEAR(s, 1.0, 1e-10);
    }
}

TEST(density_matrix, rejects_bad_trace_and_negativity) {
    EXPECT_THROW(DensityMatrix(HermitianMatrix::diagonal({0.5, 0.6})), Error);
    EXPECT_THROW(DensityMatrix(HermitianMatrix::diagonal({1.1, -0.1})), Error);
}

TEST(readout_params, projective_and_fixtures) {
    const auto r = readout_params(projective_computational(1));
    EXPECT_EQ(r.n0, 0.5);
    EXPECT_EQ(r.nz, 0.5);
    EXPECT_EQ(r.z_mag, 0.0);
    EXPECT_EQ(r.p, 0.0);
    EXPECT_EQ(r.q, 0.0);

    const auto r0 = readout_params(q0());
    EXPECT_NEAR(r0.p, 0.037, 1e-15);
    EXPECT_NEAR(r0.q, 0.137, 1e-15);
    EXPECT_NEAR(r0.z_mag, 0.004, 1e-15);

    const auto r1 = readout_params(fixtures::povm("ibm_q1"));
    EXPECT_NEAR(r1.z_mag, std::sqrt(0.002 * 0.002 + 0.001 * 0.001), 1e-15);
    EXPECT_THROW(readout_params(projective_computational(2)), Error);
}

TEST(readout_params, reconstruction_and_coefficient_constraint) {
    for (const auto &name : fixtures::names()) {
        const Povm m = fixtures::povm(name);
        const auto r = readout_params(m);
        EXPECT_LE(testutil::abs_max_diff(r.first_effect().matrix(), m[0].matrix()), 1e-12) << name;
        const double s = r.z_mag * r.z_mag + r.nz * r.nz;
        EXPECT_LE(r.n0 * r.n0 - 1.0, s + 1e-9) << name;
        EXPECT_LE(s, r.n0 * r.n0 + 1e-9) << name;
    }
}

TEST(coherent_qubit_povm, psd_limit) {
    EXPECT_NO_THROW(coherent_qubit_povm(0.037, 0.137, 0.17));
    EXPECT_THROW(coherent_qubit_povm(0.037, 0.137, 0.2), Error);
}
