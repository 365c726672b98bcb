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

#ifndef QREM_POVM_HPP
#define QREM_POVM_HPP

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrem/error.hpp"
#include "qrem/matrix.hpp"

namespace qrem {

/// Minimum eigenvalue accepted as positive semidefinite.
inline constexpr double kPsdTol = 1e-9;
/// Operator-norm deviation of sum(effects) from identity.
inline constexpr double kCompletenessTol = 1e-9;
inline constexpr double kProbabilityNegTol = 1e-12;
inline constexpr double kProbabilitySumTol = 1e-10;

/// Nonnegative entries summing to one.
class ProbabilityVector {
   public:
    ProbabilityVector() = default;

    explicit ProbabilityVector(std::vector<double> entries) : p_(std::move(entries)) {
        if (p_.empty()) throw Error(ErrorKind::LengthMismatch, "empty probability vector");
        double sum = 0.0;
        for (std::size_t i = 0; i < p_.size(); ++i) {
            if (!std::isfinite(p_[i]) || p_[i] < -kProbabilityNegTol) {
                throw Error(ErrorKind::OutOfRange, "entry " + std::to_string(i) + " = " + std::to_string(p_[i]), i,
                            p_[i]);
            }
            sum += p_[i];
        }
        if (std::abs(sum - 1.0) > kProbabilitySumTol) {
            throw Error(ErrorKind::SumViolation, "entries sum to " + std::to_string(sum), std::nullopt, sum);
        }
    }

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double> &values() const { return p_; }
    std::span<const double> span() const { return p_; }

    friend bool operator==(const ProbabilityVector &, const ProbabilityVector &) = default;

   private:
    std::vector<double> p_;
};

/// Positive semidefinite, unit trace.
class DensityMatrix {
   public:
    explicit DensityMatrix(HermitianMatrix rho) : rho_(std::move(rho)) {
        const double tr = rho_.trace();
        if (std::abs(tr - 1.0) > 1e-10) {
            throw Error(ErrorKind::OutOfRange, "density matrix trace " + std::to_string(tr), std::nullopt, tr);
        }
        const double min_ev = hermitian_eigenvalues(rho_).front();
        if (min_ev < -kPsdTol) {
            throw Error(ErrorKind::NotPositive, "density matrix min eigenvalue " + std::to_string(min_ev),
                        std::nullopt, min_ev);
        }
    }

    /// |psi><psi| for a unit vector psi.
    static DensityMatrix pure(const Eigen::VectorXcd &psi) {
        ComplexMatrix m = psi * psi.adjoint();
        return DensityMatrix(HermitianMatrix((m + m.adjoint()) * 0.5));
    }

    std::size_t dim() const { return rho_.dim(); }
    const HermitianMatrix &matrix() const { return rho_; }

   private:
    HermitianMatrix rho_;
};

inline DensityMatrix kron(const DensityMatrix &a, const DensityMatrix &b) {
    return DensityMatrix(kron(a.matrix(), b.matrix()));
}

/// Ordered list of effects: each PSD, summing to the identity.
class Povm {
   public:
    static Povm validate(std::vector<HermitianMatrix> effects) {
        if (effects.empty()) throw Error(ErrorKind::DimensionMismatch, "POVM has no effects");
        const std::size_t d = effects.front().dim();
        for (std::size_t i = 0; i < effects.size(); ++i) {
            if (effects[i].dim() != d) {
                throw Error(ErrorKind::DimensionMismatch,
                            "effect " + std::to_string(i) + " has dim " + std::to_string(effects[i].dim()) +
                                ", expected " + std::to_string(d),
                            i);
            }
        }
        std::string problems;
        std::optional<Error> first;
        for (std::size_t i = 0; i < effects.size(); ++i) {
            const double min_ev = hermitian_eigenvalues(effects[i]).front();
            if (min_ev < -kPsdTol) {
                std::string msg = "effect " + std::to_string(i) + " min eigenvalue " + std::to_string(min_ev);
                if (!first) first.emplace(ErrorKind::NotPositive, msg, i, min_ev);
                problems += (problems.empty() ? "" : "; ") + msg;
            }
        }
        ComplexMatrix sum = ComplexMatrix::Zero(Eigen::Index(d), Eigen::Index(d));
        for (const auto &e : effects) sum += e.matrix();
        const double dev = operator_norm(HermitianMatrix(sum - ComplexMatrix::Identity(Eigen::Index(d), Eigen::Index(d))));
        if (dev > kCompletenessTol) {
            std::string msg = "effects sum deviates from identity by " + std::to_string(dev);
            if (!first) first.emplace(ErrorKind::NotComplete, msg, std::nullopt, dev);
            problems += (problems.empty() ? "" : "; ") + msg;
        }
        if (first) throw Error(first->kind(), problems, first->index(), first->value());
        return Povm(std::move(effects));
    }

    static Povm validate(const std::vector<ComplexMatrix> &effects) {
        std::vector<HermitianMatrix> h;
        h.reserve(effects.size());
        for (const auto &e : effects) h.emplace_back(e);
        return validate(std::move(h));
    }

    std::size_t dim() const { return effects_.front().dim(); }
    std::size_t size() const { return effects_.size(); }
    const HermitianMatrix &operator[](std::size_t i) const { return effects_[i]; }
    const std::vector<HermitianMatrix> &effects() const { return effects_; }

    bool is_diagonal(double tol = 1e-12) const {
        for (const auto &e : effects_)
            if (!e.is_diagonal(tol)) return false;
        return true;
    }

   private:
    explicit Povm(std::vector<HermitianMatrix> effects) : effects_(std::move(effects)) {}
    std::vector<HermitianMatrix> effects_;
};

inline Povm validate(std::vector<HermitianMatrix> effects) { return Povm::validate(std::move(effects)); }

/// Rank-1 projectors onto |b> for b = 0 .. 2^K - 1; qubit 0 is the most
/// significant bit of b.
inline Povm projective_computational(std::size_t qubits) {
    if (qubits == 0) throw Error(ErrorKind::OutOfRange, "qubit count must be at least 1");
    const std::size_t d = std::size_t{1} << qubits;
    std::vector<HermitianMatrix> effects;
    effects.reserve(d);
    for (std::size_t b = 0; b < d; ++b) {
        std::vector<double> diag(d, 0.0);
        diag[b] = 1.0;
        effects.push_back(HermitianMatrix::diagonal(diag));
    }
    return Povm::validate(std::move(effects));
}

/// Effect (i, j) = A_i (x) B_j at flat index i * |B| + j.
inline Povm tensor(const Povm &a, const Povm &b) {
    std::vector<HermitianMatrix> effects;
    effects.reserve(a.size() * b.size());
    for (const auto &ea : a.effects())
        for (const auto &eb : b.effects()) effects.push_back(kron(ea, eb));
    return Povm::validate(std::move(effects));
}

inline Povm tensor(std::span<const Povm> factors) {
    if (factors.empty()) throw Error(ErrorKind::DimensionMismatch, "tensor of an empty list");
    Povm out = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) out = tensor(out, factors[k]);
    return out;
}

/// Tr(rho M_i) for every effect. Negative roundoff (bounded by the PSD
/// tolerance for valid inputs) is clamped to zero and the result renormalized.
inline ProbabilityVector born_probabilities(const DensityMatrix &rho, const Povm &m) {
    if (rho.dim() != m.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "state dim " + std::to_string(rho.dim()) + " vs POVM dim " + std::to_string(m.dim()));
    }
    std::vector<double> p(m.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        p[i] = std::max(0.0, trace_product(rho.matrix(), m[i]).real());
        sum += p[i];
    }
    for (auto &x : p) x /= sum;
    return ProbabilityVector(std::move(p));
}

/// Single-qubit two-outcome detector in the form M_1 = sum_k n_k sigma_k.
struct ReadoutParams {
    double n0 = 0, nx = 0, ny = 0, nz = 0;
    double z_mag = 0;  // sqrt(nx^2 + ny^2), the off-diagonal magnitude |M_1(0,1)|
    double p = 0;      // 1 - M_1(0,0), probability of reading 1 given 0
    double q = 0;      // M_1(1,1), probability of reading 0 given 1

    HermitianMatrix first_effect() const {
        return HermitianMatrix(n0 * pauli::identity().matrix() + nx * pauli::x().matrix() +
                               ny * pauli::y().matrix() + nz * pauli::z().matrix());
    }
};

inline ReadoutParams readout_params(const Povm &m) {
    if (m.dim() != 2 || m.size() != 2) {
        throw Error(ErrorKind::DimensionMismatch, "readout_params needs a two-outcome qubit POVM, got dim " +
                                                      std::to_string(m.dim()) + " with " +
                                                      std::to_string(m.size()) + " effects");
    }
    const auto &m1 = m[0];
    ReadoutParams r;
    r.n0 = trace_product(m1, pauli::identity()).real() / 2.0;
    r.nx = trace_product(m1, pauli::x()).real() / 2.0;
    r.ny = trace_product(m1, pauli::y()).real() / 2.0;
    r.nz = trace_product(m1, pauli::z()).real() / 2.0;
    r.z_mag = std::hypot(r.nx, r.ny);
    r.p = 1.0 - m1(0, 0).real();
    r.q = m1(1, 1).real();
    return r;
}

/// Effects [[1-p, z], [conj z, q]] and [[p, -z], [-conj z, 1-q]].
inline Povm coherent_qubit_povm(double p, double q, Complex z) {
    ComplexMatrix m1(2, 2), m2(2, 2);
    m1 << 1.0 - p, z, std::conj(z), q;
    m2 << p, -z, -std::conj(z), 1.0 - q;
    return Povm::validate(std::vector<ComplexMatrix>{m1, m2});
}

}  // namespace qrem

#endif  // QREM_POVM_HPP
