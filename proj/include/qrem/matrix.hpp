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

#ifndef QREM_MATRIX_HPP
#define QREM_MATRIX_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qrem/error.hpp"

namespace qrem {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Absolute tolerance for A = A^dagger, entrywise.
inline constexpr double kHermitianTol = 1e-10;

/// Off-diagonal Frobenius norm at which the Jacobi sweeps stop.
inline constexpr double kJacobiTol = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;

inline double max_hermitian_deviation(const ComplexMatrix &a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Square, finite, self-adjoint matrix. Inputs that are Hermitian within
/// kHermitianTol are symmetrized to (A + A^dagger)/2 on construction.
class HermitianMatrix {
   public:
    HermitianMatrix() = default;

    explicit HermitianMatrix(ComplexMatrix a) {
        if (a.rows() != a.cols()) {
            throw Error(ErrorKind::DimensionMismatch,
                        "matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ", not square");
        }
        if (a.size() == 0) {
            throw Error(ErrorKind::DimensionMismatch, "matrix has dimension 0");
        }
        if (!a.allFinite()) {
            throw Error(ErrorKind::NonHermitian, "matrix has non-finite entries");
        }
        double dev = max_hermitian_deviation(a);
        if (dev > kHermitianTol) {
            throw Error(ErrorKind::NonHermitian, "max |A - A^dagger| = " + std::to_string(dev), std::nullopt, dev);
        }
        m_ = (a + a.adjoint()) * 0.5;
    }

    static HermitianMatrix identity(std::size_t dim) {
        return HermitianMatrix(ComplexMatrix::Identity(Eigen::Index(dim), Eigen::Index(dim)));
    }
    static HermitianMatrix zero(std::size_t dim) {
        return HermitianMatrix(ComplexMatrix::Zero(Eigen::Index(dim), Eigen::Index(dim)));
    }
    static HermitianMatrix diagonal(const std::vector<double> &diag) {
        ComplexMatrix m = ComplexMatrix::Zero(Eigen::Index(diag.size()), Eigen::Index(diag.size()));
        for (std::size_t i = 0; i < diag.size(); ++i) m(Eigen::Index(i), Eigen::Index(i)) = diag[i];
        return HermitianMatrix(std::move(m));
    }

    std::size_t dim() const { return std::size_t(m_.rows()); }
    const ComplexMatrix &matrix() const { return m_; }
    Complex operator()(std::size_t i, std::size_t j) const { return m_(Eigen::Index(i), Eigen::Index(j)); }

    double trace() const { return m_.trace().real(); }

    bool is_diagonal(double tol = 1e-12) const {
        for (Eigen::Index j = 0; j < m_.cols(); ++j)
            for (Eigen::Index i = 0; i < m_.rows(); ++i)
                if (i != j && std::abs(m_(i, j)) >= tol) return false;
        return true;
    }

    friend HermitianMatrix operator+(const HermitianMatrix &a, const HermitianMatrix &b) {
        return HermitianMatrix(a.m_ + b.m_);
    }
    friend HermitianMatrix operator-(const HermitianMatrix &a, const HermitianMatrix &b) {
        return HermitianMatrix(a.m_ - b.m_);
    }
    friend HermitianMatrix operator*(double s, const HermitianMatrix &a) { return HermitianMatrix(s * a.m_); }

   private:
    ComplexMatrix m_;
};

struct HermitianEigen {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k belongs to values[k]
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix &a) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

/// Cyclic complex Jacobi. Each rotation zeroes A(p,q) with
/// U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on the (p,q) plane, where
/// phi = arg A(p,q). The phase makes the pivot real so the real rotation
/// angle formula applies.
inline HermitianEigen hermitian_eigen(const HermitianMatrix &h) {
    const Eigen::Index n = Eigen::Index(h.dim());
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::Identity(n, n);
    const double scale = std::max(1.0, a.norm());

    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (detail::off_diagonal_norm(a) <= kJacobiTol * scale) break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const Complex phase = std::conj(apq) / mag;  // e^{-i phi}
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const Complex upp = c, upq = s, uqp = -s * phase, uqq = c * phase;
                // A <- A U
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * upp + akq * uqp;
                    a(k, q) = akp * upq + akq * uqq;
                }
                // A <- U^dagger A
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
                    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * upp + vkq * uqp;
                    v(k, q) = vkp * upq + vkq * uqq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[std::size_t(i)] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigen out;
    out.values.reserve(std::size_t(n));
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values.push_back(a(order[std::size_t(k)], order[std::size_t(k)]).real());
        out.vectors.col(k) = v.col(order[std::size_t(k)]);
    }
    return out;
}

inline std::vector<double> hermitian_eigenvalues(const HermitianMatrix &h) {
    if (h.is_diagonal(0.0)) {
        std::vector<double> d(h.dim());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = h(i, i).real();
        std::sort(d.begin(), d.end());
        return d;
    }
    return hermitian_eigen(h).values;
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix &a) { return hermitian_eigenvalues(HermitianMatrix(a)); }

/// Largest |eigenvalue|.
inline double operator_norm(const HermitianMatrix &h) {
    const auto ev = hermitian_eigenvalues(h);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

inline double operator_norm(const ComplexMatrix &a) { return operator_norm(HermitianMatrix(a)); }

/// V f(D) V^dagger.
inline HermitianMatrix apply_function(const HermitianMatrix &h, const std::function<double(double)> &f) {
    const auto eig = hermitian_eigen(h);
    Eigen::VectorXcd d(Eigen::Index(eig.values.size()));
    for (std::size_t k = 0; k < eig.values.size(); ++k) d(Eigen::Index(k)) = f(eig.values[k]);
    ComplexMatrix out = eig.vectors * d.asDiagonal() * eig.vectors.adjoint();
    return HermitianMatrix((out + out.adjoint()) * 0.5);
}

inline Complex trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "trace_product of " + std::to_string(a.rows()) + "x" +
                                                      std::to_string(a.cols()) + " and " + std::to_string(b.rows()) +
                                                      "x" + std::to_string(b.cols()));
    }
    // Tr(AB) = sum_ij A_ij B_ji
    return (a.array() * b.transpose().array()).sum();
}

inline Complex trace_product(const HermitianMatrix &a, const HermitianMatrix &b) {
    return trace_product(a.matrix(), b.matrix());
}

/// Kronecker product; block (i, j) of the result is A(i, j) * B.
template <typename Derived1, typename Derived2>
auto kron(const Eigen::MatrixBase<Derived1> &a, const Eigen::MatrixBase<Derived2> &b) {
    using Scalar = typename Derived1::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline HermitianMatrix kron(const HermitianMatrix &a, const HermitianMatrix &b) {
    return HermitianMatrix(kron(a.matrix(), b.matrix()));
}

namespace pauli {

inline HermitianMatrix identity() { return HermitianMatrix::identity(2); }

inline HermitianMatrix x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return HermitianMatrix(m);
}

inline HermitianMatrix y() {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return HermitianMatrix(m);
}

inline HermitianMatrix z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return HermitianMatrix(m);
}

}  // namespace pauli

}  // namespace qrem

#endif  // QREM_MATRIX_HPP
