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

#ifndef QREM_TOMOGRAPHY_HPP
#define QREM_TOMOGRAPHY_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrem/counts.hpp"
#include "qrem/error.hpp"
#include "qrem/matrix.hpp"
#include "qrem/povm.hpp"
#include "qrem/random.hpp"
#include "qrem/sampling.hpp"

namespace qrem {

// Single-qubit Pauli eigenstate labels: axis letter then sign.
// A multi-qubit label lists one token per qubit, qubit 0 first.

enum class ProbeSet {
    minimal,       // z+, z-, x+, y+ per qubit: exactly spans the operator space
    overcomplete,  // all six Pauli eigenstates per qubit
};

inline std::string_view to_string(ProbeSet s) { return s == ProbeSet::minimal ? "minimal" : "overcomplete"; }

inline ProbeSet probe_set_from_string(std::string_view s) {
    if (s == "minimal") return ProbeSet::minimal;
    if (s == "overcomplete") return ProbeSet::overcomplete;
    throw Error(ErrorKind::Parse, "unknown probe set '" + std::string(s) + "'");
}

inline const std::vector<std::string> &single_qubit_probes(ProbeSet s) {
    static const std::vector<std::string> minimal{"z+", "z-", "x+", "y+"};
    static const std::vector<std::string> overcomplete{"z+", "z-", "x+", "x-", "y+", "y-"};
    return s == ProbeSet::minimal ? minimal : overcomplete;
}

/// Splits a label into per-qubit tokens. Whitespace is optional and the
/// Unicode minus sign is accepted for '-'.
inline std::vector<std::string> parse_state_label(std::string_view label) {
    std::string flat;
    for (std::size_t i = 0; i < label.size(); ++i) {
        const char c = label[i];
        if (c == ' ' || c == '\t' || c == '_' || c == ',') continue;
        if (label.substr(i, 3) == "\xE2\x88\x92") {  // U+2212
            flat += '-';
            i += 2;
            continue;
        }
        flat += c;
    }
    if (flat.empty() || flat.size() % 2 != 0) {
        throw Error(ErrorKind::BadLabel, "cannot parse state label '" + std::string(label) + "'");
    }
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < flat.size(); i += 2) {
        const char axis = flat[i], sign = flat[i + 1];
        if ((axis != 'x' && axis != 'y' && axis != 'z') || (sign != '+' && sign != '-')) {
            throw Error(ErrorKind::BadLabel, "bad token '" + flat.substr(i, 2) + "' in state label '" +
                                                 std::string(label) + "'");
        }
        tokens.push_back(flat.substr(i, 2));
    }
    return tokens;
}

inline std::string canonical_label(std::string_view label) {
    std::string out;
    for (const auto &t : parse_state_label(label)) out += (out.empty() ? "" : " ") + t;
    return out;
}

namespace detail {

inline ComplexMatrix pauli_projector(const std::string &token) {
    const double sign = token[1] == '+' ? 1.0 : -1.0;
    const HermitianMatrix axis = token[0] == 'x' ? pauli::x() : token[0] == 'y' ? pauli::y() : pauli::z();
    return 0.5 * (ComplexMatrix::Identity(2, 2) + sign * axis.matrix());
}

}  // namespace detail

/// Product of single-qubit Pauli eigenstate projectors, qubit 0 leftmost.
inline DensityMatrix pauli_state(std::string_view label) {
    const auto tokens = parse_state_label(label);
    ComplexMatrix rho = detail::pauli_projector(tokens.front());
    for (std::size_t k = 1; k < tokens.size(); ++k) rho = kron(rho, detail::pauli_projector(tokens[k]));
    return DensityMatrix(HermitianMatrix(rho));
}

/// Every product of single-qubit probes, qubit 0 varying slowest.
inline std::vector<std::string> probe_labels(std::size_t qubits, ProbeSet set) {
    std::vector<std::string> labels{""};
    for (std::size_t q = 0; q < qubits; ++q) {
        std::vector<std::string> next;
        for (const auto &prefix : labels)
            for (const auto &t : single_qubit_probes(set)) next.push_back(prefix.empty() ? t : prefix + " " + t);
        labels = std::move(next);
    }
    return labels;
}

inline bool in_probe_set(std::string_view label, ProbeSet set) {
    const auto &allowed = single_qubit_probes(set);
    for (const auto &t : parse_state_label(label))
        if (std::find(allowed.begin(), allowed.end(), t) == allowed.end()) return false;
    return true;
}

/// One calibration experiment: a prepared Pauli product state and the
/// outcome counts observed on it.
struct CalibrationRecord {
    std::string label;
    DensityMatrix rho;
    CountsVector counts;

    static CalibrationRecord make(std::string_view label, CountsVector counts) {
        return CalibrationRecord{canonical_label(label), pauli_state(label), std::move(counts)};
    }
};

/// Calibration records for `povm` on every probe. With a seed, counts are a
/// multinomial sample per probe (stream = probe index); without, they are the
/// rounded expectations shots * Tr(rho M_i).
inline std::vector<CalibrationRecord> synthesize_calibration(const Povm &povm, ProbeSet set, std::uint64_t shots,
                                                             std::optional<Seed> seed = std::nullopt) {
    const auto qubits = std::size_t(std::countr_zero(povm.dim()));
    if ((std::size_t{1} << qubits) != povm.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "POVM dimension " + std::to_string(povm.dim()) + " is not 2^K");
    }
    std::vector<CalibrationRecord> records;
    const auto labels = probe_labels(qubits, set);
    for (std::size_t l = 0; l < labels.size(); ++l) {
        const DensityMatrix rho = pauli_state(labels[l]);
        const ProbabilityVector p = born_probabilities(rho, povm);
        if (seed) {
            Rng rng = Rng::stream(*seed, l);
            records.push_back({labels[l], rho, sample_counts(p, shots, rng)});
        } else {
            records.push_back({labels[l], rho, expected_counts(p, shots)});
        }
    }
    return records;
}

namespace detail {

inline void check_records(const std::vector<CalibrationRecord> &records) {
    if (records.empty()) throw Error(ErrorKind::RankDeficient, "no calibration records");
    const std::size_t d = records.front().rho.dim(), n = records.front().counts.size();
    for (std::size_t l = 0; l < records.size(); ++l) {
        if (records[l].rho.dim() != d) {
            throw Error(ErrorKind::DimensionMismatch, "record " + std::to_string(l) + " ('" + records[l].label +
                                                          "') has state dimension " +
                                                          std::to_string(records[l].rho.dim()),
                        l);
        }
        if (records[l].counts.size() != n) {
            throw Error(ErrorKind::LengthMismatch, "record " + std::to_string(l) + " ('" + records[l].label +
                                                       "') has " + std::to_string(records[l].counts.size()) +
                                                       " outcomes, expected " + std::to_string(n),
                        l);
        }
    }
}

/// Row l maps the real parameters of a Hermitian M to Tr(rho_l M).
/// Parameter order: M(k,k) for every k, then Re M(j,k), Im M(j,k) for j < k.
inline RealMatrix probe_design(const std::vector<CalibrationRecord> &records) {
    const std::size_t d = records.front().rho.dim();
    RealMatrix a(Eigen::Index(records.size()), Eigen::Index(d * d));
    for (std::size_t l = 0; l < records.size(); ++l) {
        const auto &rho = records[l].rho.matrix();
        Eigen::Index c = 0;
        for (std::size_t k = 0; k < d; ++k) a(Eigen::Index(l), c++) = rho(k, k).real();
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = j + 1; k < d; ++k) {
                a(Eigen::Index(l), c++) = 2.0 * rho(j, k).real();
                a(Eigen::Index(l), c++) = 2.0 * rho(j, k).imag();
            }
        }
    }
    return a;
}

inline HermitianMatrix from_parameters(const Eigen::VectorXd &theta, std::size_t d) {
    ComplexMatrix m = ComplexMatrix::Zero(Eigen::Index(d), Eigen::Index(d));
    Eigen::Index c = 0;
    for (std::size_t k = 0; k < d; ++k) m(Eigen::Index(k), Eigen::Index(k)) = theta(c++);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = j + 1; k < d; ++k) {
            const Complex v(theta(c), theta(c + 1));
            c += 2;
            m(Eigen::Index(j), Eigen::Index(k)) = v;
            m(Eigen::Index(k), Eigen::Index(j)) = std::conj(v);
        }
    }
    return HermitianMatrix(m);
}

inline void check_spanning(const RealMatrix &design, std::size_t d) {
    Eigen::ColPivHouseholderQR<RealMatrix> qr(design);
    qr.setThreshold(1e-10);
    const auto rank = std::size_t(qr.rank());
    if (rank < d * d) {
        throw Error(ErrorKind::RankDeficient, "probe states span " + std::to_string(rank) + " of " +
                                                  std::to_string(d * d) + " operator dimensions",
                    std::nullopt, double(rank));
    }
}

}  // namespace detail

/// Least-squares effects reproducing the observed frequencies. Hermitian
/// and complete, but not necessarily positive.
inline std::vector<HermitianMatrix> linear_inversion(const std::vector<CalibrationRecord> &records) {
    detail::check_records(records);
    const std::size_t d = records.front().rho.dim(), n = records.front().counts.size();
    const RealMatrix design = detail::probe_design(records);
    detail::check_spanning(design, d);
    const Eigen::ColPivHouseholderQR<RealMatrix> qr(design);
    std::vector<HermitianMatrix> effects;
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd f(Eigen::Index(records.size()));
        for (std::size_t l = 0; l < records.size(); ++l)
            f(Eigen::Index(l)) = double(records[l].counts[i]) / double(records[l].counts.shots());
        effects.push_back(detail::from_parameters(qr.solve(f), d));
    }
    return effects;
}

struct MleOptions {
    double tol = 1e-10;  // max Frobenius change of any effect in one step
    std::size_t max_iter = 10000;
    bool record_trace = false;  // keep the log-likelihood of every iterate
};

struct MleDiagnostics {
    std::size_t iterations = 0;
    double final_change = 0.0;
    double log_likelihood = 0.0;
    bool converged = false;
    std::vector<double> log_likelihood_trace;
};

struct MleResult {
    Povm povm;
    MleDiagnostics diagnostics;
};

inline constexpr double kMleProbabilityFloor = 1e-12;
inline constexpr double kMleEigenFloor = 1e-12;

/// Fixed-point maximum-likelihood detector estimate. Starting from M_i = I/n,
/// each step forms R_i = sum_l (f_li / p_li) rho_l and
///   M_i <- G^{-1/2} R_i M_i R_i G^{-1/2},  G = sum_i R_i M_i R_i,
/// which keeps every effect positive and the set complete. Stops when no
/// effect moves by more than `tol` (Frobenius) or after `max_iter` steps;
/// in the latter case `converged` is false and the last iterate is returned.
inline MleResult mle_fit(const std::vector<CalibrationRecord> &records, const MleOptions &opts = {}) {
    detail::check_records(records);
    const std::size_t d = records.front().rho.dim(), n = records.front().counts.size(), nl = records.size();
    detail::check_spanning(detail::probe_design(records), d);

    std::vector<std::vector<double>> freq(nl, std::vector<double>(n));
    for (std::size_t l = 0; l < nl; ++l)
        for (std::size_t i = 0; i < n; ++i)
            freq[l][i] = double(records[l].counts[i]) / double(records[l].counts.shots());

    const auto dim = Eigen::Index(d);
    std::vector<ComplexMatrix> m(n, ComplexMatrix::Identity(dim, dim) / double(n));
    std::vector<ComplexMatrix> r(n), rmr(n);

    MleDiagnostics diag;
    auto log_likelihood = [&](std::vector<std::vector<double>> *probs) {
        double ll = 0.0;
        for (std::size_t l = 0; l < nl; ++l) {
            for (std::size_t i = 0; i < n; ++i) {
                const double p = std::max(trace_product(records[l].rho.matrix().matrix(), m[i]).real(),
                                          kMleProbabilityFloor);
                if (probs) (*probs)[l][i] = p;
                if (freq[l][i] > 0) ll += freq[l][i] * std::log(p);
            }
        }
        return ll;
    };

    std::vector<std::vector<double>> probs(nl, std::vector<double>(n));
    diag.log_likelihood = log_likelihood(&probs);
    if (opts.record_trace) diag.log_likelihood_trace.push_back(diag.log_likelihood);

    while (diag.iterations < opts.max_iter) {
        ComplexMatrix g = ComplexMatrix::Zero(dim, dim);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = ComplexMatrix::Zero(dim, dim);
            for (std::size_t l = 0; l < nl; ++l)
                if (freq[l][i] > 0) r[i] += (freq[l][i] / probs[l][i]) * records[l].rho.matrix().matrix();
            rmr[i] = r[i] * m[i] * r[i];
            g += rmr[i];
        }
        const HermitianMatrix lambda =
            apply_function(HermitianMatrix((g + g.adjoint()) * 0.5),
                           [](double x) { return 1.0 / std::sqrt(std::max(x, kMleEigenFloor)); });
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ComplexMatrix next = lambda.matrix() * rmr[i] * lambda.matrix();
            next = (next + next.adjoint()) * 0.5;
            change = std::max(change, (next - m[i]).norm());
            m[i] = std::move(next);
        }
        ++diag.iterations;
        diag.final_change = change;
        diag.log_likelihood = log_likelihood(&probs);
        if (opts.record_trace) diag.log_likelihood_trace.push_back(diag.log_likelihood);
        if (change <= opts.tol) {
            diag.converged = true;
            break;
        }
    }
    return MleResult{Povm::validate(std::vector<ComplexMatrix>(m.begin(), m.end())), std::move(diag)};
}

}  // namespace qrem

#endif  // QREM_TOMOGRAPHY_HPP
