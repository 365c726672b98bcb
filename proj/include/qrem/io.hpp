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

#ifndef QREM_IO_HPP
#define QREM_IO_HPP

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qrem/counts.hpp"
#include "qrem/distances.hpp"
#include "qrem/error.hpp"
#include "qrem/mitigation.hpp"
#include "qrem/povm.hpp"
#include "qrem/simulator.hpp"
#include "qrem/stochastic.hpp"
#include "qrem/tomography.hpp"

// File formats. All JSON objects are written with sorted keys and doubles in
// shortest round-trip form. Outcome bitstrings put qubit 0 leftmost, i.e.
// qubit 0 is the most significant bit of the outcome index.

namespace qrem::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kToolName = "qrem";
inline constexpr std::string_view kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Files and digests

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Parse, "cannot write '" + path + "'");
    out << text;
}

inline json parse_json(const std::string &text, const std::string &what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(ErrorKind::Parse, what + ": " + e.what());
    }
}

inline json read_json_file(const std::string &path) { return parse_json(read_text_file(path), path); }

inline std::string dump(const json &j) { return j.dump(2) + "\n"; }

inline void write_json_file(const std::string &path, const json &j) { write_text_file(path, dump(j)); }

/// FNV-1a, 64 bit, as "fnv1a64:<16 hex digits>".
inline std::string digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream ss;
    ss << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

// ---------------------------------------------------------------------------
// Bitstrings

inline std::string bitstring(std::size_t index, std::size_t qubits) {
    std::string s(qubits, '0');
    for (std::size_t q = 0; q < qubits; ++q)
        if ((index >> (qubits - 1 - q)) & 1U) s[q] = '1';
    return s;
}

inline std::size_t bitstring_index(std::string_view s, std::size_t qubits) {
    if (s.size() != qubits) {
        throw Error(ErrorKind::Parse,
                    "bitstring '" + std::string(s) + "' should have length " + std::to_string(qubits));
    }
    std::size_t index = 0;
    for (char c : s) {
        if (c != '0' && c != '1') throw Error(ErrorKind::Parse, "bad bitstring '" + std::string(s) + "'");
        index = (index << 1) | std::size_t(c == '1');
    }
    return index;
}

// ---------------------------------------------------------------------------
// Generic helpers

namespace detail {

template <typename T>
T get(const json &j, const char *key, const std::string &where) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Parse, where + ": missing '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw Error(ErrorKind::Parse, where + ": bad '" + key + "': " + e.what());
    }
}

inline void check_version(const json &j, const std::string &where) {
    const int v = get<int>(j, "format_version", where);
    if (v != kFormatVersion) throw Error(ErrorKind::Parse, where + ": unsupported format_version " + std::to_string(v));
}

}  // namespace detail

inline json matrix_to_json(const RealMatrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline RealMatrix matrix_from_json(const json &j, const std::string &where) {
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::Parse, where + ": expected a nonempty array of rows");
    const auto rows = Eigen::Index(j.size());
    const auto cols = Eigen::Index(j.front().is_array() ? j.front().size() : 0);
    RealMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto &row = j[std::size_t(i)];
        if (!row.is_array() || Eigen::Index(row.size()) != cols) {
            throw Error(ErrorKind::Parse, where + ": row " + std::to_string(i) + " has the wrong length");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            if (!row[std::size_t(k)].is_number()) throw Error(ErrorKind::Parse, where + ": non-numeric entry");
            m(i, k) = row[std::size_t(k)].get<double>();
        }
    }
    return m;
}

inline json complex_matrix_to_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix complex_matrix_from_json(const json &j, std::size_t dim, const std::string &where) {
    if (!j.is_array() || j.size() != dim) {
        throw Error(ErrorKind::Parse, where + ": expected " + std::to_string(dim) + " rows");
    }
    ComplexMatrix m{Eigen::Index(dim), Eigen::Index(dim)};
    for (std::size_t r = 0; r < dim; ++r) {
        const auto &row = j[r];
        if (!row.is_array() || row.size() != dim) {
            throw Error(ErrorKind::Parse, where + ": row " + std::to_string(r) + " should have " +
                                              std::to_string(dim) + " entries");
        }
        for (std::size_t c = 0; c < dim; ++c) {
            const auto &z = row[c];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                throw Error(ErrorKind::Parse, where + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                                                  ") must be [re, im]");
            }
            m(Eigen::Index(r), Eigen::Index(c)) = Complex(z[0].get<double>(), z[1].get<double>());
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// POVM file: {"format_version", "dim", "effects": [[[re, im], ...], ...], "name"?}

inline json povm_to_json(const Povm &m, const std::string &name = {}) {
    json j;
    j["format_version"] = kFormatVersion;
    j["dim"] = m.dim();
    json effects = json::array();
    for (const auto &e : m.effects()) effects.push_back(complex_matrix_to_json(e.matrix()));
    j["effects"] = std::move(effects);
    if (!name.empty()) j["name"] = name;
    return j;
}

inline Povm povm_from_json(const json &j, const std::string &where = "POVM file") {
    detail::check_version(j, where);
    const auto dim = detail::get<std::size_t>(j, "dim", where);
    if (dim == 0) throw Error(ErrorKind::Parse, where + ": dim must be positive");
    const json &effects = j.at("effects");
    if (!effects.is_array() || effects.empty()) throw Error(ErrorKind::Parse, where + ": 'effects' must be a list");
    std::vector<ComplexMatrix> ms;
    for (std::size_t i = 0; i < effects.size(); ++i)
        ms.push_back(complex_matrix_from_json(effects[i], dim, where + " effect " + std::to_string(i)));
    return Povm::validate(ms);
}

inline Povm read_povm(const std::string &path) { return povm_from_json(read_json_file(path), path); }

// ---------------------------------------------------------------------------
// Counts: {"bitstring": n, ...}; absent bitstrings count zero.

inline json counts_to_json(const CountsVector &c, std::size_t qubits) {
    json j = json::object();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] > 0) j[bitstring(i, qubits)] = c[i];
    return j;
}

inline CountsVector counts_from_json(const json &j, std::uint64_t shots, std::size_t qubits, const std::string &where) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, where + ": 'counts' must be an object");
    std::vector<std::uint64_t> counts(std::size_t{1} << qubits, 0);
    for (const auto &[key, value] : j.items()) {
        std::size_t index = 0;
        try {
            index = bitstring_index(key, qubits);
        } catch (const Error &e) {
            throw Error(ErrorKind::Parse, where + ": " + e.what());
        }
        if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
            throw Error(ErrorKind::Parse, where + ": count for '" + key + "' must be a nonnegative integer");
        }
        counts[index] = value.get<std::uint64_t>();
    }
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    if (sum != shots) {
        throw Error(ErrorKind::Parse,
                    where + ": counts sum to " + std::to_string(sum) + " but shots = " + std::to_string(shots));
    }
    return CountsVector(shots, std::move(counts));
}

inline std::vector<std::string> default_qubit_labels(std::size_t qubits) {
    std::vector<std::string> labels;
    for (std::size_t q = 0; q < qubits; ++q) labels.push_back("q" + std::to_string(q));
    return labels;
}

// ---------------------------------------------------------------------------
// Calibration file:
// {"format_version", "qubits": [...], "records": [{"state", "shots", "counts"}]}

struct Calibration {
    std::vector<std::string> qubits;
    std::vector<CalibrationRecord> records;
};

inline json calibration_to_json(const Calibration &cal) {
    json j;
    j["format_version"] = kFormatVersion;
    j["qubits"] = cal.qubits;
    json recs = json::array();
    for (const auto &r : cal.records) {
        json rj;
        rj["state"] = r.label;
        rj["shots"] = r.counts.shots();
        rj["counts"] = counts_to_json(r.counts, cal.qubits.size());
        recs.push_back(std::move(rj));
    }
    j["records"] = std::move(recs);
    return j;
}

inline Calibration calibration_from_json(const json &j, const std::string &where = "calibration file") {
    detail::check_version(j, where);
    Calibration cal;
    cal.qubits = detail::get<std::vector<std::string>>(j, "qubits", where);
    if (cal.qubits.empty()) throw Error(ErrorKind::Parse, where + ": 'qubits' is empty");
    const json &recs = j.at("records");
    if (!recs.is_array()) throw Error(ErrorKind::Parse, where + ": 'records' must be a list");
    for (std::size_t l = 0; l < recs.size(); ++l) {
        const std::string rwhere = where + " record " + std::to_string(l);
        const auto state = detail::get<std::string>(recs[l], "state", rwhere);
        const std::string named = rwhere + " ('" + state + "')";
        const auto shots = detail::get<std::uint64_t>(recs[l], "shots", named);
        if (shots == 0) throw Error(ErrorKind::Parse, named + ": shots must be positive");
        CountsVector counts = counts_from_json(recs[l].at("counts"), shots, cal.qubits.size(), named);
        std::vector<std::string> tokens;
        try {
            tokens = parse_state_label(state);
        } catch (const Error &e) {
            throw Error(ErrorKind::Parse, named + ": " + e.what());
        }
        if (tokens.size() != cal.qubits.size()) {
            throw Error(ErrorKind::Parse, named + ": state has " + std::to_string(tokens.size()) +
                                              " qubit tokens, expected " + std::to_string(cal.qubits.size()));
        }
        cal.records.push_back(CalibrationRecord::make(state, std::move(counts)));
    }
    return cal;
}

// ---------------------------------------------------------------------------
// Counts file for mitigation: {"format_version", "qubits", "shots", "counts"}

struct CountsFile {
    std::vector<std::string> qubits;
    CountsVector counts;
};

inline json counts_file_to_json(const CountsFile &c) {
    json j;
    j["format_version"] = kFormatVersion;
    j["qubits"] = c.qubits;
    j["shots"] = c.counts.shots();
    j["counts"] = counts_to_json(c.counts, c.qubits.size());
    return j;
}

inline CountsFile counts_file_from_json(const json &j, const std::string &where = "counts file") {
    detail::check_version(j, where);
    auto qubits = detail::get<std::vector<std::string>>(j, "qubits", where);
    if (qubits.empty()) throw Error(ErrorKind::Parse, where + ": 'qubits' is empty");
    const auto shots = detail::get<std::uint64_t>(j, "shots", where);
    if (shots == 0) throw Error(ErrorKind::Parse, where + ": shots must be positive");
    CountsVector counts = counts_from_json(j.at("counts"), shots, qubits.size(), where);
    return CountsFile{std::move(qubits), std::move(counts)};
}

// ---------------------------------------------------------------------------
// Distances, budgets, diagnostics

inline json to_json(const DistanceBound &b) {
    return json{{"lower", b.lower}, {"upper", b.upper}, {"method", std::string(to_string(b.method))}};
}

inline DistanceBound distance_bound_from_json(const json &j, const std::string &where) {
    return DistanceBound::make(detail::get<double>(j, "lower", where), detail::get<double>(j, "upper", where),
                               distance_method_from_string(detail::get<std::string>(j, "method", where)));
}

inline json to_json(const ErrorBudget &b) {
    return json{{"epsilon", b.epsilon},     {"norm_1to1", b.norm_1to1}, {"coherent_distance", b.coherent_distance},
                {"delta", b.delta},         {"alpha", b.alpha},         {"total", b.total},
                {"shots", b.shots},         {"pr_err", b.pr_err}};
}

inline json to_json(const MitigationReport &r) {
    return json{{"frequencies", r.frequencies.values()},
                {"raw_corrected", r.raw_corrected.values()},
                {"corrected", r.corrected.values()},
                {"budget", to_json(r.budget)},
                {"rhs_bound", r.rhs_bound},
                {"successful", r.successful},
                {"projection_applied", r.projection_applied}};
}

inline json to_json(const MleDiagnostics &d) {
    return json{{"iterations", d.iterations},
                {"final_change", d.final_change},
                {"log_likelihood", d.log_likelihood},
                {"converged", d.converged}};
}

inline json to_json(const TvSummary &s) {
    return json{{"mean", s.mean}, {"q05", s.q05}, {"median", s.median}, {"q95", s.q95}};
}

inline json to_json(const FractionReport &r) {
    return json{{"f", r.f},
                {"successes", r.successes},
                {"ties", r.ties},
                {"degenerate", r.degenerate},
                {"mean_alpha", r.mean_alpha},
                {"delta", r.delta},
                {"epsilon", r.epsilon},
                {"norm_1to1", r.norm_1to1},
                {"coherent_distance", r.coherent_distance},
                {"dop", to_json(r.dop)},
                {"ratio", r.ratio},
                {"trials", r.trials},
                {"shots", r.shots},
                {"bound_violations", r.bound_violations},
                {"corrected_tv", to_json(r.corrected_tv)},
                {"raw_tv", to_json(r.raw_tv)}};
}

// ---------------------------------------------------------------------------
// Correction file: Lambda and what mitigation needs to budget its error.
// {"format_version", "kind": "correction", "lambda", "correction",
//  "coherent_distance", "dop_ideal": {lower, upper, method}}

struct CorrectionFile {
    StochasticMatrix lambda;
    double coherent_distance = 0.0;
    DistanceBound dop_ideal;
};

inline json correction_file_to_json(const CorrectionFile &c) {
    json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "correction";
    j["lambda"] = matrix_to_json(c.lambda.matrix());
    j["correction"] = matrix_to_json(correction_matrix(c.lambda).matrix());
    j["coherent_distance"] = c.coherent_distance;
    j["dop_ideal"] = to_json(c.dop_ideal);
    return j;
}

inline CorrectionFile correction_file_from_json(const json &j, const std::string &where = "correction file") {
    detail::check_version(j, where);
    const auto kind = detail::get<std::string>(j, "kind", where);
    if (kind != "correction") throw Error(ErrorKind::Parse, where + ": kind is '" + kind + "', expected 'correction'");
    if (!j.contains("lambda")) throw Error(ErrorKind::Parse, where + ": missing 'lambda'");
    StochasticMatrix lambda(matrix_from_json(j.at("lambda"), where + " lambda"));
    const double coherent = detail::get<double>(j, "coherent_distance", where);
    if (!j.contains("dop_ideal")) throw Error(ErrorKind::Parse, where + ": missing 'dop_ideal'");
    return CorrectionFile{std::move(lambda), coherent, distance_bound_from_json(j.at("dop_ideal"), where)};
}

// ---------------------------------------------------------------------------
// Provenance block embedded in every report

inline json provenance(const std::string &command, const std::map<std::string, std::string> &input_digests,
                       std::optional<std::uint64_t> seed, const json &options) {
    json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["inputs"] = input_digests;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["options"] = options;
    return j;
}

// ---------------------------------------------------------------------------
// Figure data: one row per sweep point, LF line endings.

inline constexpr std::string_view kSweepCsvHeader =
    "z,ratio,f,mean_alpha,delta,dop_lower,epsilon,coherent_distance,trials,shots";

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string sweep_csv(const std::vector<SweepPoint> &points) {
    std::string out(kSweepCsvHeader);
    out += '\n';
    for (const auto &p : points) {
        const auto &r = p.report;
        for (double x : {p.z, r.ratio, r.f, r.mean_alpha, r.delta, r.dop.lower, r.epsilon, r.coherent_distance})
            out += format_double(x) + ",";
        out += std::to_string(r.trials) + "," + std::to_string(r.shots) + "\n";
    }
    return out;
}

}  // namespace qrem::io

#endif  // QREM_IO_HPP
