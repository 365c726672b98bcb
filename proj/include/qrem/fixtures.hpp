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

#ifndef QREM_FIXTURES_HPP
#define QREM_FIXTURES_HPP

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "qrem/error.hpp"
#include "qrem/povm.hpp"

namespace qrem::fixtures {

/// First effect [[a, b], [conj b, c]] of a reconstructed single-qubit
/// detector; the second effect is I - M_1.
struct QubitDetector {
    std::string_view name;
    double m00;
    Complex m01;
    double m11;
};

// Detector tomography results for the five qubits of IBM ibmqx4 and the
// first five qubits of Rigetti Aspen-4-16Q-A.
inline const std::array<QubitDetector, 10> &all() {
    static const std::array<QubitDetector, 10> table{{
        {"ibm_q0", 0.963, {0.004, 0.0}, 0.137},
        {"ibm_q1", 0.99, {0.002, -0.001}, 0.37},
        {"ibm_q2", 0.986, {-0.001, 0.0}, 0.065},
        {"ibm_q3", 0.919, {0.003, -0.003}, 0.148},
        {"ibm_q4", 0.98, {0.0, -0.002}, 0.155},
        {"rigetti_q0", 0.975, {-0.002, 0.0}, 0.124},
        {"rigetti_q1", 0.966, {0.002, 0.002}, 0.101},
        {"rigetti_q2", 0.987, {0.001, -0.001}, 0.066},
        {"rigetti_q3", 0.938, {0.002, 0.001}, 0.184},
        {"rigetti_q4", 0.903, {0.012, -0.001}, 0.155},
    }};
    return table;
}

inline Povm povm(const QubitDetector &q) {
    ComplexMatrix m1(2, 2);
    m1 << q.m00, q.m01, std::conj(q.m01), q.m11;
    return Povm::validate(std::vector<ComplexMatrix>{m1, ComplexMatrix::Identity(2, 2) - m1});
}

inline Povm povm(std::string_view name) {
    for (const auto &q : all())
        if (q.name == name) return povm(q);
    throw Error(ErrorKind::Parse, "unknown fixture '" + std::string(name) + "'");
}

inline std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto &q : all()) out.emplace_back(q.name);
    return out;
}

}  // namespace qrem::fixtures

#endif  // QREM_FIXTURES_HPP
