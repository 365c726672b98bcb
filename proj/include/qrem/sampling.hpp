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

#ifndef QREM_SAMPLING_HPP
#define QREM_SAMPLING_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qrem/counts.hpp"
#include "qrem/error.hpp"
#include "qrem/povm.hpp"
#include "qrem/random.hpp"

namespace qrem {

/// |psi><psi| with psi a normalized complex standard-Gaussian vector.
inline DensityMatrix haar_state(std::size_t dim, Rng &rng) {
    if (dim < 2) throw Error(ErrorKind::OutOfRange, "Haar state dimension must be at least 2");
    Eigen::VectorXcd psi(Eigen::Index(dim), 1);
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        psi(k) = Complex(re, im);
    }
    psi.normalize();
    return DensityMatrix::pure(psi);
}

inline DensityMatrix haar_state(std::size_t dim, Seed seed) {
    Rng rng(seed);
    return haar_state(dim, rng);
}

/// One multinomial draw of `shots` outcomes, by inverse-CDF lookup per shot.
inline CountsVector sample_counts(const ProbabilityVector &p, std::uint64_t shots, Rng &rng) {
    if (shots < 1) throw Error(ErrorKind::OutOfRange, "shots must be at least 1");
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += std::max(p[i], 0.0);
        cdf[i] = acc;
    }
    for (auto &c : cdf) c /= acc;
    std::vector<std::uint64_t> counts(p.size(), 0);
    const auto last = p.size() - 1;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto i = std::min(std::size_t(it - cdf.begin()), last);
        ++counts[i];
    }
    return CountsVector(shots, std::move(counts));
}

inline CountsVector sample_counts(const ProbabilityVector &p, std::uint64_t shots, Seed seed) {
    Rng rng(seed);
    return sample_counts(p, shots, rng);
}

/// Deterministic counts closest to shots * p (largest-remainder rounding);
/// with a large `shots` this stands in for exact probabilities.
inline CountsVector expected_counts(const ProbabilityVector &p, std::uint64_t shots) {
    std::vector<std::uint64_t> counts(p.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double exact = std::max(p[i], 0.0) * double(shots);
        counts[i] = std::uint64_t(exact);
        assigned += counts[i];
        remainders.emplace_back(exact - double(counts[i]), i);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto &a, const auto &b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t k = 0; assigned < shots; k = (k + 1) % remainders.size(), ++assigned) ++counts[remainders[k].second];
    while (assigned > shots) {
        auto it = std::max_element(counts.begin(), counts.end());
        --*it;
        --assigned;
    }
    return CountsVector(shots, std::move(counts));
}

}  // namespace qrem

#endif  // QREM_SAMPLING_HPP
