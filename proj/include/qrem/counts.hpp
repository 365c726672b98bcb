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

#ifndef QREM_COUNTS_HPP
#define QREM_COUNTS_HPP

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qrem/error.hpp"
#include "qrem/povm.hpp"

namespace qrem {

/// Outcome counts from `shots` repetitions; counts sum to shots.
class CountsVector {
   public:
    explicit CountsVector(std::vector<std::uint64_t> counts)
        : counts_(std::move(counts)), shots_(std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0})) {
        if (counts_.empty()) throw Error(ErrorKind::LengthMismatch, "empty counts vector");
        if (shots_ == 0) throw Error(ErrorKind::OutOfRange, "counts vector has zero shots");
    }

    CountsVector(std::uint64_t shots, std::vector<std::uint64_t> counts) : CountsVector(std::move(counts)) {
        if (shots != shots_) {
            throw Error(ErrorKind::SumViolation,
                        "counts sum to " + std::to_string(shots_) + " but shots = " + std::to_string(shots),
                        std::nullopt, double(shots_));
        }
    }

    std::uint64_t shots() const { return shots_; }
    std::size_t size() const { return counts_.size(); }
    std::uint64_t operator[](std::size_t i) const { return counts_[i]; }
    const std::vector<std::uint64_t> &counts() const { return counts_; }

    /// Relative frequencies n_i / N.
    ProbabilityVector frequencies() const {
        std::vector<double> f(counts_.size());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = double(counts_[i]) / double(shots_);
        return ProbabilityVector(std::move(f));
    }

    friend bool operator==(const CountsVector &, const CountsVector &) = default;

   private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t shots_;
};

}  // namespace qrem

#endif  // QREM_COUNTS_HPP
