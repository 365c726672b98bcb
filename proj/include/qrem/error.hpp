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

#ifndef QREM_ERROR_HPP
#define QREM_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qrem {

enum class ErrorKind {
    NonHermitian,
    DimensionMismatch,
    NotPositive,
    NotComplete,
    NotProjectiveIdeal,
    ColumnSumViolation,
    Singular,
    OutOfRange,
    LengthMismatch,
    ShapeMismatch,
    TooManyOutcomes,
    BadLabel,
    RankDeficient,
    NotConverged,
    SumViolation,
    InvalidPovm,
    Parse,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonHermitian: return "NonHermitian";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotPositive: return "NotPositive";
        case ErrorKind::NotComplete: return "NotComplete";
        case ErrorKind::NotProjectiveIdeal: return "NotProjectiveIdeal";
        case ErrorKind::ColumnSumViolation: return "ColumnSumViolation";
        case ErrorKind::Singular: return "Singular";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::TooManyOutcomes: return "TooManyOutcomes";
        case ErrorKind::BadLabel: return "BadLabel";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::NotConverged: return "NotConverged";
        case ErrorKind::SumViolation: return "SumViolation";
        case ErrorKind::InvalidPovm: return "InvalidPovm";
        case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

/// Every failure raised by the library. `index` and `value` carry the
/// offending effect/column index and the measured quantity when one exists
/// (e.g. NotPositive carries the effect index and its minimum eigenvalue).
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message, std::optional<std::size_t> index = std::nullopt,
          std::optional<double> value = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), index_(index), value_(value) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> index() const noexcept { return index_; }
    std::optional<double> value() const noexcept { return value_; }

   private:
    ErrorKind kind_;
    std::optional<std::size_t> index_;
    std::optional<double> value_;
};

}  // namespace qrem

#endif  // QREM_ERROR_HPP
