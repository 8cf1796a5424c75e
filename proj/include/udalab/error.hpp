// Copyright 2026 The udalab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace udalab {

enum class ErrorCode {
    InvalidDimension,
    DimensionMismatch,
    NotHermitian,
    NotPositive,
    NotNormalized,
    InvalidRank,
    EmptySubset,
    OutOfRange,
    Precondition,
    NotInRange,
    NonClosedGroup,
    Parse,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidDimension: return "invalid-dimension";
        case ErrorCode::DimensionMismatch: return "dimension-mismatch";
        case ErrorCode::NotHermitian: return "not-hermitian";
        case ErrorCode::NotPositive: return "not-positive";
        case ErrorCode::NotNormalized: return "not-normalized";
        case ErrorCode::InvalidRank: return "invalid-rank";
        case ErrorCode::EmptySubset: return "empty-subset";
        case ErrorCode::OutOfRange: return "out-of-range";
        case ErrorCode::Precondition: return "precondition";
        case ErrorCode::NotInRange: return "not-in-range";
        case ErrorCode::NonClosedGroup: return "non-closed-group";
        case ErrorCode::Parse: return "parse";
    }
    return "unknown";
}

/// Every library failure surfaces as this exception; `code()` is stable and
/// is what callers (and the CLI) branch on.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) throw Error(code, what);
}

}  // namespace udalab
