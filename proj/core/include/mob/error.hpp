// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mob {

enum class ErrorCode {
    InvalidArgument,
    ZeroVector,
    DimensionMismatch,
    EmptySet,
    DegenerateSample,
    BudgetExceedsPopulation,
    BudgetTooSmall,
    TooLarge,
    DegenerateFit,
    InfeasibleEta,
    BadMagic,
    UnsupportedVersion,
    TruncatedPayload,
    NonFiniteValue,
    IoFailure,
    ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` carries the taxonomy.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), m_code(code) {}

    ErrorCode code() const noexcept { return m_code; }

    /// True for errors caused by the filesystem or file contents rather than arguments.
    bool is_io() const noexcept {
        switch (m_code) {
        case ErrorCode::BadMagic:
        case ErrorCode::UnsupportedVersion:
        case ErrorCode::TruncatedPayload:
        case ErrorCode::IoFailure:
        case ErrorCode::ParseError:
            return true;
        default:
            return false;
        }
    }

private:
    ErrorCode m_code;
};

}  // namespace mob
