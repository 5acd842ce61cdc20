// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#include "mob/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mob {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::BudgetExceedsPopulation: return "BudgetExceedsPopulation";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::InfeasibleEta: return "InfeasibleEta";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

EmbeddingSet::EmbeddingSet(std::size_t rows, std::size_t dim, std::vector<double> data, bool normalized)
    : m_rows(rows), m_dim(dim), m_data(std::move(data)), m_normalized(normalized) {
    if (m_rows == 0 || m_dim == 0) {
        throw Error(ErrorCode::EmptySet, "embedding set needs n >= 1 and d >= 1");
    }
    if (m_data.size() != m_rows * m_dim) {
        throw Error(ErrorCode::InvalidArgument,
                    "data length " + std::to_string(m_data.size()) + " != n*d = " + std::to_string(m_rows * m_dim));
    }
    for (double v : m_data) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteValue, "embedding contains NaN or Inf");
        }
    }
    if (m_normalized) {
        for (std::size_t i = 0; i < m_rows; ++i) {
            const double norm = std::sqrt(dot(row(i), row(i)));
            if (std::abs(norm - 1.0) > kUnitNormTolerance) {
                throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(i) + " flagged normalized but has norm " +
                                                            std::to_string(norm));
            }
        }
    }
}

EmbeddingSet EmbeddingSet::from_rows(const std::vector<std::vector<double>>& rows, bool normalized) {
    if (rows.empty() || rows.front().empty()) {
        throw Error(ErrorCode::EmptySet, "no rows");
    }
    const std::size_t d = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * d);
    for (const auto& r : rows) {
        if (r.size() != d) {
            throw Error(ErrorCode::DimensionMismatch, "ragged rows");
        }
        data.insert(data.end(), r.begin(), r.end());
    }
    return EmbeddingSet(rows.size(), d, std::move(data), normalized);
}

EmbeddingSet EmbeddingSet::subset(std::span<const std::size_t> indices) const {
    validate_indices(indices, m_rows);
    std::vector<double> data;
    data.reserve(indices.size() * m_dim);
    for (std::size_t i : indices) {
        auto r = row(i);
        data.insert(data.end(), r.begin(), r.end());
    }
    return EmbeddingSet(indices.size(), m_dim, std::move(data), m_normalized);
}

void validate_indices(std::span<const std::size_t> indices, std::size_t n) {
    std::vector<bool> seen(n, false);
    for (std::size_t i : indices) {
        if (i >= n) {
            throw Error(ErrorCode::InvalidArgument, "index " + std::to_string(i) + " out of range [0, " +
                                                        std::to_string(n) + ")");
        }
        if (seen[i]) {
            throw Error(ErrorCode::InvalidArgument, "duplicate index " + std::to_string(i));
        }
        seen[i] = true;
    }
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += a[k] * b[k];
    }
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

EmbeddingSet normalize(const EmbeddingSet& set) {
    const std::size_t n = set.rows();
    const std::size_t d = set.dim();
    std::vector<double> out(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = set.row(i);
        const double norm = std::sqrt(dot(r, r));
        if (norm <= kZeroNormThreshold) {
            throw Error(ErrorCode::ZeroVector, "row " + std::to_string(i) + " has norm " + std::to_string(norm));
        }
        for (std::size_t k = 0; k < d; ++k) {
            out[i * d + k] = r[k] / norm;
        }
    }
    return EmbeddingSet(n, d, std::move(out), true);
}

EmbeddingSet ensure_normalized(const EmbeddingSet& set) {
    return set.normalized() ? set : normalize(set);
}

void require_same_dim(const EmbeddingSet& a, const EmbeddingSet& b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "dimension " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
}

CosineMatrix cosine_matrix(const EmbeddingSet& a, const EmbeddingSet& b) {
    require_same_dim(a, b);
    if (!a.normalized() || !b.normalized()) {
        throw Error(ErrorCode::InvalidArgument, "cosine_matrix requires normalized sets");
    }
    std::vector<double> values(a.rows() * b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            values[i * b.rows() + j] = std::clamp(dot(a.row(i), b.row(j)), -1.0, 1.0);
        }
    }
    return CosineMatrix(a.rows(), b.rows(), std::move(values));
}

double euclid_from_cos(double c) noexcept {
    const double clamped = std::clamp(c, -1.0, 1.0);
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * clamped));
}

}  // namespace mob
