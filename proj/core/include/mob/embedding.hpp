// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mob/error.hpp"

namespace mob {

/// Rows shorter than this are treated as zero vectors by normalize().
inline constexpr double kZeroNormThreshold = 1e-12;

/// Tolerance on |row| - 1 for a set flagged as normalized.
inline constexpr double kUnitNormTolerance = 1e-6;

/// Row-major n x d matrix of token embeddings.
///
/// Values are held in double precision whatever the on-disk dtype was, so all
/// dot products accumulate in double. The object is immutable after
/// construction; every scalar is finite and n, d >= 1.
class EmbeddingSet {
public:
    EmbeddingSet(std::size_t rows, std::size_t dim, std::vector<double> data, bool normalized = false);

    /// Builds a set from a list of equally sized rows.
    static EmbeddingSet from_rows(const std::vector<std::vector<double>>& rows, bool normalized = false);

    std::size_t rows() const noexcept { return m_rows; }
    std::size_t dim() const noexcept { return m_dim; }
    bool normalized() const noexcept { return m_normalized; }

    std::span<const double> row(std::size_t i) const noexcept { return {m_data.data() + i * m_dim, m_dim}; }
    std::span<const double> data() const noexcept { return m_data; }

    /// Rows at the given indices, in order. The normalized flag carries over.
    EmbeddingSet subset(std::span<const std::size_t> indices) const;

    bool operator==(const EmbeddingSet& other) const = default;

private:
    std::size_t m_rows;
    std::size_t m_dim;
    std::vector<double> m_data;
    bool m_normalized;
};

/// Ordered zero-based row indices into an EmbeddingSet.
using IndexList = std::vector<std::size_t>;

/// Throws InvalidArgument when an index is out of [0, n) or repeated.
void validate_indices(std::span<const std::size_t> indices, std::size_t n);

/// Divides each row by its Euclidean norm. Throws ZeroVector for rows with norm <= 1e-12.
EmbeddingSet normalize(const EmbeddingSet& set);

/// Returns `set` unchanged when already normalized, otherwise normalize(set).
EmbeddingSet ensure_normalized(const EmbeddingSet& set);

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// Row-major n_a x n_b matrix of cosines between two normalized sets.
class CosineMatrix {
public:
    CosineMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : m_rows(rows), m_cols(cols), m_values(std::move(values)) {}

    std::size_t rows() const noexcept { return m_rows; }
    std::size_t cols() const noexcept { return m_cols; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return m_values[i * m_cols + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {m_values.data() + i * m_cols, m_cols}; }

private:
    std::size_t m_rows;
    std::size_t m_cols;
    std::vector<double> m_values;
};

/// Entry (i, j) is dot(a_i, b_j) clamped to [-1, 1]. Both sets must be normalized.
CosineMatrix cosine_matrix(const EmbeddingSet& a, const EmbeddingSet& b);

/// Euclidean distance between unit vectors with cosine c: sqrt(2 - 2c), c clamped to [-1, 1].
double euclid_from_cos(double c) noexcept;

/// Throws DimensionMismatch when the two sets differ in d.
void require_same_dim(const EmbeddingSet& a, const EmbeddingSet& b);

}  // namespace mob
