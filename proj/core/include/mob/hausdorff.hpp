// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "mob/embedding.hpp"

namespace mob {

enum class Metric {
    RawEuclidean,         ///< Euclidean distance on the stored rows.
    NormalizedEuclidean,  ///< Euclidean distance after L2-normalizing every row.
};

std::string_view to_string(Metric metric) noexcept;
/// Accepts "raw" or "normalized". Throws InvalidArgument otherwise.
Metric parse_metric(std::string_view name);

/// sup over rows of `from` of the distance to the nearest row of `to`.
double directed_hausdorff(const EmbeddingSet& from, const EmbeddingSet& to, Metric metric = Metric::NormalizedEuclidean);

/// Symmetric Hausdorff distance, max of both directions.
double hausdorff(const EmbeddingSet& a, const EmbeddingSet& b, Metric metric = Metric::NormalizedEuclidean);

/// Directed distance from every row of `from` to the subset `to_indices` of `to`.
/// Throws EmptySet when the subset is empty.
double directed_hausdorff_to_subset(const EmbeddingSet& from, const EmbeddingSet& to,
                                    std::span<const std::size_t> to_indices,
                                    Metric metric = Metric::NormalizedEuclidean);

enum class CouplingClass { Strong, Weak, Unclassified };
std::string_view to_string(CouplingClass c) noexcept;

enum class TauSource { UserSupplied, Calibrated };

struct CalibrationConfig {
    double tau;
    TauSource source = TauSource::UserSupplied;
};

struct CouplingReport {
    double h_v_to_p = 0.0;
    double h_p_to_v = 0.0;
    double eta = 0.0;
    CouplingClass classification = CouplingClass::Unclassified;
};

/// Prompt-visual coupling: both directed distances and eta = max of the two.
/// With a threshold, eta <= tau is Strong (ties included) and eta > tau is Weak.
CouplingReport coupling(const EmbeddingSet& visual, const EmbeddingSet& prompt,
                        Metric metric = Metric::NormalizedEuclidean,
                        std::optional<CalibrationConfig> calib = std::nullopt);

/// Offline threshold calibration over observed coupling values.
///
/// Sorts the sample, tries every split into a lower and upper cluster, keeps the
/// split with the smallest total within-cluster sum of squares (first one on
/// ties) and returns the midpoint of the two cluster means. Needs at least four
/// non-negative values with non-zero spread.
CalibrationConfig calibrate_tau(std::span<const double> etas);

}  // namespace mob
