// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mob/covering.hpp"
#include "mob/embedding.hpp"
#include "mob/hausdorff.hpp"

// Brute-force references and covering-number estimators.
//
// Everything here is deliberately unoptimized and written without calling the
// covering/hausdorff implementations, so it can serve as an independent check
// on them. Centers are always drawn from the point set itself.

namespace mob::oracle {

inline constexpr std::size_t kMaxExactCoverPoints = 16;
inline constexpr std::size_t kMaxKCenterPoints = 12;
inline constexpr std::size_t kMaxReferencePoints = 256;

/// Greedy eps-cover: the lowest-index uncovered point becomes a center and
/// covers its closed eps-ball. Returns the centers in pick order.
std::vector<std::size_t> greedy_cover(const EmbeddingSet& points, double eps, Metric metric = Metric::RawEuclidean);

/// Size of greedy_cover(); an upper bound on the member-restricted covering number.
std::size_t greedy_cover_count(const EmbeddingSet& points, double eps, Metric metric = Metric::RawEuclidean);

/// A smallest set of member centers whose closed eps-balls cover the set,
/// found by increasing-cardinality subset enumeration (first in lexicographic
/// order). Throws TooLarge for n > 16.
std::vector<std::size_t> exact_cover(const EmbeddingSet& points, double eps, Metric metric = Metric::RawEuclidean);

std::size_t exact_cover_count(const EmbeddingSet& points, double eps, Metric metric = Metric::RawEuclidean);

/// True when every point lies within eps of some row in `centers`.
bool covers(const EmbeddingSet& points, const std::vector<std::size_t>& centers, double eps,
            Metric metric = Metric::RawEuclidean);

/// Minimal directed radius of the set to any K-subset of itself. Throws TooLarge for n > 12.
double optimal_kcenter_radius(const EmbeddingSet& points, std::size_t budget, Metric metric = Metric::NormalizedEuclidean);

/// Largest pairwise distance.
double diameter(const EmbeddingSet& points, Metric metric = Metric::RawEuclidean);

struct RadiusWindow {
    double eps_min;
    double eps_max;
};

/// Log-log regression of greedy covering counts against radius.
struct RegularityFit {
    double d_eff_hat = 0.0;  ///< Negated slope of log(count) vs log(eps).
    double log_const = 0.0;  ///< Intercept: log of the fitted constant.
    double r2 = 0.0;
    RadiusWindow window{0.0, 0.0};
    double a_lower = 0.0;  ///< min over the grid of count * eps^d_eff_hat.
    double b_upper = 0.0;  ///< max over the grid of count * eps^d_eff_hat.
    std::vector<double> radii;
    std::vector<std::size_t> counts;
};

/// Default radius window: [0.05, 0.5] x diameter.
RadiusWindow default_window(const EmbeddingSet& points, Metric metric = Metric::RawEuclidean);

/// Fits log N(eps) = log_const - d_eff * log eps over `n_radii` log-spaced radii.
/// Throws DegenerateFit when the counts take fewer than two distinct values.
RegularityFit fit_effective_dimension(const EmbeddingSet& points, std::optional<RadiusWindow> window = std::nullopt,
                                      std::size_t n_radii = 12, Metric metric = Metric::RawEuclidean);

/// Covering-regularity constants shared by a visual/prompt pair: d_eff from
/// the visual regression, then a <= N(X, eps) eps^d_eff <= b taken as the
/// lower/upper envelope over each set's own radius grid.
struct CoveringConstants {
    double d_eff = 0.0;
    double a = 0.0;
    double b = 0.0;
    double a_prime = 0.0;
    double b_prime = 0.0;
    RegularityFit visual_fit;
    RegularityFit prompt_fit;
};

CoveringConstants fit_covering_constants(const EmbeddingSet& visual, const EmbeddingSet& prompt,
                                         Metric metric = Metric::NormalizedEuclidean);

/// Smallest z > 1 (to 1e-9 relative) with K < N(P, eta/z) + N(V, eta/z),
/// using greedy counts. Returns +inf when eta is 0 or no radius down to
/// 1e-9 * eta breaks the budget, which makes the coupling term vanish.
double budget_scaling_factor(const EmbeddingSet& visual, const EmbeddingSet& prompt, double eta, std::size_t budget_K,
                             Metric metric = Metric::NormalizedEuclidean);

/// Line-by-line transcription of the MoB selection procedure (N <= 256).
SelectionResult reference_mob(const EmbeddingSet& visual, const EmbeddingSet& prompt, const PruneConfig& cfg);

/// Prompt-visual coupling from a full distance matrix (cdist, row minima, column minima).
CouplingReport reference_coupling(const EmbeddingSet& visual, const EmbeddingSet& prompt,
                                  Metric metric = Metric::NormalizedEuclidean);

}  // namespace mob::oracle
