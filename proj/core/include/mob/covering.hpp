// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mob/embedding.hpp"
#include "mob/hausdorff.hpp"

namespace mob {

enum class BudgetTier { High, Mid, Low };

std::string_view to_string(BudgetTier tier) noexcept;
BudgetTier parse_tier(std::string_view name);
/// "strong" or "weak".
CouplingClass parse_coupling_class(std::string_view name);

/// Where the (K_p, k) pair came from when it was derived from a coupling prior.
struct EtaPrior {
    CouplingClass coupling = CouplingClass::Strong;
    BudgetTier tier = BudgetTier::High;

    bool operator==(const EtaPrior&) const = default;
};

/// Budget split for one pruning call. K_v is implicit: budget_K - budget_Kp.
struct PruneConfig {
    std::size_t budget_K = 0;
    std::size_t budget_Kp = 0;
    std::size_t fold_k = 1;
    std::optional<EtaPrior> eta_prior;  ///< nullopt means the values were set by hand.

    /// Throws InvalidArgument unless budget_K >= 1, budget_Kp <= budget_K and fold_k >= 1.
    void validate() const;

    bool operator==(const PruneConfig&) const = default;
};

struct BudgetSplit {
    std::size_t budget_Kp;
    std::size_t fold_k;
};

/// Coupling-prior budget tables.
///
/// Strong coupling uses K_p = {3K/8, K/4, K/4} for tiers {High, Mid, Low} with
/// k = 3 K_p / 40; weak coupling uses K_p = {K/2, 7K/16, 5K/12} with k = K_p / 8.
/// K_p is floored, k is rounded half up and clamped to >= 1.
/// Throws BudgetTooSmall for K < 8 or when K_p would be zero.
BudgetSplit budget_heuristic(std::size_t budget_K, CouplingClass coupling, BudgetTier tier);

/// Convenience: a PruneConfig whose split comes from budget_heuristic().
PruneConfig config_from_prior(std::size_t budget_K, CouplingClass coupling, BudgetTier tier);

struct NnCoverResult {
    IndexList selected;              ///< Ranked by best alignment, descending.
    std::size_t candidate_count = 0; ///< Distinct candidates before truncation.
    std::size_t shortfall = 0;       ///< budget_Kp - selected.size() when candidates ran out.
};

/// k-fold nearest-neighbour covering for prompt centers.
///
/// Every prompt row nominates its k most similar visual rows. Duplicates are
/// merged keeping the best similarity, and the budget_Kp candidates with the
/// highest best-over-prompts cosine are returned. Ties go to the lower index.
NnCoverResult kfold_nn_cover(const EmbeddingSet& visual, const EmbeddingSet& prompt, std::size_t fold_k,
                             std::size_t budget_Kp);

/// Ranked candidate list of kfold_nn_cover without the budget truncation.
IndexList kfold_candidates(const EmbeddingSet& visual, const EmbeddingSet& prompt, std::size_t fold_k);

struct FpsResult {
    IndexList selected;        ///< New centers in selection order, seed excluded.
    std::vector<double> gaps;  ///< 1 - cos distance of each pick to the centers before it (+inf for an unseeded first pick).
    double eps_v = 0.0;        ///< Directed radius of all rows to seed + selected (normalized metric).
};

/// Farthest point sampling seeded with `seed`.
///
/// Each step adds the unselected row with the largest minimum (1 - cos)
/// distance to the current centers. With an empty seed the first pick is the
/// row farthest from the mean direction of the set.
/// Throws BudgetExceedsPopulation when budget_Kv > n - |seed|.
FpsResult fps_select(const EmbeddingSet& visual, const IndexList& seed, std::size_t budget_Kv);

struct SelectionResult {
    IndexList prompt_centers;
    IndexList visual_centers;
    double eps_p_directed = 0.0;   ///< prompt -> prompt centers; +inf when there are none.
    double eps_p_symmetric = 0.0;  ///< Hausdorff(prompt centers, prompt); +inf when there are none.
    double eps_v = 0.0;            ///< visual -> all retained rows.
    double eta = 0.0;              ///< Hausdorff(visual, prompt), normalized metric.
    std::size_t shortfall_reassigned = 0;
    PruneConfig config;

    /// prompt_centers followed by visual_centers.
    IndexList retained() const;

    bool operator==(const SelectionResult&) const = default;
};

/// Multi-objective balanced covering.
///
/// Normalizes both sets, picks prompt centers by k-fold NN covering, moves any
/// candidate shortfall into the visual budget, then fills the rest of the
/// budget by FPS seeded with the prompt centers. A budget at or above the row
/// count retains every row.
SelectionResult mob_prune(const EmbeddingSet& visual, const EmbeddingSet& prompt, const PruneConfig& cfg);

}  // namespace mob
