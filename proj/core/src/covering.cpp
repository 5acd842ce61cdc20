// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#include "mob/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mob {

std::string_view to_string(BudgetTier tier) noexcept {
    switch (tier) {
    case BudgetTier::High: return "high";
    case BudgetTier::Mid: return "mid";
    case BudgetTier::Low: return "low";
    }
    return "high";
}

BudgetTier parse_tier(std::string_view name) {
    if (name == "high") return BudgetTier::High;
    if (name == "mid") return BudgetTier::Mid;
    if (name == "low") return BudgetTier::Low;
    throw Error(ErrorCode::InvalidArgument, "unknown tier '" + std::string(name) + "' (expected high|mid|low)");
}

CouplingClass parse_coupling_class(std::string_view name) {
    if (name == "strong") return CouplingClass::Strong;
    if (name == "weak") return CouplingClass::Weak;
    throw Error(ErrorCode::InvalidArgument, "unknown coupling class '" + std::string(name) + "' (expected strong|weak)");
}

void PruneConfig::validate() const {
    if (budget_K < 1) {
        throw Error(ErrorCode::InvalidArgument, "budget K must be >= 1");
    }
    if (budget_Kp > budget_K) {
        throw Error(ErrorCode::InvalidArgument,
                    "K_p = " + std::to_string(budget_Kp) + " exceeds K = " + std::to_string(budget_K));
    }
    if (fold_k < 1) {
        throw Error(ErrorCode::InvalidArgument, "covering fold k must be >= 1");
    }
}

BudgetSplit budget_heuristic(std::size_t budget_K, CouplingClass coupling, BudgetTier tier) {
    if (budget_K < 8) {
        throw Error(ErrorCode::BudgetTooSmall, "coupling-prior tables need K >= 8, got " + std::to_string(budget_K));
    }
    struct Fraction {
        std::size_t num;
        std::size_t den;
    };
    const auto tier_index = static_cast<std::size_t>(tier);
    std::size_t kp = 0;
    std::size_t k = 0;
    if (coupling == CouplingClass::Strong) {
        constexpr Fraction fractions[] = {{3, 8}, {1, 4}, {1, 4}};
        const auto f = fractions[tier_index];
        kp = budget_K * f.num / f.den;
        k = (6 * kp + 40) / 80;  // round_half_up(3 kp / 40)
    } else if (coupling == CouplingClass::Weak) {
        constexpr Fraction fractions[] = {{1, 2}, {7, 16}, {5, 12}};
        const auto f = fractions[tier_index];
        kp = budget_K * f.num / f.den;
        k = (2 * kp + 8) / 16;  // round_half_up(kp / 8)
    } else {
        throw Error(ErrorCode::InvalidArgument, "budget heuristic needs a strong or weak coupling class");
    }
    kp = std::min(kp, budget_K);
    if (kp < 1) {
        throw Error(ErrorCode::BudgetTooSmall, "heuristic yields K_p = 0");
    }
    return {kp, std::max<std::size_t>(k, 1)};
}

PruneConfig config_from_prior(std::size_t budget_K, CouplingClass coupling, BudgetTier tier) {
    const auto split = budget_heuristic(budget_K, coupling, tier);
    return PruneConfig{budget_K, split.budget_Kp, split.fold_k, EtaPrior{coupling, tier}};
}

namespace {

// Orders (similarity, index) pairs best-first with the lower index winning ties.
struct BestFirst {
    std::span<const double> score;
    bool operator()(std::size_t a, std::size_t b) const {
        if (score[a] != score[b]) return score[a] > score[b];
        return a < b;
    }
};

}  // namespace

IndexList kfold_candidates(const EmbeddingSet& visual, const EmbeddingSet& prompt, std::size_t fold_k) {
    require_same_dim(visual, prompt);
    if (fold_k < 1) {
        throw Error(ErrorCode::InvalidArgument, "covering fold k must be >= 1");
    }
    const EmbeddingSet v = ensure_normalized(visual);
    const EmbeddingSet p = ensure_normalized(prompt);
    const std::size_t n = v.rows();
    const std::size_t k = std::min(fold_k, n);

    const CosineMatrix sim = cosine_matrix(p, v);
    std::vector<double> best(n, -std::numeric_limits<double>::infinity());
    std::vector<char> is_candidate(n, 0);
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < p.rows(); ++j) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        const auto row = sim.row(j);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), BestFirst{row});
        for (std::size_t t = 0; t < k; ++t) {
            const std::size_t idx = order[t];
            is_candidate[idx] = 1;
            best[idx] = std::max(best[idx], row[idx]);
        }
    }

    IndexList candidates;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_candidate[i]) candidates.push_back(i);
    }
    std::sort(candidates.begin(), candidates.end(), BestFirst{best});
    return candidates;
}

NnCoverResult kfold_nn_cover(const EmbeddingSet& visual, const EmbeddingSet& prompt, std::size_t fold_k,
                             std::size_t budget_Kp) {
    NnCoverResult out;
    out.selected = kfold_candidates(visual, prompt, fold_k);
    out.candidate_count = out.selected.size();
    if (out.candidate_count >= budget_Kp) {
        out.selected.resize(budget_Kp);
    } else {
        out.shortfall = budget_Kp - out.candidate_count;
    }
    return out;
}

FpsResult fps_select(const EmbeddingSet& visual, const IndexList& seed, std::size_t budget_Kv) {
    const EmbeddingSet v = ensure_normalized(visual);
    const std::size_t n = v.rows();
    validate_indices(seed, n);
    if (budget_Kv > n - seed.size()) {
        throw Error(ErrorCode::BudgetExceedsPopulation, "FPS budget " + std::to_string(budget_Kv) + " exceeds the " +
                                                            std::to_string(n - seed.size()) + " unselected rows");
    }

    FpsResult out;
    std::vector<char> taken(n, 0);
    std::vector<double> gap(n, std::numeric_limits<double>::infinity());

    auto absorb = [&](std::size_t center) {
        taken[center] = 1;
        const auto c = v.row(center);
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) {
                gap[i] = 0.0;
                continue;
            }
            const double d = 1.0 - std::clamp(dot(v.row(i), c), -1.0, 1.0);
            gap[i] = std::min(gap[i], d);
        }
    };
    for (std::size_t s : seed) {
        absorb(s);
    }

    std::size_t remaining = budget_Kv;
    if (seed.empty() && remaining > 0) {
        // Farthest from the mean direction: smallest projection onto the row sum.
        std::vector<double> mean(v.dim(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = v.row(i);
            for (std::size_t t = 0; t < v.dim(); ++t) mean[t] += r[t];
        }
        std::size_t first = 0;
        if (std::sqrt(dot(mean, mean)) > kZeroNormThreshold) {
            double lowest = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                const double proj = dot(v.row(i), mean);
                if (proj < lowest) {
                    lowest = proj;
                    first = i;
                }
            }
        }
        out.selected.push_back(first);
        out.gaps.push_back(std::numeric_limits<double>::infinity());
        absorb(first);
        --remaining;
    }

    for (; remaining > 0; --remaining) {
        std::size_t pick = n;
        double farthest = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i] && gap[i] > farthest) {
                farthest = gap[i];
                pick = i;
            }
        }
        out.selected.push_back(pick);
        out.gaps.push_back(farthest);
        absorb(pick);
    }

    IndexList centers = seed;
    centers.insert(centers.end(), out.selected.begin(), out.selected.end());
    out.eps_v = centers.empty() ? std::numeric_limits<double>::infinity()
                                : directed_hausdorff_to_subset(v, v, centers, Metric::NormalizedEuclidean);
    return out;
}

IndexList SelectionResult::retained() const {
    IndexList all = prompt_centers;
    all.insert(all.end(), visual_centers.begin(), visual_centers.end());
    return all;
}

SelectionResult mob_prune(const EmbeddingSet& visual, const EmbeddingSet& prompt, const PruneConfig& cfg) {
    cfg.validate();
    require_same_dim(visual, prompt);
    const EmbeddingSet v = normalize(visual);
    const EmbeddingSet p = normalize(prompt);

    const std::size_t n = v.rows();
    const std::size_t budget = std::min(cfg.budget_K, n);
    const std::size_t budget_p = std::min(cfg.budget_Kp, budget);

    SelectionResult out;
    out.config = cfg;
    if (budget_p > 0) {
        auto cover = kfold_nn_cover(v, p, cfg.fold_k, budget_p);
        out.prompt_centers = std::move(cover.selected);
        out.shortfall_reassigned = cover.shortfall;
    }

    const std::size_t budget_v = budget - out.prompt_centers.size();
    auto fps = fps_select(v, out.prompt_centers, budget_v);
    out.visual_centers = std::move(fps.selected);
    out.eps_v = fps.eps_v;

    if (out.prompt_centers.empty()) {
        out.eps_p_directed = std::numeric_limits<double>::infinity();
        out.eps_p_symmetric = std::numeric_limits<double>::infinity();
    } else {
        const EmbeddingSet centers = v.subset(out.prompt_centers);
        out.eps_p_directed = directed_hausdorff(p, centers, Metric::NormalizedEuclidean);
        out.eps_p_symmetric =
            std::max(out.eps_p_directed, directed_hausdorff(centers, p, Metric::NormalizedEuclidean));
    }
    out.eta = coupling(v, p, Metric::NormalizedEuclidean).eta;
    return out;
}

}  // namespace mob
