// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "mob/embedding.hpp"
#include "mob/hausdorff.hpp"

namespace mob {

/// Constants for the closed-form error bounds.
///
/// a, b bound the prompt covering number and a_prime, b_prime the visual one
/// (a eps^-d_eff <= N(eps) <= b eps^-d_eff). z is the radius-scaling factor of
/// the trade-off floor. C is the Lipschitz constant of the downstream model and
/// is never estimated here.
struct BoundParams {
    double lipschitz_C = 1.0;
    double eta = 0.0;
    double d_eff = 1.0;
    double a = 1.0;
    double b = 2.0;
    double a_prime = 1.0;
    double b_prime = 2.0;
    double z = 2.0;

    /// Throws InvalidArgument unless b >= a > 0, b' >= a' > 0, z > 1, C >= 1, d_eff > 0, eta >= 0.
    void validate() const;
};

/// C * max{ min{dH(S,V), dH(V,P)}, min{dH(S,V), dH(S,P)} }.
double lemma1_bound(const EmbeddingSet& retained, const EmbeddingSet& visual, const EmbeddingSet& prompt,
                    double lipschitz_C = 1.0, Metric metric = Metric::NormalizedEuclidean);

/// C * max{dH(S_p,P), dH(S_v,V)} + C * eta.
double relaxed_bound(const EmbeddingSet& prompt_centers, const EmbeddingSet& visual_centers,
                     const EmbeddingSet& prompt, const EmbeddingSet& visual, double lipschitz_C, double eta,
                     Metric metric = Metric::NormalizedEuclidean);

struct TradeoffFloor {
    double d1 = 0.0;             ///< (4 a a')^(1/d_eff)
    double d2 = 0.0;             ///< 1 / z^2
    double product_floor = 0.0;  ///< max{D1 K^(-2/d_eff), D2 eta^2}
    double eps_star = 0.0;       ///< max{eta / z, sqrt(D1) K^(-1/d_eff)}
};

/// Lower bound on eps_p * eps_v for any split of a budget K, and the matching
/// per-objective attainment level.
TradeoffFloor theorem1_floor(std::size_t budget_K, const BoundParams& params);

/// Upper bound on MoB's error: C max{alpha Kp^(-1/d_eff), beta Kv^(-1/d_eff)} + C eta with
/// alpha = eta (b k L / a)^(1/d_eff) and beta = 2 b'^(1/d_eff).
double theorem2_bound(const BoundParams& params, std::size_t fold_k, std::size_t prompt_len, std::size_t budget_Kp,
                      std::size_t budget_Kv);

/// Multiply-accumulate counts (one unit per MAC).
struct CostReport {
    double flops_hausdorff = 0.0;  ///< N L d
    double flops_mob = 0.0;        ///< N (L + K) d

    double tflops_hausdorff() const noexcept { return flops_hausdorff * 1e-12; }
    double tflops_mob() const noexcept { return flops_mob * 1e-12; }
};

CostReport cost_model(std::size_t n_visual, std::size_t n_prompt, std::size_t budget_K, std::size_t dim);

}  // namespace mob
