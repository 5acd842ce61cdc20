// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#include "mob/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace mob {

void BoundParams::validate() const {
    if (!(a > 0.0) || !(b >= a)) {
        throw Error(ErrorCode::InvalidArgument, "need b >= a > 0");
    }
    if (!(a_prime > 0.0) || !(b_prime >= a_prime)) {
        throw Error(ErrorCode::InvalidArgument, "need b' >= a' > 0");
    }
    if (!(z > 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "radius-scaling factor z must be > 1");
    }
    if (!(lipschitz_C >= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "Lipschitz constant must be >= 1");
    }
    if (!(d_eff > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "effective dimension must be > 0");
    }
    if (!(eta >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "eta must be >= 0");
    }
}

double lemma1_bound(const EmbeddingSet& retained, const EmbeddingSet& visual, const EmbeddingSet& prompt,
                    double lipschitz_C, Metric metric) {
    const double sv = hausdorff(retained, visual, metric);
    const double vp = hausdorff(visual, prompt, metric);
    const double sp = hausdorff(retained, prompt, metric);
    return lipschitz_C * std::max(std::min(sv, vp), std::min(sv, sp));
}

double relaxed_bound(const EmbeddingSet& prompt_centers, const EmbeddingSet& visual_centers,
                     const EmbeddingSet& prompt, const EmbeddingSet& visual, double lipschitz_C, double eta,
                     Metric metric) {
    const double eps_p = hausdorff(prompt_centers, prompt, metric);
    const double eps_v = hausdorff(visual_centers, visual, metric);
    return lipschitz_C * std::max(eps_p, eps_v) + lipschitz_C * eta;
}

TradeoffFloor theorem1_floor(std::size_t budget_K, const BoundParams& params) {
    params.validate();
    if (budget_K < 1) {
        throw Error(ErrorCode::InvalidArgument, "budget K must be >= 1");
    }
    const double k = static_cast<double>(budget_K);
    TradeoffFloor out;
    out.d1 = std::pow(4.0 * params.a * params.a_prime, 1.0 / params.d_eff);
    out.d2 = 1.0 / (params.z * params.z);
    out.product_floor = std::max(out.d1 * std::pow(k, -2.0 / params.d_eff), out.d2 * params.eta * params.eta);
    out.eps_star = std::max(params.eta / params.z, std::sqrt(out.d1) * std::pow(k, -1.0 / params.d_eff));
    return out;
}

double theorem2_bound(const BoundParams& params, std::size_t fold_k, std::size_t prompt_len, std::size_t budget_Kp,
                      std::size_t budget_Kv) {
    params.validate();
    if (budget_Kp < 1 || budget_Kv < 1) {
        throw Error(ErrorCode::InvalidArgument, "theorem2_bound needs K_p >= 1 and K_v >= 1");
    }
    const double inv_d = 1.0 / params.d_eff;
    const double alpha =
        params.eta * std::pow(params.b * static_cast<double>(fold_k) * static_cast<double>(prompt_len) / params.a, inv_d);
    const double beta = 2.0 * std::pow(params.b_prime, inv_d);
    const double align = alpha * std::pow(static_cast<double>(budget_Kp), -inv_d);
    const double preserve = beta * std::pow(static_cast<double>(budget_Kv), -inv_d);
    return params.lipschitz_C * std::max(align, preserve) + params.lipschitz_C * params.eta;
}

CostReport cost_model(std::size_t n_visual, std::size_t n_prompt, std::size_t budget_K, std::size_t dim) {
    if (n_visual == 0 || n_prompt == 0 || budget_K == 0 || dim == 0) {
        throw Error(ErrorCode::InvalidArgument, "cost model arguments must be positive");
    }
    const double n = static_cast<double>(n_visual);
    const double l = static_cast<double>(n_prompt);
    const double k = static_cast<double>(budget_K);
    const double d = static_cast<double>(dim);
    return {n * l * d, n * (l + k) * d};
}

}  // namespace mob
