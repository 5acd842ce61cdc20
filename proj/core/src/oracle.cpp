// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#include "mob/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace mob::oracle {

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix to_rows(const EmbeddingSet& set) {
    Matrix rows(set.rows());
    for (std::size_t i = 0; i < set.rows(); ++i) {
        auto r = set.row(i);
        rows[i].assign(r.begin(), r.end());
    }
    return rows;
}

Matrix unit_rows(const EmbeddingSet& set) {
    Matrix rows = to_rows(set);
    for (auto& r : rows) {
        double ss = 0.0;
        for (double x : r) ss += x * x;
        const double norm = std::sqrt(ss);
        if (norm <= kZeroNormThreshold) {
            throw Error(ErrorCode::ZeroVector, "zero row in oracle input");
        }
        for (double& x : r) x /= norm;
    }
    return rows;
}

Matrix prepared(const EmbeddingSet& set, Metric metric) {
    return metric == Metric::NormalizedEuclidean ? unit_rows(set) : to_rows(set);
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double ss = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double diff = a[t] - b[t];
        ss += diff * diff;
    }
    return std::sqrt(ss);
}

Matrix cdist(const Matrix& a, const Matrix& b) {
    Matrix d(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            d[i][j] = distance(a[i], b[j]);
        }
    }
    return d;
}

// Calls visit(subset) for every `size`-subset of {0..n-1} in lexicographic
// order; stops early when visit returns true.
template <typename Visit>
bool for_each_subset(std::size_t n, std::size_t size, Visit&& visit) {
    if (size > n) return false;
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
        if (visit(idx)) return true;
        std::size_t pos = size;
        while (pos > 0 && idx[pos - 1] == n - size + (pos - 1)) --pos;
        if (pos == 0) return false;
        ++idx[pos - 1];
        for (std::size_t t = pos; t < size; ++t) idx[t] = idx[t - 1] + 1;
    }
}

}  // namespace

std::vector<std::size_t> greedy_cover(const EmbeddingSet& points, double eps, Metric metric) {
    if (!(eps > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "cover radius must be > 0");
    }
    const Matrix x = prepared(points, metric);
    std::vector<char> covered(x.size(), 0);
    std::vector<std::size_t> centers;
    for (std::size_t c = 0; c < x.size(); ++c) {
        if (covered[c]) continue;
        centers.push_back(c);
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (!covered[j] && distance(x[c], x[j]) <= eps) covered[j] = 1;
        }
    }
    return centers;
}

std::size_t greedy_cover_count(const EmbeddingSet& points, double eps, Metric metric) {
    return greedy_cover(points, eps, metric).size();
}

bool covers(const EmbeddingSet& points, const std::vector<std::size_t>& centers, double eps, Metric metric) {
    const Matrix x = prepared(points, metric);
    for (const auto& p : x) {
        bool hit = false;
        for (std::size_t c : centers) {
            if (distance(p, x.at(c)) <= eps) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

std::vector<std::size_t> exact_cover(const EmbeddingSet& points, double eps, Metric metric) {
    const std::size_t n = points.rows();
    if (n > kMaxExactCoverPoints) {
        throw Error(ErrorCode::TooLarge, "exact cover enumeration is capped at " +
                                             std::to_string(kMaxExactCoverPoints) + " points, got " + std::to_string(n));
    }
    if (!(eps > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "cover radius must be > 0");
    }
    const Matrix x = prepared(points, metric);
    const Matrix d = cdist(x, x);
    std::vector<std::uint32_t> ball(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (d[i][j] <= eps) ball[i] |= (1u << j);
        }
    }
    const std::uint32_t full = (1u << n) - 1u;
    std::vector<std::size_t> best;
    for (std::size_t m = 1; m <= n && best.empty(); ++m) {
        for_each_subset(n, m, [&](const std::vector<std::size_t>& subset) {
            std::uint32_t mask = 0;
            for (std::size_t c : subset) mask |= ball[c];
            if (mask == full) best = subset;
            return mask == full;
        });
    }
    return best;
}

std::size_t exact_cover_count(const EmbeddingSet& points, double eps, Metric metric) {
    return exact_cover(points, eps, metric).size();
}

double optimal_kcenter_radius(const EmbeddingSet& points, std::size_t budget, Metric metric) {
    const std::size_t n = points.rows();
    if (n > kMaxKCenterPoints) {
        throw Error(ErrorCode::TooLarge, "k-center enumeration is capped at " + std::to_string(kMaxKCenterPoints) +
                                             " points, got " + std::to_string(n));
    }
    if (budget < 1 || budget > n) {
        throw Error(ErrorCode::InvalidArgument, "k-center budget must be in [1, n]");
    }
    const Matrix x = prepared(points, metric);
    const Matrix d = cdist(x, x);
    double best = std::numeric_limits<double>::infinity();
    for_each_subset(n, budget, [&](const std::vector<std::size_t>& subset) {
        double radius = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t c : subset) nearest = std::min(nearest, d[i][c]);
            radius = std::max(radius, nearest);
        }
        best = std::min(best, radius);
        return false;
    });
    return best;
}

double diameter(const EmbeddingSet& points, Metric metric) {
    const Matrix x = prepared(points, metric);
    double diam = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            diam = std::max(diam, distance(x[i], x[j]));
        }
    }
    return diam;
}

RadiusWindow default_window(const EmbeddingSet& points, Metric metric) {
    const double diam = diameter(points, metric);
    return {0.05 * diam, 0.5 * diam};
}

RegularityFit fit_effective_dimension(const EmbeddingSet& points, std::optional<RadiusWindow> window,
                                      std::size_t n_radii, Metric metric) {
    if (n_radii < 4) {
        throw Error(ErrorCode::InvalidArgument, "need at least 4 radii for the regression");
    }
    const RadiusWindow w = window ? *window : default_window(points, metric);
    if (!(w.eps_min > 0.0)) {
        throw Error(ErrorCode::DegenerateFit, "radius window must start above zero");
    }
    if (!(w.eps_min < w.eps_max)) {
        throw Error(ErrorCode::DegenerateFit, "radius window needs eps_min < eps_max");
    }

    RegularityFit fit;
    fit.window = w;
    const double log_lo = std::log(w.eps_min);
    const double step = (std::log(w.eps_max) - log_lo) / static_cast<double>(n_radii - 1);
    for (std::size_t i = 0; i < n_radii; ++i) {
        const double eps = std::exp(log_lo + step * static_cast<double>(i));
        fit.radii.push_back(eps);
        fit.counts.push_back(greedy_cover_count(points, eps, metric));
    }
    const auto [lo_it, hi_it] = std::minmax_element(fit.counts.begin(), fit.counts.end());
    if (*lo_it == *hi_it) {
        throw Error(ErrorCode::DegenerateFit, "covering count is constant over the radius window");
    }

    const double m = static_cast<double>(n_radii);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n_radii; ++i) {
        sx += std::log(fit.radii[i]);
        sy += std::log(static_cast<double>(fit.counts[i]));
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n_radii; ++i) {
        const double dx = std::log(fit.radii[i]) - mx;
        const double dy = std::log(static_cast<double>(fit.counts[i])) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    fit.d_eff_hat = -slope;
    fit.log_const = my - slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;

    fit.a_lower = std::numeric_limits<double>::infinity();
    fit.b_upper = 0.0;
    for (std::size_t i = 0; i < n_radii; ++i) {
        const double scaled = static_cast<double>(fit.counts[i]) * std::pow(fit.radii[i], fit.d_eff_hat);
        fit.a_lower = std::min(fit.a_lower, scaled);
        fit.b_upper = std::max(fit.b_upper, scaled);
    }
    return fit;
}

CoveringConstants fit_covering_constants(const EmbeddingSet& visual, const EmbeddingSet& prompt, Metric metric) {
    CoveringConstants out;
    out.visual_fit = fit_effective_dimension(visual, std::nullopt, 12, metric);
    out.prompt_fit = fit_effective_dimension(prompt, std::nullopt, 12, metric);
    out.d_eff = out.visual_fit.d_eff_hat;
    if (!(out.d_eff > 0.0)) {
        throw Error(ErrorCode::DegenerateFit, "visual regression produced a non-positive dimension");
    }
    auto envelope = [&](const RegularityFit& fit, double& lo, double& hi) {
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        for (std::size_t i = 0; i < fit.radii.size(); ++i) {
            const double scaled = static_cast<double>(fit.counts[i]) * std::pow(fit.radii[i], out.d_eff);
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
        }
    };
    envelope(out.prompt_fit, out.a, out.b);
    envelope(out.visual_fit, out.a_prime, out.b_prime);
    return out;
}

double budget_scaling_factor(const EmbeddingSet& visual, const EmbeddingSet& prompt, double eta, std::size_t budget_K,
                             Metric metric) {
    if (!(eta >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "eta must be >= 0");
    }
    const double inf = std::numeric_limits<double>::infinity();
    if (eta == 0.0) return inf;
    auto breaks_budget = [&](double z) {
        const double eps = eta / z;
        return budget_K < greedy_cover_count(prompt, eps, metric) + greedy_cover_count(visual, eps, metric);
    };
    double lo = 1.0;
    double hi = 1e9;
    if (!breaks_budget(hi)) return inf;
    if (breaks_budget(1.0 + 1e-9)) return 1.0 + 1e-9;
    // Counts grow as z grows, so the condition is monotone in z.
    while (hi / lo > 1.0 + 1e-9) {
        const double mid = std::sqrt(lo * hi);
        if (breaks_budget(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

SelectionResult reference_mob(const EmbeddingSet& visual, const EmbeddingSet& prompt, const PruneConfig& cfg) {
    cfg.validate();
    if (visual.dim() != prompt.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "visual and prompt dimensions differ");
    }
    if (visual.rows() > kMaxReferencePoints) {
        throw Error(ErrorCode::TooLarge, "reference transcription is capped at 256 visual rows");
    }

    // Normalize all token embeddings to unit l2 norm.
    const Matrix V = unit_rows(visual);
    const Matrix P = unit_rows(prompt);
    const std::size_t N = V.size();
    const std::size_t L = P.size();
    const std::size_t K = std::min(cfg.budget_K, N);
    const std::size_t Kp = std::min(cfg.budget_Kp, K);
    const std::size_t k = std::min(cfg.fold_k, N);

    auto cosine = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
        return std::clamp(s, -1.0, 1.0);
    };

    SelectionResult out;
    out.config = cfg;
    std::vector<std::size_t> S_p;
    if (Kp > 0) {
        // Step 1. M <- P V^T
        Matrix M(L, std::vector<double>(N));
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t i = 0; i < N; ++i) M[l][i] = cosine(P[l], V[i]);

        // C_idx, C_sim <- ArgTopK / TopK along each prompt row (stable: lower index first on ties).
        std::vector<std::size_t> C_idx;
        std::vector<double> C_sim;
        for (std::size_t l = 0; l < L; ++l) {
            std::vector<std::size_t> order(N);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return M[l][a] > M[l][b]; });
            for (std::size_t t = 0; t < k; ++t) {
                C_idx.push_back(order[t]);
                C_sim.push_back(M[l][order[t]]);
            }
        }

        // UniqueIndices: ascending index order, keeping the largest similarity per index.
        std::vector<std::size_t> U_idx;
        std::vector<double> U_sim;
        std::vector<std::size_t> by_index(C_idx.size());
        std::iota(by_index.begin(), by_index.end(), std::size_t{0});
        std::stable_sort(by_index.begin(), by_index.end(),
                         [&](std::size_t a, std::size_t b) { return C_idx[a] < C_idx[b]; });
        for (std::size_t pos : by_index) {
            if (!U_idx.empty() && U_idx.back() == C_idx[pos]) {
                U_sim.back() = std::max(U_sim.back(), C_sim[pos]);
            } else {
                U_idx.push_back(C_idx[pos]);
                U_sim.push_back(C_sim[pos]);
            }
        }

        // i_p <- ArgTopK(U_sim, Kp); S_p <- U_idx[i_p]
        std::vector<std::size_t> rank(U_idx.size());
        std::iota(rank.begin(), rank.end(), std::size_t{0});
        std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return U_sim[a] > U_sim[b]; });
        const std::size_t take = std::min(Kp, rank.size());
        for (std::size_t t = 0; t < take; ++t) S_p.push_back(U_idx[rank[t]]);
        out.shortfall_reassigned = Kp - take;
    }
    const std::size_t Kv = K - S_p.size();

    // Step 2. S <- S_p; d <- min over prompt centers of 1 - V V[S_p]^T
    std::vector<std::size_t> S = S_p;
    std::vector<char> in_S(N, 0);
    std::vector<double> d(N, std::numeric_limits<double>::infinity());
    for (std::size_t s : S_p) {
        in_S[s] = 1;
        for (std::size_t i = 0; i < N; ++i) d[i] = std::min(d[i], 1.0 - cosine(V[i], V[s]));
    }
    for (std::size_t s : S_p) d[s] = 0.0;

    std::vector<std::size_t> S_v;
    for (std::size_t t = 0; t < Kv; ++t) {
        std::size_t i_star = 0;
        if (S.empty()) {
            // No prompt centers: start from the row farthest from the mean direction.
            std::vector<double> mean(V[0].size(), 0.0);
            for (const auto& row : V)
                for (std::size_t c = 0; c < row.size(); ++c) mean[c] += row[c];
            double mean_norm = 0.0;
            for (double x : mean) mean_norm += x * x;
            if (std::sqrt(mean_norm) > kZeroNormThreshold) {
                double lowest = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < N; ++i) {
                    double proj = 0.0;
                    for (std::size_t c = 0; c < mean.size(); ++c) proj += V[i][c] * mean[c];
                    if (proj < lowest) {
                        lowest = proj;
                        i_star = i;
                    }
                }
            }
        } else {
            // i* <- ArgMax(d) over tokens not yet selected
            double best = -1.0;
            for (std::size_t i = 0; i < N; ++i) {
                if (!in_S[i] && d[i] > best) {
                    best = d[i];
                    i_star = i;
                }
            }
        }
        S.push_back(i_star);
        S_v.push_back(i_star);
        in_S[i_star] = 1;
        for (std::size_t i = 0; i < N; ++i) d[i] = std::min(d[i], 1.0 - cosine(V[i], V[i_star]));
        d[i_star] = 0.0;
    }

    out.prompt_centers = S_p;
    out.visual_centers = S_v;

    auto directed = [](const Matrix& from, const Matrix& to) {
        double worst = 0.0;
        for (const auto& x : from) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& y : to) nearest = std::min(nearest, distance(x, y));
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    Matrix retained;
    for (std::size_t s : S) retained.push_back(V[s]);
    out.eps_v = S.empty() ? std::numeric_limits<double>::infinity() : directed(V, retained);
    if (S_p.empty()) {
        out.eps_p_directed = std::numeric_limits<double>::infinity();
        out.eps_p_symmetric = std::numeric_limits<double>::infinity();
    } else {
        Matrix centers;
        for (std::size_t s : S_p) centers.push_back(V[s]);
        out.eps_p_directed = directed(P, centers);
        out.eps_p_symmetric = std::max(out.eps_p_directed, directed(centers, P));
    }
    out.eta = std::max(directed(V, P), directed(P, V));
    return out;
}

CouplingReport reference_coupling(const EmbeddingSet& visual, const EmbeddingSet& prompt, Metric metric) {
    if (visual.dim() != prompt.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "visual and prompt dimensions differ");
    }
    const Matrix D = cdist(prepared(visual, metric), prepared(prompt, metric));
    CouplingReport r;
    for (std::size_t i = 0; i < D.size(); ++i) {
        r.h_v_to_p = std::max(r.h_v_to_p, *std::min_element(D[i].begin(), D[i].end()));
    }
    for (std::size_t j = 0; j < D.front().size(); ++j) {
        double col_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < D.size(); ++i) col_min = std::min(col_min, D[i][j]);
        r.h_p_to_v = std::max(r.h_p_to_v, col_min);
    }
    r.eta = std::max(r.h_v_to_p, r.h_p_to_v);
    return r;
}

}  // namespace mob::oracle
