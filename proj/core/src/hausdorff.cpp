// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#include "mob/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace mob {

std::string_view to_string(Metric metric) noexcept {
    return metric == Metric::RawEuclidean ? "raw" : "normalized";
}

Metric parse_metric(std::string_view name) {
    if (name == "raw") return Metric::RawEuclidean;
    if (name == "normalized") return Metric::NormalizedEuclidean;
    throw Error(ErrorCode::InvalidArgument, "unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(CouplingClass c) noexcept {
    switch (c) {
    case CouplingClass::Strong: return "strong";
    case CouplingClass::Weak: return "weak";
    case CouplingClass::Unclassified: return "unclassified";
    }
    return "unclassified";
}

namespace {

EmbeddingSet prepare(const EmbeddingSet& set, Metric metric) {
    return metric == Metric::NormalizedEuclidean ? ensure_normalized(set) : set;
}

// Distances are taken as explicit differences, not via 2 - 2cos, so identical
// rows give exactly zero.
double directed_impl(const EmbeddingSet& from, const EmbeddingSet& to, std::span<const std::size_t> to_indices) {
    double worst = 0.0;
    for (std::size_t i = 0; i < from.rows(); ++i) {
        auto x = from.row(i);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j : to_indices) {
            best = std::min(best, squared_distance(x, to.row(j)));
            if (best == 0.0) break;
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

}  // namespace

double directed_hausdorff(const EmbeddingSet& from, const EmbeddingSet& to, Metric metric) {
    require_same_dim(from, to);
    const auto all = iota_indices(to.rows());
    return directed_impl(prepare(from, metric), prepare(to, metric), all);
}

double directed_hausdorff_to_subset(const EmbeddingSet& from, const EmbeddingSet& to,
                                    std::span<const std::size_t> to_indices, Metric metric) {
    require_same_dim(from, to);
    if (to_indices.empty()) {
        throw Error(ErrorCode::EmptySet, "directed Hausdorff distance to an empty subset");
    }
    validate_indices(to_indices, to.rows());
    return directed_impl(prepare(from, metric), prepare(to, metric), to_indices);
}

double hausdorff(const EmbeddingSet& a, const EmbeddingSet& b, Metric metric) {
    return coupling(a, b, metric).eta;
}

CouplingReport coupling(const EmbeddingSet& visual, const EmbeddingSet& prompt, Metric metric,
                        std::optional<CalibrationConfig> calib) {
    require_same_dim(visual, prompt);
    if (calib && !(calib->tau > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tau must be > 0");
    }
    const EmbeddingSet v = prepare(visual, metric);
    const EmbeddingSet p = prepare(prompt, metric);

    // One pass over the N x L distance matrix fills both directed minima.
    std::vector<double> min_v(v.rows(), std::numeric_limits<double>::infinity());
    std::vector<double> min_p(p.rows(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < v.rows(); ++i) {
        for (std::size_t j = 0; j < p.rows(); ++j) {
            const double d2 = squared_distance(v.row(i), p.row(j));
            min_v[i] = std::min(min_v[i], d2);
            min_p[j] = std::min(min_p[j], d2);
        }
    }
    CouplingReport report;
    report.h_v_to_p = std::sqrt(*std::max_element(min_v.begin(), min_v.end()));
    report.h_p_to_v = std::sqrt(*std::max_element(min_p.begin(), min_p.end()));
    report.eta = std::max(report.h_v_to_p, report.h_p_to_v);
    if (calib) {
        report.classification = report.eta <= calib->tau ? CouplingClass::Strong : CouplingClass::Weak;
    }
    return report;
}

CalibrationConfig calibrate_tau(std::span<const double> etas) {
    if (etas.size() < 4) {
        throw Error(ErrorCode::DegenerateSample, "calibration needs at least 4 coupling values");
    }
    std::vector<double> sorted(etas.begin(), etas.end());
    for (double e : sorted) {
        if (!std::isfinite(e) || e < 0.0) {
            throw Error(ErrorCode::InvalidArgument, "coupling values must be finite and >= 0");
        }
    }
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) {
        throw Error(ErrorCode::DegenerateSample, "coupling values have zero variance");
    }

    const std::size_t n = sorted.size();
    // Prefix sums over mean-centred values give each split's within-cluster sum
    // of squares in O(1).
    const double shift = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
    std::vector<double> sum(n + 1, 0.0), sum_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = sorted[i] - shift;
        sum[i + 1] = sum[i] + c;
        sum_sq[i + 1] = sum_sq[i] + c * c;
    }
    auto sse = [&](std::size_t lo, std::size_t hi) {
        const double cnt = static_cast<double>(hi - lo);
        const double s = sum[hi] - sum[lo];
        return (sum_sq[hi] - sum_sq[lo]) - s * s / cnt;
    };

    std::size_t best_split = 1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t split = 1; split < n; ++split) {
        if (sorted[split - 1] == sorted[split]) continue;  // equal values stay in one cluster
        const double cost = sse(0, split) + sse(split, n);
        if (cost < best_cost) {
            best_cost = cost;
            best_split = split;
        }
    }
    const double mean_lo =
        std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(best_split), 0.0) /
        static_cast<double>(best_split);
    const double mean_hi =
        std::accumulate(sorted.begin() + static_cast<std::ptrdiff_t>(best_split), sorted.end(), 0.0) /
        static_cast<double>(n - best_split);
    const double tau = 0.5 * (mean_lo + mean_hi);
    if (!(tau > 0.0)) {
        throw Error(ErrorCode::DegenerateSample, "calibrated threshold is not positive");
    }
    return {tau, TauSource::Calibrated};
}

}  // namespace mob
