// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#include "mob/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mob/covering.hpp"
#include "mob/hausdorff.hpp"

namespace mob::synth {

std::size_t Manifold::min_ambient_dim() const noexcept {
    switch (kind) {
    case ManifoldKind::Grid2D: return 4;  // plane + offset axis + spare axis
    case ManifoldKind::Circle: return 3;  // plane + spare axis
    case ManifoldKind::GaussianClusters: return 2;
    }
    return 2;
}

Manifold parse_manifold(std::string_view text) {
    if (text == "grid2d") return {ManifoldKind::Grid2D, 1};
    if (text == "circle") return {ManifoldKind::Circle, 1};
    constexpr std::string_view prefix = "clusters:";
    if (text.substr(0, prefix.size()) == prefix) {
        std::size_t c = 0;
        const auto digits = text.substr(prefix.size());
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), c);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && c >= 1) {
            return {ManifoldKind::GaussianClusters, c};
        }
    }
    throw Error(ErrorCode::InvalidArgument,
                "unknown manifold '" + std::string(text) + "' (expected grid2d | circle | clusters:<c>)");
}

std::string to_string(const Manifold& m) {
    switch (m.kind) {
    case ManifoldKind::Grid2D: return "grid2d";
    case ManifoldKind::Circle: return "circle";
    case ManifoldKind::GaussianClusters: return "clusters:" + std::to_string(m.clusters);
    }
    return "grid2d";
}

void GenSpec::validate() const {
    if (n_prompt < 1 || n_visual < n_prompt) {
        throw Error(ErrorCode::InvalidArgument, "need n_visual >= n_prompt >= 1");
    }
    if (ambient_dim < manifold.min_ambient_dim()) {
        throw Error(ErrorCode::InvalidArgument, "manifold " + to_string(manifold) + " needs ambient dimension >= " +
                                                    std::to_string(manifold.min_ambient_dim()));
    }
    if (!std::isfinite(eta_target) || eta_target < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "eta_target must be finite and >= 0");
    }
    if (eta_target > kMaxEta) {
        throw Error(ErrorCode::InfeasibleEta, "eta_target exceeds the reachable maximum sqrt(2)");
    }
}

namespace {

class Stream {
public:
    explicit Stream(std::uint64_t seed) : m_engine(seed) {}

    double uniform() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

    double normal() {
        if (m_has_spare) {
            m_has_spare = false;
            return m_spare;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        m_spare = radius * std::sin(angle);
        m_has_spare = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 m_engine;
    double m_spare = 0.0;
    bool m_has_spare = false;
};

using Vec = std::vector<double>;

double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

void scale_to_unit(Vec& x) {
    const double n = norm(x);
    for (double& v : x) v /= n;
}

// Rows are an orthonormal basis obtained by Gram-Schmidt on a Gaussian matrix.
std::vector<Vec> random_rotation(std::size_t d, Stream& rng) {
    std::vector<Vec> q;
    while (q.size() < d) {
        Vec v(d);
        for (double& x : v) x = rng.normal();
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : q) {
                const double proj = dot(v, b);
                for (std::size_t t = 0; t < d; ++t) v[t] -= proj * b[t];
            }
        }
        if (norm(v) < 1e-6) continue;
        scale_to_unit(v);
        q.push_back(std::move(v));
    }
    return q;
}

Vec rotate(const std::vector<Vec>& q, const Vec& x) {
    // y = Q^T x, so local axis t maps to basis row q[t].
    Vec y(x.size(), 0.0);
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (x[t] == 0.0) continue;
        for (std::size_t c = 0; c < x.size(); ++c) y[c] += x[t] * q[t][c];
    }
    return y;
}

std::vector<Vec> manifold_points(const GenSpec& spec, Stream& rng) {
    const std::size_t d = spec.ambient_dim;
    const std::size_t n = spec.n_visual;
    std::vector<Vec> pts;
    pts.reserve(n);
    switch (spec.manifold.kind) {
    case ManifoldKind::Grid2D: {
        const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
        const double denom = side > 1 ? static_cast<double>(side - 1) : 1.0;
        for (std::size_t r = 0; r < side && pts.size() < n; ++r) {
            for (std::size_t c = 0; c < side && pts.size() < n; ++c) {
                Vec x(d, 0.0);
                x[0] = static_cast<double>(r) / denom - 0.5;
                x[1] = static_cast<double>(c) / denom - 0.5;
                x[2] = 1.0;
                pts.push_back(std::move(x));
            }
        }
        break;
    }
    case ManifoldKind::Circle: {
        for (std::size_t i = 0; i < n; ++i) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
            Vec x(d, 0.0);
            x[0] = std::cos(angle);
            x[1] = std::sin(angle);
            pts.push_back(std::move(x));
        }
        break;
    }
    case ManifoldKind::GaussianClusters: {
        constexpr double kSpread = 0.15;
        const std::size_t span = d - 1;  // last axis stays free for the outlier
        std::vector<Vec> centers(spec.manifold.clusters, Vec(d, 0.0));
        for (auto& c : centers) {
            for (std::size_t t = 0; t < span; ++t) c[t] = rng.normal();
            scale_to_unit(c);
        }
        for (std::size_t i = 0; i < n; ++i) {
            Vec x = centers[i % centers.size()];
            for (std::size_t t = 0; t < span; ++t) x[t] += kSpread * rng.normal();
            pts.push_back(std::move(x));
        }
        break;
    }
    }
    for (auto& x : pts) scale_to_unit(x);
    return pts;
}

EmbeddingSet to_set(const std::vector<Vec>& rows) {
    std::vector<double> data;
    data.reserve(rows.size() * rows.front().size());
    for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
    return EmbeddingSet(rows.size(), rows.front().size(), std::move(data), true);
}

}  // namespace

Generated generate(const GenSpec& spec) {
    spec.validate();
    Stream rng(spec.seed);
    const std::size_t d = spec.ambient_dim;

    std::vector<Vec> local = manifold_points(spec, rng);
    const std::vector<Vec> q = random_rotation(d, rng);

    std::vector<Vec> visual_rows;
    visual_rows.reserve(local.size());
    for (const auto& x : local) {
        Vec y = rotate(q, x);
        scale_to_unit(y);
        visual_rows.push_back(std::move(y));
    }
    const EmbeddingSet visual = to_set(visual_rows);

    // Prompt anchors spread over the visual set so the visual -> prompt
    // direction stays below the target.
    const IndexList anchors = fps_select(visual, {}, spec.n_prompt).selected;

    // Axis orthogonal to every visual row.
    const Vec spare = q[d - 1];

    std::vector<Vec> prompt_rows;
    prompt_rows.reserve(spec.n_prompt);
    const double max_shift = 0.1 * spec.eta_target;
    for (std::size_t a = 0; a + 1 < anchors.size(); ++a) {
        const auto base = visual.row(anchors[a]);
        const Vec u(base.begin(), base.end());
        const double chord = max_shift * rng.uniform();
        // Random unit tangent at u.
        Vec t(d);
        do {
            for (double& x : t) x = rng.normal();
            const double proj = dot(t, u);
            for (std::size_t c = 0; c < d; ++c) t[c] -= proj * u[c];
        } while (norm(t) < 1e-9);
        scale_to_unit(t);
        const double phi = 2.0 * std::asin(chord / 2.0);
        Vec p(d);
        for (std::size_t c = 0; c < d; ++c) p[c] = std::cos(phi) * u[c] + std::sin(phi) * t[c];
        prompt_rows.push_back(std::move(p));
    }
    {
        const auto base = visual.row(anchors.back());
        // chord 2 sin(theta / 2) = eta  <=>  cos(theta) = 1 - eta^2 / 2
        const double cos_t = 1.0 - 0.5 * spec.eta_target * spec.eta_target;
        const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
        Vec p(d);
        for (std::size_t c = 0; c < d; ++c) p[c] = cos_t * base[c] + sin_t * spare[c];
        prompt_rows.push_back(std::move(p));
    }
    for (auto& p : prompt_rows) {
        if (std::abs(norm(p) - 1.0) > 1e-12) scale_to_unit(p);
    }
    EmbeddingSet prompt = to_set(prompt_rows);

    const double measured = coupling(visual, prompt, Metric::NormalizedEuclidean).eta;
    const double slack = 0.15 * spec.eta_target;
    if (std::abs(measured - spec.eta_target) > slack) {
        throw Error(ErrorCode::InfeasibleEta, "measured coupling " + std::to_string(measured) + " misses target " +
                                                  std::to_string(spec.eta_target) +
                                                  " by more than 15%; use more prompt rows or a larger target");
    }
    return {visual, std::move(prompt), measured};
}

}  // namespace mob::synth
