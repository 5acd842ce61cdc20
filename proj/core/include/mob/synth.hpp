// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "mob/embedding.hpp"

namespace mob::synth {

enum class ManifoldKind { Grid2D, Circle, GaussianClusters };

struct Manifold {
    ManifoldKind kind = ManifoldKind::Grid2D;
    std::size_t clusters = 1;  ///< Only used by GaussianClusters.

    /// Intrinsic dimension plus the axes the construction reserves
    /// (grid offset axis, spare axis for the prompt outlier).
    std::size_t min_ambient_dim() const noexcept;

    bool operator==(const Manifold&) const = default;
};

/// "grid2d", "circle" or "clusters:<c>".
Manifold parse_manifold(std::string_view text);
std::string to_string(const Manifold& m);

/// Default coupling targets for the two regimes, in normalized distance units.
inline constexpr double kWeakCouplingEta = 1.2;
inline constexpr double kStrongCouplingEta = 0.3;

/// Largest reachable coupling: the outlier sits at most a right angle away from the manifold.
inline constexpr double kMaxEta = 1.4142135623730951;

struct GenSpec {
    std::size_t n_visual = 256;
    std::size_t n_prompt = 16;
    std::size_t ambient_dim = 16;
    Manifold manifold;
    double eta_target = kStrongCouplingEta;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Generated {
    EmbeddingSet visual;
    EmbeddingSet prompt;
    double measured_eta;
};

/// Deterministic visual/prompt pair with a controlled coupling.
///
/// Visual rows are sampled on the manifold, projected to the unit sphere and
/// rotated by a seeded random orthonormal matrix. Prompt rows are the first
/// n_prompt - 1 farthest-point picks on the visual set, each moved by at most
/// 0.1 * eta_target, plus one outlier exactly eta_target away from its nearest
/// visual row along an axis orthogonal to the manifold. measured_eta is the
/// normalized Hausdorff distance of the result.
///
/// Throws InfeasibleEta when eta_target > sqrt(2), or when the prompt rows are
/// too few to bring measured_eta within 15% of the target.
///
/// Randomness comes from std::mt19937_64 (fully specified by the C++ standard)
/// with uniforms built from the top 53 bits and normals by Box-Muller, so the
/// streams are reproducible on any conforming implementation.
Generated generate(const GenSpec& spec);

}  // namespace mob::synth
