// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mob/bounds.hpp"
#include "mob/embedding.hpp"
#include "mob/synth.hpp"

namespace mob::cli {

/// One sweep input: a pair of embedding files or a generator spec whose
/// seed is taken from the sweep's seed list.
struct SweepInput {
    std::string label;
    std::string visual_path;
    std::string prompt_path;
    std::optional<synth::GenSpec> gen;
};

/// Loads an embedding file; every failure, including malformed contents,
/// is reported as an I/O error naming the path.
EmbeddingSet load_input(const std::string& path);

/// "manifold=grid2d,nv=256,np=16,d=16,eta=0.3"; omitted keys keep GenSpec defaults.
synth::GenSpec parse_gen_spec(const std::string& text);
std::string gen_label(const synth::GenSpec& spec);

/// A K_p entry is either a count or a fraction of K (written with a '.', < 1).
struct KpValue {
    bool fraction = false;
    double value = 0.0;

    std::size_t resolve(std::size_t budget_K) const;
};
KpValue parse_kp_value(const std::string& text);

struct FixedConstants {
    double d_eff, a, a_prime, b, b_prime, z;
};

struct SweepGrid {
    std::vector<SweepInput> inputs;
    std::vector<std::size_t> budgets_K;
    std::vector<KpValue> kp_values;
    std::vector<std::size_t> folds_k = {1};
    std::vector<std::uint64_t> seeds = {0};
    double lipschitz_C = 1.0;
    std::optional<FixedConstants> constants;
    bool fit = false;

    /// Throws InvalidArgument for empty lists or a K_p above its K.
    void validate() const;
};

struct SweepRow {
    std::size_t input = 0;
    std::size_t K = 0;
    std::size_t K_p = 0;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    double eta = 0.0;
    double eps_p_directed = 0.0;
    double eps_p_symmetric = 0.0;
    double eps_v = 0.0;
    double eps_v_split = 0.0;  ///< visual centers alone against the visual set
    double product = 0.0;      ///< eps_p_symmetric * eps_v_split
    double relaxed = 0.0;
    std::optional<double> floor;
    std::optional<double> theorem2;
    double wall_ms = 0.0;
};

/// (100 / (x_n - x_1)) * sum_i (y_{i+1} - y_i) / y_i. Needs at least two points.
double mean_relative_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Runs every (input, K, K_p, k, seed) cell on `threads` workers; rows come
/// back sorted by (input, K, K_p, k, seed) regardless of the thread count.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, std::size_t threads);

/// CSV table, a blank line, then the slope summary.
std::string format_sweep(const SweepGrid& grid, const std::vector<SweepRow>& rows);

}  // namespace mob::cli
