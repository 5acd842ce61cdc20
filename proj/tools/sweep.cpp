// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "mob/covering.hpp"
#include "mob/hausdorff.hpp"
#include "mob/io.hpp"
#include "mob/oracle.hpp"

namespace mob::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t parse_count(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    unsigned long long n = 0;
    try {
        n = std::stoull(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != value.size() || value.front() == '-') {
        throw Error(ErrorCode::InvalidArgument, "bad integer for '" + key + "': " + value);
    }
    return static_cast<std::size_t>(n);
}

double parse_real(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != value.size() || !std::isfinite(x)) {
        throw Error(ErrorCode::InvalidArgument, "bad number for '" + key + "': " + value);
    }
    return x;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string optional_field(const std::optional<double>& x) {
    return x ? io::format_double(*x) : std::string();
}

struct Instance {
    std::size_t input = 0;
    std::uint64_t seed = 0;
    EmbeddingSet visual;
    EmbeddingSet prompt;
    std::optional<oracle::CoveringConstants> fitted;
};

struct Cell {
    std::size_t instance = 0;
    std::size_t K = 0;
    std::size_t K_p = 0;
    std::size_t k = 0;
    std::optional<BoundParams> params;
};

Instance make_instance(const SweepInput& in, std::size_t index, std::uint64_t seed, bool fit) {
    Instance inst{index, seed, EmbeddingSet(1, 1, {1.0}), EmbeddingSet(1, 1, {1.0}), std::nullopt};
    if (in.gen) {
        synth::GenSpec spec = *in.gen;
        spec.seed = seed;
        auto g = synth::generate(spec);
        inst.visual = std::move(g.visual);
        inst.prompt = std::move(g.prompt);
    } else {
        inst.visual = load_input(in.visual_path);
        inst.prompt = load_input(in.prompt_path);
    }
    require_same_dim(inst.visual, inst.prompt);
    if (fit) inst.fitted = oracle::fit_covering_constants(inst.visual, inst.prompt);
    return inst;
}

SweepRow run_cell(const Instance& inst, const Cell& cell, double lipschitz_C) {
    SweepRow row;
    row.input = inst.input;
    row.K = cell.K;
    row.K_p = cell.K_p;
    row.k = cell.k;
    row.seed = inst.seed;

    const auto start = std::chrono::steady_clock::now();
    const SelectionResult sel = mob_prune(inst.visual, inst.prompt, PruneConfig{cell.K, cell.K_p, cell.k, std::nullopt});
    const auto stop = std::chrono::steady_clock::now();
    row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();

    row.eta = sel.eta;
    row.eps_p_directed = sel.eps_p_directed;
    row.eps_p_symmetric = sel.eps_p_symmetric;
    row.eps_v = sel.eps_v;
    row.eps_v_split = sel.visual_centers.empty()
                          ? kInf
                          : directed_hausdorff_to_subset(inst.visual, inst.visual, sel.visual_centers);
    row.product = row.eps_p_symmetric * row.eps_v_split;
    if (sel.prompt_centers.empty() || sel.visual_centers.empty()) {
        row.relaxed = kInf;
    } else {
        row.relaxed = relaxed_bound(inst.visual.subset(sel.prompt_centers), inst.visual.subset(sel.visual_centers),
                                    inst.prompt, inst.visual, lipschitz_C, sel.eta);
    }
    if (cell.params) {
        BoundParams p = *cell.params;
        p.eta = sel.eta;
        row.floor = theorem1_floor(cell.K, p).product_floor;
        if (!sel.prompt_centers.empty() && !sel.visual_centers.empty()) {
            row.theorem2 = theorem2_bound(p, cell.k, inst.prompt.rows(), sel.prompt_centers.size(),
                                          sel.visual_centers.size());
        }
    }
    return row;
}

}  // namespace

EmbeddingSet load_input(const std::string& path) {
    try {
        return io::load_embeddings(path);
    } catch (const Error& e) {
        if (e.is_io()) throw;
        throw Error(ErrorCode::IoFailure, path + ": " + e.what());
    }
}

synth::GenSpec parse_gen_spec(const std::string& text) {
    synth::GenSpec spec;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "generator spec entries look like key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "manifold") {
            spec.manifold = synth::parse_manifold(value);
        } else if (key == "nv") {
            spec.n_visual = parse_count(key, value);
        } else if (key == "np") {
            spec.n_prompt = parse_count(key, value);
        } else if (key == "d") {
            spec.ambient_dim = parse_count(key, value);
        } else if (key == "eta") {
            spec.eta_target = parse_real(key, value);
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown generator key '" + key + "'");
        }
    }
    return spec;
}

std::string gen_label(const synth::GenSpec& spec) {
    return "gen/" + synth::to_string(spec.manifold) + "/nv=" + std::to_string(spec.n_visual) +
           "/np=" + std::to_string(spec.n_prompt) + "/d=" + std::to_string(spec.ambient_dim) +
           "/eta=" + io::format_double(spec.eta_target);
}

std::size_t KpValue::resolve(std::size_t budget_K) const {
    if (!fraction) return static_cast<std::size_t>(value);
    return static_cast<std::size_t>(std::floor(value * static_cast<double>(budget_K)));
}

KpValue parse_kp_value(const std::string& text) {
    if (text.find('.') == std::string::npos) {
        return {false, static_cast<double>(parse_count("kp", text))};
    }
    const double f = parse_real("kp", text);
    if (!(f >= 0.0 && f <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "fractional K_p must lie in [0, 1], got " + text);
    }
    return {true, f};
}

void SweepGrid::validate() const {
    if (inputs.empty() || budgets_K.empty() || kp_values.empty() || folds_k.empty() || seeds.empty()) {
        throw Error(ErrorCode::InvalidArgument, "sweep needs at least one input, budget, K_p, fold and seed");
    }
    for (std::size_t K : budgets_K) {
        if (K < 1) throw Error(ErrorCode::InvalidArgument, "budgets must be >= 1");
        for (const auto& kp : kp_values) {
            if (kp.resolve(K) > K) {
                throw Error(ErrorCode::InvalidArgument,
                            "K_p " + std::to_string(kp.resolve(K)) + " exceeds K " + std::to_string(K));
            }
        }
    }
    for (std::size_t k : folds_k) {
        if (k < 1) throw Error(ErrorCode::InvalidArgument, "folds must be >= 1");
    }
    if (constants && fit) {
        throw Error(ErrorCode::InvalidArgument, "pass either fixed constants or --fit, not both");
    }
    if (!(lipschitz_C >= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "Lipschitz constant must be >= 1");
    }
}

double mean_relative_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "slope needs two or more (x, y) points");
    }
    const double span = x.back() - x.front();
    if (span == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "slope needs distinct first and last x");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        if (y[i + 1] == y[i]) continue;  // constant runs contribute 0 even when y is 0 or inf
        sum += (y[i + 1] - y[i]) / y[i];
    }
    return 100.0 / span * sum;
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, std::size_t threads) {
    grid.validate();

    std::vector<Instance> instances;
    for (std::size_t i = 0; i < grid.inputs.size(); ++i) {
        for (std::uint64_t seed : grid.seeds) {
            instances.push_back(make_instance(grid.inputs[i], i, seed, grid.fit));
        }
    }

    std::vector<Cell> cells;
    for (std::size_t n = 0; n < instances.size(); ++n) {
        const Instance& inst = instances[n];
        for (std::size_t K : grid.budgets_K) {
            std::optional<BoundParams> params;
            if (grid.constants) {
                const auto& c = *grid.constants;
                params = BoundParams{grid.lipschitz_C, 0.0, c.d_eff, c.a, c.b, c.a_prime, c.b_prime, c.z};
            } else if (inst.fitted) {
                const auto& f = *inst.fitted;
                const double eta = coupling(inst.visual, inst.prompt).eta;
                const double z = oracle::budget_scaling_factor(inst.visual, inst.prompt, eta, K);
                params = BoundParams{grid.lipschitz_C, 0.0, f.d_eff, f.a, f.b, f.a_prime, f.b_prime, z};
            }
            if (params) params->validate();
            for (const auto& kp : grid.kp_values) {
                for (std::size_t k : grid.folds_k) cells.push_back({n, K, kp.resolve(K), k, params});
            }
        }
    }
    auto key = [&](const Cell& c) {
        return std::make_tuple(instances[c.instance].input, c.K, c.K_p, c.k, instances[c.instance].seed);
    };
    std::stable_sort(cells.begin(), cells.end(), [&](const Cell& a, const Cell& b) { return key(a) < key(b); });

    std::vector<SweepRow> rows(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                rows[i] = run_cell(instances[cells[i].instance], cells[i], grid.lipschitz_C);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = std::max<std::size_t>(1, std::min(threads, cells.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

std::string format_sweep(const SweepGrid& grid, const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "input,K,K_p,k,seed,eta,eps_p_directed,eps_p_symmetric,eps_v,eps_v_split,product,relaxed_bound,"
           "theorem1_floor,theorem2_bound,wall_ms\n";
    char ms[32];
    for (const auto& r : rows) {
        std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
        out << csv_field(grid.inputs[r.input].label) << ',' << r.K << ',' << r.K_p << ',' << r.k << ',' << r.seed
            << ',' << io::format_double(r.eta) << ',' << io::format_double(r.eps_p_directed) << ','
            << io::format_double(r.eps_p_symmetric) << ',' << io::format_double(r.eps_v) << ','
            << io::format_double(r.eps_v_split) << ',' << io::format_double(r.product) << ','
            << io::format_double(r.relaxed) << ',' << optional_field(r.floor) << ',' << optional_field(r.theorem2)
            << ',' << ms << '\n';
    }

    // Slopes along the K_p axis for each (input, K, k, seed) series.
    using Series = std::tuple<std::size_t, std::size_t, std::size_t, std::uint64_t>;
    std::map<Series, std::vector<const SweepRow*>> series;
    for (const auto& r : rows) series[{r.input, r.K, r.k, r.seed}].push_back(&r);

    out << "\ninput,K,k,seed,metric,mean_relative_slope_pct\n";
    for (const auto& [id, members] : series) {
        if (members.size() < 2 || members.front()->K_p == members.back()->K_p) continue;
        std::vector<double> x;
        for (const auto* r : members) x.push_back(static_cast<double>(r->K_p));
        const std::pair<const char*, double SweepRow::*> metrics[] = {
            {"eps_p_symmetric", &SweepRow::eps_p_symmetric},
            {"eps_v", &SweepRow::eps_v},
            {"relaxed_bound", &SweepRow::relaxed},
        };
        for (const auto& [name, field] : metrics) {
            std::vector<double> y;
            for (const auto* r : members) y.push_back(r->*field);
            out << csv_field(grid.inputs[std::get<0>(id)].label) << ',' << std::get<1>(id) << ',' << std::get<2>(id)
                << ',' << std::get<3>(id) << ',' << name << ',' << io::format_double(mean_relative_slope(x, y))
                << '\n';
        }
    }
    return out.str();
}

}  // namespace mob::cli
