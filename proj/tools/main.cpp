// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mob/mob.hpp"
#include "sweep.hpp"

namespace {

using namespace mob;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

void print_kv(std::string_view key, std::string_view value) { std::cout << key << '=' << value << '\n'; }
void print_kv(std::string_view key, double value) { print_kv(key, io::format_double(value)); }
void print_kv(std::string_view key, std::size_t value) { print_kv(key, std::to_string(value)); }

struct PruneArgs {
    std::string visual, prompt, out;
    std::size_t budget = 0;
    std::optional<std::size_t> kp;
    std::size_t fold = 1;
    std::string eta_prior, tier;
};

int cmd_prune(const PruneArgs& a) {
    PruneConfig cfg;
    if (!a.eta_prior.empty()) {
        if (a.tier.empty()) throw Error(ErrorCode::InvalidArgument, "--eta-prior needs --tier");
        cfg = config_from_prior(a.budget, parse_coupling_class(a.eta_prior), parse_tier(a.tier));
    } else {
        if (!a.kp) throw Error(ErrorCode::InvalidArgument, "pass --kp (with optional --fold) or --eta-prior with --tier");
        cfg = PruneConfig{a.budget, *a.kp, a.fold, std::nullopt};
    }
    cfg.validate();
    const auto visual = cli::load_input(a.visual);
    const auto prompt = cli::load_input(a.prompt);
    const auto sel = mob_prune(visual, prompt, cfg);
    io::write_selection(sel, a.out);

    print_kv("K", cfg.budget_K);
    print_kv("K_p", cfg.budget_Kp);
    print_kv("k", cfg.fold_k);
    if (cfg.eta_prior) {
        print_kv("eta_prior", to_string(cfg.eta_prior->coupling));
        print_kv("tier", to_string(cfg.eta_prior->tier));
    }
    print_kv("prompt_centers", sel.prompt_centers.size());
    print_kv("visual_centers", sel.visual_centers.size());
    print_kv("shortfall_reassigned", sel.shortfall_reassigned);
    print_kv("eta", sel.eta);
    print_kv("eps_p_directed", sel.eps_p_directed);
    print_kv("eps_p_symmetric", sel.eps_p_symmetric);
    print_kv("eps_v", sel.eps_v);
    return kExitOk;
}

struct CouplingArgs {
    std::string visual, prompt, metric = "normalized";
    std::optional<double> tau;
};

int cmd_coupling(const CouplingArgs& a) {
    const Metric metric = parse_metric(a.metric);
    std::optional<CalibrationConfig> calib;
    if (a.tau) calib = CalibrationConfig{*a.tau, TauSource::UserSupplied};
    const auto visual = cli::load_input(a.visual);
    const auto prompt = cli::load_input(a.prompt);
    const auto r = coupling(visual, prompt, metric, calib);
    print_kv("metric", to_string(metric));
    print_kv("h_v_to_p", r.h_v_to_p);
    print_kv("h_p_to_v", r.h_p_to_v);
    print_kv("eta", r.eta);
    print_kv("classification", to_string(r.classification));
    return kExitOk;
}

std::vector<double> read_values(const std::string& path) {
    std::istringstream in(io::read_text(path));
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        std::size_t pos = 0;
        double x = 0.0;
        try {
            x = std::stod(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tok.size() || pos == 0) throw Error(ErrorCode::ParseError, path + ": not a number: " + tok);
        out.push_back(x);
    }
    return out;
}

struct CalibrateArgs {
    std::vector<double> values;
    std::string file;
};

int cmd_calibrate(const CalibrateArgs& a) {
    std::vector<double> values = a.values;
    if (!a.file.empty()) {
        const auto more = read_values(a.file);
        values.insert(values.end(), more.begin(), more.end());
    }
    const auto c = calibrate_tau(values);
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const auto strong = static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](double x) { return x <= c.tau; }));
    print_kv("tau", c.tau);
    print_kv("samples", values.size());
    print_kv("strong", strong);
    print_kv("weak", values.size() - strong);
    return kExitOk;
}

struct SweepArgs {
    std::vector<std::string> visual, prompt, gen;
    std::vector<std::size_t> budgets;
    std::vector<std::string> kp;
    std::vector<std::size_t> folds = {1};
    std::vector<std::uint64_t> seeds = {0};
    std::string out;
    bool fit = false;
    double C = 1.0;
    std::optional<double> d_eff, a, a_prime, b, b_prime, z;
};

int cmd_sweep(const SweepArgs& s, std::size_t threads) {
    if (s.visual.size() != s.prompt.size()) {
        throw Error(ErrorCode::InvalidArgument, "--visual and --prompt must be given the same number of times");
    }
    cli::SweepGrid grid;
    for (std::size_t i = 0; i < s.visual.size(); ++i) {
        grid.inputs.push_back({s.visual[i], s.visual[i], s.prompt[i], std::nullopt});
    }
    for (const auto& g : s.gen) {
        const auto spec = cli::parse_gen_spec(g);
        grid.inputs.push_back({cli::gen_label(spec), "", "", spec});
    }
    grid.budgets_K = s.budgets;
    for (const auto& kp : s.kp) grid.kp_values.push_back(cli::parse_kp_value(kp));
    grid.folds_k = s.folds;
    grid.seeds = s.seeds;
    grid.lipschitz_C = s.C;
    grid.fit = s.fit;
    const bool any = s.d_eff || s.a || s.a_prime || s.b || s.b_prime || s.z;
    const bool all = s.d_eff && s.a && s.a_prime && s.b && s.b_prime && s.z;
    if (any && !all) {
        throw Error(ErrorCode::InvalidArgument, "fixed constants need all of --d-eff --a --a-prime --b --b-prime --z");
    }
    if (all) {
        grid.constants = cli::FixedConstants{*s.d_eff, *s.a, *s.a_prime, *s.b, *s.b_prime, *s.z};
        BoundParams{s.C, 0.0, *s.d_eff, *s.a, *s.b, *s.a_prime, *s.b_prime, *s.z}.validate();
    }
    grid.validate();
    const auto rows = cli::run_sweep(grid, threads);
    const std::string csv = cli::format_sweep(grid, rows);
    if (s.out.empty()) {
        std::cout << csv;
    } else {
        io::write_text(s.out, csv);
        print_kv("rows", rows.size());
    }
    return kExitOk;
}

struct GenArgs {
    std::string manifold = "grid2d", visual_out, prompt_out, dtype = "f64";
    synth::GenSpec spec;
};

void write_embeddings(const EmbeddingSet& set, const std::string& path, io::DType dtype) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
        io::write_csv_embeddings(set, path);
    } else {
        io::write_mobe(set, dtype, path);
    }
}

int cmd_gen(GenArgs a) {
    a.spec.manifold = synth::parse_manifold(a.manifold);
    const io::DType dtype = io::parse_dtype(a.dtype);
    const auto g = synth::generate(a.spec);
    write_embeddings(g.visual, a.visual_out, dtype);
    write_embeddings(g.prompt, a.prompt_out, dtype);
    print_kv("manifold", synth::to_string(a.spec.manifold));
    print_kv("n_visual", g.visual.rows());
    print_kv("n_prompt", g.prompt.rows());
    print_kv("dim", g.visual.dim());
    print_kv("seed", std::to_string(a.spec.seed));
    print_kv("eta_target", a.spec.eta_target);
    print_kv("measured_eta", g.measured_eta);
    return kExitOk;
}

struct FitArgs {
    std::string input, metric = "raw";
    std::optional<double> eps_min, eps_max;
    std::size_t radii = 12;
};

int cmd_fit_dim(const FitArgs& a) {
    const Metric metric = parse_metric(a.metric);
    if (a.eps_min.has_value() != a.eps_max.has_value()) {
        throw Error(ErrorCode::InvalidArgument, "--eps-min and --eps-max go together");
    }
    std::optional<oracle::RadiusWindow> window;
    if (a.eps_min) window = oracle::RadiusWindow{*a.eps_min, *a.eps_max};
    const auto points = cli::load_input(a.input);
    const auto fit = oracle::fit_effective_dimension(points, window, a.radii, metric);
    print_kv("d_eff", fit.d_eff_hat);
    print_kv("log_const", fit.log_const);
    print_kv("r2", fit.r2);
    print_kv("a", fit.a_lower);
    print_kv("b", fit.b_upper);
    print_kv("eps_min", fit.window.eps_min);
    print_kv("eps_max", fit.window.eps_max);
    std::cout << "radius,count\n";
    for (std::size_t i = 0; i < fit.radii.size(); ++i) {
        std::cout << io::format_double(fit.radii[i]) << ',' << fit.counts[i] << '\n';
    }
    return kExitOk;
}

struct BenchArgs {
    std::vector<std::size_t> cost_model;
    bool scaling = false;
    std::size_t repeats = 3;
};

EmbeddingSet gaussian_rows(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::normal_distribution<double> normal;
    std::vector<double> data(n * d);
    for (double& x : data) x = normal(rng);
    return EmbeddingSet(n, d, std::move(data));
}

int cmd_bench(const BenchArgs& a) {
    if (!a.cost_model.empty() == a.scaling) {
        throw Error(ErrorCode::InvalidArgument, "pass exactly one of --cost-model N L K d or --scaling");
    }
    if (!a.cost_model.empty()) {
        const auto& m = a.cost_model;
        const auto r = cost_model(m[0], m[1], m[2], m[3]);
        print_kv("N", m[0]);
        print_kv("L", m[1]);
        print_kv("K", m[2]);
        print_kv("d", m[3]);
        print_kv("flops_hausdorff", r.flops_hausdorff);
        print_kv("flops_mob", r.flops_mob);
        print_kv("tflops_hausdorff", r.tflops_hausdorff());
        print_kv("tflops_mob", r.tflops_mob());
        return kExitOk;
    }
    if (a.repeats < 1) throw Error(ErrorCode::InvalidArgument, "--repeats must be >= 1");
    constexpr std::size_t kL = 16, kK = 128, kD = 256;
    std::mt19937_64 rng(0);
    const auto prompt = gaussian_rows(rng, kL, kD);
    double last_ms = 0.0;
    for (std::size_t n : {4096u, 8192u, 16384u}) {
        const auto visual = gaussian_rows(rng, n, kD);
        double best = 0.0;
        for (std::size_t r = 0; r < a.repeats; ++r) {
            const auto start = std::chrono::steady_clock::now();
            const auto sel = mob_prune(visual, prompt, PruneConfig{kK, kK / 4, 1, std::nullopt});
            const auto stop = std::chrono::steady_clock::now();
            const double ms = std::chrono::duration<double, std::milli>(stop - start).count();
            if (r == 0 || ms < best) best = ms;
            if (sel.retained().size() != kK) throw Error(ErrorCode::InvalidArgument, "unexpected selection size");
        }
        char line[128];
        if (last_ms > 0.0) {
            std::snprintf(line, sizeof line, "N=%zu ms=%.3f ratio=%.3f", n, best, best / last_ms);
        } else {
            std::snprintf(line, sizeof line, "N=%zu ms=%.3f", n, best);
        }
        std::cout << line << '\n';
        last_ms = best;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prompt-aware subset selection over embedding sets", "mob"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(MOB_VERSION));
    std::size_t threads = 1;
    app.add_option("--threads", threads, "Worker threads for sweep")
        ->envname("MOB_THREADS")
        ->check(CLI::PositiveNumber);

    PruneArgs prune;
    auto* p = app.add_subcommand("prune", "Select K visual rows for a prompt and write a selection document");
    p->add_option("--visual", prune.visual, "Visual embeddings (.mobe or .csv)")->required();
    p->add_option("--prompt", prune.prompt, "Prompt embeddings (.mobe or .csv)")->required();
    p->add_option("--budget", prune.budget, "Total number of retained rows K")->required();
    auto* kp_opt = p->add_option("--kp", prune.kp, "Prompt-center budget K_p");
    p->add_option("--fold", prune.fold, "Neighbours per prompt row k")->capture_default_str();
    auto* prior_opt = p->add_option("--eta-prior", prune.eta_prior, "Coupling prior: strong or weak");
    p->add_option("--tier", prune.tier, "Budget tier: high, mid or low")->needs(prior_opt);
    kp_opt->excludes(prior_opt);
    p->add_option("--out", prune.out, "Selection document to write (JSON)")->required();

    CouplingArgs coup;
    auto* c = app.add_subcommand("coupling", "Measure the Hausdorff coupling between visual and prompt sets");
    c->add_option("--visual", coup.visual, "Visual embeddings")->required();
    c->add_option("--prompt", coup.prompt, "Prompt embeddings")->required();
    c->add_option("--metric", coup.metric, "raw or normalized")->capture_default_str();
    c->add_option("--tau", coup.tau, "Strong/weak threshold; omit to leave the pair unclassified");

    CalibrateArgs cal;
    auto* k = app.add_subcommand("calibrate", "Fit a strong/weak threshold to a sample of coupling values");
    k->add_option("values", cal.values, "Coupling values");
    k->add_option("--file", cal.file, "Whitespace-separated coupling values");

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "Evaluate radii and bounds over a (K, K_p, k, seed) grid");
    s->add_option("--visual", sw.visual, "Visual embeddings, repeatable; paired with --prompt in order")->allow_extra_args(false);
    s->add_option("--prompt", sw.prompt, "Prompt embeddings, repeatable")->allow_extra_args(false);
    s->add_option("--gen", sw.gen, "Generated input, e.g. manifold=grid2d,nv=256,np=16,d=16,eta=0.3; repeatable")->allow_extra_args(false);
    s->add_option("--budgets", sw.budgets, "Budgets K")->required()->delimiter(',');
    s->add_option("--kp", sw.kp, "K_p values: counts, or fractions of K written with a '.'")->required()->delimiter(',');
    s->add_option("--folds", sw.folds, "Fold values k")->delimiter(',')->capture_default_str();
    s->add_option("--seeds", sw.seeds, "Generator seeds")->delimiter(',')->capture_default_str();
    s->add_option("--out", sw.out, "CSV path; standard output when omitted");
    s->add_option("--C", sw.C, "Lipschitz constant")->capture_default_str();
    auto* fit_flag = s->add_flag("--fit", sw.fit, "Fit d_eff, a, a', b, b' and z per input");
    for (auto [name, slot] : {std::pair{"--d-eff", &sw.d_eff}, {"--a", &sw.a}, {"--a-prime", &sw.a_prime},
                              {"--b", &sw.b}, {"--b-prime", &sw.b_prime}, {"--z", &sw.z}}) {
        s->add_option(name, *slot, "Fixed bound constant")->excludes(fit_flag);
    }

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate a synthetic visual/prompt pair");
    g->add_option("--manifold", gen.manifold, "grid2d, circle or clusters:<c>")->capture_default_str();
    g->add_option("--nv", gen.spec.n_visual, "Visual rows")->capture_default_str();
    g->add_option("--np", gen.spec.n_prompt, "Prompt rows")->capture_default_str();
    g->add_option("--dim", gen.spec.ambient_dim, "Ambient dimension")->capture_default_str();
    g->add_option("--eta", gen.spec.eta_target, "Target coupling")->capture_default_str();
    g->add_option("--seed", gen.spec.seed, "Generator seed")->capture_default_str();
    g->add_option("--visual-out", gen.visual_out, "Visual output path (.csv for text)")->required();
    g->add_option("--prompt-out", gen.prompt_out, "Prompt output path (.csv for text)")->required();
    g->add_option("--dtype", gen.dtype, "MOBE scalar type: f32 or f64")->capture_default_str();

    FitArgs fit;
    auto* f = app.add_subcommand("fit-dim", "Estimate effective covering dimension by log-log regression");
    f->add_option("--input", fit.input, "Embeddings")->required();
    f->add_option("--metric", fit.metric, "raw or normalized")->capture_default_str();
    f->add_option("--eps-min", fit.eps_min, "Smallest radius (default 0.05 x diameter)");
    f->add_option("--eps-max", fit.eps_max, "Largest radius (default 0.5 x diameter)");
    f->add_option("--radii", fit.radii, "Number of log-spaced radii")->capture_default_str();

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Cost model or wall-clock scaling of the selector");
    b->add_option("--cost-model", bench.cost_model, "N L K d")->expected(4);
    b->add_flag("--scaling", bench.scaling, "Time N = 4096, 8192, 16384 at L=16, K=128, d=256");
    b->add_option("--repeats", bench.repeats, "Timing repeats per size (minimum is reported)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const auto chosen = app.get_subcommands();
        std::cerr << (chosen.empty() ? app.help() : chosen.front()->help());
        return kExitUsage;
    }

    try {
        if (p->parsed()) return cmd_prune(prune);
        if (c->parsed()) return cmd_coupling(coup);
        if (k->parsed()) return cmd_calibrate(cal);
        if (s->parsed()) return cmd_sweep(sw, threads);
        if (g->parsed()) return cmd_gen(gen);
        if (f->parsed()) return cmd_fit_dim(fit);
        if (b->parsed()) return cmd_bench(bench);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_io() ? kExitIo : kExitUsage;
    }
    return kExitUsage;
}
