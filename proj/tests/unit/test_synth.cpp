#include <cmath>
#include <random>

#include "doctest.h"
#include "mob/oracle.hpp"
#include "mob/synth.hpp"
#include "support/brute_force.hpp"

using namespace mob;
using namespace mob::testing;

namespace {

double measured(const synth::Generated& g) {
    return brute_hausdorff(unit(rows_of(g.visual)), unit(rows_of(g.prompt)));
}

}  // namespace

TEST_CASE("manifold names round-trip") {
    for (const char* name : {"grid2d", "circle", "clusters:3"}) {
        CHECK(synth::to_string(synth::parse_manifold(name)) == name);
    }
    CHECK_THROWS_AS(synth::parse_manifold("torus"), Error);
    CHECK_THROWS_AS(synth::parse_manifold("clusters:0"), Error);
}

TEST_CASE("zero coupling target with a full prompt reproduces the visual set") {
    synth::GenSpec spec;
    spec.n_visual = 32;
    spec.n_prompt = 32;
    spec.ambient_dim = 8;
    spec.manifold = synth::parse_manifold("circle");
    spec.eta_target = 0.0;
    const auto g = synth::generate(spec);
    CHECK(g.measured_eta <= 1e-12);
    CHECK(measured(g) <= 1e-12);
}

TEST_CASE("generation is bit-identical for a fixed seed") {
    synth::GenSpec spec;
    spec.manifold = synth::parse_manifold("clusters:4");
    spec.eta_target = synth::kWeakCouplingEta;
    spec.seed = 1234;
    const auto a = synth::generate(spec);
    const auto b = synth::generate(spec);
    CHECK(a.visual == b.visual);
    CHECK(a.prompt == b.prompt);
    CHECK(a.measured_eta == b.measured_eta);
    spec.seed = 1235;
    const auto c = synth::generate(spec);
    CHECK_FALSE(a.visual == c.visual);
}

TEST_CASE("measured coupling lands within 15% of the target") {
    std::mt19937_64 rng(107);
    const char* kinds[] = {"grid2d", "circle", "clusters:3"};
    int generated = 0;
    for (int trial = 0; trial < 30; ++trial) {
        synth::GenSpec spec;
        spec.manifold = synth::parse_manifold(kinds[trial % 3]);
        spec.n_visual = uniform_int(rng, 64, 256);
        spec.n_prompt = uniform_int(rng, 8, 24);
        spec.ambient_dim = uniform_int(rng, 6, 24);
        spec.eta_target = std::uniform_real_distribution<double>(0.4, 1.3)(rng);
        spec.seed = rng();
        CAPTURE(spec.eta_target);
        try {
            const auto g = synth::generate(spec);
            const double eta = measured(g);
            CHECK(std::abs(eta - spec.eta_target) <= 0.15 * spec.eta_target);
            CHECK(std::abs(eta - g.measured_eta) <= 1e-9);
            CHECK(g.visual.rows() == spec.n_visual);
            CHECK(g.prompt.rows() == spec.n_prompt);
            CHECK(g.visual.dim() == spec.ambient_dim);
            ++generated;
        } catch (const Error& e) {
            // Too few prompt rows to cover the manifold is the one allowed refusal.
            CHECK(e.code() == ErrorCode::InfeasibleEta);
        }
    }
    MESSAGE(generated, " of 30 specs generated");
    CHECK(generated >= 20);
}

TEST_CASE("the default regimes are feasible") {
    for (double eta : {synth::kStrongCouplingEta, synth::kWeakCouplingEta}) {
        synth::GenSpec spec;
        spec.eta_target = eta;
        const auto g = synth::generate(spec);
        CHECK(std::abs(g.measured_eta - eta) <= 0.15 * eta);
    }
}

TEST_CASE("unreachable coupling targets are refused") {
    synth::GenSpec spec;
    spec.eta_target = 1.5;
    try {
        synth::generate(spec);
        FAIL("expected InfeasibleEta");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InfeasibleEta);
    }
    spec.eta_target = 0.3;
    spec.ambient_dim = 3;
    CHECK_THROWS_AS(synth::generate(spec), Error);
    spec.ambient_dim = 16;
    spec.n_prompt = 0;
    CHECK_THROWS_AS(synth::generate(spec), Error);
}

TEST_CASE("grid rows carry a two-dimensional covering profile") {
    synth::GenSpec spec;
    spec.n_visual = 400;
    spec.n_prompt = 16;
    spec.ambient_dim = 12;
    spec.eta_target = synth::kWeakCouplingEta;
    spec.seed = 9;
    const auto g = synth::generate(spec);
    const auto fit = oracle::fit_effective_dimension(g.visual);
    CHECK(fit.d_eff_hat > 1.6);
    CHECK(fit.d_eff_hat < 2.3);
    CHECK(fit.r2 >= 0.9);
}
