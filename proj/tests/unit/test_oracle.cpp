#include <cmath>
#include <random>

#include "doctest.h"
#include "mob/hausdorff.hpp"
#include "mob/oracle.hpp"
#include "mob/synth.hpp"
#include "support/brute_force.hpp"

using namespace mob;
using namespace mob::testing;

TEST_CASE("cover counts on a segment of five points") {
    const auto s = EmbeddingSet::from_rows({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}});
    CHECK(oracle::greedy_cover_count(s, 10.0) == 1);
    CHECK(oracle::exact_cover_count(s, 10.0) == 1);
    CHECK(oracle::greedy_cover_count(s, 0.5) == 5);
    CHECK(oracle::exact_cover_count(s, 0.5) == 5);
    CHECK(oracle::exact_cover_count(s, 1.0) == 2);
    CHECK(oracle::exact_cover_count(s, 2.0) == 1);
    // Greedy starts from index 0 and wastes a center on the left end.
    CHECK(oracle::greedy_cover_count(s, 2.0) == 2);
}

TEST_CASE("exact cover never exceeds greedy and both really cover") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = random_set(rng, uniform_int(rng, 2, 12), uniform_int(rng, 2, 5));
        const double diam = oracle::diameter(s);
        for (double frac : {0.1, 0.3, 0.6}) {
            const double eps = frac * diam;
            const auto g = oracle::greedy_cover(s, eps);
            const auto e = oracle::exact_cover(s, eps);
            CHECK(e.size() <= g.size());
            CHECK(oracle::covers(s, g, eps));
            CHECK(oracle::covers(s, e, eps));
        }
    }
}

TEST_CASE("cover counts are non-increasing in the radius") {
    std::mt19937_64 rng(73);
    const auto s = random_set(rng, 12, 3);
    std::size_t last_g = s.rows() + 1, last_e = s.rows() + 1;
    for (double eps = 0.05; eps < 6.0; eps *= 1.4) {
        const std::size_t g = oracle::greedy_cover_count(s, eps);
        const std::size_t e = oracle::exact_cover_count(s, eps);
        CHECK(g <= last_g);
        CHECK(e <= last_e);
        last_g = g;
        last_e = e;
    }
}

TEST_CASE("cover oracles reject bad input") {
    std::mt19937_64 rng(79);
    const auto big = random_set(rng, 17, 2);
    CHECK_THROWS_AS(oracle::exact_cover_count(big, 1.0), Error);
    CHECK_THROWS_AS(oracle::greedy_cover_count(big, 0.0), Error);
    CHECK_THROWS_AS(oracle::optimal_kcenter_radius(random_set(rng, 13, 2), 2), Error);
    try {
        oracle::exact_cover_count(big, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooLarge);
    }
}

TEST_CASE("optimal k-center examples") {
    const auto anti = at_angles({0.0, 180.0});
    CHECK(oracle::optimal_kcenter_radius(anti, 1) == doctest::Approx(2.0));
    CHECK(oracle::optimal_kcenter_radius(anti, 2) == 0.0);
    std::mt19937_64 rng(83);
    const auto s = random_set(rng, 9, 4);
    CHECK(oracle::optimal_kcenter_radius(s, 9) == 0.0);
}

TEST_CASE("optimal k-center radius is non-increasing in the budget") {
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = random_set(rng, uniform_int(rng, 3, 10), uniform_int(rng, 2, 5));
        double last = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k <= s.rows(); ++k) {
            const double r = oracle::optimal_kcenter_radius(s, k);
            CHECK(r <= last + 1e-15);
            last = r;
        }
    }
}

TEST_CASE("dimension fit on a planar grid") {
    // 32x32 grid in the plane spanned by the first two axes of R^16.
    std::vector<std::vector<double>> rows;
    for (int r = 0; r < 32; ++r) {
        for (int c = 0; c < 32; ++c) {
            std::vector<double> x(16, 0.0);
            x[0] = r / 31.0;
            x[1] = c / 31.0;
            rows.push_back(x);
        }
    }
    const auto fit = oracle::fit_effective_dimension(EmbeddingSet::from_rows(rows));
    CHECK(fit.r2 >= 0.9);
    CHECK(fit.a_lower <= fit.b_upper);
    CHECK(fit.a_lower > 0.0);
    // Greedy counts on a bounded patch carry a perimeter term that pulls the
    // slope below 2 over the default window (about 1.66 here).
    CHECK(fit.d_eff_hat > 1.6);
    CHECK(fit.d_eff_hat < 2.3);
}

TEST_CASE("dimension fit recovers a circle") {
    synth::GenSpec spec;
    spec.n_visual = 256;
    spec.n_prompt = 16;
    spec.ambient_dim = 8;
    spec.manifold = synth::parse_manifold("circle");
    spec.eta_target = synth::kWeakCouplingEta;
    spec.seed = 6;
    const auto g = synth::generate(spec);
    const auto fit = oracle::fit_effective_dimension(g.visual);
    CHECK(fit.d_eff_hat >= 0.8);
    CHECK(fit.d_eff_hat <= 1.2);
    CHECK(fit.r2 >= 0.9);
}

TEST_CASE("dimension fit refuses degenerate input") {
    const auto one = EmbeddingSet::from_rows({{1.0, 2.0, 3.0}});
    try {
        oracle::fit_effective_dimension(one);
        FAIL("expected DegenerateFit");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateFit);
    }
    std::mt19937_64 rng(97);
    const auto s = random_set(rng, 20, 3);
    CHECK_THROWS_AS(oracle::fit_effective_dimension(s, oracle::RadiusWindow{0.0, 1.0}), Error);
    CHECK_THROWS_AS(oracle::fit_effective_dimension(s, oracle::RadiusWindow{1.0, 0.5}), Error);
    CHECK_THROWS_AS(oracle::fit_effective_dimension(s, std::nullopt, 3), Error);
}

TEST_CASE("reference coupling agrees with the fast path") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = uniform_int(rng, 2, 10);
        const auto v = random_set(rng, uniform_int(rng, 1, 30), d);
        const auto p = random_set(rng, uniform_int(rng, 1, 10), d);
        for (Metric m : {Metric::RawEuclidean, Metric::NormalizedEuclidean}) {
            const auto fast = coupling(v, p, m);
            const auto ref = oracle::reference_coupling(v, p, m);
            CHECK(std::abs(fast.h_v_to_p - ref.h_v_to_p) <= 1e-9);
            CHECK(std::abs(fast.h_p_to_v - ref.h_p_to_v) <= 1e-9);
            CHECK(std::abs(fast.eta - ref.eta) <= 1e-9);
        }
    }
}
