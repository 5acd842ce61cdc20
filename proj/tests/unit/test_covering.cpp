#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "mob/covering.hpp"
#include "mob/oracle.hpp"
#include "support/brute_force.hpp"

using namespace mob;
using namespace mob::testing;

TEST_CASE("k-fold NN cover picks the unique nearest neighbour") {
    const auto v = at_angles({0.0, 90.0, 180.0});
    const auto p = EmbeddingSet::from_rows({{1.0, 0.0}});
    const auto r = kfold_nn_cover(v, p, 1, 1);
    CHECK(r.selected == IndexList{0});
    CHECK(r.candidate_count == 1);
    CHECK(r.shortfall == 0);
}

TEST_CASE("k-fold NN cover reports a shortfall when candidates run out") {
    const auto v = at_angles({0.0, 45.0, 90.0, 180.0});
    const auto p = at_angles({1.0, 2.0});  // both prompts share the same nearest row
    const auto r = kfold_nn_cover(v, p, 1, 3);
    CHECK(r.candidate_count == 1);
    CHECK(r.selected == IndexList{0});
    CHECK(r.shortfall == 2);
}

TEST_CASE("k-fold NN cover with full retention reproduces the prompt-to-visual radius") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = uniform_int(rng, 2, 8);
        const auto v = random_set(rng, uniform_int(rng, 4, 40), d);
        const auto p = random_set(rng, uniform_int(rng, 1, 6), d);
        const std::size_t k = uniform_int(rng, 1, 3);
        const auto all = kfold_nn_cover(v, p, k, v.rows());
        CHECK(all.selected.size() == all.candidate_count);
        CHECK(directed_hausdorff_to_subset(p, v, all.selected) == directed_hausdorff(p, v));
    }
}

TEST_CASE("k-fold NN cover matches the reference transcription index-for-index") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = uniform_int(rng, 2, 8);
        const auto v = random_set(rng, uniform_int(rng, 4, 40), d);
        const auto p = random_set(rng, uniform_int(rng, 1, 6), d);
        const std::size_t k = uniform_int(rng, 1, 3);
        const std::size_t kp = uniform_int(rng, 1, v.rows());
        const auto got = kfold_nn_cover(v, p, k, kp);
        const auto ref = oracle::reference_mob(v, p, PruneConfig{kp, kp, k, std::nullopt});
        CHECK(got.selected == ref.prompt_centers);
        CHECK(got.shortfall == ref.shortfall_reassigned);
    }
}

TEST_CASE("FPS forced ordering") {
    const auto v = at_angles({0.0, 90.0, 180.0});
    const auto r = fps_select(v, {0}, 2);
    CHECK(r.selected == IndexList{2, 1});
    CHECK(r.gaps[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r.gaps[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.eps_v == 0.0);
}

TEST_CASE("FPS with the whole remaining budget returns every row") {
    std::mt19937_64 rng(8);
    const auto v = random_set(rng, 10, 4);
    const auto r = fps_select(v, {3, 7}, 8);
    std::set<std::size_t> all(r.selected.begin(), r.selected.end());
    all.insert(3);
    all.insert(7);
    CHECK(all.size() == 10);
    CHECK(r.eps_v == 0.0);
    try {
        (void)fps_select(v, {3, 7}, 9);
        FAIL("expected BudgetExceedsPopulation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceedsPopulation);
    }
}

TEST_CASE("FPS empty seed starts farthest from the mean direction") {
    // Mean direction is roughly +x; the 170 degree row is the farthest from it.
    const auto v = at_angles({0.0, 10.0, -10.0, 20.0, 170.0});
    const auto r = fps_select(v, {}, 1);
    CHECK(r.selected == IndexList{4});
}

TEST_CASE("FPS is a 2-approximation of the optimal k-center radius") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = uniform_int(rng, 2, 12);
        const std::size_t budget = uniform_int(rng, 1, std::min<std::size_t>(4, n));
        const auto v = random_set(rng, n, uniform_int(rng, 2, 6));
        const double fps = fps_select(v, {}, budget).eps_v;
        const double opt = oracle::optimal_kcenter_radius(v, budget, Metric::NormalizedEuclidean);
        CHECK(fps <= 2.0 * opt + 1e-12);
    }
}

TEST_CASE("FPS gap sequence is non-increasing and the next gap is the current radius") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto v = random_set(rng, uniform_int(rng, 10, 60), uniform_int(rng, 2, 8));
        const IndexList seed{uniform_int(rng, 0, v.rows() - 1)};
        const std::size_t budget = uniform_int(rng, 1, v.rows() - 2);
        const auto longer = fps_select(v, seed, budget + 1);
        for (std::size_t i = 1; i < longer.gaps.size(); ++i) {
            CHECK(longer.gaps[i] <= longer.gaps[i - 1]);
        }
        const auto shorter = fps_select(v, seed, budget);
        CHECK(std::abs(euclid_from_cos(1.0 - longer.gaps.back()) - shorter.eps_v) <= 1e-9);
        CHECK(shorter.eps_v >= longer.eps_v);
    }
}

TEST_CASE("budget heuristic tables") {
    auto check = [](std::size_t k, CouplingClass c, BudgetTier t, std::size_t kp, std::size_t fold) {
        const auto s = budget_heuristic(k, c, t);
        CHECK(s.budget_Kp == kp);
        CHECK(s.fold_k == fold);
    };
    check(64, CouplingClass::Weak, BudgetTier::High, 32, 4);
    check(192, CouplingClass::Weak, BudgetTier::Low, 80, 10);
    check(64, CouplingClass::Strong, BudgetTier::High, 24, 2);
    check(128, CouplingClass::Weak, BudgetTier::Mid, 56, 7);
    check(128, CouplingClass::Strong, BudgetTier::Mid, 32, 2);     // 2.4 -> 2
    check(192, CouplingClass::Strong, BudgetTier::Low, 48, 4);     // 3.6 -> 4
    check(320, CouplingClass::Strong, BudgetTier::High, 120, 9);   // 9.0
    check(8, CouplingClass::Strong, BudgetTier::Low, 2, 1);        // 0.15 -> clamped to 1
    check(100, CouplingClass::Weak, BudgetTier::High, 50, 6);      // 6.25 -> 6
    check(20, CouplingClass::Weak, BudgetTier::High, 10, 1);       // 1.25 -> 1
    check(12, CouplingClass::Weak, BudgetTier::Low, 5, 1);         // 0.625 -> 1

    const auto cfg = config_from_prior(64, CouplingClass::Weak, BudgetTier::High);
    CHECK(cfg.eta_prior.has_value());
    CHECK(cfg.budget_Kp == 32);

    try {
        (void)budget_heuristic(7, CouplingClass::Weak, BudgetTier::High);
        FAIL("expected BudgetTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetTooSmall);
    }
    CHECK_THROWS_AS(budget_heuristic(64, CouplingClass::Unclassified, BudgetTier::High), Error);
}

TEST_CASE("mob_prune degenerate budgets") {
    std::mt19937_64 rng(9);
    const auto v = random_set(rng, 20, 5);
    const auto p = random_set(rng, 3, 5);

    const auto everything = mob_prune(v, p, PruneConfig{20, 4, 2, std::nullopt});
    auto all = everything.retained();
    std::sort(all.begin(), all.end());
    CHECK(all.size() == 20);
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
    CHECK(everything.eps_v == 0.0);

    const auto over = mob_prune(v, p, PruneConfig{50, 10, 2, std::nullopt});
    CHECK(over.retained().size() == 20);
    CHECK(over.eps_v == 0.0);

    const auto pure = mob_prune(v, p, PruneConfig{6, 0, 1, std::nullopt});
    CHECK(pure.prompt_centers.empty());
    CHECK(pure.visual_centers == fps_select(normalize(v), {}, 6).selected);
    CHECK(std::isinf(pure.eps_p_directed));

    CHECK_THROWS_AS(mob_prune(v, p, PruneConfig{4, 5, 1, std::nullopt}), Error);
    CHECK_THROWS_AS(mob_prune(v, p, PruneConfig{4, 2, 0, std::nullopt}), Error);
    CHECK_THROWS_AS(mob_prune(v, random_set(rng, 2, 4), PruneConfig{4, 2, 1, std::nullopt}), Error);
}

TEST_CASE("mob_prune result invariants and reference equivalence") {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = uniform_int(rng, 2, 8);
        const std::size_t n = uniform_int(rng, 8, 48);
        const auto v = random_set(rng, n, d);
        const auto p = random_set(rng, uniform_int(rng, 1, 8), d);
        const std::size_t budget = uniform_int(rng, 1, n);
        const std::size_t kp = uniform_int(rng, 0, budget);
        const PruneConfig cfg{budget, kp, uniform_int(rng, 1, 4), std::nullopt};

        const auto got = mob_prune(v, p, cfg);
        const auto ref = oracle::reference_mob(v, p, cfg);
        CHECK(got.prompt_centers == ref.prompt_centers);
        CHECK(got.visual_centers == ref.visual_centers);
        CHECK(got.shortfall_reassigned == ref.shortfall_reassigned);
        CHECK(got.eps_v == doctest::Approx(ref.eps_v).epsilon(1e-12));
        CHECK(got.eta == doctest::Approx(ref.eta).epsilon(1e-12));
        if (!got.prompt_centers.empty()) {
            CHECK(got.eps_p_directed == doctest::Approx(ref.eps_p_directed).epsilon(1e-12));
            CHECK(got.eps_p_symmetric == doctest::Approx(ref.eps_p_symmetric).epsilon(1e-12));
            CHECK(got.eps_p_directed <= got.eps_p_symmetric);
        }

        auto all = got.retained();
        CHECK(all.size() == std::min(budget, n));
        std::sort(all.begin(), all.end());
        CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
        CHECK(got.prompt_centers.size() + got.shortfall_reassigned == kp);
        CHECK(got.eps_v == directed_hausdorff_to_subset(v, v, got.retained()));

        CHECK(mob_prune(v, p, cfg) == got);
    }
}

TEST_CASE("prompt radius is monotone over the ranked candidate list") {
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = uniform_int(rng, 2, 8);
        const auto v = normalize(random_set(rng, uniform_int(rng, 10, 48), d));
        const auto p = normalize(random_set(rng, uniform_int(rng, 1, 8), d));
        const auto ranked = kfold_candidates(v, p, uniform_int(rng, 1, 4));
        double previous = std::numeric_limits<double>::infinity();
        for (std::size_t m = 1; m <= ranked.size(); ++m) {
            const std::span<const std::size_t> prefix(ranked.data(), m);
            const double radius = directed_hausdorff_to_subset(p, v, prefix);
            CHECK(radius <= previous);
            previous = radius;
        }
    }
}

TEST_CASE("complete candidate retention bounds the prompt radius by eta") {
    std::mt19937_64 rng(707);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = uniform_int(rng, 2, 8);
        const auto v = random_set(rng, uniform_int(rng, 10, 48), d);
        const auto p = random_set(rng, uniform_int(rng, 1, 8), d);
        const std::size_t candidates = kfold_candidates(v, p, 1).size();
        const auto r = mob_prune(v, p, PruneConfig{v.rows(), candidates, 1, std::nullopt});
        CHECK(r.eps_p_directed == directed_hausdorff(p, v));
        CHECK(r.eps_p_directed <= r.eta);
    }
}
