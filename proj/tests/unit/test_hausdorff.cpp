#include <cmath>
#include <random>

#include "doctest.h"
#include "mob/hausdorff.hpp"
#include "support/brute_force.hpp"

using namespace mob;
using namespace mob::testing;

TEST_CASE("directed Hausdorff trivial geometry") {
    const auto a = EmbeddingSet::from_rows({{0, 0}, {1, 0}});
    const auto b = EmbeddingSet::from_rows({{0, 0}});
    CHECK(directed_hausdorff(a, b, Metric::RawEuclidean) == 1.0);
    CHECK(directed_hausdorff(b, a, Metric::RawEuclidean) == 0.0);
    CHECK(directed_hausdorff(a, a, Metric::RawEuclidean) == 0.0);

    std::mt19937_64 rng(3);
    const auto r = random_set(rng, 9, 4);
    CHECK(directed_hausdorff(r, r, Metric::NormalizedEuclidean) == 0.0);
    CHECK(hausdorff(r, r, Metric::RawEuclidean) == 0.0);
}

TEST_CASE("directed Hausdorff errors") {
    const auto a = EmbeddingSet::from_rows({{0, 0}});
    const auto b = EmbeddingSet::from_rows({{0, 0, 1}});
    CHECK_THROWS_AS(directed_hausdorff(a, b), Error);
    const std::vector<std::size_t> none;
    try {
        (void)directed_hausdorff_to_subset(a, a, none);
        FAIL("expected EmptySet");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptySet);
    }
}

TEST_CASE("directed Hausdorff matches the double-loop oracle on 200 random pairs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = uniform_int(rng, 1, 8);
        const auto a = random_set(rng, uniform_int(rng, 1, 64), d);
        const auto b = random_set(rng, uniform_int(rng, 1, 64), d);
        const double raw = directed_hausdorff(a, b, Metric::RawEuclidean);
        const double raw_ref = brute_directed(rows_of(a), rows_of(b));
        CHECK(std::abs(raw - raw_ref) <= 1e-9 * std::max(1.0, raw_ref));
        const double nrm = directed_hausdorff(a, b, Metric::NormalizedEuclidean);
        const double nrm_ref = brute_directed(unit(rows_of(a)), unit(rows_of(b)));
        CHECK(std::abs(nrm - nrm_ref) <= 1e-9 * std::max(1.0, nrm_ref));
    }
}

TEST_CASE("coupling report") {
    const auto v = EmbeddingSet::from_rows({{0, 0}, {1, 0}});
    const auto p = EmbeddingSet::from_rows({{0, 0}});
    const auto r = coupling(v, p, Metric::RawEuclidean);
    CHECK(r.h_v_to_p == 1.0);
    CHECK(r.h_p_to_v == 0.0);
    CHECK(r.eta == 1.0);
    CHECK(r.classification == CouplingClass::Unclassified);

    const auto same = coupling(v, v, Metric::RawEuclidean, CalibrationConfig{1e-6});
    CHECK(same.eta == 0.0);
    CHECK(same.classification == CouplingClass::Strong);

    CHECK(coupling(v, p, Metric::RawEuclidean, CalibrationConfig{1.0}).classification == CouplingClass::Strong);
    CHECK(coupling(v, p, Metric::RawEuclidean, CalibrationConfig{0.99}).classification == CouplingClass::Weak);
    CHECK_THROWS_AS(coupling(v, p, Metric::RawEuclidean, CalibrationConfig{0.0}), Error);
}

TEST_CASE("coupling eta matches the symmetric brute-force Hausdorff and is symmetric") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = uniform_int(rng, 1, 8);
        const auto v = random_set(rng, uniform_int(rng, 1, 40), d);
        const auto p = random_set(rng, uniform_int(rng, 1, 10), d);
        const auto r = coupling(v, p, Metric::RawEuclidean);
        const double ref = brute_hausdorff(rows_of(v), rows_of(p));
        CHECK(std::abs(r.eta - ref) <= 1e-9 * std::max(1.0, ref));
        CHECK(r.eta == std::max(r.h_v_to_p, r.h_p_to_v));
        CHECK(r.eta == coupling(p, v, Metric::RawEuclidean).eta);
        CHECK(coupling(v, p).eta == coupling(p, v).eta);
    }
}

TEST_CASE("Hausdorff metric properties on random triples") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = uniform_int(rng, 1, 6);
        const auto a = random_set(rng, uniform_int(rng, 1, 12), d);
        const auto b = random_set(rng, uniform_int(rng, 1, 12), d);
        const auto c = random_set(rng, uniform_int(rng, 1, 12), d);
        for (Metric m : {Metric::RawEuclidean, Metric::NormalizedEuclidean}) {
            CHECK(hausdorff(a, c, m) <= hausdorff(a, b, m) + hausdorff(b, c, m) + 1e-9);
        }
        // Growing the target set can only shrink the directed distance.
        std::vector<double> grown(b.data().begin(), b.data().end());
        grown.insert(grown.end(), c.data().begin(), c.data().end());
        const EmbeddingSet bigger(b.rows() + c.rows(), d, grown);
        CHECK(directed_hausdorff(a, bigger, Metric::RawEuclidean) <= directed_hausdorff(a, b, Metric::RawEuclidean));
    }
}

TEST_CASE("zero Hausdorff distance means the point sets coincide") {
    const auto a = EmbeddingSet::from_rows({{1, 2}, {3, 4}, {1, 2}});
    const auto b = EmbeddingSet::from_rows({{3, 4}, {1, 2}});
    CHECK(hausdorff(a, b, Metric::RawEuclidean) == 0.0);
    const auto c = EmbeddingSet::from_rows({{3, 4}, {1, 2.0000001}});
    CHECK(hausdorff(a, c, Metric::RawEuclidean) > 0.0);
}

TEST_CASE("calibrate_tau") {
    const std::vector<double> two_modes{0.1, 0.12, 0.9, 0.92};
    const auto cfg = calibrate_tau(two_modes);
    CHECK(cfg.tau == doctest::Approx(0.51).epsilon(1e-12));
    CHECK(cfg.source == TauSource::Calibrated);

    const std::vector<double> flat{1, 1, 1, 1};
    try {
        (void)calibrate_tau(flat);
        FAIL("expected DegenerateSample");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateSample);
    }
    const std::vector<double> few{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(calibrate_tau(few), Error);
    const std::vector<double> negative{-0.1, 0.2, 0.3, 0.9};
    CHECK_THROWS_AS(calibrate_tau(negative), Error);
}

TEST_CASE("calibrate_tau agrees with exhaustive split enumeration on bimodal samples") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::normal_distribution<double> low(0.3, 0.04), high(1.2, 0.06);
        std::vector<double> xs;
        for (int i = 0; i < 50; ++i) xs.push_back(std::max(0.0, low(rng)));
        for (int i = 0; i < 50; ++i) xs.push_back(high(rng));
        const double low_max = *std::max_element(xs.begin(), xs.begin() + 50);
        const double high_min = *std::min_element(xs.begin() + 50, xs.end());
        const double tau = calibrate_tau(xs).tau;
        CHECK(tau > low_max);
        CHECK(tau < high_min);
        CHECK(tau == doctest::Approx(exhaustive_split_tau(xs)).epsilon(1e-12));
    }
}

TEST_CASE("metric names") {
    CHECK(parse_metric("raw") == Metric::RawEuclidean);
    CHECK(parse_metric("normalized") == Metric::NormalizedEuclidean);
    CHECK_THROWS_AS(parse_metric("cosine"), Error);
}
