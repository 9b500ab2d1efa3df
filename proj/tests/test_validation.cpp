#include "doctest.h"

#include "maplabel/model.hpp"
#include "maplabel/validation.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace maplabel;

TEST_CASE("weights are normalized and symmetric") {
    for (std::size_t T : {std::size_t{10}, std::size_t{100}, std::size_t{1000}}) {
        const std::vector<double> w = birkhoff_weights(T);
        REQUIRE(w.size() == T);
        // Tail weights may underflow to exactly zero for large T; they must
        // never be negative.
        long double total = 0.0L;
        for (double v : w) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(std::abs(static_cast<double>(total - 1.0L)) <= 1e-15);
        for (std::size_t t = 0; t < T; ++t) CHECK(w[t] == w[T - 1 - t]);
    }
    // Odd length: the midpoint pairs with itself.
    const std::vector<double> odd = birkhoff_weights(99);
    for (std::size_t t = 0; t < 99; ++t) CHECK(odd[t] == odd[98 - t]);
    CHECK_THROWS_AS(birkhoff_weights(0), ConfigError);
}

TEST_CASE("weights peak in the middle and vanish toward the ends") {
    const std::vector<double> w = birkhoff_weights(101);
    for (std::size_t t = 0; t < 50; ++t) CHECK(w[t] < w[t + 1]);
    CHECK(w[0] < 1e-15 * w[50]);
}

TEST_CASE("trajectory averages of simple observables") {
    const MapSpec map = MapSpec::standard(0.3);
    const State x0{0.2, 0.4};

    SUBCASE("length one returns the observable at the start point") {
        const double got = weighted_birkhoff(
            map, [](const State& p) { return p.x * 7.0 + p.y; }, x0, {.T = 1});
        CHECK(got == 0.2 * 7.0 + 0.4);
    }

    SUBCASE("constant observables average to the constant") {
        for (double c : {1.0, 0.7, -3.25}) {
            const double got =
                weighted_birkhoff(map, [c](const State&) { return c; }, x0, {.T = 137});
            CHECK(std::abs(got - c) <= 1e-14 * std::abs(c));
        }
    }

    SUBCASE("bad configurations are rejected") {
        CHECK_THROWS_AS(weighted_birkhoff(map, Observable{}, x0, {.T = 10}), ConfigError);
        CHECK_THROWS_AS(
            weighted_birkhoff(map, [](const State&) { return 0.0; }, x0, {.T = 0}),
            ConfigError);
        BirkhoffConfig cfg;
        cfg.weight_kind = "boxcar";
        CHECK_THROWS_AS(
            weighted_birkhoff(map, [](const State&) { return 0.0; }, x0, cfg),
            ConfigError);
    }
}

TEST_CASE("pendulum energy is recovered along nested circles") {
    const MapSpec map = MapSpec::pendulum();
    const auto H = [](const State& p) {
        return 0.5 * p.y * p.y -
               std::cos(2.0 * std::numbers::pi * p.x) / (2.0 * std::numbers::pi);
    };
    for (double y0 : {0.3, 0.6}) {
        const State x0{0.1, y0};
        const double wb = weighted_birkhoff(map, H, x0, {.T = 100});
        CHECK(std::abs(wb - H(x0)) <= 1e-8);
    }
}

TEST_CASE("averages over an irrational rotation converge super-polynomially") {
    // The k = 0 standard map advances x by y each step, so starting at
    // y = golden mean makes x a rigid irrational rotation; cos(2 pi x)
    // averages to zero and the bump weights reach that limit far faster
    // than 1/T.
    const double gamma = 0.5 * (std::sqrt(5.0) - 1.0);
    const MapSpec map = MapSpec::standard(0.0);
    const State x0{0.0, gamma};
    const auto f = [](const State& p) { return std::cos(2.0 * std::numbers::pi * p.x); };

    const double wb50 = std::abs(weighted_birkhoff(map, f, x0, {.T = 50}));
    const double wb200 = std::abs(weighted_birkhoff(map, f, x0, {.T = 200}));
    CHECK(wb200 <= 1e-8);
    CHECK(wb200 <= 1e-3 * wb50);
}

TEST_CASE("score over (label, average) pairs") {
    SUBCASE("averages collapsing to the mean give exactly one") {
        const std::vector<std::pair<double, double>> pairs = {
            {1.0, 2.5}, {2.0, 2.5}, {3.0, 2.5}, {4.0, 2.5}};
        CHECK(score_from_pairs(pairs) == 1.0);
    }

    SUBCASE("affine rescaling leaves the score unchanged") {
        std::mt19937 gen(17u);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<std::pair<double, double>> pairs(40);
        for (auto& [h, wb] : pairs) {
            h = u(gen);
            wb = h + 0.1 * u(gen);
        }
        const double base = score_from_pairs(pairs);
        for (auto& [h, wb] : pairs) {
            h = -2.7 * h + 0.9;
            wb = -2.7 * wb + 0.9;
        }
        CHECK(score_from_pairs(pairs) == doctest::Approx(base).epsilon(1e-12));
    }

    SUBCASE("constant labels have no variance to normalize by") {
        const std::vector<std::pair<double, double>> pairs = {
            {1.0, 0.9}, {1.0, 1.1}, {1.0, 1.0}};
        CHECK_THROWS_AS(score_from_pairs(pairs), NumericalError);
    }

    SUBCASE("fewer than two pairs is rejected") {
        CHECK_THROWS_AS(score_from_pairs({}), ConfigError);
        CHECK_THROWS_AS(score_from_pairs({{1.0, 1.0}}), ConfigError);
    }
}

TEST_CASE("exactly invariant labels score at machine zero") {
    // y is preserved exactly by the k = 0 standard map, so h = y evaluated
    // directly (without any kernel fit) must make the numerator collapse.
    const MapSpec map = MapSpec::standard(0.0);
    const Domain dom{Topology::cylinder, 0.0, 1.0, 0.0, 1.0};
    const auto f = [](const State& p) { return p.y; };

    std::vector<std::pair<double, double>> pairs;
    for (const State& x0 : sobol_sample(dom, 50, 7)) {
        pairs.emplace_back(f(x0), weighted_birkhoff(map, f, x0, {.T = 100}));
    }
    CHECK(score_from_pairs(pairs) <= 1e-20);
}

TEST_CASE("end-to-end validation report") {
    const MapSpec map = MapSpec::standard(0.3);
    const Domain dom{Topology::cylinder, 0.0, 1.0, 0.0, 1.0};

    LabelModel model;
    model.kernel = KernelSpec{"periodic_product", 0.3};
    model.topology = Topology::cylinder;
    model.centers = {State{0.25, 0.5}, State{0.75, 0.4}};
    model.coefficients = Vector::Ones(2);

    const BirkhoffConfig cfg{.T = 25};
    const ValidationReport rep = validation_score(model, map, dom, 16, cfg);
    CHECK(rep.J == 16);
    CHECK(rep.T == 25);
    REQUIRE(rep.pairs.size() == 16);
    CHECK(rep.S >= 0.0);
    CHECK(rep.S == score_from_pairs(rep.pairs));
    for (const auto& [h, wb] : rep.pairs) {
        CHECK(std::isfinite(h));
        CHECK(std::isfinite(wb));
    }

    SUBCASE("reruns are bitwise identical") {
        const ValidationReport again = validation_score(model, map, dom, 16, cfg);
        CHECK(again.S == rep.S);
        for (std::size_t j = 0; j < 16; ++j) {
            CHECK(again.pairs[j].first == rep.pairs[j].first);
            CHECK(again.pairs[j].second == rep.pairs[j].second);
        }
    }

    SUBCASE("the first label value comes from a held-out stream") {
        // Validation points are drawn from a different stretch of the Sobol
        // sequence than training's default skip of 1.
        const State train0 = sobol_sample(dom, 1, 1)[0];
        const State valid0 = sobol_sample(dom, 1, 65537)[0];
        CHECK((train0.x != valid0.x || train0.y != valid0.y));
        CHECK(rep.pairs[0].first == eval_label(model, valid0));
    }

    SUBCASE("bad arguments are rejected") {
        CHECK_THROWS_AS(validation_score(model, map, dom, 1, cfg), ConfigError);
        LabelModel empty;
        CHECK_THROWS_AS(validation_score(empty, map, dom, 16, cfg), ConfigError);
    }
}
