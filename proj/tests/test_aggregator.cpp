#include <catch_amalgamated.hpp>

#include <random>

#include "paci/aggregator.hpp"
#include "support/fixtures.hpp"

using namespace paci;
using Catch::Matchers::WithinAbs;

namespace {

PerformanceVector perf(std::array<double, kCriteria> x) {
    PerformanceVector p;
    p.x = x;
    return p;
}

}  // namespace

TEST_CASE("worked example rows aggregate to the published overall values", "[aggregator]") {
    const auto s = run_series(fixtures::worked_example(), default_config());
    REQUIRE(s.size() == 5);
    const std::array<double, 5> expected{49.68, 17.04, 124.832, 163.810, 88.77};
    for (std::size_t i = 0; i < 5; ++i) CHECK_THAT(s.points[i].overall, WithinAbs(expected[i], 0.05));
    CHECK(s.points[3].state == "break");
    CHECK(s.points[4].state == "alarm");
}

TEST_CASE("all-zero performances give 0", "[aggregator]") {
    const auto p = aggregate(perf({0, 0, 0, 0, 0}), default_config());
    CHECK(p.overall == 0.0);
    CHECK(p.state == "baseline");
}

TEST_CASE("contributions add up and the value stays between criterion extremes", "[aggregator][property]") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> x1(0, 2000), x2(0, 1.2), x3(0, 8), x4(0, 4000), x5(0, 320);
    const auto cfg = default_config();
    for (int i = 0; i < 5000; ++i) {
        const auto p = aggregate(perf({x1(rng), x2(rng), x3(rng), x4(rng), x5(rng)}), cfg);
        double sum = 0;
        for (double c : p.contributions) sum += c;
        CHECK_THAT(sum, WithinAbs(p.overall, 1e-9));
        const auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
        CHECK(p.overall >= *lo - 1e-9);
        CHECK(p.overall <= *hi + 1e-9);
        CHECK(p.overall <= 180.0);
    }
}

TEST_CASE("raising one performance never lowers the indicator", "[aggregator][property]") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    const std::array<double, kCriteria> span{2000, 1.2, 8, 4000, 320};
    const auto cfg = default_config();
    for (int i = 0; i < 5000; ++i) {
        std::array<double, kCriteria> a{};
        for (std::size_t j = 0; j < kCriteria; ++j) a[j] = u(rng) * span[j];
        auto b = a;
        const std::size_t j = static_cast<std::size_t>(i) % kCriteria;
        b[j] += u(rng) * span[j] * 0.2;
        CHECK(aggregate(perf(b), cfg).overall >= aggregate(perf(a), cfg).overall);
    }
}

TEST_CASE("classification bands", "[aggregator]") {
    const auto scale = default_state_scale();
    CHECK(classify(88.77, scale) == "alarm");
    CHECK(classify(0, scale) == "baseline");
    CHECK(classify(163.81, scale) == "break");
    CHECK(classify(9.999, scale) == "baseline");
    CHECK(classify(10, scale) == "residual");
    CHECK(classify(40, scale) == "alert");
    CHECK(classify(80, scale) == "alarm");
    CHECK(classify(100, scale) == "critical");
    CHECK(classify(120, scale) == "break");
    CHECK(classify(180, scale) == "emergency");
    CHECK(classify(500, scale) == "emergency");
    REQUIRE_THROWS_AS(classify(-1, scale), Error);
    SECTION("without hysteresis the previous state is irrelevant") {
        for (double v : {0.0, 12.0, 55.0, 99.9, 100.0, 150.0}) {
            for (const auto& c : scale.cutoffs) CHECK(classify(v, scale, c.label) == classify(v, scale));
        }
    }
}

TEST_CASE("hysteresis delays state changes", "[aggregator]") {
    auto scale = default_state_scale();
    scale.hysteresis = 2.0;
    CHECK(classify(81, scale, std::string("alert")) == "alert");
    CHECK(classify(82, scale, std::string("alert")) == "alarm");
    CHECK(classify(79, scale, std::string("alarm")) == "alarm");
    CHECK(classify(77.9, scale, std::string("alarm")) == "alert");
    CHECK(classify(81, scale) == "alarm");
    CHECK(classify(150, scale, std::string("alert")) == "break");

    // Identity value function on wards so the series walks through 80 and back.
    auto cfg = default_config();
    cfg.state_scale = scale;
    cfg.value_functions[3] = PiecewiseLinearValueFunction({{0, 0}, {180, 180}}, 180);
    cfg.weights = WeightVector{{0, 0, 0, 1, 0}};
    CriteriaMatrix m;
    for (double v : {70.0, 81.0, 83.0, 79.0, 77.0}) m.rows.push_back(perf({0, 0, 0, v, 0}));
    const auto s = run_series(m, cfg);
    std::vector<std::string> states;
    for (const auto& p : s.points) states.push_back(p.state);
    CHECK(states == std::vector<std::string>{"alert", "alert", "alarm", "alarm", "alert"});
}

TEST_CASE("compare orders by overall value", "[aggregator]") {
    const auto cfg = default_config();
    const auto s = run_series(fixtures::worked_example(), cfg);
    CHECK(compare(s.points[3], s.points[4]) == Ordering::impacts_more);
    CHECK(compare(s.points[1], s.points[2]) == Ordering::impacts_less);
    CHECK(compare(s.points[0], s.points[0]) == Ordering::equal);
    const auto other = aggregate(perf({1, 1, 1, 1, 1}), rm_baseline_config());
    try {
        compare(s.points[0], other);
        FAIL("expected config_mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config_mismatch);
    }
    SECTION("transitive on random triples") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0, 1);
        auto random_point = [&] { return aggregate(perf({2000 * u(rng), 1.2 * u(rng), 8 * u(rng), 4000 * u(rng), 320 * u(rng)}), cfg); };
        for (int i = 0; i < 2000; ++i) {
            const auto a = random_point(), b = random_point(), c = random_point();
            if (compare(a, b) != Ordering::impacts_less && compare(b, c) != Ordering::impacts_less) {
                CHECK(compare(a, c) != Ordering::impacts_less);
            }
        }
    }
}

TEST_CASE("constant performances give a constant series", "[aggregator]") {
    CriteriaMatrix m;
    for (int i = 0; i < 10; ++i) m.rows.push_back(perf({700, 0.99, 2, 1500, 120}));
    const auto s = run_series(m, default_config());
    for (const auto& p : s.points) CHECK(p.overall == s.points[0].overall);
    REQUIRE_THROWS_AS(run_series(CriteriaMatrix{}, default_config()), Error);
}

TEST_CASE("the two-criterion linear baseline is the mean of two linear scores", "[aggregator]") {
    const auto cfg = rm_baseline_config();
    validate(cfg);
    const auto m = fixtures::worked_example();
    const auto s = run_series(m, cfg);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double a = std::min(180.0, 100.0 * m.rows[i].x[0] / 1125.0);
        const double b = std::min(180.0, 100.0 * m.rows[i].x[1]);
        CHECK_THAT(s.points[i].overall, WithinAbs(0.5 * (a + b), 1e-9));
    }
}

TEST_CASE("reference profiles land on their cutoffs", "[aggregator]") {
    const auto checks = reference_profiles_check(default_config());
    REQUIRE(checks.size() == 7);
    for (const auto& c : checks) {
        INFO(c.profile.name << " -> " << c.computed);
        if (c.profile.name == "baseline" || c.profile.name == "critical") {
            CHECK_THAT(c.computed, WithinAbs(c.profile.expected, 1e-9));
        } else {
            CHECK(std::abs(c.deviation()) <= 0.35);
        }
    }
    CHECK_THAT(checks[1].computed, WithinAbs(10, 0.05));
    CHECK_THAT(checks[2].computed, WithinAbs(40, 0.1));
}

TEST_CASE("config validation and fingerprints", "[aggregator]") {
    auto cfg = default_config();
    CHECK(violations(cfg).empty());
    CHECK(fingerprint(cfg) == fingerprint(default_config()));
    CHECK(fingerprint(cfg) != fingerprint(rm_baseline_config()));
    cfg.weights.w[0] = 0.2;
    const auto v = violations(cfg);
    CHECK(std::find(v.begin(), v.end(), "weights must sum to 1") != v.end());
    cfg = default_config();
    std::swap(cfg.state_scale.cutoffs[1], cfg.state_scale.cutoffs[2]);
    CHECK_FALSE(violations(cfg).empty());
    cfg = default_config();
    cfg.state_scale.hysteresis = 0.5;
    CHECK(fingerprint(cfg) != fingerprint(default_config()));
}
