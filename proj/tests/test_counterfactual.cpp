#include <catch_amalgamated.hpp>

#include "paci/counterfactual.hpp"
#include "support/fixtures.hpp"

using namespace paci;
using Catch::Matchers::WithinAbs;

namespace {

CriteriaMatrix hand_built(std::size_t rows, std::size_t pivot, double post_factor) {
    CriteriaMatrix m;
    const auto d0 = Date::from_ymd(2021, 1, 1);
    for (std::size_t t = 0; t < rows; ++t) {
        PerformanceVector p;
        p.date = d0.plus_days(static_cast<long>(t));
        const double incid = 300.0 + 10.0 * static_cast<double>(t);
        const double f = t > pivot ? post_factor : 1.0;
        p.x = {incid, 1.01, 2.0 * f, 2.0 * incid * f, 0.15 * incid * f};
        m.rows.push_back(p);
    }
    return m;
}

}  // namespace

TEST_CASE("frozen severity averages", "[counterfactual]") {
    CriteriaMatrix m;
    for (auto x : {std::array<double, 5>{100, 1, 1, 200, 10}, {0, 1, 3, 50, 5}, {200, 1, 2, 200, 40}}) {
        PerformanceVector p;
        p.x = x;
        m.rows.push_back(p);
    }
    const auto f = frozen_severity(m, 2);
    CHECK(f.ratio_days == 2);  // the zero-incidence row is left out of the ratios
    CHECK_THAT(f.wards_per_case, WithinAbs((2.0 + 1.0) / 2, 1e-12));
    CHECK_THAT(f.icu_per_case, WithinAbs((0.1 + 0.2) / 2, 1e-12));
    CHECK_THAT(f.lethality, WithinAbs(2.0, 1e-12));
}

TEST_CASE("counterfactual on the synthetic series", "[counterfactual]") {
    const auto m = compute_performances(fixtures::synthetic());
    const auto cfg = default_config();
    const CounterfactualSpec spec{40};
    const auto actual = run_series(m, cfg);
    const auto cf = no_vaccination_series(m, cfg, spec);
    REQUIRE(cf.size() == actual.size());
    for (std::size_t t = 0; t < m.size(); ++t) {
        if (t <= spec.pivot_day) CHECK(cf.points[t].overall == actual.points[t].overall);
        CHECK(cf.points[t].contributions[0] == actual.points[t].contributions[0]);
        CHECK(cf.points[t].contributions[1] == actual.points[t].contributions[1]);
    }
}

TEST_CASE("constant ratios leave the series unchanged", "[counterfactual]") {
    const auto m = hand_built(60, 30, 1.0);
    const auto cfg = default_config();
    const auto actual = run_series(m, cfg);
    const auto cf = no_vaccination_series(m, cfg, {30});
    for (std::size_t t = 0; t < m.size(); ++t) CHECK_THAT(cf.points[t].overall, WithinAbs(actual.points[t].overall, 1e-9));
}

TEST_CASE("a post-pivot severity drop is undone", "[counterfactual]") {
    const auto m = hand_built(60, 30, 0.5);
    const auto cfg = default_config();
    const auto actual = run_series(m, cfg);
    const auto cf = no_vaccination_series(m, cfg, {30});
    bool strictly_above = false;
    for (std::size_t t = 31; t < m.size(); ++t) {
        CHECK(cf.points[t].overall >= actual.points[t].overall);
        strictly_above |= cf.points[t].overall > actual.points[t].overall;
    }
    CHECK(strictly_above);
}

TEST_CASE("pivot must leave rows after it", "[counterfactual]") {
    const auto m = hand_built(10, 0, 1.0);
    try {
        no_vaccination_matrix(m, {9});
        FAIL("expected out_of_range");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::out_of_range);
    }
    REQUIRE_THROWS_AS(no_vaccination_matrix(m, {390}), Error);
    REQUIRE_NOTHROW(no_vaccination_matrix(m, {8}));
}
