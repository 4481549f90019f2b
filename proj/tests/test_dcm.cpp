#include <catch_amalgamated.hpp>

#include <random>

#include "paci/dcm.hpp"
#include "support/oracles.hpp"

using namespace paci;
using namespace paci::dcm;
using Catch::Matchers::WithinAbs;

namespace {

const std::vector<double> kIncidenceLevels{0, 225, 450, 675, 900, 1125, 1350, 1575};
const std::vector<int> kIncidenceGaps{0, 2, 4, 6, 8, 10, 13};

LevelSequence incidence_sequence() { return {kIncidenceLevels, {0, 0.0}, {5, 100.0}}; }

}  // namespace

TEST_CASE("interval scale between anchors", "[dcm]") {
    const LevelSequence seq{{0, 225, 450, 675, 900, 1125}, {0, 0.0}, {5, 100.0}};
    const auto s = build_interval_scale(seq, {{0, 2, 4, 6, 8}});
    CHECK(s.unit_count == 25);
    CHECK(s.unit_value == 4.0);
    CHECK(s.values == std::vector<double>{0, 4, 16, 36, 64, 100});
}

TEST_CASE("interval scale extended past the upper anchor", "[dcm]") {
    const auto s = build_interval_scale(incidence_sequence(), {kIncidenceGaps});
    CHECK(s.unit_value == 4.0);
    // 1350 sits 11 units above 1125 and 1575 another 14.
    CHECK(s.values == std::vector<double>{0, 4, 16, 36, 64, 100, 144, 200});
}

TEST_CASE("blank judgements give equal spacing", "[dcm]") {
    const LevelSequence seq{{1, 2, 3, 4, 5}, {0, 0.0}, {4, 100.0}};
    CHECK(build_interval_scale(seq, {{0, 0, 0, 0}}).values == std::vector<double>{0, 25, 50, 75, 100});
}

TEST_CASE("anchors may be given in either order and inside the sequence", "[dcm]") {
    const LevelSequence a{{0, 1, 2, 3}, {1, 10.0}, {2, 30.0}};
    const LevelSequence b{{0, 1, 2, 3}, {2, 30.0}, {1, 10.0}};
    const CardJudgements cards{{1, 3, 0}};
    const auto sa = build_interval_scale(a, cards);
    CHECK(sa.values == build_interval_scale(b, cards).values);
    CHECK(sa.unit_value == 5.0);
    CHECK(sa.values == std::vector<double>{0, 10, 30, 35});
}

TEST_CASE("interval scale is affine covariant in the anchor values", "[dcm][property]") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> cards(0, 12);
    std::uniform_real_distribution<double> coef(-50, 50), slope(0.1, 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> levels;
        std::vector<int> gaps;
        const int n = 3 + trial % 6;
        for (int i = 0; i < n; ++i) levels.push_back(i * 10.0);
        for (int i = 0; i + 1 < n; ++i) gaps.push_back(cards(rng));
        const LevelSequence seq{levels, {0, 0.0}, {static_cast<std::size_t>(n - 1), 100.0}};
        const double a = coef(rng), b = slope(rng);
        const LevelSequence moved{levels, {0, a}, {static_cast<std::size_t>(n - 1), a + b * 100.0}};
        const auto base = build_interval_scale(seq, {gaps});
        const auto shifted = build_interval_scale(moved, {gaps});
        for (std::size_t i = 0; i < base.values.size(); ++i) {
            CHECK_THAT(shifted.values[i], WithinAbs(a + b * base.values[i], 1e-9));
        }
    }
}

TEST_CASE("invalid judgements are rejected with every violation", "[dcm]") {
    const LevelSequence seq{{0, 5, 5}, {0, 1.0}, {0, 1.0}};
    try {
        build_interval_scale(seq, {{-1}});
        FAIL("expected invalid_judgements");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_judgements);
        CHECK(e.violations().size() >= 4);
    }
    REQUIRE_THROWS_AS(build_interval_scale({{0, 1}, {0, 100.0}, {1, 0.0}}, {{0}}), Error);
}

TEST_CASE("pairwise table follows the transitivity rule", "[dcm]") {
    const auto t = fill_pairwise_table({kIncidenceGaps});
    REQUIRE(t.levels() == 8);
    CHECK(t.get(0, 7) == 49);
    CHECK(t.get(1, 4) == 14);  // 225 to 900
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = i + 1; j < 8; ++j) CHECK(t.get(i, j) == oracle::pairwise_entry(kIncidenceGaps, i, j));
    }
    SECTION("single gap") {
        const auto one = fill_pairwise_table({{5}});
        CHECK(one.levels() == 2);
        CHECK(one.get(0, 1) == 5);
    }
    SECTION("lower triangle is not addressable") { REQUIRE_THROWS_AS(t.get(3, 1), Error); }
}

TEST_CASE("pairwise table matches the closed form on random gaps", "[dcm][oracle]") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> cards(0, 20);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> gaps(1 + trial % 10);
        for (auto& g : gaps) g = cards(rng);
        const auto t = fill_pairwise_table({gaps});
        for (std::size_t i = 0; i < t.levels(); ++i)
            for (std::size_t j = i + 1; j < t.levels(); ++j) CHECK(t.get(i, j) == oracle::pairwise_entry(gaps, i, j));
        CHECK(check_consistency(t).consistent());
    }
}

TEST_CASE("consistency check", "[dcm]") {
    SECTION("a two-level table has no triples") { CHECK(check_consistency(fill_pairwise_table({{3}})).consistent()); }

    SECTION("partial expert table with one overstated entry") {
        PairwiseTable t(8);
        for (std::size_t i = 0; i + 1 < 8; ++i) t.set(i, i + 1, kIncidenceGaps[i]);
        t.set(1, 3, 7);   // 225 to 675, consistent
        t.set(1, 4, 16);  // 225 to 900, the rule gives 14
        const auto r = check_consistency(t);
        REQUIRE(r.violations.size() == 1);
        CHECK(r.violations[0].i == 1);
        CHECK(r.violations[0].k == 3);
        CHECK(r.violations[0].j == 4);
        CHECK(r.violations[0].residual == 2);
    }

    SECTION("full table with one overstated entry flags every triple through it") {
        auto t = fill_pairwise_table({kIncidenceGaps});
        t.set(1, 4, 16);
        const auto r = check_consistency(t);
        REQUIRE_FALSE(r.consistent());
        for (const auto& v : r.violations) {
            const bool uses_entry = (v.i == 1 && v.j == 4) || (v.i == 1 && v.k == 4) || (v.k == 1 && v.j == 4);
            CHECK(uses_entry);
            CHECK(std::abs(v.residual) == 2);
        }
        // as e_ij: k in {2,3}; as e_ik: j in {5,6,7}; as e_kj: i = 0
        CHECK(r.violations.size() == 6);
    }
}

TEST_CASE("swing weights", "[dcm]") {
    SECTION("three tiers") {
        const SwingRanking r{{{0}, {2, 3, 4}, {1}}, {2, 3}, 2.0};
        const auto d = derive_weights(r);
        CHECK(d.unit_count == 7);
        CHECK_THAT(d.raw[0], WithinAbs(2.0, 1e-12));
        CHECK_THAT(d.raw[1], WithinAbs(1.0, 1e-12));
        CHECK_THAT(d.raw[2], WithinAbs(1.42857, 1e-5));
        const auto w = build_weights(r);
        CHECK_THAT(w[0], WithinAbs(0.27451, 1e-5));
        CHECK_THAT(w[1], WithinAbs(0.13725, 1e-5));
        for (std::size_t j : {2, 3, 4}) CHECK_THAT(w[j], WithinAbs(0.19608, 1e-5));
    }
    SECTION("single tier") {
        const auto w = build_weights({{{0, 1, 2, 3, 4}}, {}, 1.0});
        for (double x : w) CHECK_THAT(x, WithinAbs(0.2, 1e-15));
    }
    SECTION("two tiers") {
        const auto w = build_weights({{{0}, {1}}, {0}, 3.0});
        CHECK_THAT(w[0], WithinAbs(0.75, 1e-15));
        CHECK_THAT(w[1], WithinAbs(0.25, 1e-15));
    }
    SECTION("weights sum to one and follow tier order") {
        std::mt19937_64 rng(17);
        std::uniform_int_distribution<int> cards(0, 6);
        std::uniform_real_distribution<double> z(1.1, 20);
        for (int trial = 0; trial < 200; ++trial) {
            SwingRanking r;
            std::vector<std::size_t> ids{0, 1, 2, 3, 4};
            std::shuffle(ids.begin(), ids.end(), rng);
            const std::size_t tiers = 2 + trial % 4;
            r.tiers.resize(tiers);
            for (std::size_t i = 0; i < ids.size(); ++i) r.tiers[i < tiers ? i : i % tiers].push_back(ids[i]);
            for (std::size_t k = 0; k + 1 < tiers; ++k) r.tier_gaps.push_back(cards(rng));
            r.z_ratio = z(rng);
            const auto w = build_weights(r);
            double s = 0;
            for (double x : w) s += x;
            CHECK_THAT(s, WithinAbs(1.0, 1e-12));
            for (std::size_t k = 0; k + 1 < tiers; ++k) CHECK(w[r.tiers[k][0]] > w[r.tiers[k + 1][0]]);
            CHECK_THAT(w[r.tiers.front()[0]] / w[r.tiers.back()[0]], WithinAbs(r.z_ratio, 1e-9));
        }
    }
    SECTION("invalid rankings") {
        REQUIRE_THROWS_AS(build_weights({{{0}, {1}}, {0}, 1.0}), Error);
        REQUIRE_THROWS_AS(build_weights({{{0}, {0}}, {0}, 2.0}), Error);
        REQUIRE_THROWS_AS(build_weights({{{0}, {1}}, {}, 2.0}), Error);
    }
}
