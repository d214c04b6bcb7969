#include <doctest.h>

#include "support.hpp"

using namespace tontine;
using fixture::Rational;
using fixture::vec;

TEST_CASE("worked example expectations") {
    const auto pool = fixture::worked_example<Rational>();
    const auto report = enumerate(pool, dm_scheme(pool), SurvivalModel<Rational>::independent(pool));
    CHECK(report.group_expected_payout == 138);
    CHECK(report.prob_all_dead == Rational(2, 25));
    CHECK(report.expected_payout(3) == 12);
    CHECK(report.expected_payout.sum() == 150);
}

TEST_CASE("coin and die: administrator wins with probability 5/12") {
    Pool<Rational> game{vec<Rational>({1, 1}), vec<Rational>({Rational(1, 2), Rational(1, 6)}), 0, 0};
    const auto report = enumerate(game, dr_scheme<Rational>(2), SurvivalModel<Rational>::independent(game));
    CHECK(report.prob_all_dead == Rational(5, 12));
    CHECK(report.expected_payout(2) == Rational(5, 6));
}

TEST_CASE("enumeration agrees with the naive double loop") {
    fixture::RandomPools gen(47);
    for (int t = 0; t < 60; ++t) {
        const auto pool = gen.next(2, 10, 50.0);
        const auto f = ShareAllocation<double>(gen.positive(pool.size()));
        const auto report = enumerate(pool, f, SurvivalModel<double>::independent(pool));
        const auto expected = oracle::expected_payouts(fixture::to_fund(pool), fixture::to_std(f.shares()));
        for (Index i = 0; i <= pool.size(); ++i) {
            REQUIRE(fixture::rel_close(report.expected_payout(i), expected[static_cast<std::size_t>(i)], 1e-12));
        }
        const double proceeds = pool.proceeds();
        CHECK(std::abs(report.expected_payout.sum() - proceeds) <= 1e-9 * proceeds);
        CHECK(fixture::rel_close(report.group_expected_payout, proceeds * (1 - report.prob_all_dead), 1e-9));
        for (Index i = 0; i < pool.size(); ++i) {
            CHECK(fixture::rel_close(report.expected_payout(i),
                                     report.conditional_expected_payout(i) * (1 - report.prob_all_dead), 1e-12));
        }
    }
}

TEST_CASE("results do not depend on the worker count") {
    fixture::RandomPools gen(53);
    const auto pool = gen.next(16, 16, 10.0);
    const auto f = dm_scheme(pool);
    const auto model = SurvivalModel<double>::independent(pool);
    EnumerationOptions one;
    one.workers = 1;
    EnumerationOptions many;
    many.workers = 7;
    const auto a = enumerate(pool, f, model, one);
    const auto b = enumerate(pool, f, model, many);
    CHECK(a.expected_payout == b.expected_payout);
    CHECK(expected_share_fractions(f, model, one) == expected_share_fractions(f, model, many));
}

TEST_CASE("share fractions") {
    SUBCASE("exchangeable model with uniform shares gives 1/n") {
        // Exchangeable but dependent: probability depends only on the head count.
        const Rational by_count[4] = {Rational(1, 10), Rational(1, 15), Rational(1, 10), Rational(1, 10)};
        std::vector<Rational> table(8);
        Rational sum = 0;
        for (std::uint64_t s = 0; s < 8; ++s) {
            table[s] = by_count[__builtin_popcountll(s)];
            sum += table[s];
        }
        for (auto& p : table) {
            p /= sum;
        }
        const auto model = SurvivalModel<Rational>::joint_table(table, 3);
        const auto fr = expected_share_fractions(dr_scheme<Rational>(3), model);
        CHECK(fr == vec<Rational>({Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
    }
    SUBCASE("fractions sum to one and match the expected payouts") {
        const auto pool = fixture::worked_example<Rational>();
        const auto model = SurvivalModel<Rational>::independent(pool);
        const auto f = dm_scheme(pool);
        const auto fr = expected_share_fractions(f, model);
        CHECK(fr.sum() == 1);
        const auto report = enumerate(pool, f, model);
        CHECK(expected_share_fraction(f, model, 0) == report.expected_payout(0) / 150 / Rational(23, 25));
        CHECK_THROWS_AS(expected_share_fraction(f, model, 3), std::out_of_range);
    }
}

TEST_CASE("payout distribution rows") {
    Pool<double> two{vec<double>({5, 5}), vec<double>({0.3, 0.6}), 1.0, 0.0};
    const auto rows = payout_distribution(two, dm_scheme(two), SurvivalModel<double>::independent(two));
    REQUIRE(rows.size() == 4);
    double sum = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].scenario.index == k);
        sum += rows[k].probability;
    }
    CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("too many participants asks for Monte Carlo") {
    fixture::RandomPools gen(59);
    const auto pool = gen.next(21, 21);
    const auto model = SurvivalModel<double>::independent(pool);
    CHECK_THROWS_WITH_AS(enumerate(pool, dm_scheme(pool), model), doctest::Contains("Monte Carlo"),
                         std::length_error);
    EnumerationOptions small;
    small.max_participants = 5;
    const auto six = gen.next(6, 6);
    CHECK_THROWS_AS(payout_distribution(six, dm_scheme(six), SurvivalModel<double>::independent(six), small),
                    std::length_error);
}
