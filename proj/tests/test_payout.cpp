#include <doctest.h>

#include "support.hpp"

using namespace tontine;
using fixture::Rational;
using fixture::vec;

TEST_CASE("share values of the worked example") {
    const auto pool = fixture::worked_example<Rational>();
    const auto f = dm_scheme(pool);
    CHECK(share_value_initial(pool, f) == Rational(150, 525));
    CHECK(share_value_terminal(pool, f, Scenario{7}) == Rational(150, 525));
    CHECK(share_value_terminal(pool, f, Scenario{5}) == Rational(150, 425));
    CHECK_THROWS_AS(share_value_terminal(pool, f, Scenario{0}), std::domain_error);

    CHECK(share_value_initial(pool, t_scheme(pool)) == 1);
    auto funded = pool;
    funded.admin_investment = 15;
    CHECK(share_value_initial(funded, t_scheme(funded)) == Rational(11, 10));
}

TEST_CASE("payouts of the worked example") {
    const auto pool = fixture::worked_example<double>();
    const auto f = dm_scheme(pool);
    const auto all = payouts(pool, f, Scenario{7});
    CHECK(std::abs(all.participant(0) - 114.29) <= 0.005);
    CHECK(std::abs(all.participant(1) - 28.57) <= 0.005);
    CHECK(std::abs(all.participant(2) - 7.14) <= 0.005);
    CHECK(all.administrator() == 0.0);

    const auto w4 = payouts(pool, f, Scenario{5});
    CHECK(std::abs(w4.participant(0) - 141.18) <= 0.005);
    CHECK(w4.participant(1) == 0.0);
    CHECK(std::abs(w4.participant(2) - 8.82) <= 0.005);

    CHECK(payouts(pool, f, Scenario{0}).amounts == vec<double>({0, 0, 0, 150}));
    CHECK(payouts(pool, dr_scheme<double>(3), Scenario{7}).amounts == vec<double>({50, 50, 50, 0}));

    // Participant 3 gets back less than the 20 invested.
    CHECK(all.participant(2) < (1.0 + pool.period_return) * pool.investments(2));
}

TEST_CASE("payouts agree with the oracle") {
    fixture::RandomPools gen(23);
    for (int t = 0; t < 100; ++t) {
        const auto pool = gen.next(2, 8, 50.0);
        const auto f = ShareAllocation<double>(gen.positive(pool.size()));
        const auto fund = fixture::to_fund(pool);
        const auto shares = fixture::to_std(f.shares());
        for (std::uint64_t s = 0; s < scenario_count(pool.size()); ++s) {
            const auto w = payouts(pool, f, Scenario{s});
            const auto expected = oracle::payouts(fund, shares, s);
            for (Index i = 0; i <= pool.size(); ++i) {
                REQUIRE(fixture::rel_close(w.amounts(i), expected[static_cast<std::size_t>(i)], 1e-13));
            }
        }
    }
}

namespace {

void check_payout_properties(const Pool<double>& pool, const ShareAllocation<double>& f, Scenario s) {
    const auto w = payouts(pool, f, s);
    const double proceeds = pool.proceeds();
    const Index n = pool.size();
    REQUIRE(std::abs(w.total() - proceeds) <= 1e-9 * proceeds);
    const auto ind = s.indicators<double>(n);
    REQUIRE(f.extended().dot(ind) > 0.0);
    const double s0 = share_value_initial(pool, f);
    for (Index i = 0; i < n; ++i) {
        REQUIRE(w.amounts(i) >= 0.0);
        if (!s.survives(i)) {
            REQUIRE(w.amounts(i) == 0.0);
        }
        // floor: at least the time-1 value of the allocated shares
        REQUIRE(w.amounts(i) >= s0 * pool.growth_factor() * f.shares()(i) * ind(i) * (1 - 1e-12));
    }
    REQUIRE((w.administrator() > 0.0) == s.all_dead());
}

}  // namespace

TEST_CASE("self-financing and floors, exhaustive up to twelve participants") {
    fixture::RandomPools gen(29);
    for (Index n = 2; n <= 12; ++n) {
        const auto pool = gen.next(n, n, 40.0);
        for (const auto& f : {dm_scheme(pool), t_scheme(pool), reciprocal_scheme(pool), dr_scheme<double>(n),
                              ShareAllocation<double>(gen.positive(n), 3.5)}) {
            for (std::uint64_t s = 0; s < scenario_count(n); ++s) {
                check_payout_properties(pool, f, Scenario{s});
            }
        }
    }
}

TEST_CASE("self-financing on larger random pools") {
    fixture::RandomPools gen(31);
    std::uniform_int_distribution<std::uint64_t> any;
    for (int t = 0; t < 1000; ++t) {
        const auto pool = gen.next(13, 60, 100.0);
        const auto f = ShareAllocation<double>(gen.positive(pool.size(), 0.01, 1000.0));
        const std::uint64_t mask = (std::uint64_t{1} << pool.size()) - 1;
        check_payout_properties(pool, f, Scenario{any(gen.rng) & mask});
    }
}

TEST_CASE("T scheme survivors get at least their accumulated investment") {
    fixture::RandomPools gen(37);
    for (int t = 0; t < 50; ++t) {
        const auto pool = gen.next(2, 9, 20.0);
        const auto f = t_scheme(pool);
        for (std::uint64_t s = 1; s < scenario_count(pool.size()); ++s) {
            const auto w = payouts(pool, f, Scenario{s});
            for (Index i = 0; i < pool.size(); ++i) {
                if (Scenario{s}.survives(i)) {
                    REQUIRE(w.amounts(i) >= pool.growth_factor() * pool.investments(i) * (1 - 1e-12));
                }
            }
        }
    }
}

TEST_CASE("payouts do not depend on the administrator slot") {
    fixture::RandomPools gen(41);
    for (int t = 0; t < 50; ++t) {
        const auto pool = gen.next(2, 10, 20.0);
        const auto f = dm_scheme(pool);
        for (std::uint64_t s = 0; s < scenario_count(pool.size()); ++s) {
            const auto base = payouts(pool, f, Scenario{s}).amounts;
            for (double slot : {1e-6, 1e6}) {
                const auto other = payouts(pool, f.with_admin_slot(slot), Scenario{s}).amounts;
                for (Index i = 0; i <= pool.size(); ++i) {
                    REQUIRE(fixture::rel_close(other(i), base(i), 1e-12));
                }
            }
        }
    }
}

TEST_CASE("return decomposition rebuilds each survivor's payout") {
    fixture::RandomPools gen(43);
    for (int t = 0; t < 50; ++t) {
        const auto pool = gen.next(2, 9, 30.0);
        const auto f = ShareAllocation<double>(gen.positive(pool.size()), 2.0);
        const double s0 = share_value_initial(pool, f);
        for (std::uint64_t s = 1; s < scenario_count(pool.size()); ++s) {
            const auto d = return_decomposition(pool, f, Scenario{s});
            const auto w = payouts(pool, f, Scenario{s});
            REQUIRE(d.fund_return == pool.period_return);
            REQUIRE(d.mortality_credit >= -1e-15);
            const auto ext = f.extended();
            const auto ind = Scenario{s}.indicators<double>(pool.size());
            const double dead = (ext.array() * (1.0 - ind.array())).sum() - f.admin_slot();
            for (Index i = 0; i < pool.size(); ++i) {
                if (!Scenario{s}.survives(i)) {
                    continue;
                }
                const double rebuilt = (1 + d.fund_return) * (1 + d.risk_adjustment(i)) * (1 + d.mortality_credit) *
                                       pool.investments(i);
                REQUIRE(fixture::rel_close(rebuilt, w.amounts(i), 1e-9));
                // two payments: own shares at S(0), plus the dead shares' part
                const double two_payments =
                    s0 * pool.growth_factor() * f.shares()(i) * (1 + dead / ext.dot(ind));
                REQUIRE(fixture::rel_close(two_payments, w.amounts(i), 1e-12));
            }
        }
        CHECK_THROWS_AS(return_decomposition(pool, f, Scenario{0}), std::domain_error);
    }
}

TEST_CASE("risk adjustment signs with equal investments") {
    // Shares in increasing order, equal stakes.
    Pool<double> pool{vec<double>({10, 10, 10, 10}), vec<double>({0.9, 0.7, 0.5, 0.3}), 0.0, 0.02};
    const auto f = dm_scheme(pool);
    const auto d = return_decomposition(pool, f, Scenario{15});
    CHECK(d.risk_adjustment(3) >= 0.0);
    CHECK(d.risk_adjustment(0) <= 0.0);
    CHECK(d.mortality_credit == 0.0);
}

TEST_CASE("mismatched sizes are rejected") {
    const auto pool = fixture::worked_example<double>();
    CHECK_THROWS_AS(payouts(pool, dr_scheme<double>(2), Scenario{1}), std::invalid_argument);
}
