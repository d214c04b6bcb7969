#include <doctest.h>

#include "support.hpp"
#include "tontine/drs.hpp"

using namespace tontine;
using fixture::Rational;
using fixture::vec;

namespace {

ClaimsDistribution<double> random_distribution(std::mt19937_64& rng, Index parties, std::size_t outcomes) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> level(0, 4);
    std::vector<ClaimsOutcome<double>> out;
    double mass = 0;
    for (std::size_t k = 0; k < outcomes; ++k) {
        Vector<double> claims(parties);
        for (Index i = 0; i < parties; ++i) {
            // coarse levels so that several outcomes share a total
            claims(i) = level(rng);
        }
        if (claims.sum() == 0.0) {
            claims(0) = 1.0;
        }
        const double p = u(rng) + 0.01;
        mass += p;
        out.push_back({p, claims});
    }
    for (auto& o : out) {
        o.probability /= mass;
    }
    return ClaimsDistribution<double>(std::move(out));
}

}  // namespace

TEST_CASE("proportional compensation") {
    const PremiumVector<Rational> prem(vec<Rational>({1, 1, 1}));
    CHECK(proportional_compensation(prem, vec<Rational>({1, 1, 2}), Rational(0)) ==
          vec<Rational>({Rational(3, 4), Rational(3, 4), Rational(3, 2)}));
    CHECK(proportional_compensation(prem, vec<Rational>({0, 5, 0}), Rational(1, 10)) ==
          vec<Rational>({0, Rational(33, 10), 0}));
    CHECK_THROWS_AS(proportional_compensation(prem, vec<Rational>({0, 0, 0}), Rational(0)), std::invalid_argument);
}

TEST_CASE("uniform contribution") {
    CHECK(uniform_contribution(vec<Rational>({10, 20, 30})) == vec<Rational>({20, 20, 20}));
    CHECK(uniform_contribution(vec<Rational>({0, 0, 0})) == vec<Rational>({0, 0, 0}));
    CHECK_THROWS_AS(uniform_contribution(vec<Rational>({1, 2}), 3), std::invalid_argument);
}

TEST_CASE("conditional mean contribution") {
    SUBCASE("exchangeable pair splits every total evenly") {
        const ClaimsDistribution<Rational> dist({{Rational(1, 4), vec<Rational>({2, 0})},
                                                 {Rational(1, 4), vec<Rational>({0, 2})},
                                                 {Rational(1, 4), vec<Rational>({1, 1})},
                                                 {Rational(1, 4), vec<Rational>({3, 3})}});
        for (std::size_t k = 0; k < dist.size(); ++k) {
            const auto c = conditional_mean_contribution(dist, k);
            CHECK(c(0) == c(1));
            CHECK(c.sum() == dist[k].claims.sum());
        }
    }
    SUBCASE("single outcome returns the claims") {
        const ClaimsDistribution<Rational> dist({{Rational(1), vec<Rational>({4, 1, 7})}});
        CHECK(conditional_mean_contribution(dist, std::size_t{0}) == vec<Rational>({4, 1, 7}));
    }
    SUBCASE("grouping by total") {
        const ClaimsDistribution<Rational> dist({{Rational(1, 2), vec<Rational>({3, 0, 0})},
                                                 {Rational(1, 4), vec<Rational>({0, 3, 0})},
                                                 {Rational(1, 4), vec<Rational>({1, 1, 1})}});
        // all three share the total 3, so everyone gets E[X]
        CHECK(conditional_mean_contribution(dist, std::size_t{1}) ==
              vec<Rational>({Rational(7, 4), Rational(1), Rational(1, 4)}));
        CHECK_THROWS_AS(conditional_mean_contribution(dist, vec<Rational>({5, 0, 0})), std::domain_error);
    }
}

TEST_CASE("claims distributions are validated") {
    CHECK_THROWS_AS(ClaimsDistribution<double>({{0.5, vec<double>({1, 0})}, {0.4, vec<double>({0, 1})}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ClaimsDistribution<double>({{1.0, vec<double>({0, 0})}}), std::invalid_argument);
    CHECK_THROWS_AS(ClaimsDistribution<double>({{1.0, vec<double>({-1, 2})}}), std::invalid_argument);
    CHECK_THROWS_AS(ClaimsDistribution<double>({{1.0, vec<double>({1})}}), std::invalid_argument);
    CHECK_THROWS_AS(ClaimsDistribution<double>({{0.5, vec<double>({1, 0})}, {0.5, vec<double>({1, 0, 0})}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(PremiumVector<double>(vec<double>({0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(PremiumVector<double>(vec<double>({1, -1})), std::invalid_argument);
}

TEST_CASE("duality transforms on random distributions") {
    std::mt19937_64 rng(97);
    std::uniform_int_distribution<Index> width(2, 6);
    std::uniform_real_distribution<double> prem(0.0, 10.0), rate(0.0, 0.1);
    for (int t = 0; t < 100; ++t) {
        const Index m = width(rng);
        const auto dist = random_distribution(rng, m, 12);
        Vector<double> pv(m);
        for (Index i = 0; i < m; ++i) {
            pv(i) = prem(rng);
        }
        const PremiumVector<double> premiums(pv);
        const double r = rate(rng);
        const double pot = (1 + r) * pv.sum();

        const std::vector<ContributionRule<double>> contributions{uniform_rule<double>(), conditional_mean_rule(dist)};
        for (const auto& c_rule : contributions) {
            const auto w_rule = contribution_to_compensation(c_rule, premiums, r);
            const auto back = compensation_to_contribution(w_rule, premiums, r);
            for (const auto& o : dist.outcomes()) {
                const auto c = c_rule(o.claims);
                const auto w = w_rule(o.claims);
                REQUIRE(std::abs(c.sum() - o.claims.sum()) <= 1e-12 * std::max(1.0, o.claims.sum()));
                REQUIRE(std::abs(w.sum() - pot) <= 1e-12 * pot);
                REQUIRE((back(o.claims) - c).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff()));
                // same net position under both systems
                REQUIRE(((w - pv * (1 + r)) - (o.claims - c)).cwiseAbs().maxCoeff() <= 1e-12 * pot);
            }
        }

        const auto w_rule = proportional_rule(premiums, r);
        const auto c_rule = compensation_to_contribution(w_rule, premiums, r);
        const auto again = contribution_to_compensation(c_rule, premiums, r);
        for (const auto& o : dist.outcomes()) {
            const auto w = w_rule(o.claims);
            REQUIRE(std::abs(w.sum() - pot) <= 1e-12 * pot);
            REQUIRE(std::abs(c_rule(o.claims).sum() - o.claims.sum()) <= 1e-12 * std::max(1.0, pot));
            REQUIRE((again(o.claims) - w).cwiseAbs().maxCoeff() <= 1e-12 * pot);
        }
    }
}

TEST_CASE("premium choice does not move the net position") {
    const ClaimsDistribution<double> dist({{0.3, vec<double>({1, 4, 0})}, {0.7, vec<double>({2, 2, 1})}});
    const PremiumVector<double> a(vec<double>({1, 2, 3})), b(vec<double>({5, 0, 1}));
    const auto wa = contribution_to_compensation(conditional_mean_rule(dist), a, 0.05);
    const auto wb = contribution_to_compensation(conditional_mean_rule(dist), b, 0.05);
    for (const auto& o : dist.outcomes()) {
        const Vector<double> na = wa(o.claims) - a.values() * 1.05;
        const Vector<double> nb = wb(o.claims) - b.values() * 1.05;
        CHECK((na - nb).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("uniform rule round trip through its compensation form") {
    const PremiumVector<Rational> prem(vec<Rational>({2, 3, 5}));
    const Rational r(1, 20);
    const auto w_rule = contribution_to_compensation(uniform_rule<Rational>(), prem, r);
    const Vector<Rational> x = vec<Rational>({4, 0, 7});
    const Vector<Rational> expected = prem.values() * (1 + r) + x - Vector<Rational>::Constant(3, Rational(11, 3));
    CHECK(w_rule(x) == expected);
    CHECK(compensation_to_contribution(w_rule, prem, r)(x) == uniform_contribution(x));
}

TEST_CASE("proportional contribution matches its closed form") {
    const PremiumVector<Rational> prem(vec<Rational>({2, 3, 5}));
    const Rational r(1, 10);
    const Vector<Rational> x = vec<Rational>({4, 1, 7});
    const auto c = compensation_to_contribution(proportional_rule(prem, r), prem, r)(x);
    for (Index i = 0; i < 3; ++i) {
        CHECK(c(i) == (1 + r) * prem.values()(i) + x(i) - (1 + r) * 10 * x(i) / 12);
    }
}

TEST_CASE("a tontine is proportional risk sharing on shares held by survivors") {
    const auto pool = fixture::worked_example<Rational>();
    const auto f = dm_scheme(pool);
    CHECK(tontine_as_drs(pool, f, Scenario{7}) == vec<Rational>({400, 100, 25, 0}));
    CHECK(tontine_as_drs(pool, f, Scenario{0}) == vec<Rational>({0, 0, 0, 1}));
    for (std::uint64_t s = 0; s < 8; ++s) {
        CHECK(proportional_compensation(tontine_premiums(pool), tontine_as_drs(pool, f, Scenario{s}),
                                        pool.period_return) == payouts(pool, f, Scenario{s}).amounts);
    }
}
