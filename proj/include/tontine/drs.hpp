#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tontine/payout.hpp"

namespace tontine {

// Decentralized risk sharing over finite claims distributions. Party n+1 is
// the administrator throughout.

template <typename Scalar>
struct ClaimsOutcome {
    Scalar probability;
    Vector<Scalar> claims;  // X_1..X_{n+1}, non-negative
};

/// Finite table of claims outcomes. Every outcome must have a strictly
/// positive total claim (the administrator entry is the complement of the
/// participants' claims when they are all zero).
template <typename Scalar>
class ClaimsDistribution {
public:
    explicit ClaimsDistribution(std::vector<ClaimsOutcome<Scalar>> outcomes) : outcomes_(std::move(outcomes)) {
        if (outcomes_.empty()) {
            throw std::invalid_argument("claims distribution needs at least one outcome");
        }
        const Index width = outcomes_.front().claims.size();
        if (width < 2) {
            throw std::invalid_argument("claims vectors need at least 2 parties");
        }
        CompensatedSum<Scalar> total;
        for (std::size_t k = 0; k < outcomes_.size(); ++k) {
            const auto& o = outcomes_[k];
            const std::string where = "outcome " + std::to_string(k) + ": ";
            if (o.claims.size() != width) {
                throw std::invalid_argument(where + "claims vectors differ in length");
            }
            if (!(o.probability >= Scalar(0))) {
                throw std::invalid_argument(where + "probability must be non-negative");
            }
            for (Index i = 0; i < width; ++i) {
                if (!(o.claims(i) >= Scalar(0))) {
                    throw std::invalid_argument(where + "claims must be non-negative");
                }
            }
            if (!(o.claims.sum() > Scalar(0))) {
                throw std::invalid_argument(where + "total claim must be strictly positive");
            }
            total.add(o.probability);
        }
        if (!relatively_close(total.value(), Scalar(1), kProbabilityTolerance)) {
            throw std::invalid_argument("outcome probabilities must sum to 1");
        }
    }

    const std::vector<ClaimsOutcome<Scalar>>& outcomes() const { return outcomes_; }
    std::size_t size() const { return outcomes_.size(); }
    Index parties() const { return outcomes_.front().claims.size(); }
    const ClaimsOutcome<Scalar>& operator[](std::size_t k) const { return outcomes_.at(k); }

private:
    std::vector<ClaimsOutcome<Scalar>> outcomes_;
};

/// Time-0 premiums of all n+1 parties; each >= 0 with positive total.
template <typename Scalar>
class PremiumVector {
public:
    explicit PremiumVector(Vector<Scalar> premiums) : premiums_(std::move(premiums)) {
        for (Index i = 0; i < premiums_.size(); ++i) {
            if (!(premiums_(i) >= Scalar(0))) {
                throw std::invalid_argument("premiums must be non-negative");
            }
        }
        if (!(premiums_.sum() > Scalar(0))) {
            throw std::invalid_argument("premiums must have a strictly positive total");
        }
    }

    const Vector<Scalar>& values() const { return premiums_; }
    Index size() const { return premiums_.size(); }
    Scalar total() const { return premiums_.sum(); }

private:
    Vector<Scalar> premiums_;
};

/// Maps a realised claims vector to a vector of the same length.
template <typename Scalar>
using CompensationRule = std::function<Vector<Scalar>(const Vector<Scalar>&)>;
template <typename Scalar>
using ContributionRule = std::function<Vector<Scalar>(const Vector<Scalar>&)>;

/// Each party receives the accumulated premium pool in proportion to its claim.
template <typename Scalar>
Vector<Scalar> proportional_compensation(const PremiumVector<Scalar>& premiums, const Vector<Scalar>& claims,
                                         const Scalar& rate) {
    if (claims.size() != premiums.size()) {
        throw std::invalid_argument("claims and premiums differ in length");
    }
    const Scalar total_claims = claims.sum();
    if (!(total_claims > Scalar(0))) {
        throw std::invalid_argument("proportional rule needs a strictly positive total claim");
    }
    return (claims / total_claims) * Scalar((Scalar(1) + rate) * premiums.total());
}

/// Everyone contributes the same share of the total claim.
template <typename Scalar>
Vector<Scalar> uniform_contribution(const Vector<Scalar>& claims, Index parties) {
    if (parties != claims.size()) {
        throw std::invalid_argument("uniform_contribution: party count does not match claims length");
    }
    return Vector<Scalar>::Constant(parties, Scalar(claims.sum() / Scalar(static_cast<long>(parties))));
}

template <typename Scalar>
Vector<Scalar> uniform_contribution(const Vector<Scalar>& claims) {
    return uniform_contribution(claims, claims.size());
}

/// E[X | sum of claims = s] for the total s of `claims`, computed by exact
/// conditioning over the table. Totals within 1e-12 (absolute) count as equal.
template <typename Scalar>
Vector<Scalar> conditional_mean_contribution(const ClaimsDistribution<Scalar>& dist, const Vector<Scalar>& claims) {
    if (claims.size() != dist.parties()) {
        throw std::invalid_argument("claims length does not match the distribution");
    }
    const Scalar target = claims.sum();
    auto same_total = [&](const Scalar& s) {
        if constexpr (is_exact_v<Scalar>) {
            return s == target;
        } else {
            return std::abs(s - target) <= 1e-12;
        }
    };
    CompensatedVectorSum<Scalar> weighted(dist.parties());
    CompensatedSum<Scalar> mass;
    for (const auto& o : dist.outcomes()) {
        if (same_total(o.claims.sum())) {
            weighted.add_scaled(o.probability, o.claims);
            mass.add(o.probability);
        }
    }
    const Scalar m = mass.value();
    if (!(m > Scalar(0))) {
        throw std::domain_error("total claim has zero probability under the distribution");
    }
    return weighted.value() / m;
}

template <typename Scalar>
Vector<Scalar> conditional_mean_contribution(const ClaimsDistribution<Scalar>& dist, std::size_t outcome_index) {
    return conditional_mean_contribution(dist, dist[outcome_index].claims);
}

template <typename Scalar>
CompensationRule<Scalar> proportional_rule(PremiumVector<Scalar> premiums, Scalar rate) {
    return [premiums = std::move(premiums), rate = std::move(rate)](const Vector<Scalar>& claims) {
        return proportional_compensation(premiums, claims, rate);
    };
}

template <typename Scalar>
ContributionRule<Scalar> uniform_rule() {
    return [](const Vector<Scalar>& claims) { return uniform_contribution(claims); };
}

template <typename Scalar>
ContributionRule<Scalar> conditional_mean_rule(ClaimsDistribution<Scalar> dist) {
    return [dist = std::move(dist)](const Vector<Scalar>& claims) {
        return conditional_mean_contribution(dist, claims);
    };
}

/// W_i(X) = (1+R) pi_i + X_i - C_i(X). The net time-1 position of each party
/// is the same under both systems for any premium choice.
template <typename Scalar>
CompensationRule<Scalar> contribution_to_compensation(ContributionRule<Scalar> rule, PremiumVector<Scalar> premiums,
                                                      Scalar rate) {
    return [rule = std::move(rule), premiums = std::move(premiums),
            rate = std::move(rate)](const Vector<Scalar>& claims) -> Vector<Scalar> {
        if (claims.size() != premiums.size()) {
            throw std::invalid_argument("claims and premiums differ in length");
        }
        return premiums.values() * Scalar(Scalar(1) + rate) + claims - rule(claims);
    };
}

/// C_i(X) = (1+R) pi_i + X_i - W_i(X).
template <typename Scalar>
ContributionRule<Scalar> compensation_to_contribution(CompensationRule<Scalar> rule, PremiumVector<Scalar> premiums,
                                                      Scalar rate) {
    return [rule = std::move(rule), premiums = std::move(premiums),
            rate = std::move(rate)](const Vector<Scalar>& claims) -> Vector<Scalar> {
        if (claims.size() != premiums.size()) {
            throw std::invalid_argument("claims and premiums differ in length");
        }
        return premiums.values() * Scalar(Scalar(1) + rate) + claims - rule(claims);
    };
}

/// Claims vector under which the proportional rule pays exactly the tontine
/// payouts: surviving participants claim their shares, the administrator
/// claims its slot when nobody survives.
template <typename Scalar>
Vector<Scalar> tontine_as_drs(const Pool<Scalar>& pool, const ShareAllocation<Scalar>& f, Scenario scenario) {
    detail::check_sizes(pool, f);
    return f.extended().cwiseProduct(scenario.indicators<Scalar>(pool.size()));
}

/// Premiums of the tontine fund viewed as a compensation-based scheme.
template <typename Scalar>
PremiumVector<Scalar> tontine_premiums(const Pool<Scalar>& pool) {
    return PremiumVector<Scalar>(pool.investment_vector());
}

}  // namespace tontine
