#pragma once

#include <stdexcept>

#include "tontine/allocation.hpp"

namespace tontine {

/// Time-1 payouts to the n participants followed by the administrator.
template <typename Scalar>
struct PayoutVector {
    Vector<Scalar> amounts;

    Index size() const { return amounts.size(); }
    Index participants() const { return amounts.size() - 1; }
    const Scalar& participant(Index i) const { return amounts(i); }
    const Scalar& administrator() const { return amounts(amounts.size() - 1); }
    Scalar total() const { return amounts.sum(); }
};

/// Three-factor split of a survivor's gross return:
///   W_i = (1+R)(1+R'_i)(1+R'') pi_i.
template <typename Scalar>
struct ReturnDecomposition {
    Scalar fund_return;              // R, deterministic
    Vector<Scalar> risk_adjustment;  // R'_i per participant, deterministic, may be negative
    Scalar mortality_credit;         // R'', depends on the scenario, >= 0
};

namespace detail {

template <typename Scalar>
void check_sizes(const Pool<Scalar>& pool, const ShareAllocation<Scalar>& f) {
    if (f.size() != pool.size()) {
        throw std::invalid_argument("share allocation and pool differ in size");
    }
}

}  // namespace detail

/// Time-0 value of one share: all investments (administrator included) over
/// the shares actually allocated to participants.
template <typename Scalar>
Scalar share_value_initial(const Pool<Scalar>& pool, const ShareAllocation<Scalar>& f) {
    detail::check_sizes(pool, f);
    return pool.total_investment() / f.shares().sum();
}

/// Time-1 value of a surviving share. Undefined (std::domain_error) when
/// nobody survives.
template <typename Scalar>
Scalar share_value_terminal(const Pool<Scalar>& pool, const ShareAllocation<Scalar>& f, Scenario scenario) {
    detail::check_sizes(pool, f);
    if (scenario.all_dead()) {
        throw std::domain_error("S(1) undefined: no participant survives");
    }
    const Vector<Scalar> alive = scenario.indicators<Scalar>(pool.size()).head(pool.size());
    return pool.proceeds() / f.shares().dot(alive);
}

/// Payouts for an arbitrary survival indicator vector of length n (any n,
/// not limited by the scenario bitmask width).
///
/// Survivors split the proceeds in proportion to their shares; when nobody
/// survives the administrator slot is the only non-zero term, so the
/// administrator takes everything.
template <typename Scalar, typename Derived>
PayoutVector<Scalar> payouts_for_survivors(const Pool<Scalar>& pool, const ShareAllocation<Scalar>& f,
                                           const Eigen::MatrixBase<Derived>& alive) {
    detail::check_sizes(pool, f);
    const Index n = pool.size();
    if (alive.size() != n) {
        throw std::invalid_argument("survival indicator vector has the wrong length");
    }
    Vector<Scalar> weights(n + 1);
    bool anyone = false;
    for (Index j = 0; j < n; ++j) {
        const bool survives = alive(j) != typename Derived::Scalar(0);
        anyone = anyone || survives;
        weights(j) = survives ? f.shares()(j) : Scalar(0);
    }
    weights(n) = anyone ? Scalar(0) : f.admin_slot();
    const Scalar denominator = weights.sum();
    weights /= denominator;
    return {Vector<Scalar>(weights * pool.proceeds())};
}

template <typename Scalar>
PayoutVector<Scalar> payouts(const Pool<Scalar>& pool, const ShareAllocation<Scalar>& f, Scenario scenario) {
    const Vector<Scalar> alive = scenario.indicators<Scalar>(pool.size()).head(pool.size());
    return payouts_for_survivors(pool, f, alive);
}

template <typename Scalar>
ReturnDecomposition<Scalar> return_decomposition(const Pool<Scalar>& pool, const ShareAllocation<Scalar>& f,
                                                 Scenario scenario) {
    detail::check_sizes(pool, f);
    if (scenario.all_dead()) {
        throw std::domain_error("return decomposition undefined: no participant survives");
    }
    const Index n = pool.size();
    const Scalar s0 = share_value_initial(pool, f);
    const Vector<Scalar> fe = f.extended();
    const Vector<Scalar> ind = scenario.indicators<Scalar>(n);

    ReturnDecomposition<Scalar> out;
    out.fund_return = pool.period_return;
    out.risk_adjustment = ((f.shares() * s0).cwiseQuotient(pool.investments).array() - Scalar(1)).matrix();

    const Scalar alive_shares = fe.dot(ind);
    const Scalar dead_shares = fe.sum() - alive_shares;
    out.mortality_credit = (dead_shares - f.admin_slot()) / alive_shares;
    return out;
}

}  // namespace tontine
