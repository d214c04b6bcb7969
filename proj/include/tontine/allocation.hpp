#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "tontine/core.hpp"

namespace tontine {

/// Tontine shares held by each participant, plus the administrator slot.
///
/// The administrator holds no shares; the slot only keeps the payout
/// denominator positive in the all-dead scenario. Any positive value gives
/// the same payouts.
template <typename Scalar>
class ShareAllocation {
public:
    explicit ShareAllocation(Vector<Scalar> shares, Scalar admin_slot = Scalar(1))
        : shares_(std::move(shares)), admin_slot_(std::move(admin_slot)) {
        for (Index i = 0; i < shares_.size(); ++i) {
            if (!(shares_(i) > Scalar(0))) {
                throw std::invalid_argument("share allocation: participant " + std::to_string(i + 1) +
                                            " must hold a strictly positive number of shares");
            }
        }
        if (!(admin_slot_ > Scalar(0))) {
            throw std::invalid_argument("share allocation: administrator slot must be strictly positive");
        }
    }

    Index size() const { return shares_.size(); }
    const Vector<Scalar>& shares() const { return shares_; }
    const Scalar& admin_slot() const { return admin_slot_; }

    /// Shares followed by the administrator slot (length n+1).
    Vector<Scalar> extended() const {
        Vector<Scalar> out(size() + 1);
        out.head(size()) = shares_;
        out(size()) = admin_slot_;
        return out;
    }

    ShareAllocation with_admin_slot(Scalar slot) const { return ShareAllocation(shares_, std::move(slot)); }

    ShareAllocation scaled(const Scalar& factor) const {
        return ShareAllocation(Vector<Scalar>(shares_ * factor), Scalar(admin_slot_ * factor));
    }

private:
    Vector<Scalar> shares_;
    Scalar admin_slot_;
};

/// Survival benefits of the pure endowments each participant could buy for
/// their investment, plus an arbitrary positive administrator entry.
template <typename Scalar>
class EndowmentBenefits {
public:
    explicit EndowmentBenefits(Vector<Scalar> benefits, Scalar admin_slot = Scalar(1))
        : benefits_(std::move(benefits)), admin_slot_(std::move(admin_slot)) {
        for (Index i = 0; i < benefits_.size(); ++i) {
            if (!(benefits_(i) > Scalar(0))) {
                throw std::invalid_argument("endowment benefits must be strictly positive");
            }
        }
        if (!(admin_slot_ > Scalar(0))) {
            throw std::invalid_argument("endowment benefits: administrator slot must be strictly positive");
        }
    }

    Index size() const { return benefits_.size(); }
    const Vector<Scalar>& benefits() const { return benefits_; }
    const Scalar& admin_slot() const { return admin_slot_; }

    Vector<Scalar> extended() const {
        Vector<Scalar> out(size() + 1);
        out.head(size()) = benefits_;
        out(size()) = admin_slot_;
        return out;
    }

private:
    Vector<Scalar> benefits_;
    Scalar admin_slot_;
};

/// Shares proportional to money at risk: investment over survival
/// probability.
template <typename Scalar>
ShareAllocation<Scalar> dm_scheme(const Pool<Scalar>& pool) {
    return ShareAllocation<Scalar>(pool.investments.cwiseQuotient(pool.survival_probs));
}

/// Shares equal to the investment; survivors' relative payouts depend on
/// stakes only.
template <typename Scalar>
ShareAllocation<Scalar> t_scheme(const Pool<Scalar>& pool) {
    return ShareAllocation<Scalar>(pool.investments);
}

/// One share each: survivors split the proceeds equally.
template <typename Scalar>
ShareAllocation<Scalar> dr_scheme(Index n) {
    if (n < 2) {
        throw std::invalid_argument("dr_scheme: n must be at least 2");
    }
    return ShareAllocation<Scalar>(Vector<Scalar>::Ones(n));
}

/// Shares equal to the reciprocal survival probability, regardless of the
/// amount invested.
template <typename Scalar>
ShareAllocation<Scalar> reciprocal_scheme(const Pool<Scalar>& pool) {
    return ShareAllocation<Scalar>(pool.survival_probs.cwiseInverse());
}

/// Shares linear in the investment: f_i = investment_i * g(p_i). `g` may be
/// any positive function of the survival probability.
template <typename Scalar, typename Fn>
ShareAllocation<Scalar> linear_scheme(const Pool<Scalar>& pool, Fn&& g) {
    Vector<Scalar> shares(pool.size());
    for (Index i = 0; i < pool.size(); ++i) {
        const Scalar weight = g(pool.survival_probs(i));
        if (!(weight > Scalar(0))) {
            throw std::invalid_argument("linear_scheme: g must be strictly positive at p_" + std::to_string(i + 1));
        }
        shares(i) = pool.investments(i) * weight;
    }
    return ShareAllocation<Scalar>(std::move(shares));
}

/// Benefits for which each investment is the net single premium of a pure
/// endowment at technical rate `technical_rate`: L_i = pi_i (1+R') / p_i.
template <typename Scalar>
EndowmentBenefits<Scalar> benefits_from_net_premium(const Pool<Scalar>& pool, const Scalar& technical_rate) {
    if (!(technical_rate >= Scalar(0))) {
        throw std::invalid_argument("technical rate must be >= 0");
    }
    return EndowmentBenefits<Scalar>(
        Vector<Scalar>(pool.investments.cwiseQuotient(pool.survival_probs) * Scalar(Scalar(1) + technical_rate)));
}

template <typename Scalar>
ShareAllocation<Scalar> allocation_from_benefits(const EndowmentBenefits<Scalar>& benefits) {
    return ShareAllocation<Scalar>(benefits.benefits(), benefits.admin_slot());
}

/// Scaling that turns promised endowment benefits into a self-financing
/// payout in the given scenario: (1+R) * total investment over the sum of
/// benefits of those entitled (the administrator when everyone died).
template <typename Scalar>
Scalar alpha_coefficient(const Pool<Scalar>& pool, const EndowmentBenefits<Scalar>& benefits, Scenario scenario) {
    if (benefits.size() != pool.size()) {
        throw std::invalid_argument("alpha_coefficient: benefits and pool differ in size");
    }
    const Vector<Scalar> indicators = scenario.indicators<Scalar>(pool.size());
    return pool.proceeds() / benefits.extended().dot(indicators);
}

enum class Scheme { dm, t, dr, reciprocal, benefits };

/// Named internal scheme evaluated on a pool. `technical_rate` only matters
/// for Scheme::benefits.
template <typename Scalar>
ShareAllocation<Scalar> allocate(Scheme scheme, const Pool<Scalar>& pool, const Scalar& technical_rate = Scalar(0)) {
    switch (scheme) {
        case Scheme::dm:
            return dm_scheme(pool);
        case Scheme::t:
            return t_scheme(pool);
        case Scheme::dr:
            return dr_scheme<Scalar>(pool.size());
        case Scheme::reciprocal:
            return reciprocal_scheme(pool);
        case Scheme::benefits:
            return allocation_from_benefits(benefits_from_net_premium(pool, technical_rate));
    }
    throw std::logic_error("unknown scheme");
}

/// Whether the scheme's shares depend on the investments.
inline bool depends_on_investments(Scheme scheme) {
    return scheme == Scheme::dm || scheme == Scheme::t || scheme == Scheme::benefits;
}

}  // namespace tontine
