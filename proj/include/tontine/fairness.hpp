#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "tontine/expectation.hpp"

namespace tontine {

/// Expected payout minus accumulated investment, for each party.
///
/// Flags compare residuals with `tolerance` relative to a scale:
///  - participant i: (1+R) pi_i,
///  - administrator and the participants as a group: (1+R) times the total
///    investment, so the two flags use one threshold on residuals that are
///    negatives of each other.
template <typename Scalar>
struct FairnessReport {
    Vector<Scalar> participant_residuals;  // E[W_i] - (1+R) pi_i
    Scalar admin_residual;                 // E[W_{n+1}] - (1+R) pi_{n+1}
    Scalar collective_residual;            // E[sum W_i] - (1+R) sum pi_i, participants only
    bool participant_fair{false};
    bool admin_fair{false};
    bool collectively_fair{false};
};

template <typename Scalar>
FairnessReport<Scalar> check_fairness(const Pool<Scalar>& pool, const ShareAllocation<Scalar>& f,
                                      const SurvivalModel<Scalar>& model, double tolerance = kCurrencyTolerance,
                                      const EnumerationOptions& options = {}) {
    if (!(tolerance >= 0.0)) {
        throw std::invalid_argument("fairness tolerance must be non-negative");
    }
    const Index n = pool.size();
    const auto expectation = enumerate(pool, f, model, options);
    const Scalar growth = pool.growth_factor();

    FairnessReport<Scalar> report;
    report.participant_residuals = expectation.expected_payout.head(n) - pool.investments * growth;
    report.admin_residual = expectation.expected_payout(n) - growth * pool.admin_investment;
    report.collective_residual = expectation.group_expected_payout - growth * pool.participant_total();

    auto within = [&](const Scalar& residual, const Scalar& scale) {
        if constexpr (is_exact_v<Scalar>) {
            if (tolerance == 0.0) {
                return residual == Scalar(0);
            }
            return abs_value(residual) <= Scalar(tolerance) * scale;
        } else {
            return std::abs(residual) <= tolerance * scale;
        }
    };

    report.participant_fair = true;
    for (Index i = 0; i < n; ++i) {
        report.participant_fair =
            report.participant_fair && within(report.participant_residuals(i), Scalar(growth * pool.investments(i)));
    }
    const Scalar group_scale = pool.proceeds();
    report.admin_fair = within(report.admin_residual, group_scale);
    report.collectively_fair = within(report.collective_residual, group_scale);
    return report;
}

/// Administrator investment that makes the fund fair for the administrator:
/// participants' total times Pr[all dead] / Pr[someone survives]. The pool's
/// own administrator investment is ignored.
template <typename Scalar>
Scalar admin_fair_contribution(const Pool<Scalar>& pool, const SurvivalModel<Scalar>& model) {
    const Scalar all_dead = model.prob_all_dead();
    if (!(all_dead > Scalar(0) && all_dead < Scalar(1))) {
        throw std::domain_error("Pr[all participants die] must lie strictly in (0,1)");
    }
    return pool.participant_total() * all_dead / (Scalar(1) - all_dead);
}

/// Participant investments making the fund fair for everyone, for shares
/// that do not depend on the investments. Fair investments are only
/// determined up to scale, so the administrator's investment anchors them.
template <typename Scalar>
Vector<Scalar> solve_fair_investments(const ShareAllocation<Scalar>& f, const Scalar& admin_investment,
                                      const SurvivalModel<Scalar>& model, const EnumerationOptions& options = {}) {
    if (!(admin_investment > Scalar(0))) {
        throw std::invalid_argument("fair investments need a strictly positive administrator investment");
    }
    const Scalar all_dead = model.prob_all_dead();
    if (!(all_dead > Scalar(0) && all_dead < Scalar(1))) {
        throw std::domain_error("Pr[all participants die] must lie strictly in (0,1)");
    }
    const Scalar odds = (Scalar(1) - all_dead) / all_dead;
    return expected_share_fractions(f, model, options) * Scalar(admin_investment * odds);
}

/// Equal fair investment per participant for an exchangeable survival law
/// and uniform shares.
template <typename Scalar>
Scalar uniform_exchangeable_fair_investment(Index n, const Scalar& prob_all_dead, const Scalar& prob_some_survive,
                                            const Scalar& admin_investment) {
    if (n < 1) {
        throw std::invalid_argument("n must be positive");
    }
    if (!(prob_all_dead > Scalar(0) && prob_all_dead < Scalar(1) && prob_some_survive > Scalar(0) &&
          prob_some_survive < Scalar(1))) {
        throw std::invalid_argument("probabilities must lie strictly in (0,1)");
    }
    if (!relatively_close(Scalar(prob_all_dead + prob_some_survive), Scalar(1), kProbabilityTolerance)) {
        throw std::invalid_argument("Pr[all dead] and Pr[someone survives] must sum to 1");
    }
    return admin_investment / Scalar(static_cast<long>(n)) * prob_some_survive / prob_all_dead;
}

/// Shares computed from a candidate pool; used when shares depend on the
/// investments themselves.
template <typename Scalar>
using InternalScheme = std::function<ShareAllocation<Scalar>(const Pool<Scalar>&)>;

struct FixedPointOptions {
    double tolerance = 1e-12;  // max relative change between iterates
    int max_iterations = 10'000;
    /// next = (1 - damping) * update + damping * current; 0 is plain iteration.
    double damping = 0.0;
    EnumerationOptions enumeration{};
};

template <typename Scalar>
struct FixedPointResult {
    Vector<Scalar> investments;
    bool converged{false};
    /// Index of the first iterate that the following update left unchanged
    /// (within tolerance); equals max_iterations on failure.
    int iterations{0};
    double final_change{0.0};
    std::vector<Vector<Scalar>> trajectory;  // iterates, starting guess first
};

/// Fair investments when the shares depend on the investments: iterate
/// pi <- F(shares(pi)) where F is the fixed-share fair solution. The agreed
/// probabilities handed to the scheme are the model's marginals.
///
/// Convergence is not guaranteed; on failure the trajectory is returned with
/// converged == false.
template <typename Scalar>
FixedPointResult<Scalar> solve_fair_investments_internal(const InternalScheme<Scalar>& scheme,
                                                         const Scalar& admin_investment,
                                                         const SurvivalModel<Scalar>& model,
                                                         const FixedPointOptions& options = {}) {
    if (!(options.damping >= 0.0 && options.damping < 1.0)) {
        throw std::invalid_argument("damping must lie in [0, 1)");
    }
    const Index n = model.size();
    Pool<Scalar> pool;
    pool.survival_probs = model.marginals();
    pool.admin_investment = admin_investment;

    // Start from the equal split of the fair participant total.
    const Scalar all_dead = model.prob_all_dead();
    const Scalar fair_total = admin_investment * (Scalar(1) - all_dead) / all_dead;
    Vector<Scalar> current = Vector<Scalar>::Constant(n, Scalar(fair_total / Scalar(static_cast<long>(n))));

    FixedPointResult<Scalar> result;
    result.trajectory.push_back(current);
    for (int k = 0; k < options.max_iterations; ++k) {
        pool.investments = current;
        Vector<Scalar> next =
            solve_fair_investments(scheme(pool), admin_investment, model, options.enumeration);
        if (options.damping > 0.0) {
            next = next * Scalar(1.0 - options.damping) + current * Scalar(options.damping);
        }
        double change = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double a = to_double(next(i));
            const double b = to_double(current(i));
            change = std::max(change, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
        }
        current = std::move(next);
        result.trajectory.push_back(current);
        result.final_change = change;
        if (change <= options.tolerance) {
            result.converged = true;
            result.iterations = k;
            break;
        }
    }
    if (!result.converged) {
        result.iterations = options.max_iterations;
    }
    result.investments = current;
    return result;
}

}  // namespace tontine
