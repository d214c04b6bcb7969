#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tontine/parallel.hpp"
#include "tontine/payout.hpp"

namespace tontine {

struct EnumerationOptions {
    /// Largest n enumerated exactly (2^n scenarios). Above it callers should
    /// fall back to Monte Carlo.
    Index max_participants = 20;
    /// 0 selects default_worker_count().
    unsigned workers = 0;
};

template <typename Scalar>
struct ExpectationReport {
    Vector<Scalar> expected_payout;              // E[W_i], i = 1..n+1
    Vector<Scalar> conditional_expected_payout;  // E[W_i | someone survives]
    Scalar prob_all_dead;
    Scalar group_expected_payout;  // E[sum of participant payouts]
};

template <typename Scalar>
struct PayoutRow {
    Scenario scenario;
    Scalar probability;
    PayoutVector<Scalar> payouts;
};

namespace detail {

// Scenarios per work chunk; fixed so the reduction order never depends on
// the number of workers.
inline constexpr std::uint64_t kScenarioChunk = 4096;

inline void check_enumerable(Index n, const EnumerationOptions& options) {
    if (n > options.max_participants || n > kMaxScenarioParticipants) {
        throw std::length_error("n = " + std::to_string(n) + " exceeds the exact-enumeration limit of " +
                                std::to_string(options.max_participants) + "; use Monte Carlo");
    }
}

template <typename Scalar>
void check_model(Index n, const SurvivalModel<Scalar>& model) {
    if (model.size() != n) {
        throw std::invalid_argument("survival model and pool differ in size");
    }
}

/// Runs `visit(scenario, probability, accumulator)` over every scenario in
/// fixed-size chunks, then reduces chunk accumulators in chunk order.
template <typename Scalar, typename Visit>
Vector<Scalar> reduce_scenarios(Index n, Index width, const SurvivalModel<Scalar>& model,
                                const EnumerationOptions& options, Visit&& visit) {
    const std::uint64_t total = scenario_count(n);
    const std::size_t chunks = static_cast<std::size_t>((total + kScenarioChunk - 1) / kScenarioChunk);
    std::vector<Vector<Scalar>> partial(chunks);
    for_each_chunk(chunks, options.workers, [&](std::size_t c) {
        CompensatedVectorSum<Scalar> acc(width);
        const std::uint64_t lo = c * kScenarioChunk;
        const std::uint64_t hi = std::min(total, lo + kScenarioChunk);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            const Scenario s{idx};
            visit(s, model.probability(s), acc);
        }
        partial[c] = acc.value();
    });
    CompensatedVectorSum<Scalar> acc(width);
    for (const auto& p : partial) {
        acc.add(p);
    }
    return acc.value();
}

}  // namespace detail

/// Exact expectations by summing over all 2^n scenarios.
template <typename Scalar>
ExpectationReport<Scalar> enumerate(const Pool<Scalar>& pool, const ShareAllocation<Scalar>& f,
                                    const SurvivalModel<Scalar>& model, const EnumerationOptions& options = {}) {
    const Index n = pool.size();
    detail::check_sizes(pool, f);
    detail::check_model(n, model);
    detail::check_enumerable(n, options);

    const Vector<Scalar> expected =
        detail::reduce_scenarios(n, n + 1, model, options, [&](Scenario s, const Scalar& p, auto& acc) {
            acc.add_scaled(p, payouts(pool, f, s).amounts);
        });

    ExpectationReport<Scalar> report;
    report.expected_payout = expected;
    report.prob_all_dead = model.prob_all_dead();
    const Scalar some_survive = Scalar(1) - report.prob_all_dead;
    report.conditional_expected_payout = expected / some_survive;
    report.conditional_expected_payout(n) = Scalar(0);
    report.group_expected_payout = expected.head(n).sum();
    return report;
}

/// E[f_i I_i / sum_j f_j I_j | at least one survivor] for every participant.
template <typename Scalar>
Vector<Scalar> expected_share_fractions(const ShareAllocation<Scalar>& f, const SurvivalModel<Scalar>& model,
                                        const EnumerationOptions& options = {}) {
    const Index n = f.size();
    detail::check_model(n, model);
    detail::check_enumerable(n, options);

    const Vector<Scalar> weighted =
        detail::reduce_scenarios(n, n, model, options, [&](Scenario s, const Scalar& p, auto& acc) {
            if (s.all_dead()) {
                return;
            }
            const Vector<Scalar> alive = s.indicators<Scalar>(n).head(n);
            const Vector<Scalar> held = f.shares().cwiseProduct(alive);
            acc.add_scaled(Scalar(p / held.sum()), held);
        });
    return weighted / model.prob_some_survive();
}

template <typename Scalar>
Scalar expected_share_fraction(const ShareAllocation<Scalar>& f, const SurvivalModel<Scalar>& model, Index i,
                               const EnumerationOptions& options = {}) {
    if (i < 0 || i >= f.size()) {
        throw std::out_of_range("participant index out of range");
    }
    return expected_share_fractions(f, model, options)(i);
}

/// Every scenario with its probability and payouts, ascending by bitmask.
template <typename Scalar>
std::vector<PayoutRow<Scalar>> payout_distribution(const Pool<Scalar>& pool, const ShareAllocation<Scalar>& f,
                                                   const SurvivalModel<Scalar>& model,
                                                   const EnumerationOptions& options = {}) {
    const Index n = pool.size();
    detail::check_sizes(pool, f);
    detail::check_model(n, model);
    detail::check_enumerable(n, options);

    const std::uint64_t total = scenario_count(n);
    std::vector<PayoutRow<Scalar>> rows;
    rows.reserve(static_cast<std::size_t>(total));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        const Scenario s{idx};
        rows.push_back({s, model.probability(s), payouts(pool, f, s)});
    }
    return rows;
}

}  // namespace tontine
