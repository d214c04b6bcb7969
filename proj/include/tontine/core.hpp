#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tontine/types.hpp"

namespace tontine {

// Largest pool a Scenario bitmask can address.
inline constexpr Index kMaxScenarioParticipants = 62;

/// One participant as agreed at set-up: the amount invested and the agreed
/// (not necessarily real) probability of surviving the period.
template <typename Scalar>
struct Participant {
    Scalar investment;
    Scalar survival_prob;
};

/// A single-period fund: n participants, an administrator (party n+1) who
/// may also invest, and a deterministic period return R >= 0.
///
/// Pools are plain values; validate_pool() reports every broken invariant
/// instead of the constructor throwing, so malformed input can be inspected.
template <typename Scalar>
struct Pool {
    Vector<Scalar> investments;     // participants only, length n
    Vector<Scalar> survival_probs;  // agreed probabilities, length n
    Scalar admin_investment{0};
    Scalar period_return{0};

    static Pool from_participants(const std::vector<Participant<Scalar>>& participants,
                                  Scalar admin_investment = Scalar(0),
                                  Scalar period_return = Scalar(0)) {
        Pool pool;
        const auto n = static_cast<Index>(participants.size());
        pool.investments.resize(n);
        pool.survival_probs.resize(n);
        for (Index i = 0; i < n; ++i) {
            pool.investments(i) = participants[static_cast<std::size_t>(i)].investment;
            pool.survival_probs(i) = participants[static_cast<std::size_t>(i)].survival_prob;
        }
        pool.admin_investment = std::move(admin_investment);
        pool.period_return = std::move(period_return);
        return pool;
    }

    Index size() const { return investments.size(); }

    Participant<Scalar> participant(Index i) const { return {investments(i), survival_probs(i)}; }

    /// Investments of all n+1 parties, administrator last.
    Vector<Scalar> investment_vector() const {
        Vector<Scalar> out(size() + 1);
        out.head(size()) = investments;
        out(size()) = admin_investment;
        return out;
    }

    Scalar participant_total() const { return investments.sum(); }
    Scalar total_investment() const { return participant_total() + admin_investment; }
    Scalar growth_factor() const { return Scalar(1) + period_return; }

    /// (1+R) times everything invested: the amount shared out at time 1.
    Scalar proceeds() const { return growth_factor() * total_investment(); }
};

/// One of the 2^n survival outcomes. Bit j of the index is the survival
/// indicator of participant j+1 (participant 1 is the least-significant bit).
struct Scenario {
    std::uint64_t index{0};

    bool survives(Index participant) const {
        return ((index >> static_cast<unsigned>(participant)) & 1U) != 0;
    }

    bool all_dead() const { return index == 0; }

    /// Survival indicators of the n participants followed by the
    /// administrator indicator, as a vector of n+1 zeros and ones.
    template <typename Scalar>
    Vector<Scalar> indicators(Index n) const {
        Vector<Scalar> out(n + 1);
        for (Index j = 0; j < n; ++j) {
            out(j) = survives(j) ? Scalar(1) : Scalar(0);
        }
        out(n) = all_dead() ? Scalar(1) : Scalar(0);
        return out;
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline std::uint64_t scenario_count(Index n) {
    if (n < 0 || n > kMaxScenarioParticipants) {
        throw std::invalid_argument("scenario enumeration needs 0 <= n <= 62");
    }
    return std::uint64_t{1} << static_cast<unsigned>(n);
}

/// Administrator indicator: 1 exactly when every participant has died.
inline int admin_indicator(Scenario s) { return s.all_dead() ? 1 : 0; }

/// Joint law of the participants' survival indicators: either independent
/// with the given marginals, or an explicit table over all 2^n scenarios.
template <typename Scalar>
class SurvivalModel {
public:
    struct Independent {
        Vector<Scalar> survival_probs;
    };
    struct JointTable {
        std::vector<Scalar> probabilities;  // indexed by scenario bitmask
        Index participants{0};
    };

    static SurvivalModel independent(Vector<Scalar> survival_probs) {
        return SurvivalModel(Independent{std::move(survival_probs)});
    }

    static SurvivalModel independent(const Pool<Scalar>& pool) { return independent(pool.survival_probs); }

    static SurvivalModel joint_table(std::vector<Scalar> probabilities, Index participants) {
        return SurvivalModel(JointTable{std::move(probabilities), participants});
    }

    bool is_independent() const { return std::holds_alternative<Independent>(law_); }
    const Independent* as_independent() const { return std::get_if<Independent>(&law_); }
    const JointTable* as_joint_table() const { return std::get_if<JointTable>(&law_); }

    Index size() const {
        if (const auto* ind = as_independent()) {
            return ind->survival_probs.size();
        }
        return std::get<JointTable>(law_).participants;
    }

    /// Probability of one scenario. Throws std::out_of_range for an index
    /// outside [0, 2^n).
    Scalar probability(Scenario s) const {
        const Index n = size();
        if (n > kMaxScenarioParticipants || s.index >= scenario_count(n)) {
            throw std::out_of_range("scenario index out of range");
        }
        if (const auto* ind = as_independent()) {
            Scalar p(1);
            for (Index j = 0; j < n; ++j) {
                const Scalar& pj = ind->survival_probs(j);
                p *= s.survives(j) ? pj : Scalar(Scalar(1) - pj);
            }
            return p;
        }
        return std::get<JointTable>(law_).probabilities[s.index];
    }

    /// Pr[every participant dies], i.e. Pr[administrator indicator = 1].
    Scalar prob_all_dead() const {
        if (const auto* ind = as_independent()) {
            Scalar p(1);
            for (Index j = 0; j < ind->survival_probs.size(); ++j) {
                p *= Scalar(1) - ind->survival_probs(j);
            }
            return p;
        }
        return std::get<JointTable>(law_).probabilities.front();
    }

    Scalar prob_some_survive() const { return Scalar(1) - prob_all_dead(); }

    /// Marginal survival probabilities Pr[I_j = 1].
    Vector<Scalar> marginals() const {
        if (const auto* ind = as_independent()) {
            return ind->survival_probs;
        }
        const auto& table = std::get<JointTable>(law_);
        const Index n = table.participants;
        Vector<Scalar> out = Vector<Scalar>::Zero(n);
        for (std::uint64_t idx = 0; idx < table.probabilities.size(); ++idx) {
            const Scenario s{idx};
            for (Index j = 0; j < n; ++j) {
                if (s.survives(j)) {
                    out(j) += table.probabilities[idx];
                }
            }
        }
        return out;
    }

private:
    explicit SurvivalModel(std::variant<Independent, JointTable> law) : law_(std::move(law)) {}

    std::variant<Independent, JointTable> law_;
};

template <typename Scalar>
Scalar scenario_probability(const SurvivalModel<Scalar>& model, Scenario s) {
    return model.probability(s);
}

struct Violation {
    enum class Kind {
        too_few_participants,
        non_positive_investment,
        survival_prob_out_of_range,
        negative_admin_investment,
        negative_return,
        non_positive_total,
        model_size_mismatch,
        negative_table_entry,
        table_not_normalized,
        all_dead_prob_degenerate,
    };

    Kind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }

    bool has(Violation::Kind kind) const {
        for (const auto& v : violations) {
            if (v.kind == kind) {
                return true;
            }
        }
        return false;
    }
};

template <typename Scalar>
ValidationReport validate_pool(const Pool<Scalar>& pool, const SurvivalModel<Scalar>& model) {
    using Kind = Violation::Kind;
    ValidationReport report;
    auto fail = [&](Kind kind, std::string message) { report.violations.push_back({kind, std::move(message)}); };

    const Index n = pool.size();
    if (n < 2) {
        fail(Kind::too_few_participants, "a pool needs at least 2 participants, got " + std::to_string(n));
    }
    if (pool.survival_probs.size() != n) {
        fail(Kind::model_size_mismatch, "investments and survival probabilities differ in length");
        return report;
    }
    for (Index i = 0; i < n; ++i) {
        if (!(pool.investments(i) > Scalar(0))) {
            fail(Kind::non_positive_investment,
                 "participant " + std::to_string(i + 1) + ": participant investment must be strictly positive");
        }
        const Scalar& p = pool.survival_probs(i);
        if (!(p > Scalar(0) && p < Scalar(1))) {
            fail(Kind::survival_prob_out_of_range,
                 "participant " + std::to_string(i + 1) + ": survival probability must lie strictly in (0,1)");
        }
    }
    if (!(pool.admin_investment >= Scalar(0))) {
        fail(Kind::negative_admin_investment, "administrator investment must be non-negative");
    }
    if (!(pool.period_return >= Scalar(0))) {
        fail(Kind::negative_return, "period return must be deterministic and >= 0");
    }
    if (!(pool.total_investment() > Scalar(0))) {
        fail(Kind::non_positive_total, "total investment must be strictly positive");
    }

    if (model.size() != n) {
        fail(Kind::model_size_mismatch, "survival model covers " + std::to_string(model.size()) +
                                            " participants, pool has " + std::to_string(n));
        return report;
    }
    if (const auto* table = model.as_joint_table()) {
        if (n > kMaxScenarioParticipants || table->probabilities.size() != scenario_count(n)) {
            fail(Kind::model_size_mismatch, "joint table needs exactly 2^n entries");
            return report;
        }
        CompensatedSum<Scalar> total;
        bool negative = false;
        for (const auto& p : table->probabilities) {
            negative = negative || p < Scalar(0);
            total.add(p);
        }
        if (negative) {
            fail(Kind::negative_table_entry, "joint table contains a negative probability");
        }
        const Scalar sum = total.value();
        bool normalized;
        if constexpr (is_exact_v<Scalar>) {
            normalized = sum == Scalar(1);
        } else {
            normalized = std::abs(sum - 1.0) <= kProbabilityTolerance;
        }
        if (!normalized) {
            fail(Kind::table_not_normalized, "joint table probabilities must sum to 1");
        }
    }

    // Needs 0 < Pr[all dead] < 1 so the administrator slot is neither
    // impossible nor certain.
    const Scalar all_dead = model.prob_all_dead();
    if (!(all_dead > Scalar(0))) {
        fail(Kind::all_dead_prob_degenerate, "Pr[all participants die] = 0; it must lie strictly in (0,1)");
    } else if (!(all_dead < Scalar(1))) {
        fail(Kind::all_dead_prob_degenerate, "Pr[all participants die] = 1; it must lie strictly in (0,1)");
    }
    return report;
}

/// Throws std::invalid_argument listing every violation.
template <typename Scalar>
void require_valid(const Pool<Scalar>& pool, const SurvivalModel<Scalar>& model) {
    const auto report = validate_pool(pool, model);
    if (!report.ok()) {
        std::string msg = "invalid pool:";
        for (const auto& v : report.violations) {
            msg += "\n  " + v.message;
        }
        throw std::invalid_argument(msg);
    }
}

/// Rate r at which the future value of `contribution` paid for
/// `contribution_years` equals the present value of `benefit` received for
/// `benefit_years`, both ordinary annuities valued at the retirement date.
/// Bisection on (-0.99, 1.0); throws std::domain_error("no IRR in range")
/// without a sign change.
double annuity_irr(double contribution, int contribution_years, double benefit, int benefit_years);

/// Future value at the last payment of `years` unit payments, at rate r.
double annuity_future_value_factor(double rate, int years);

/// Present value one period before the first of `years` unit payments.
double annuity_present_value_factor(double rate, int years);

}  // namespace tontine
