#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tontine/drs.hpp"
#include "tontine/expectation.hpp"

namespace tontine::io {

/// Malformed or unreadable input (bad JSON, unknown fields, wrong types).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

/// Pool-spec document:
///
///   {
///     "version": 1,
///     "participants": [{"investment": 80, "survival_prob": 0.2}, ...],
///     "admin_investment": 0,
///     "return": 0,
///     "joint_table": [p_0, ..., p_{2^n - 1}]
///   }
///
/// `version`, `admin_investment`, `return` and `joint_table` are optional
/// (defaults 1, 0, 0, independent survival). Unknown fields are rejected.
struct PoolSpec {
    Pool<double> pool;
    std::optional<std::vector<double>> joint_table;

    SurvivalModel<double> model() const;
};

PoolSpec parse_pool_spec(const std::string& text);
PoolSpec load_pool_spec(const std::string& path);
/// Canonical JSON with every field present; parses back to the same spec.
std::string emit_pool_spec(const PoolSpec& spec);

/// Claims-distribution document:
///
///   {
///     "version": 1,
///     "premiums": [pi_1, ..., pi_{n+1}],
///     "return": 0,
///     "outcomes": [{"probability": 0.5, "claims": [x_1, ..., x_{n+1}]}, ...]
///   }
struct ClaimsSpec {
    std::optional<PremiumVector<double>> premiums;
    double period_return{0.0};
    ClaimsDistribution<double> distribution;
};

ClaimsSpec parse_claims_spec(const std::string& text);
ClaimsSpec load_claims_spec(const std::string& path);

std::string read_file(const std::string& path);

/// Fixed-point with `decimals` digits; round-half-even on the binary value.
/// Never prints a negative zero.
std::string format_fixed(double x, int decimals);
/// 12 significant digits.
std::string format_probability(double x);
std::string format_vector(const Eigen::VectorXd& v, int decimals);

/// Scenario order of the 3-participant worked example: all alive first,
/// then (0,1,1), (0,0,1), (1,0,1), (1,1,0), (1,0,0), (0,1,0), all dead.
const std::vector<std::uint64_t>& worked_example_order();

/// CSV with header `scenario,probability,W1,...,Wn,W{n+1}`, one row per
/// entry of `rows` in the given order; currency with 6 decimals.
void write_payout_table_csv(std::ostream& out, const std::vector<PayoutRow<double>>& rows);

}  // namespace tontine::io
