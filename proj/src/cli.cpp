#include "tontine/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tontine/fairness.hpp"
#include "tontine/io.hpp"
#include "tontine/montecarlo.hpp"

namespace tontine::cli {

namespace {

class NotConverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SchemeChoice {
    std::optional<Scheme> named;
    std::optional<Eigen::VectorXd> literal;  // shares=[...]
    std::string name;
};

SchemeChoice parse_scheme(const std::string& text) {
    SchemeChoice choice;
    choice.name = text;
    if (text == "dm") {
        choice.named = Scheme::dm;
    } else if (text == "t") {
        choice.named = Scheme::t;
    } else if (text == "dr") {
        choice.named = Scheme::dr;
    } else if (text == "reciprocal") {
        choice.named = Scheme::reciprocal;
    } else if (text == "benefits") {
        choice.named = Scheme::benefits;
    } else if (text.rfind("shares=", 0) == 0) {
        nlohmann::json values;
        try {
            values = nlohmann::json::parse(text.substr(7));
        } catch (const nlohmann::json::parse_error&) {
            throw io::ParseError("shares literal must be a JSON array, e.g. shares=[1,2,3]");
        }
        if (!values.is_array()) {
            throw io::ParseError("shares literal must be a JSON array, e.g. shares=[1,2,3]");
        }
        Eigen::VectorXd shares(static_cast<Index>(values.size()));
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!values[i].is_number()) {
                throw io::ParseError("shares literal must contain numbers only");
            }
            shares(static_cast<Index>(i)) = values[i].get<double>();
        }
        choice.literal = shares;
    } else {
        throw io::ParseError("unknown scheme '" + text + "' (dm | t | dr | reciprocal | benefits | shares=[...])");
    }
    return choice;
}

ShareAllocation<double> shares_for(const SchemeChoice& choice, const Pool<double>& pool, double technical_rate) {
    if (choice.literal) {
        if (choice.literal->size() != pool.size()) {
            throw std::invalid_argument("shares literal has " + std::to_string(choice.literal->size()) +
                                        " entries, pool has " + std::to_string(pool.size()) + " participants");
        }
        return ShareAllocation<double>(*choice.literal);
    }
    return allocate(*choice.named, pool, technical_rate);
}

io::PoolSpec load_valid_pool(const RunConfig& config) {
    auto spec = io::load_pool_spec(config.pool_path);
    require_valid(spec.pool, spec.model());
    return spec;
}

std::string fmt_currency(double x, OutputFormat format) {
    return io::format_fixed(x, format == OutputFormat::human ? 2 : 6);
}

std::string fmt_vector(const Eigen::VectorXd& v, OutputFormat format) {
    return io::format_vector(v, format == OutputFormat::human ? 2 : 6);
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

void do_validate(const RunConfig& config, std::ostream& out) {
    const auto spec = io::load_pool_spec(config.pool_path);
    const auto report = validate_pool(spec.pool, spec.model());
    if (!report.ok()) {
        std::string msg = "invalid pool:";
        for (const auto& v : report.violations) {
            msg += "\n  " + v.message;
        }
        throw std::invalid_argument(msg);
    }
    if (config.emit_normalized) {
        out << io::emit_pool_spec(spec);
    } else {
        out << "OK\n";
    }
}

void do_table(const RunConfig& config, std::ostream& out) {
    const auto spec = load_valid_pool(config);
    const auto f = shares_for(parse_scheme(config.scheme), spec.pool, config.technical_rate);
    EnumerationOptions options;
    options.max_participants = config.max_enumeration;
    auto rows = payout_distribution(spec.pool, f, spec.model(), options);
    if (config.worked_example_order) {
        if (spec.pool.size() != 3) {
            throw io::ParseError("--paper-order is only defined for 3 participants");
        }
        std::vector<PayoutRow<double>> ordered;
        for (auto idx : io::worked_example_order()) {
            ordered.push_back(rows[idx]);
        }
        rows = std::move(ordered);
    }
    if (config.output_format == OutputFormat::human) {
        for (const auto& row : rows) {
            out << "scenario " << row.scenario.index << "  p=" << io::format_probability(row.probability) << "  W="
                << fmt_vector(row.payouts.amounts, OutputFormat::human) << '\n';
        }
        return;
    }
    io::write_payout_table_csv(out, rows);
}

void write_estimate(const McEstimate& est, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::csv) {
        out << "party,mean,std_error,conditional_mean,conditional_std_error\n";
        for (Index i = 0; i < est.mean.size(); ++i) {
            out << (i + 1) << ',' << io::format_fixed(est.mean(i), 6) << ',' << io::format_fixed(est.std_error(i), 6)
                << ',' << (est.conditional_mean ? io::format_fixed((*est.conditional_mean)(i), 6) : "") << ','
                << (est.conditional_std_error ? io::format_fixed((*est.conditional_std_error)(i), 6) : "") << '\n';
        }
        return;
    }
    out << "method: monte_carlo\n";
    out << "seed: " << est.seed << '\n';
    out << "samples_used: " << est.samples_used << '\n';
    out << "samples_rejected: " << est.samples_rejected << '\n';
    out << "prob_all_dead: " << io::format_probability(est.prob_all_dead) << '\n';
    out << "mean: " << fmt_vector(est.mean, format) << '\n';
    out << "std_error: " << fmt_vector(est.std_error, format) << '\n';
    if (est.conditional_mean) {
        out << "conditional_mean: " << fmt_vector(*est.conditional_mean, format) << '\n';
        out << "conditional_std_error: " << fmt_vector(*est.conditional_std_error, format) << '\n';
    }
    for (const auto& w : est.warnings) {
        out << "warning: " << w << '\n';
    }
}

void do_expect(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto spec = load_valid_pool(config);
    const auto f = shares_for(parse_scheme(config.scheme), spec.pool, config.technical_rate);
    if (spec.pool.size() > config.max_enumeration) {
        err << "n = " << spec.pool.size() << " exceeds the exact-enumeration limit; using Monte Carlo\n";
        write_estimate(simulate(spec.pool, f, spec.model(), config.samples, config.seed), config.output_format, out);
        return;
    }
    EnumerationOptions options;
    options.max_participants = config.max_enumeration;
    const auto report = enumerate(spec.pool, f, spec.model(), options);
    const auto format = config.output_format;
    if (format == OutputFormat::csv) {
        out << "party,expected_payout,conditional_expected_payout\n";
        for (Index i = 0; i < report.expected_payout.size(); ++i) {
            out << (i + 1) << ',' << io::format_fixed(report.expected_payout(i), 6) << ','
                << io::format_fixed(report.conditional_expected_payout(i), 6) << '\n';
        }
        return;
    }
    out << "method: exact\n";
    out << "participants: " << spec.pool.size() << '\n';
    out << "prob_all_dead: " << io::format_probability(report.prob_all_dead) << '\n';
    out << "group_expected_payout: " << fmt_currency(report.group_expected_payout, format) << '\n';
    out << "expected_payout: " << fmt_vector(report.expected_payout, format) << '\n';
    out << "conditional_expected_payout: " << fmt_vector(report.conditional_expected_payout, format) << '\n';
}

void do_simulate(const RunConfig& config, std::ostream& out) {
    const auto spec = load_valid_pool(config);
    const auto f = shares_for(parse_scheme(config.scheme), spec.pool, config.technical_rate);
    write_estimate(simulate(spec.pool, f, spec.model(), config.samples, config.seed), config.output_format, out);
}

void write_fairness(const FairnessReport<double>& report, OutputFormat format, std::ostream& out) {
    out << "participant_residuals: " << fmt_vector(report.participant_residuals, format) << '\n';
    out << "admin_residual: " << fmt_currency(report.admin_residual, format) << '\n';
    out << "collective_residual: " << fmt_currency(report.collective_residual, format) << '\n';
    out << "participant_fair: " << yes_no(report.participant_fair) << '\n';
    out << "admin_fair: " << yes_no(report.admin_fair) << '\n';
    out << "collectively_fair: " << yes_no(report.collectively_fair) << '\n';
}

EnumerationOptions enumeration_options(const RunConfig& config) {
    EnumerationOptions options;
    options.max_participants = config.max_enumeration;
    return options;
}

void do_fair_check(const RunConfig& config, std::ostream& out) {
    const auto spec = load_valid_pool(config);
    const auto f = shares_for(parse_scheme(config.scheme), spec.pool, config.technical_rate);
    write_fairness(check_fairness(spec.pool, f, spec.model(), config.tolerance, enumeration_options(config)),
                   config.output_format, out);
}

void do_fair_admin(const RunConfig& config, std::ostream& out) {
    const auto spec = load_valid_pool(config);
    const double contribution = admin_fair_contribution(spec.pool, spec.model());
    if (config.output_format == OutputFormat::human) {
        out << "administrator fair contribution: " << io::format_fixed(contribution, 2) << '\n';
    } else {
        out << io::format_fixed(contribution, 6) << '\n';
    }
}

void do_fair_solve(const RunConfig& config, std::ostream& out) {
    const auto spec = load_valid_pool(config);
    const double admin = config.admin_investment.value_or(spec.pool.admin_investment);
    if (!(admin > 0.0)) {
        throw std::invalid_argument("fair solve needs --admin > 0 (or a positive admin_investment in the pool)");
    }
    const auto choice = parse_scheme(config.scheme);
    const auto model = spec.model();
    const auto format = config.output_format;
    const auto options = enumeration_options(config);

    Eigen::VectorXd investments;
    bool converged = true;
    int iterations = 0;
    double final_change = 0.0;
    if (choice.named && depends_on_investments(*choice.named)) {
        FixedPointOptions fp;
        fp.tolerance = 1e-12;
        fp.max_iterations = config.max_iterations;
        fp.damping = config.damping;
        fp.enumeration = options;
        const Scheme scheme = *choice.named;
        const double technical_rate = config.technical_rate;
        const auto result = solve_fair_investments_internal<double>(
            [&](const Pool<double>& p) { return allocate(scheme, p, technical_rate); }, admin, model, fp);
        investments = result.investments;
        converged = result.converged;
        iterations = result.iterations;
        final_change = result.final_change;
    } else {
        // Fixed shares do not depend on the investments.
        const auto f = shares_for(choice, spec.pool, config.technical_rate);
        investments = solve_fair_investments(f, admin, model, options);
    }

    Pool<double> fair = spec.pool;
    fair.investments = investments;
    fair.admin_investment = admin;
    const auto report =
        check_fairness(fair, shares_for(choice, fair, config.technical_rate), model, config.tolerance, options);

    out << "scheme: " << choice.name << '\n';
    out << "admin_investment: " << fmt_currency(admin, format) << '\n';
    out << "converged: " << yes_no(converged) << '\n';
    out << "iterations: " << iterations << '\n';
    out << "final_change: " << io::format_probability(final_change) << '\n';
    out << "investments: " << fmt_vector(investments, format) << '\n';
    write_fairness(report, format, out);
    if (!converged) {
        throw NotConverged("fixed-point iteration did not converge within " + std::to_string(config.max_iterations) +
                           " iterations (last relative change " + io::format_probability(final_change) + ")");
    }
}

void write_outcome_table(const io::ClaimsSpec& spec, const std::function<Eigen::VectorXd(std::size_t)>& row,
                         const char* prefix, OutputFormat format, std::ostream& out) {
    const Index width = spec.distribution.parties();
    out << "outcome,probability";
    for (Index i = 1; i <= width; ++i) {
        out << ',' << prefix << i;
    }
    out << '\n';
    for (std::size_t k = 0; k < spec.distribution.size(); ++k) {
        const Eigen::VectorXd v = row(k);
        out << k << ',' << io::format_probability(spec.distribution[k].probability);
        for (Index i = 0; i < width; ++i) {
            out << ',' << fmt_currency(v(i), format);
        }
        out << '\n';
    }
}

const PremiumVector<double>& require_premiums(const io::ClaimsSpec& spec) {
    if (!spec.premiums) {
        throw std::invalid_argument("this rule needs 'premiums' in the claims file");
    }
    if (spec.premiums->size() != spec.distribution.parties()) {
        throw std::invalid_argument("premiums and claims vectors differ in length");
    }
    return *spec.premiums;
}

ContributionRule<double> contribution_rule_named(const std::string& name, const io::ClaimsSpec& spec) {
    if (name == "uniform") {
        return uniform_rule<double>();
    }
    if (name == "cmean") {
        return conditional_mean_rule(spec.distribution);
    }
    throw io::ParseError("unknown contribution rule '" + name + "' (uniform | cmean)");
}

void do_drs_compensate(const RunConfig& config, std::ostream& out) {
    const auto spec = io::load_claims_spec(config.pool_path);
    const auto& premiums = require_premiums(spec);
    CompensationRule<double> rule;
    if (config.rule == "proportional") {
        rule = proportional_rule(premiums, spec.period_return);
    } else if (config.rule == "from-contribution") {
        rule = contribution_to_compensation(contribution_rule_named(config.contribution_rule, spec), premiums,
                                            spec.period_return);
    } else {
        throw io::ParseError("unknown compensation rule '" + config.rule + "' (proportional | from-contribution)");
    }
    write_outcome_table(
        spec, [&](std::size_t k) { return rule(spec.distribution[k].claims); }, "W", config.output_format, out);
}

void do_drs_contribute(const RunConfig& config, std::ostream& out) {
    const auto spec = io::load_claims_spec(config.pool_path);
    ContributionRule<double> rule;
    if (config.rule == "uniform" || config.rule == "cmean") {
        rule = contribution_rule_named(config.rule, spec);
    } else if (config.rule == "from-compensation") {
        const auto& premiums = require_premiums(spec);
        rule = compensation_to_contribution(proportional_rule(premiums, spec.period_return), premiums,
                                            spec.period_return);
    } else {
        throw io::ParseError("unknown contribution rule '" + config.rule + "' (uniform | cmean | from-compensation)");
    }
    write_outcome_table(
        spec, [&](std::size_t k) { return rule(spec.distribution[k].claims); }, "C", config.output_format, out);
}

void do_irr(const RunConfig& config, std::ostream& out) {
    const double rate =
        annuity_irr(config.contribution, config.contribution_years, config.benefit, config.benefit_years);
    out << io::format_fixed(rate, config.output_format == OutputFormat::human ? 4 : 6) << '\n';
}

void dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
    switch (config.command) {
        case Command::validate:
            return do_validate(config, out);
        case Command::table:
            return do_table(config, out);
        case Command::expect:
            return do_expect(config, out, err);
        case Command::simulate:
            return do_simulate(config, out);
        case Command::fair_check:
            return do_fair_check(config, out);
        case Command::fair_admin:
            return do_fair_admin(config, out);
        case Command::fair_solve:
            return do_fair_solve(config, out);
        case Command::drs_compensate:
            return do_drs_compensate(config, out);
        case Command::drs_contribute:
            return do_drs_contribute(config, out);
        case Command::irr:
            return do_irr(config, out);
    }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (!(config.tolerance > 0.0)) {
        err << "error: tolerance must be > 0\n";
        return kInputError;
    }
    std::ostringstream buffer;
    int code = kOk;
    try {
        dispatch(config, buffer, err);
    } catch (const io::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const NotConverged& e) {
        err << "error: " << e.what() << '\n';
        code = kNotConverged;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    if (config.out_path.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(config.out_path, std::ios::binary);
        if (!file || !(file << buffer.str())) {
            err << "error: cannot write '" << config.out_path << "'\n";
            return kInputError;
        }
    }
    return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single-period tontine funds: payouts, expectations, fairness and risk-sharing duals"};
    app.require_subcommand(1);

    RunConfig config;
    std::string format = "text";

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "text", "human"}));
        cmd->add_option("--out", config.out_path, "Write output to this file");
    };
    auto add_pool = [&](CLI::App* cmd) {
        cmd->add_option("--pool", config.pool_path, "Pool-spec JSON file")->required();
    };
    auto add_scheme = [&](CLI::App* cmd) {
        cmd->add_option("--scheme", config.scheme, "dm | t | dr | reciprocal | benefits | shares=[...]");
        cmd->add_option("--technical-rate", config.technical_rate, "Technical rate for the benefits scheme");
        cmd->add_option("--max-n", config.max_enumeration, "Largest pool enumerated exactly");
    };

    auto* validate = app.add_subcommand("validate", "Check a pool spec");
    add_pool(validate);
    add_format(validate);
    validate->add_flag("--emit-normalized", config.emit_normalized, "Print the canonical pool spec");

    auto* table = app.add_subcommand("table", "Payouts for every survival scenario (CSV)");
    add_pool(table);
    add_scheme(table);
    add_format(table);
    table->add_flag("--paper-order", config.worked_example_order, "Order rows like the 3-participant worked example");

    auto* expect = app.add_subcommand("expect", "Exact expected payouts");
    add_pool(expect);
    add_scheme(expect);
    add_format(expect);
    expect->add_option("--samples", config.samples, "Monte Carlo samples when n is too large");
    expect->add_option("--seed", config.seed, "Monte Carlo seed when n is too large");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo expected payouts");
    add_pool(sim);
    add_scheme(sim);
    add_format(sim);
    sim->add_option("--samples", config.samples, "Number of samples (>= 1000)");
    sim->add_option("--seed", config.seed, "64-bit seed");

    auto* fair = app.add_subcommand("fair", "Actuarial fairness");
    fair->require_subcommand(1);
    auto* fair_check = fair->add_subcommand("check", "Fairness residuals and flags");
    add_pool(fair_check);
    add_scheme(fair_check);
    add_format(fair_check);
    fair_check->add_option("--tolerance", config.tolerance, "Relative tolerance");
    auto* fair_admin = fair->add_subcommand("admin", "Administrator contribution that is fair to the administrator");
    add_pool(fair_admin);
    add_format(fair_admin);
    auto* fair_solve = fair->add_subcommand("solve", "Investments that are fair for every participant");
    add_pool(fair_solve);
    add_scheme(fair_solve);
    add_format(fair_solve);
    fair_solve->add_option("--admin", config.admin_investment, "Administrator investment (scale anchor)");
    fair_solve->add_option("--tolerance", config.tolerance, "Relative tolerance of the fairness check");
    fair_solve->add_option("--max-iter", config.max_iterations, "Fixed-point iteration cap");
    fair_solve->add_option("--damping", config.damping, "Fixed-point damping in [0,1)");

    auto* drs = app.add_subcommand("drs", "Decentralized risk-sharing rules over a claims distribution");
    drs->require_subcommand(1);
    auto* compensate = drs->add_subcommand("compensate", "Compensation per outcome");
    compensate->add_option("--claims", config.pool_path, "Claims-distribution JSON file")->required();
    compensate->add_option("--rule", config.rule, "proportional | from-contribution")->required();
    compensate->add_option("--contribution-rule", config.contribution_rule, "uniform | cmean (for from-contribution)");
    add_format(compensate);
    auto* contribute = drs->add_subcommand("contribute", "Contribution per outcome");
    contribute->add_option("--claims", config.pool_path, "Claims-distribution JSON file")->required();
    contribute->add_option("--rule", config.rule, "uniform | cmean | from-compensation")->required();
    add_format(contribute);

    auto* irr = app.add_subcommand("irr", "Internal rate of return of a contribution/benefit annuity pair");
    irr->add_option("contribution", config.contribution, "Yearly contribution")->required();
    irr->add_option("contribution_years", config.contribution_years, "Years of contributions")->required();
    irr->add_option("benefit", config.benefit, "Yearly benefit")->required();
    irr->add_option("benefit_years", config.benefit_years, "Years of benefits")->required();
    add_format(irr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    if (*validate) {
        config.command = Command::validate;
    } else if (*table) {
        config.command = Command::table;
        if (format == "text") {
            format = "csv";
        }
    } else if (*expect) {
        config.command = Command::expect;
    } else if (*sim) {
        config.command = Command::simulate;
    } else if (*fair_check) {
        config.command = Command::fair_check;
    } else if (*fair_admin) {
        config.command = Command::fair_admin;
    } else if (*fair_solve) {
        config.command = Command::fair_solve;
    } else if (*compensate) {
        config.command = Command::drs_compensate;
    } else if (*contribute) {
        config.command = Command::drs_contribute;
    } else if (*irr) {
        config.command = Command::irr;
    }
    config.output_format = format == "csv" ? OutputFormat::csv
                           : format == "human" ? OutputFormat::human
                                               : OutputFormat::text;
    return run(config, out, err);
}

}  // namespace tontine::cli
