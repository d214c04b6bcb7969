#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tontine/types.hpp"

namespace tontine::cli {

enum class Command {
    validate,
    table,
    expect,
    simulate,
    fair_check,
    fair_admin,
    fair_solve,
    drs_compensate,
    drs_contribute,
    irr,
};

/// csv and text are machine output (6 decimals); human rounds to 2.
enum class OutputFormat { csv, text, human };

enum ExitCode : int {
    kOk = 0,
    kValidationFailure = 1,
    kNotConverged = 2,
    kInputError = 3,
};

struct RunConfig {
    Command command{Command::validate};
    std::string pool_path;  // pool spec, or claims spec for drs commands
    std::string scheme{"dm"};
    double technical_rate{0.0};
    std::uint64_t samples{1'000'000};
    std::uint64_t seed{0};
    double tolerance{1e-9};
    OutputFormat output_format{OutputFormat::text};
    std::string out_path;  // empty: standard output
    bool worked_example_order{false};  // --paper-order
    bool emit_normalized{false};
    std::optional<double> admin_investment;
    int max_iterations{10'000};
    double damping{0.0};
    Index max_enumeration{20};
    std::string rule;
    std::string contribution_rule{"uniform"};
    // irr arguments
    double contribution{0.0};
    int contribution_years{0};
    double benefit{0.0};
    int benefit_years{0};
};

/// Executes one command. Diagnostics go to `err`; the artifact goes to `out`
/// unless config.out_path is set.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it. Usage errors exit with
/// kInputError; --help exits with kOk.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tontine::cli
