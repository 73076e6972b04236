#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace hardy::cli {

enum ExitCode : int {
    kSuccess = 0,       // Feasible / solved / verified
    kNegative = 1,      // Infeasible or no solution; certificate on stdout
    kInputError = 2,    // malformed file, bad flags, precondition violations
    kNotConverged = 3,  // numeric non-convergence; partial certificate on stdout
};

/// Flag values; unset flags fall back to the problem file, then to defaults.
struct Settings {
    std::optional<double> tol;
    std::optional<int> grid_radial;
    std::optional<int> grid_angular;
    std::optional<double> grid_radius;
    std::optional<int> degree;
    std::optional<int> samples;
    std::optional<std::uint64_t> seed;
    std::string output = "json";
    std::string solution_path;  // verify: solve certificate holding the solution
};

/// Runs one subcommand (kernel, pick, feasible, solve, corona, distance, verify)
/// on a problem file and writes the certificate to `out` in a single write.
int run_command(const std::string& command, const std::string& problem_path, const Settings& settings,
                std::ostream& out, std::ostream& err);

/// Parses the command line and dispatches to run_command.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hardy::cli
