#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vacuum::cli {

enum ExitCode : int { exit_ok = 0, exit_invalid_input = 1, exit_not_converged = 2 };

class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;

    int d = 1;
    std::vector<double> L{1.0};
    double z = 0.0;
    double x = 1.0;
    double y = 1.0;
    std::vector<double> m{1.0};
    std::vector<double> t{1.0};
    std::vector<double> mu{1.0};

    double tol = 1e-12;
    std::optional<double> threshold;
    double h = 1e-4;
    int order = 5;

    std::string geometry = "free";  // free | interval | halfline
    std::string kernel = "free";    // pde-check: free | interval-spectral | interval-transform
    std::string method = "shifted";

    std::string format = "csv";
    std::string out;       // empty: standard output
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Parses command-line arguments (without the program name) into a validated config.
/// Throws InvalidInput with a message that names the offending field.
RunConfig parse_arguments(const std::vector<std::string>& args);

/// Full front end: parse, run, write output. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vacuum::cli
