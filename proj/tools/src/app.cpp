#include "vacuum/cli/app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "commands.hpp"
#include "vacuum/errors.hpp"
#include "vacuum/mass_transform.hpp"

namespace vacuum::cli {

namespace {

const std::vector<std::string> commands{"kernel", "transform", "energy", "equiv-check", "pde-check", "coeffs"};

[[noreturn]] void reject(const std::string& field, const std::string& why) {
    throw InvalidInput("--" + field + ": " + why);
}

double parse_number(const std::string& field, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        reject(field, "not a number: '" + text + "'");
    }
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    if (used != text.size()) reject(field, "not a number: '" + text + "'");
    if (!std::isfinite(v)) reject(field, "must be finite");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// "a,b,c" or a grid "lo:hi:n" (n points, linear spacing).
std::vector<double> parse_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    const std::string body = trim(text);
    if (body.empty()) reject(field, "empty list");
    if (body.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(body);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
        if (parts.size() != 3) reject(field, "grid must be lo:hi:n");
        const double lo = parse_number(field, parts[0]);
        const double hi = parse_number(field, parts[1]);
        const double n = parse_number(field, parts[2]);
        if (n < 1 || n != std::floor(n) || n > 1e6) reject(field, "grid point count must be a positive integer");
        const auto count = static_cast<int>(n);
        if (count == 1) {
            if (lo != hi) reject(field, "a one-point grid needs lo == hi");
            return {lo};
        }
        for (int i = 0; i < count; ++i) out.push_back(i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1));
        return out;
    }
    std::stringstream ss(body);
    for (std::string p; std::getline(ss, p, ',');) {
        p = trim(p);
        if (p.empty()) reject(field, "empty list entry");
        out.push_back(parse_number(field, p));
    }
    return out;
}

enum class Sign { positive, non_negative };

void check_values(const std::string& field, const std::vector<double>& v, Sign sign) {
    if (v.empty()) reject(field, "empty list");
    for (double x : v) {
        if (sign == Sign::positive && !(x > 0.0)) reject(field, "values must be strictly positive");
        if (sign == Sign::non_negative && !(x >= 0.0)) reject(field, "values must be non-negative");
    }
    if (!std::is_sorted(v.begin(), v.end())) reject(field, "values must be sorted ascending");
}

// Config files split comma lists into separate values; join them back into one string.
void add_list_option(CLI::App& app, const std::string& name, std::string& target, const std::string& description) {
    app.add_option(name, target, description)
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
}

}  // namespace

RunConfig parse_arguments(const std::vector<std::string>& args) {
    RunConfig c;
    CLI::App app{"Cylinder-kernel vacuum energy toolkit", "vacuum"};
    app.set_config("--config", "", "Flat key = value config file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_help_flag("--help", "Print usage");

    std::string L = "1", m = "1", t = "1", mu = "1";
    std::optional<double> threshold;
    app.add_option("command", c.command, "Command to run")->required()->check(CLI::IsMember(commands));
    app.add_option("--d", c.d, "Spatial dimension");
    add_list_option(app, "--L", L, "Interval length or list of lengths");
    app.add_option("--z", c.z, "Free-space separation");
    app.add_option("--x", c.x, "Half-line source coordinate");
    app.add_option("--y", c.y, "Half-line field coordinate");
    add_list_option(app, "--m", m, "Mass, list a,b,c or grid lo:hi:n");
    add_list_option(app, "--t", t, "Cutoff time, list or grid");
    add_list_option(app, "--mu", mu, "Mass squared, list or grid");
    app.add_option("--tol", c.tol, "Quadrature tolerance");
    app.add_option("--threshold", threshold, "Pass threshold for equiv-check and pde-check");
    app.add_option("--h", c.h, "Finite-difference step for pde-check");
    app.add_option("--order", c.order, "Highest expansion order for coeffs");
    app.add_option("--geometry", c.geometry, "free | interval | halfline")
        ->check(CLI::IsMember({"free", "interval", "halfline"}));
    app.add_option("--kernel", c.kernel, "pde-check kernel: free | interval-spectral | interval-transform")
        ->check(CLI::IsMember({"free", "interval-spectral", "interval-transform"}));
    app.add_option("--method", c.method, "Transform: shifted | boundary | derivative");
    app.add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", c.out, "Output path (default: standard output)");
    app.add_option("--threads", c.threads, "Worker threads (0: all cores)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw InvalidInput(app.help());
    } catch (const CLI::ParseError& e) {
        throw InvalidInput(e.what());
    }

    c.L = parse_list("L", L);
    c.m = parse_list("m", m);
    c.t = parse_list("t", t);
    c.mu = parse_list("mu", mu);
    c.threshold = threshold;

    if (c.d < 1 || c.d > 64) reject("d", "must be between 1 and 64");
    check_values("L", c.L, Sign::positive);
    check_values("m", c.m, Sign::non_negative);
    check_values("t", c.t, Sign::positive);
    check_values("mu", c.mu, c.command == "pde-check" ? Sign::positive : Sign::non_negative);
    if (!(c.z >= 0.0) || !std::isfinite(c.z)) reject("z", "must be non-negative");
    if (c.geometry == "halfline") {
        if (!(c.x > 0.0)) reject("x", "must be strictly positive");
        if (!(c.y > 0.0)) reject("y", "must be strictly positive");
    }
    if (!(c.tol > 0.0) || !(c.tol < 1.0)) reject("tol", "must lie in (0, 1)");
    if (c.threshold && !(*c.threshold > 0.0)) reject("threshold", "must be strictly positive");
    if (!(c.h > 0.0) || !std::isfinite(c.h)) reject("h", "must be strictly positive");
    if (c.order < 0 || c.order > 16) reject("order", "must be between 0 and 16");
    if (c.command == "coeffs" && c.d != 1) reject("d", "coeffs supports the interval in d = 1 only");
    try {
        (void)transform::parse_method(c.method);
    } catch (const std::exception& e) {
        reject("method", e.what());
    }
    return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_arguments(args);
    } catch (const InvalidInput& e) {
        err << e.what() << '\n';
        return exit_invalid_input;
    }

    CommandResult result;
    try {
        if (config.command == "kernel") result = cmd_kernel(config);
        else if (config.command == "transform") result = cmd_transform(config);
        else if (config.command == "energy") result = cmd_energy(config);
        else if (config.command == "equiv-check") result = cmd_equiv_check(config);
        else if (config.command == "pde-check") result = cmd_pde_check(config);
        else result = cmd_coeffs(config);
    } catch (const ConvergenceError& e) {
        // A kernel that cannot be evaluated makes the PDE check itself invalid.
        if (config.command == "pde-check") {
            err << "pde-check: kernel evaluation failed: " << e.what() << '\n';
            return exit_invalid_input;
        }
        err << config.command << ": not converged: " << e.what() << '\n';
        return exit_not_converged;
    } catch (const std::exception& e) {
        err << config.command << ": " << e.what() << '\n';
        return exit_invalid_input;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!config.out.empty()) {
        file.open(config.out, std::ios::binary);
        if (!file) {
            err << "--out: cannot open '" << config.out << "' for writing\n";
            return exit_invalid_input;
        }
        sink = &file;
    }
    if (config.format == "json") write_json(result.table, *sink);
    else write_csv(result.table, *sink);
    sink->flush();
    if (!*sink) {
        err << "--out: write failed\n";
        return exit_invalid_input;
    }
    return result.exit_code;
}

}  // namespace vacuum::cli
