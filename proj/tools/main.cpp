#include "posygp/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

// Command-line front end. Exit codes: 0 every requested scenario certified,
// 1 dual infeasible anywhere, 2 parse/validation error (including unreadable
// files), 3 nonconvergence or an uncertified solution.

namespace {

std::vector<posygp::Scenario> parse_scenarios(const std::string& request) {
    using posygp::Scenario;
    if (request == "all") return {Scenario::Low, Scenario::Mid, Scenario::High};
    if (request == "L") return {Scenario::Low};
    if (request == "M") return {Scenario::Mid};
    if (request == "U") return {Scenario::High};
    throw CLI::ValidationError("--scenario", "expected one of L|M|U|all");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"posygp: scenario solver for posynomial geometric programs with {low, mid, high} parameters"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "solve the L/M/U scenario programs of a problem file");
    std::string path;
    std::string scenario = "all";
    std::string format = "text";
    posygp::SolverOptions options;
    posygp::SweepOptions sweepOptions;
    bool oracleCheck = false;
    bool withSweep = false;

    solve->add_option("file", path, "problem file (JSON)")->required();
    solve->add_option("--scenario", scenario, "L|M|U|all")->default_str("all");
    solve->add_option("--tol", options.tol, "KKT residual target");
    solve->add_option("--max-iter", options.maxIter, "Newton step budget per scenario");
    solve->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));
    solve->add_flag("--oracle-check", oracleCheck, "cross-check each scenario with the log-domain primal solver");
    solve->add_flag("--sweep", withSweep, "enumerate every parameter combination (subject to the site cap)");
    solve->add_option("--sweep-cap", sweepOptions.maxSites, "maximum number of uncertain sites for --sweep");
    solve->add_option("--seed", options.seed, "seed for randomized solver features");

    CLI11_PARSE(app, argc, argv);

    std::vector<posygp::Scenario> scenarios;
    try {
        scenarios = parse_scenarios(scenario);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::ifstream file(path);
    if (!file) {
        std::cerr << "error: cannot open '" << path << "'\n";
        return 2;
    }
    std::stringstream buffer;
    buffer << file.rdbuf();

    posygp::RunReport report;
    try {
        const posygp::ProblemDocument doc = posygp::parse_problem(buffer.str());
        sweepOptions.solver = options;
        report = posygp::run_scenarios(doc, scenarios, options, oracleCheck, withSweep, sweepOptions);
    } catch (const posygp::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const posygp::SweepCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::cout << posygp::render_report(report,
                                       format == "json" ? posygp::ReportFormat::Json : posygp::ReportFormat::Text);
    return posygp::exit_code(report);
}
