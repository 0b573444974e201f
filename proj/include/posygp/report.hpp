#pragma once

#include "posygp/io.hpp"
#include "posygp/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

// Scenario pipeline (instantiate -> normalize -> dual -> solve -> recover ->
// certify) and report rendering. The text form prints 7 significant digits,
// matching the precision the source problems are usually quoted at; the JSON
// form keeps full precision.

namespace posygp {

inline constexpr const char* kToolName = "posygp";
inline constexpr const char* kToolVersion = "0.1.0";

struct OracleComparison {
    bool ran{false};
    OracleStatus status{OracleStatus::NonConverged};
    double value{0.0};
    double relativeDifference{0.0};
};

struct ScenarioRun {
    Scenario scenario{Scenario::Low};
    DualStatus status{DualStatus::NonConverged};
    std::string message;
    std::vector<int> blockSizes;  // T_0..T_m, for naming weights w_it
    DualSolution dual;
    std::optional<PrimalSolution> primal;
    std::optional<Certificate> certificate;
    OracleComparison oracle;
    double wallTimeSeconds{0.0};
};

struct RunReport {
    std::string problemName;
    std::string toolVersion{kToolVersion};
    ProblemDocument document;
    std::vector<ScenarioRun> runs;
    std::optional<SweepReport> sweep;
};

inline const char* status_name(DualStatus s) {
    switch (s) {
        case DualStatus::Converged: return "CONVERGED";
        case DualStatus::InfeasibleDual: return "INFEASIBLE_DUAL";
        default: return "NONCONVERGED";
    }
}

inline const char* oracle_status_name(OracleStatus s) {
    switch (s) {
        case OracleStatus::Converged: return "CONVERGED";
        case OracleStatus::UnboundedBelow: return "UNBOUNDED_BELOW";
        default: return "NONCONVERGED";
    }
}

inline std::string weight_name(int block, int term) {
    if (block <= 9 && term + 1 <= 9) return "w" + std::to_string(block) + std::to_string(term + 1);
    return "w[" + std::to_string(block) + "][" + std::to_string(term + 1) + "]";
}

inline ScenarioRun solve_scenario(const MultiGpProblem& p, Scenario s, const SolverOptions& opts = {},
                                  bool oracleCheck = false) {
    ScenarioRun run;
    run.scenario = s;
    const auto start = std::chrono::steady_clock::now();

    const StandardGp standard = normalize(instantiate(p, s));
    const DualProgram dual = build_dual(standard);
    const DualSolveOutcome outcome = maximize_dual(dual, opts);
    run.status = outcome.status;
    run.message = outcome.message;
    run.blockSizes = dual.blockSizes;
    run.dual = outcome.solution;

    if (outcome.status == DualStatus::Converged) {
        try {
            run.primal = recover_primal(standard, outcome.solution, opts.zeroWeightThreshold);
            run.certificate = certify(standard, outcome.solution, *run.primal);
        } catch (const RecoveryError& e) {
            run.message = e.what();
        }
    }

    if (oracleCheck && outcome.status != DualStatus::InfeasibleDual) {
        const OracleOutcome check = oracle_solve(standard, opts);
        run.oracle.ran = true;
        run.oracle.status = check.status;
        if (check.status == OracleStatus::Converged) {
            run.oracle.value = check.solution.objectiveValue;
            run.oracle.relativeDifference =
                std::abs(check.solution.objectiveValue - run.dual.dualValue) / std::max(1.0, run.dual.dualValue);
        }
    }

    run.wallTimeSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

inline RunReport run_scenarios(const ProblemDocument& doc, const std::vector<Scenario>& scenarios,
                               const SolverOptions& opts = {}, bool oracleCheck = false, bool withSweep = false,
                               const SweepOptions& sweepOpts = {}) {
    RunReport report;
    report.problemName = doc.name;
    report.document = doc;
    for (Scenario s : scenarios) report.runs.push_back(solve_scenario(doc.problem, s, opts, oracleCheck));
    if (withSweep) report.sweep = sweep_scenarios(doc.problem, sweepOpts);
    return report;
}

// exit code contract: 0 every requested scenario certified, 1 dual infeasible
// anywhere, 3 nonconvergence or an uncertified pair (2 is reserved for
// parse/validation failures and handled by the caller).
inline int exit_code(const RunReport& report) {
    for (const auto& run : report.runs)
        if (run.status == DualStatus::InfeasibleDual) return 1;
    for (const auto& run : report.runs) {
        if (run.status != DualStatus::Converged) return 3;
        if (!run.certificate || run.certificate->verdict != Verdict::Certified) return 3;
    }
    return 0;
}

enum class ReportFormat { Text, Json };

namespace detail {

// 7 significant digits, trailing zeros kept ("194.9390", "0.4892672").
inline std::string fmt7(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%#.7g", v);
    return buffer;
}

inline nlohmann::ordered_json scenario_json(const ScenarioRun& run, const std::vector<std::string>& variables) {
    using json = nlohmann::ordered_json;
    json node;
    node["scenario"] = std::string(1, scenario_label(run.scenario));
    node["status"] = status_name(run.status);
    if (!run.message.empty()) node["message"] = run.message;

    json dual;
    dual["Z"] = run.dual.dualValue;
    dual["logZ"] = run.dual.logDualValue;
    json weights = json::object();
    {
        int block = 0;
        int term = 0;
        for (Eigen::Index k = 0; k < run.dual.w.size(); ++k) {
            while (block < static_cast<int>(run.blockSizes.size()) &&
                   term >= run.blockSizes[static_cast<std::size_t>(block)]) {
                ++block;
                term = 0;
            }
            weights[weight_name(block, term)] = run.dual.w[k];
            ++term;
        }
    }
    dual["w"] = std::move(weights);
    json lambda = json::array();
    for (Eigen::Index i = 0; i < run.dual.lambda.size(); ++i) lambda.push_back(run.dual.lambda[i]);
    dual["lambda"] = std::move(lambda);
    dual["kkt_residual"] = run.dual.kktResidual;
    dual["iterations"] = run.dual.iterations;
    dual["converged"] = run.dual.converged;
    node["dual"] = std::move(dual);

    if (run.primal) {
        json primal;
        primal["objective"] = run.primal->objectiveValue;
        primal["x"] = json::object();
        for (Eigen::Index j = 0; j < run.primal->x.size(); ++j)
            primal["x"][variables[static_cast<std::size_t>(j)]] = run.primal->x[j];
        json residuals = json::array();
        for (Eigen::Index i = 0; i < run.primal->constraintResiduals.size(); ++i)
            residuals.push_back(run.primal->constraintResiduals[i]);
        primal["constraint_residuals"] = std::move(residuals);
        primal["recovery_residual"] = run.primal->recoveryResidual;
        primal["unique"] = run.primal->unique;
        primal["active_constraints"] = run.primal->activeConstraints;
        node["primal"] = std::move(primal);
    }
    if (run.certificate) {
        json cert;
        cert["dual_value"] = run.certificate->dualValue;
        cert["primal_value"] = run.certificate->primalValue;
        cert["relative_gap"] = run.certificate->relativeGap;
        cert["max_constraint_violation"] = run.certificate->maxConstraintViolation;
        cert["complementarity_slack"] = run.certificate->complementaritySlack;
        cert["verdict"] = verdict_name(run.certificate->verdict);
        node["certificate"] = std::move(cert);
    }
    if (run.oracle.ran) {
        json oracle;
        oracle["status"] = oracle_status_name(run.oracle.status);
        if (run.oracle.status == OracleStatus::Converged) {
            oracle["Z"] = run.oracle.value;
            oracle["relative_difference"] = run.oracle.relativeDifference;
        }
        node["oracle_check"] = std::move(oracle);
    }
    node["wall_time_seconds"] = run.wallTimeSeconds;
    return node;
}

inline nlohmann::ordered_json sweep_json(const SweepReport& sweep) {
    using json = nlohmann::ordered_json;
    json node;
    node["sites"] = sweep.siteCount;
    node["combinations"] = sweep.comboCount;
    node["solved"] = sweep.solvedCount;
    node["min_value"] = sweep.minValue;
    node["min_index"] = sweep.minIndex;
    node["max_value"] = sweep.maxValue;
    node["max_index"] = sweep.maxIndex;
    auto comboValue = [&](std::int64_t index) -> json {
        const ComboOutcome& combo = sweep.outcomes[static_cast<std::size_t>(index)];
        if (combo.solved) return combo.value;
        return combo.failure;
    };
    node["all_low_value"] = comboValue(sweep.allLowIndex);
    node["all_mid_value"] = comboValue(sweep.allMidIndex);
    node["all_high_value"] = comboValue(sweep.allHighIndex);
    node["all_low_attains_min"] = sweep.allLowAttainsMin;
    node["all_high_attains_max"] = sweep.allHighAttainsMax;
    json values = json::array();
    for (const auto& combo : sweep.outcomes) {
        if (combo.solved)
            values.push_back(combo.value);
        else
            values.push_back(combo.failure);
    }
    node["values"] = std::move(values);
    return node;
}

}  // namespace detail

inline nlohmann::ordered_json report_json(const RunReport& report) {
    using json = nlohmann::ordered_json;
    json root;
    root["tool"] = json{{"name", kToolName}, {"version", report.toolVersion}};
    root["problem"] = document_json(report.document);
    if (!report.document.warnings.empty()) root["warnings"] = report.document.warnings;
    json runs = json::array();
    for (const auto& run : report.runs)
        runs.push_back(detail::scenario_json(run, report.document.problem.variables));
    root["scenarios"] = std::move(runs);
    if (report.sweep) root["sweep"] = detail::sweep_json(*report.sweep);
    return root;
}

inline std::string render_text(const RunReport& report) {
    using detail::fmt7;
    std::string out;
    out += std::string(kToolName) + " " + report.toolVersion + "\n";
    out += "problem '" + report.problemName + "': " + std::to_string(report.document.problem.variables.size()) +
           " variables, " + std::to_string(report.document.problem.constraints.size()) + " constraints\n";
    for (const auto& warning : report.document.warnings) out += "warning: " + warning + "\n";

    for (const auto& run : report.runs) {
        const char label = scenario_label(run.scenario);
        out += "\nscenario " + std::string(1, label) + ": ";
        if (run.certificate)
            out += verdict_name(run.certificate->verdict);
        else
            out += status_name(run.status);
        out += "\n";
        if (!run.message.empty()) out += "  note: " + run.message + "\n";
        if (run.status == DualStatus::InfeasibleDual) continue;

        out += "  Z^" + std::string(1, label) + " = " + fmt7(run.dual.dualValue) + "\n";
        out += "  w:";
        {
            int block = 0;
            int term = 0;
            for (Eigen::Index k = 0; k < run.dual.w.size(); ++k) {
                while (block < static_cast<int>(run.blockSizes.size()) &&
                       term >= run.blockSizes[static_cast<std::size_t>(block)]) {
                    ++block;
                    term = 0;
                }
                out += " " + weight_name(block, term) + " = " + fmt7(run.dual.w[k]);
                ++term;
            }
        }
        out += "\n  lambda:";
        for (Eigen::Index i = 0; i < run.dual.lambda.size(); ++i) out += " " + fmt7(run.dual.lambda[i]);
        out += "\n";
        if (run.primal) {
            out += "  x:";
            for (Eigen::Index j = 0; j < run.primal->x.size(); ++j) {
                out += " " + report.document.problem.variables[static_cast<std::size_t>(j)] + " = " +
                       fmt7(run.primal->x[j]);
            }
            out += "\n";
        }
        if (run.certificate) {
            out += "  gap = " + fmt7(run.certificate->relativeGap) +
                   ", max violation = " + fmt7(run.certificate->maxConstraintViolation) + "\n";
        }
        if (run.oracle.ran) {
            out += std::string("  oracle: ") + oracle_status_name(run.oracle.status);
            if (run.oracle.status == OracleStatus::Converged)
                out += " Z = " + fmt7(run.oracle.value) + " (relative difference " +
                       fmt7(run.oracle.relativeDifference) + ")";
            out += "\n";
        }
        out += "  kkt = " + fmt7(run.dual.kktResidual) + ", iterations = " + std::to_string(run.dual.iterations) +
               ", wall time = " + fmt7(run.wallTimeSeconds * 1e3) + " ms\n";
    }

    if (report.sweep) {
        const SweepReport& sweep = *report.sweep;
        out += "\nsweep: " + std::to_string(sweep.siteCount) + " sites, " + std::to_string(sweep.comboCount) +
               " combinations, " + std::to_string(sweep.solvedCount) + " solved\n";
        if (sweep.minIndex >= 0) {
            out += "  min = " + fmt7(sweep.minValue) + " at combo " + std::to_string(sweep.minIndex) +
                   ", max = " + fmt7(sweep.maxValue) + " at combo " + std::to_string(sweep.maxIndex) + "\n";
            const auto& low = sweep.outcomes[static_cast<std::size_t>(sweep.allLowIndex)];
            const auto& high = sweep.outcomes[static_cast<std::size_t>(sweep.allHighIndex)];
            out += std::string("  all-low ") + (low.solved ? fmt7(low.value) : low.failure) +
                   (sweep.allLowAttainsMin ? " attains the sweep minimum" : " does NOT attain the sweep minimum") +
                   "\n";
            out += std::string("  all-high ") + (high.solved ? fmt7(high.value) : high.failure) +
                   (sweep.allHighAttainsMax ? " attains the sweep maximum" : " does NOT attain the sweep maximum") +
                   "\n";
        }
    }
    return out;
}

inline std::string render_report(const RunReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) return report_json(report).dump(2) + "\n";
    return render_text(report);
}

}  // namespace posygp
