#pragma once

#include "posygp/recovery.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

// Independent verification tools: a primal-side convex solve in log space
// (never touching the dual machinery it cross-checks), a deterministic random
// problem generator, and exhaustive enumeration of the parameter space S.
//
// With y = ln x a standard GP becomes
//   min  F(y)   = ln sum_t exp(a_0t . y + ln c_0t)
//   s.t. f_i(y) = ln sum_t exp(a_it . y + ln d_it) <= 0,
// a smooth convex program solved here by a log-barrier Newton descent.

namespace posygp {

enum class OracleStatus { Converged, NonConverged, UnboundedBelow };

struct OracleOutcome {
    OracleStatus status{OracleStatus::NonConverged};
    PrimalSolution solution;
    std::string message;
};

namespace detail {

// Stable log-sum-exp data for one posynomial at y: value, softmax weights,
// gradient and Hessian of ln sum_t exp(a_t . y + ln c_t).
struct LogPosy {
    double value;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
};

inline double log_sum_exp(const Eigen::VectorXd& theta) {
    const double peak = theta.maxCoeff();
    return peak + std::log((theta.array() - peak).exp().sum());
}

inline LogPosy log_posy_at(const ConcretePosynomial& g, const Eigen::VectorXd& y, bool wantHessian) {
    const Eigen::VectorXd theta = g.exponents * y + g.coefficients.array().log().matrix();
    LogPosy out;
    out.value = log_sum_exp(theta);
    const Eigen::VectorXd softmax = (theta.array() - out.value).exp();
    out.gradient = g.exponents.transpose() * softmax;
    if (wantHessian)
        out.hessian = g.exponents.transpose() *
                      (Eigen::MatrixXd(softmax.asDiagonal()) - softmax * softmax.transpose()) * g.exponents;
    return out;
}

// True if d is a certified recession ray: every objective exponent row is
// non-increasing along d, at least one strictly, and every constraint row is
// non-increasing (so the ray stays feasible).
inline bool certified_descent_ray(const StandardGp& g, const Eigen::VectorXd& d) {
    const double tol = 1e-9;
    const Eigen::VectorXd obj = g.objective.exponents * d;
    if (obj.maxCoeff() > tol || obj.minCoeff() > -tol) return false;
    for (const auto& c : g.constraints)
        if (c.term_count() && (c.exponents * d).maxCoeff() > tol) return false;
    return true;
}

// Strictly feasible start: minimize s subject to f_i(y) <= s via a small
// barrier loop; succeeds once max_i f_i(y) is comfortably negative.
inline bool oracle_phase1(const StandardGp& g, Eigen::VectorXd& y, int& steps, int maxIter) {
    const Eigen::Index n = g.variable_count();
    auto worst = [&](const Eigen::VectorXd& point) {
        double value = -std::numeric_limits<double>::infinity();
        for (const auto& c : g.constraints) value = std::max(value, log_posy_at(c, point, false).value);
        return value;
    };
    if (g.constraints.empty() || worst(y) < -1e-6) return true;

    double s = worst(y) + 1.0;
    for (double mu = 1.0; mu > 1e-10; mu *= 0.1) {
        for (int step = 0; step < 40 && steps < maxIter; ++step, ++steps) {
            Eigen::VectorXd grad = Eigen::VectorXd::Zero(n + 1);
            Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n + 1, n + 1);
            grad[n] = 1.0;
            for (const auto& c : g.constraints) {
                const LogPosy lp = log_posy_at(c, y, true);
                const double slack = s - lp.value;
                Eigen::VectorXd gi(n + 1);
                gi.head(n) = lp.gradient;
                gi[n] = -1.0;
                grad += (mu / slack) * gi;
                hess += (mu / (slack * slack)) * gi * gi.transpose();
                hess.topLeftCorner(n, n) += (mu / slack) * lp.hessian;
            }
            hess.diagonal().array() += 1e-12 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
            const Eigen::VectorXd d = -min_norm_solve(hess, grad);
            const double decrement = -grad.dot(d);
            if (decrement * 0.5 <= 1e-12) break;

            double alpha = 1.0;
            const double cap = d.cwiseAbs().maxCoeff();
            if (cap > 10.0) alpha = 10.0 / cap;
            const double f0 = s - [&] {
                double sum = 0.0;
                for (const auto& c : g.constraints) sum += std::log(s - log_posy_at(c, y, false).value);
                return mu * sum;
            }();
            bool accepted = false;
            while (alpha > 1e-16) {
                const Eigen::VectorXd yn = y + alpha * d.head(n);
                const double sn = s + alpha * d[n];
                double sum = 0.0;
                bool interior = true;
                for (const auto& c : g.constraints) {
                    const double slack = sn - log_posy_at(c, yn, false).value;
                    if (slack <= 0.0) { interior = false; break; }
                    sum += std::log(slack);
                }
                if (interior && sn - mu * sum <= f0 - 1e-4 * alpha * decrement) {
                    y = yn;
                    s = sn;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;
            if (worst(y) < -1e-4) return true;
        }
        if (worst(y) < -1e-4) return true;
    }
    return worst(y) < 0.0;
}

}  // namespace detail

// Log-domain primal solve, independent of the dual route.
inline OracleOutcome oracle_solve(const StandardGp& g, const SolverOptions& opts = {}) {
    OracleOutcome outcome;
    const Eigen::Index n = g.variable_count();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    int steps = 0;
    const int maxIter = std::max(opts.maxIter, 300);

    if (!detail::oracle_phase1(g, y, steps, maxIter)) {
        outcome.message = "no strictly feasible point found";
        return outcome;
    }

    bool converged = false;
    double mu = 1.0;
    while (steps < maxIter && !converged) {
        bool stalled = false;
        for (int step = 0; step < 60 && steps < maxIter; ++step, ++steps) {
            const detail::LogPosy objective = detail::log_posy_at(g.objective, y, true);
            Eigen::VectorXd grad = objective.gradient;
            Eigen::MatrixXd hess = objective.hessian;
            bool interiorNow = true;
            for (const auto& c : g.constraints) {
                const detail::LogPosy lp = detail::log_posy_at(c, y, true);
                if (lp.value >= 0.0) { interiorNow = false; break; }
                const double slack = -lp.value;
                grad += (mu / slack) * lp.gradient;
                hess += (mu / slack) * lp.hessian + (mu / (slack * slack)) * lp.gradient * lp.gradient.transpose();
            }
            if (!interiorNow) { stalled = true; break; }
            hess.diagonal().array() += 1e-12 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
            const Eigen::VectorXd d = -detail::min_norm_solve(hess, grad);
            const double decrement = -grad.dot(d);
            if (decrement * 0.5 <= std::max(1e-16, 1e-3 * mu * mu)) {
                if (mu <= 1e-9) converged = true;
                break;
            }

            double alpha = 1.0;
            const double cap = d.cwiseAbs().maxCoeff();
            if (cap > 25.0) alpha = 25.0 / cap;
            auto barrier_value = [&](const Eigen::VectorXd& point, bool& interior) {
                double value = detail::log_posy_at(g.objective, point, false).value;
                for (const auto& c : g.constraints) {
                    const double fi = detail::log_posy_at(c, point, false).value;
                    if (fi >= 0.0) { interior = false; return 0.0; }
                    value -= mu * std::log(-fi);
                }
                interior = true;
                return value;
            };
            bool unusedInterior = true;
            const double f0 = barrier_value(y, unusedInterior);
            bool accepted = false;
            while (alpha > 1e-16) {
                const Eigen::VectorXd yn = y + alpha * d;
                bool interior = true;
                const double fn = barrier_value(yn, interior);
                if (interior && fn <= f0 - 1e-4 * alpha * decrement) {
                    y = yn;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) { stalled = true; break; }

            if (y.cwiseAbs().maxCoeff() > 40.0) {
                const Eigen::VectorXd ray = y.normalized();
                if (detail::certified_descent_ray(g, ray)) {
                    outcome.status = OracleStatus::UnboundedBelow;
                    outcome.message = "objective decreases without bound along a certified ray";
                    return outcome;
                }
            }
        }
        if (converged || steps >= maxIter) break;
        if (mu <= 1e-9) {
            if (stalled) break;  // no further progress at the final barrier weight
            continue;            // inner step cap only; keep polishing at mu_min
        }
        mu = std::max(mu * 0.1, 1e-9);
    }

    if (!converged) {
        outcome.message = "iteration budget exhausted";
        return outcome;
    }

    PrimalSolution& sol = outcome.solution;
    sol.x = y.array().exp();
    sol.objectiveValue = evaluate_posynomial(g.objective, sol.x);
    sol.constraintResiduals.resize(static_cast<Eigen::Index>(g.constraints.size()));
    for (std::size_t i = 0; i < g.constraints.size(); ++i) {
        const double gi = evaluate_posynomial(g.constraints[i], sol.x);
        sol.constraintResiduals[static_cast<Eigen::Index>(i)] = gi - 1.0;
        if (gi >= 1.0 - 1e-7) sol.activeConstraints.push_back(static_cast<int>(i));
    }
    sol.recoveryResidual = 0.0;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(detail::log_posy_at(g.objective, y, true).hessian);
    sol.unique = cod.rank() >= n;
    outcome.status = OracleStatus::Converged;
    return outcome;
}

// --- random problem generator ----------------------------------------------

struct GeneratedGp {
    StandardGp gp;
    Eigen::VectorXd interiorPoint;  // g_i at this point equals 0.5 by construction
    unsigned seed{0};
};

namespace detail {

inline double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline ConcretePosynomial random_posynomial(std::mt19937_64& rng, Eigen::Index n, int terms) {
    ConcretePosynomial out;
    out.coefficients.resize(terms);
    out.exponents.resize(terms, n);
    for (int t = 0; t < terms; ++t) {
        out.coefficients[t] = std::pow(10.0, 2.0 * unit_draw(rng) - 1.0);  // log-uniform in [0.1, 10]
        bool nonzero = false;
        while (!nonzero) {
            for (Eigen::Index j = 0; j < n; ++j) {
                out.exponents(t, j) = std::floor(unit_draw(rng) * 7.0) - 3.0;  // integers in [-3, 3]
                if (out.exponents(t, j) != 0.0) nonzero = true;
            }
        }
    }
    return out;
}

}  // namespace detail

// Deterministic in seed. Every instance carries a certified interior point;
// candidates whose dual is infeasible (primal infimum unattained) are
// resampled from the same stream so the instances are useful for route
// cross-checks.
inline GeneratedGp generate_random_gp(int n, int m, int termsPerPosy, unsigned seed) {
    if (n < 1 || m < 0 || termsPerPosy < 1) throw std::invalid_argument("generator needs n >= 1, m >= 0, terms >= 1");
    std::mt19937_64 rng(seed);
    GeneratedGp out;
    out.seed = seed;
    for (int attempt = 0; attempt < 64; ++attempt) {
        StandardGp g;
        for (int j = 0; j < n; ++j) g.variables.push_back("x" + std::to_string(j + 1));
        g.provenance = "generated(seed=" + std::to_string(seed) + ")";
        g.objective = detail::random_posynomial(rng, n, termsPerPosy);

        Eigen::VectorXd x0(n);
        for (int j = 0; j < n; ++j) x0[j] = std::exp(detail::unit_draw(rng) - 0.5);
        for (int i = 0; i < m; ++i) {
            ConcretePosynomial body = detail::random_posynomial(rng, n, termsPerPosy);
            body.coefficients *= 0.5 / evaluate_posynomial(body, x0);
            g.constraints.push_back(std::move(body));
        }

        out.gp = std::move(g);
        out.interiorPoint = x0;
        const DualProgram dp = build_dual(out.gp);
        if (detail::nnls(dp.equalityMatrix, dp.equalityRhs).second <= 1e-8) break;
    }
    return out;
}

// --- exhaustive scenario sweep ----------------------------------------------

struct SweepOptions {
    int maxSites{12};  // 3^12 = 531441 solves; refuse anything larger
    SolverOptions solver;
};

struct ComboOutcome {
    std::int64_t index{0};
    std::vector<Scenario> choices;
    bool solved{false};
    double value{std::numeric_limits<double>::quiet_NaN()};
    std::string failure;
};

struct SweepReport {
    int siteCount{0};
    std::int64_t comboCount{0};
    std::vector<ComboOutcome> outcomes;
    std::int64_t solvedCount{0};
    double minValue{std::numeric_limits<double>::quiet_NaN()};
    double maxValue{std::numeric_limits<double>::quiet_NaN()};
    std::int64_t minIndex{-1};
    std::int64_t maxIndex{-1};
    std::int64_t allLowIndex{0};
    std::int64_t allMidIndex{0};
    std::int64_t allHighIndex{0};
    bool allLowAttainsMin{false};
    bool allHighAttainsMax{false};
};

struct SweepCapExceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Solves every combination in S via the dual route. Combo index k encodes the
// site choices in base 3, site 0 in the least significant digit
// (0 = low, 1 = mid, 2 = high).
inline SweepReport sweep_scenarios(const MultiGpProblem& p, const SweepOptions& opts = {}) {
    const ParameterSpace space = parameter_space(p);
    if (space.site_count() > opts.maxSites)
        throw SweepCapExceeded("parameter space has " + std::to_string(space.site_count()) +
                               " sites; sweep cap is " + std::to_string(opts.maxSites));

    SweepReport report;
    report.siteCount = space.site_count();
    report.comboCount = space.combinations();
    report.allLowIndex = 0;
    report.allMidIndex = (report.comboCount - 1) / 2;  // all base-3 digits equal to 1
    report.allHighIndex = report.comboCount - 1;
    report.outcomes.reserve(static_cast<std::size_t>(report.comboCount));

    for (std::int64_t index = 0; index < report.comboCount; ++index) {
        ComboOutcome combo;
        combo.index = index;
        std::int64_t rest = index;
        for (int k = 0; k < report.siteCount; ++k, rest /= 3)
            combo.choices.push_back(static_cast<Scenario>(rest % 3));

        const DualSolveOutcome solve = maximize_dual(build_dual(normalize(instantiate(p, space, combo.choices))),
                                                     opts.solver);
        if (solve.status == DualStatus::Converged) {
            combo.solved = true;
            combo.value = solve.solution.dualValue;
            ++report.solvedCount;
            if (report.minIndex < 0 || combo.value < report.minValue) {
                report.minValue = combo.value;
                report.minIndex = index;
            }
            if (report.maxIndex < 0 || combo.value > report.maxValue) {
                report.maxValue = combo.value;
                report.maxIndex = index;
            }
        } else {
            combo.failure = solve.status == DualStatus::InfeasibleDual ? "INFEASIBLE_DUAL" : "NONCONVERGED";
        }
        report.outcomes.push_back(std::move(combo));
    }

    const auto attains = [](double value, double bound) {
        return std::abs(value - bound) <= 1e-7 * std::max(1.0, std::abs(bound));
    };
    const ComboOutcome& low = report.outcomes[static_cast<std::size_t>(report.allLowIndex)];
    const ComboOutcome& high = report.outcomes[static_cast<std::size_t>(report.allHighIndex)];
    report.allLowAttainsMin = low.solved && report.minIndex >= 0 && attains(low.value, report.minValue);
    report.allHighAttainsMax = high.solved && report.maxIndex >= 0 && attains(high.value, report.maxValue);
    return report;
}

}  // namespace posygp
