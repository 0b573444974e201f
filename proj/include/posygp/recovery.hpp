#pragma once

#include "posygp/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

// Primal recovery from optimal dual weights, and the certificate tying a
// primal/dual pair together.
//
// At a dual optimum each kept objective term carries the share
// c_0t prod_j x_j^{a_0tj} = w_0t * Z, and each term of an active constraint
// satisfies d_it prod_j x_j^{a_itj} = w_it / lambda_i. Taking logs gives a
// linear system in ln x, solved here in the least-squares sense.

namespace posygp {

struct PrimalSolution {
    Eigen::VectorXd x;
    double objectiveValue{0.0};
    Eigen::VectorXd constraintResiduals;  // g_i(x) - 1 per constraint
    double recoveryResidual{0.0};         // max log-equation mismatch
    bool unique{true};
    std::vector<int> activeConstraints;   // lambda_i above the active threshold
};

enum class Verdict { Certified, GapTooLarge, InfeasiblePrimal };

struct Certificate {
    double dualValue{0.0};
    double primalValue{0.0};
    double relativeGap{0.0};
    double maxConstraintViolation{0.0};
    double complementaritySlack{0.0};
    Verdict verdict{Verdict::GapTooLarge};
};

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "CERTIFIED";
        case Verdict::GapTooLarge: return "GAP_TOO_LARGE";
        default: return "INFEASIBLE_PRIMAL";
    }
}

// Certification thresholds (fixed, matched by the acceptance suite).
inline constexpr double kCertifyGapTol = 1e-5;
inline constexpr double kCertifyFeasibilityTol = 1e-6;
inline constexpr double kComplementarityTol = 1e-4;

struct RecoveryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// lambda_i below this is treated as an inactive constraint and excluded from
// recovery; scaled so that solver-rounded near-zeros never count as active.
inline double active_threshold(const Eigen::VectorXd& lambda) {
    return 1e-7 * std::max(1.0, lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0);
}

inline PrimalSolution recover_primal(const StandardGp& g, const DualSolution& ds,
                                     double weightThreshold = 1e-9) {
    if (!(ds.dualValue > 0.0)) throw RecoveryError("recovery requires a positive dual value");
    const Eigen::Index n = g.variable_count();
    const double logZ = ds.logDualValue;
    const double lambdaThreshold = active_threshold(ds.lambda);

    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    Eigen::Index flat = 0;
    for (Eigen::Index t = 0; t < g.objective.term_count(); ++t, ++flat) {
        const double wt = ds.w[flat];
        if (wt <= weightThreshold) continue;
        rows.push_back(g.objective.exponents.row(t));
        rhs.push_back(std::log(wt) + logZ - std::log(g.objective.coefficients[t]));
    }

    PrimalSolution out;
    for (std::size_t i = 0; i < g.constraints.size(); ++i) {
        const auto& body = g.constraints[i];
        const double lambda = ds.lambda[static_cast<Eigen::Index>(i)];
        if (lambda <= lambdaThreshold) {
            flat += body.term_count();
            continue;
        }
        out.activeConstraints.push_back(static_cast<int>(i));
        for (Eigen::Index t = 0; t < body.term_count(); ++t, ++flat) {
            const double wt = ds.w[flat];
            if (wt <= weightThreshold) continue;
            rows.push_back(body.exponents.row(t));
            rhs.push_back(std::log(wt) - std::log(lambda) - std::log(body.coefficients[t]));
        }
    }
    if (rows.empty()) throw RecoveryError("all weight relations were filtered out; cannot recover a primal point");

    Eigen::MatrixXd system(static_cast<Eigen::Index>(rows.size()), n);
    Eigen::VectorXd target(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        system.row(static_cast<Eigen::Index>(r)) = rows[r];
        target[static_cast<Eigen::Index>(r)] = rhs[r];
    }

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(system);
    const Eigen::VectorXd logx = cod.solve(target);  // minimum-norm least squares
    out.unique = cod.rank() >= n;
    out.recoveryResidual = (system * logx - target).cwiseAbs().maxCoeff();
    out.x = logx.array().exp();
    out.objectiveValue = evaluate_posynomial(g.objective, out.x);
    out.constraintResiduals.resize(static_cast<Eigen::Index>(g.constraints.size()));
    for (std::size_t i = 0; i < g.constraints.size(); ++i)
        out.constraintResiduals[static_cast<Eigen::Index>(i)] =
            evaluate_posynomial(g.constraints[i], out.x) - 1.0;
    return out;
}

inline Certificate certify(const StandardGp& g, const DualSolution& ds, const PrimalSolution& ps) {
    Certificate cert;
    cert.dualValue = ds.dualValue;
    cert.primalValue = ps.objectiveValue;
    cert.relativeGap = std::abs(cert.primalValue - cert.dualValue) / std::max(1.0, std::abs(cert.dualValue));

    cert.maxConstraintViolation = 0.0;
    cert.complementaritySlack = 0.0;
    for (std::size_t i = 0; i < g.constraints.size(); ++i) {
        const double gi = evaluate_posynomial(g.constraints[i], ps.x);
        cert.maxConstraintViolation = std::max(cert.maxConstraintViolation, gi - 1.0);
        cert.complementaritySlack =
            std::max(cert.complementaritySlack, std::min(ds.lambda[static_cast<Eigen::Index>(i)], std::abs(1.0 - gi)));
    }

    if (cert.maxConstraintViolation > kCertifyFeasibilityTol)
        cert.verdict = Verdict::InfeasiblePrimal;
    else if (cert.relativeGap > kCertifyGapTol)
        cert.verdict = Verdict::GapTooLarge;
    else
        cert.verdict = Verdict::Certified;
    return cert;
}

}  // namespace posygp
