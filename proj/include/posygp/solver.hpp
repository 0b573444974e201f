#pragma once

#include "posygp/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

// Maximizes the concave log-dual v(w) over {w >= 0, A w = b}.
//
// Pipeline:
//   1. zero-degrees-of-difficulty shortcut: if N = n + 1 and the equality
//      system is nonsingular, its unique solution is the answer (or proves
//      the dual empty when it has negative entries).
//   2. phase 1: Lawson-Hanson NNLS on ||A w - b||^2 certifies feasibility;
//      a small auxiliary barrier problem (min theta s.t. A w = b,
//      w + theta >= 0) then pushes the point strictly inside.
//   3. log-barrier ascent: maximize v(w) + mu * sum ln w_k subject to
//      A w = b by equality-constrained Newton steps, shrinking mu
//      geometrically. Line searches use a fraction-to-boundary rule and
//      never accept a step that lowers v itself, so the log-dual value of
//      accepted iterates is non-decreasing across the whole run.
//   4. rounding + polish: weights at or below zeroWeightThreshold snap to
//      exact zeros and plain Newton on the surviving coordinates sharpens
//      the iterate to the final KKT tolerance.
//
// The KKT residual combines the equality residual, the projection residual
// of the gradient onto the row space of A over positive coordinates, and,
// for constraint blocks rounded to zero, the block re-entry condition
// ln(sum_t d_it exp(-a_it . y)) <= 0 (equivalently g_i(x) <= 1 at the
// multiplier point x = exp(y)).

namespace posygp {

struct SolverOptions {
    double tol{1e-8};                  // KKT residual target
    int maxIter{200};                  // Newton step budget for one run
    double barrierInit{1e-1};
    double barrierShrink{0.1};
    double barrierMin{1e-10};
    double zeroWeightThreshold{1e-9};  // weights at or below this round to 0
    unsigned seed{0};                  // reserved for randomized restarts
    bool recordTrace{false};
};

struct DualSolution {
    Eigen::VectorXd w;
    Eigen::VectorXd lambda;  // per-constraint block sums
    double dualValue{0.0};
    double logDualValue{0.0};
    double kktResidual{std::numeric_limits<double>::infinity()};
    int iterations{0};
    bool converged{false};
};

enum class DualStatus { Converged, InfeasibleDual, NonConverged };

enum class Phase1Status { Feasible, Infeasible, NonConverged };

struct Phase1Result {
    Phase1Status status{Phase1Status::NonConverged};
    Eigen::VectorXd weights;          // strictly positive on free coordinates
    std::vector<int> forcedZero;      // coordinates provably zero on the whole feasible set
};

struct IterateRecord {
    double logDual;
    double equalityResidual;
    double minWeight;
};

struct DualSolveOutcome {
    DualStatus status{DualStatus::NonConverged};
    DualSolution solution;
    std::string message;
    std::vector<IterateRecord> trace;  // accepted iterates, when requested
};

enum class ZeroDodStatus { Solved, InfeasibleDual, NotApplicable };

struct ZeroDodResult {
    ZeroDodStatus status{ZeroDodStatus::NotApplicable};
    DualSolution solution;
};

namespace detail {

inline Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
    return cod.solve(rhs);
}

// Lawson-Hanson active-set NNLS: min ||A x - b||^2 over x >= 0.
// Returns the solution and its residual 2-norm.
inline std::pair<Eigen::VectorXd, double> nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    const Eigen::Index cols = a.cols();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(cols);
    std::vector<bool> passive(static_cast<std::size_t>(cols), false);
    const double gradTol = 1e-12 * std::max(1.0, (a.transpose() * b).cwiseAbs().maxCoeff());

    auto solve_passive = [&](std::vector<Eigen::Index>& idx) {
        idx.clear();
        for (Eigen::Index k = 0; k < cols; ++k)
            if (passive[static_cast<std::size_t>(k)]) idx.push_back(k);
        Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t j = 0; j < idx.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = a.col(idx[j]);
        return min_norm_solve(sub, b);
    };

    std::vector<Eigen::Index> idx;
    const int outerCap = static_cast<int>(3 * cols + 12);
    for (int outer = 0; outer < outerCap; ++outer) {
        const Eigen::VectorXd grad = a.transpose() * (b - a * x);
        Eigen::Index best = -1;
        double bestVal = gradTol;
        for (Eigen::Index k = 0; k < cols; ++k)
            if (!passive[static_cast<std::size_t>(k)] && grad[k] > bestVal) { bestVal = grad[k]; best = k; }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        for (int inner = 0; inner < outerCap; ++inner) {
            Eigen::VectorXd z = solve_passive(idx);
            double minZ = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < idx.size(); ++j) minZ = std::min(minZ, z[static_cast<Eigen::Index>(j)]);
            if (minZ > 0.0) {
                x.setZero();
                for (std::size_t j = 0; j < idx.size(); ++j) x[idx[j]] = z[static_cast<Eigen::Index>(j)];
                break;
            }
            double alpha = 1.0;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                const double zj = z[static_cast<Eigen::Index>(j)];
                const double xj = x[idx[j]];
                if (zj <= 0.0 && xj - zj > 0.0) alpha = std::min(alpha, xj / (xj - zj));
            }
            for (std::size_t j = 0; j < idx.size(); ++j) {
                const Eigen::Index k = idx[j];
                x[k] += alpha * (z[static_cast<Eigen::Index>(j)] - x[k]);
                if (x[k] <= 1e-14) { x[k] = 0.0; passive[static_cast<std::size_t>(k)] = false; }
            }
        }
    }
    return {x, (a * x - b).norm()};
}

// Equality-constrained Newton step: solve [[H, A^T], [A, 0]] [d; nu] = [-g; 0]
// with a rank-revealing factorization (minimum-norm step on degenerate rows).
inline Eigen::VectorXd kkt_step(const Eigen::MatrixXd& hess, const Eigen::MatrixXd& a, const Eigen::VectorXd& grad) {
    const Eigen::Index f = hess.rows();
    const Eigen::Index r = a.rows();
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(f + r, f + r);
    kkt.topLeftCorner(f, f) = hess;
    kkt.topRightCorner(f, r) = a.transpose();
    kkt.bottomLeftCorner(r, f) = a;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(f + r);
    rhs.head(f) = -grad;
    return min_norm_solve(kkt, rhs).head(f);
}

// max step in [0, 1] keeping w + alpha * d at least (1 - margin) of the way
// from the boundary.
inline double fraction_to_boundary(const Eigen::VectorXd& w, const Eigen::VectorXd& d, double margin = 0.99) {
    double alpha = 1.0;
    for (Eigen::Index k = 0; k < w.size(); ++k)
        if (d[k] < 0.0) alpha = std::min(alpha, -margin * w[k] / d[k]);
    return alpha;
}

// min theta s.t. A w = b, w + theta >= 0, by a log-barrier on the slacks.
// Minimizing theta maximizes the worst margin min_k w_k; a strictly negative
// optimum certifies an interior point.
inline bool interiorize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::VectorXd& w) {
    const Eigen::Index f = a.cols();
    double theta = 0.1 * std::max(1.0, w.cwiseAbs().maxCoeff());
    if (w.minCoeff() < 0.0) theta += -2.0 * w.minCoeff();
    const double margin = 1e-3;

    double mu = std::max(1.0, theta);
    while (mu > 1e-12) {
        for (int step = 0; step < 40; ++step) {
            const Eigen::VectorXd s = w.array() + theta;
            Eigen::VectorXd grad(f + 1);
            grad.head(f) = -mu * s.cwiseInverse();
            grad[f] = 1.0 - mu * s.cwiseInverse().sum();
            Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(f + 1, f + 1);
            const Eigen::VectorXd s2 = mu * s.array().square().inverse().matrix();
            hess.topLeftCorner(f, f).diagonal() = s2;
            hess.topRightCorner(f, 1) = s2;
            hess.bottomLeftCorner(1, f) = s2.transpose();
            hess(f, f) = s2.sum();
            hess.diagonal().array() += 1e-14 * std::max(1.0, s2.maxCoeff());
            Eigen::MatrixXd aAug = Eigen::MatrixXd::Zero(a.rows(), f + 1);
            aAug.leftCols(f) = a;
            // kkt_step solves the concave-maximization system; negating H and g
            // yields the Newton descent direction for this minimization
            const Eigen::VectorXd d = kkt_step(-hess, aAug, -grad);

            const double decrement = -grad.dot(d);
            if (decrement < 1e-16 * std::max(1.0, std::abs(theta))) break;
            Eigen::VectorXd sDir = d.head(f).array() + d[f];
            double alpha = fraction_to_boundary(s, sDir);
            const double f0 = theta - mu * s.array().log().sum();
            bool accepted = false;
            while (alpha > 1e-18) {
                const Eigen::VectorXd wn = w + alpha * d.head(f);
                const double thetan = theta + alpha * d[f];
                const Eigen::VectorXd sn = wn.array() + thetan;
                if (sn.minCoeff() > 0.0) {
                    const double fn = thetan - mu * sn.array().log().sum();
                    if (fn <= f0 - 1e-4 * alpha * decrement) {
                        w = wn;
                        theta = thetan;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!accepted) break;
            if (theta <= -margin) return true;
        }
        mu *= 0.1;
    }
    return theta < -1e-12;
}

inline Eigen::MatrixXd select_columns(const Eigen::MatrixXd& a, const std::vector<Eigen::Index>& cols) {
    Eigen::MatrixXd out(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
    return out;
}

inline Phase1Result phase1(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int depth = 0) {
    Phase1Result result;
    const Eigen::Index cols = a.cols();

    auto [wNnls, residual] = nnls(a, b);
    if (residual > 1e-8) {
        result.status = Phase1Status::Infeasible;
        return result;
    }

    // project onto the affine set exactly, then push interior
    Eigen::VectorXd w = wNnls + min_norm_solve(a, b - a * wNnls);
    if (interiorize(a, b, w)) {
        result.status = Phase1Status::Feasible;
        result.weights = w;
        return result;
    }

    // No interior: coordinates pinned at zero by the equalities are dropped
    // and phase 1 re-runs on the remaining columns.
    if (depth >= static_cast<int>(cols)) return result;
    const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    std::vector<Eigen::Index> keep;
    std::vector<int> dropped;
    for (Eigen::Index k = 0; k < cols; ++k) {
        if (w[k] > 1e-10 * scale)
            keep.push_back(k);
        else
            dropped.push_back(static_cast<int>(k));
    }
    if (dropped.empty() || keep.empty()) return result;

    Phase1Result sub = phase1(select_columns(a, keep), b, depth + 1);
    if (sub.status != Phase1Status::Feasible) {
        result.status = sub.status;
        return result;
    }
    result.status = Phase1Status::Feasible;
    result.weights = Eigen::VectorXd::Zero(cols);
    for (std::size_t j = 0; j < keep.size(); ++j) result.weights[keep[j]] = sub.weights[static_cast<Eigen::Index>(j)];
    result.forcedZero = dropped;
    for (int k : sub.forcedZero) result.forcedZero.push_back(static_cast<int>(keep[static_cast<std::size_t>(k)]));
    std::sort(result.forcedZero.begin(), result.forcedZero.end());
    return result;
}

// Gradient and Hessian of v restricted to the free coordinates.
inline void reduced_derivatives(const DualProgram& dp, const Eigen::VectorXd& w,
                                const std::vector<Eigen::Index>& free, Eigen::VectorXd& grad,
                                Eigen::MatrixXd& hess) {
    const auto f = static_cast<Eigen::Index>(free.size());
    grad.resize(f);
    hess = Eigen::MatrixXd::Zero(f, f);
    std::vector<double> lambda(static_cast<std::size_t>(dp.block_count()), 0.0);
    for (Eigen::Index p = 0; p < f; ++p) lambda[static_cast<std::size_t>(dp.block_of(free[static_cast<std::size_t>(p)]))] += w[free[static_cast<std::size_t>(p)]];

    for (Eigen::Index p = 0; p < f; ++p) {
        const Eigen::Index k = free[static_cast<std::size_t>(p)];
        const int block = dp.block_of(k);
        if (block == 0)
            grad[p] = std::log(dp.dualCoef[k]) - std::log(w[k]) - 1.0;
        else
            grad[p] = std::log(dp.dualCoef[k]) + std::log(lambda[static_cast<std::size_t>(block)]) - std::log(w[k]);
        hess(p, p) = -1.0 / w[k];
    }
    for (Eigen::Index p = 0; p < f; ++p) {
        const int bp = dp.block_of(free[static_cast<std::size_t>(p)]);
        if (bp == 0) continue;
        for (Eigen::Index q = 0; q < f; ++q)
            if (dp.block_of(free[static_cast<std::size_t>(q)]) == bp) hess(p, q) += 1.0 / lambda[static_cast<std::size_t>(bp)];
    }
}

}  // namespace detail

// Strictly positive w with A w = b, or the infeasibility / nonconvergence
// verdict. Coordinates listed in forcedZero are zero in every feasible point;
// when present the remaining coordinates are strictly positive.
inline Phase1Result find_feasible_weights(const DualProgram& dp) {
    return detail::phase1(dp.equalityMatrix, dp.equalityRhs);
}

// When N = n + 1 the equality system determines w outright; optimization is
// unnecessary. Nonsingular system with a negative entry proves the dual
// feasible set empty.
inline ZeroDodResult solve_zero_dod(const DualProgram& dp) {
    ZeroDodResult result;
    if (dp.total_terms() != dp.equalityMatrix.rows()) return result;  // DoD != 0

    Eigen::FullPivLU<Eigen::MatrixXd> lu(dp.equalityMatrix);
    if (!lu.isInvertible()) return result;  // caller falls back to maximize_dual

    Eigen::VectorXd w = lu.solve(dp.equalityRhs);
    const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    if (w.minCoeff() < -1e-11 * scale) {
        result.status = ZeroDodStatus::InfeasibleDual;
        return result;
    }
    w = w.cwiseMax(0.0);

    result.status = ZeroDodStatus::Solved;
    result.solution.w = w;
    result.solution.lambda = dp.block_sums(w);
    result.solution.logDualValue = dual_log_objective(dp, w);
    result.solution.dualValue = std::exp(result.solution.logDualValue);
    result.solution.iterations = 0;
    result.solution.kktResidual = (dp.equalityMatrix * w - dp.equalityRhs).cwiseAbs().maxCoeff();
    result.solution.converged = true;
    return result;
}

namespace detail {

// KKT residual of a rounded solution: equality residual, row-space projection
// residual of the gradient over positive coordinates, and the re-entry value
// of fully zero constraint blocks.
inline double kkt_residual(const DualProgram& dp, const Eigen::VectorXd& w, double zeroThreshold) {
    double residual = (dp.equalityMatrix * w - dp.equalityRhs).cwiseAbs().maxCoeff();

    std::vector<Eigen::Index> positive;
    for (Eigen::Index k = 0; k < w.size(); ++k)
        if (w[k] > 0.0) positive.push_back(k);
    if (positive.empty()) return std::numeric_limits<double>::infinity();

    Eigen::VectorXd grad;
    Eigen::MatrixXd unusedHess;
    reduced_derivatives(dp, w, positive, grad, unusedHess);
    const Eigen::MatrixXd aPos = select_columns(dp.equalityMatrix, positive);
    const Eigen::VectorXd y = min_norm_solve(aPos.transpose(), grad);
    residual = std::max(residual, (grad - aPos.transpose() * y).cwiseAbs().maxCoeff());

    const Eigen::VectorXd lambda = dp.block_sums(w);
    for (int i = 1; i < dp.block_count(); ++i) {
        const int start = dp.block_start(i);
        const int size = dp.blockSizes[static_cast<std::size_t>(i)];
        if (lambda[i - 1] > 0.0) {
            // partially zero active blocks never survive rounding in practice;
            // score them with the threshold as a conservative stand-in
            for (int t = 0; t < size; ++t) {
                const Eigen::Index k = start + t;
                if (w[k] > 0.0) continue;
                const double rk = std::log(dp.dualCoef[k]) + std::log(lambda[i - 1]) - std::log(zeroThreshold) -
                                  dp.equalityMatrix.col(k).dot(y);
                residual = std::max(residual, std::max(0.0, rk));
            }
            continue;
        }
        double reentry = 0.0;
        for (int t = 0; t < size; ++t) {
            const Eigen::Index k = start + t;
            reentry += dp.dualCoef[k] * std::exp(-dp.equalityMatrix.col(k).dot(y));
        }
        residual = std::max(residual, std::max(0.0, std::log(reentry)));
    }
    return residual;
}

}  // namespace detail

inline DualSolveOutcome maximize_dual(const DualProgram& dp, const SolverOptions& opts = {}) {
    DualSolveOutcome outcome;

    const ZeroDodResult direct = solve_zero_dod(dp);
    if (direct.status == ZeroDodStatus::Solved) {
        outcome.status = DualStatus::Converged;
        outcome.solution = direct.solution;
        outcome.solution.kktResidual = detail::kkt_residual(dp, direct.solution.w, opts.zeroWeightThreshold);
        outcome.solution.converged = outcome.solution.kktResidual <= opts.tol;
        if (!outcome.solution.converged) outcome.status = DualStatus::NonConverged;
        return outcome;
    }
    if (direct.status == ZeroDodStatus::InfeasibleDual) {
        outcome.status = DualStatus::InfeasibleDual;
        outcome.message = "equality system has no nonnegative solution";
        return outcome;
    }

    Phase1Result phase1 = find_feasible_weights(dp);
    if (phase1.status == Phase1Status::Infeasible) {
        outcome.status = DualStatus::InfeasibleDual;
        outcome.message = "normality/orthogonality system has no nonnegative solution";
        return outcome;
    }
    if (phase1.status == Phase1Status::NonConverged) {
        outcome.status = DualStatus::NonConverged;
        outcome.message = "phase 1 failed to resolve the feasible set";
        return outcome;
    }

    Eigen::VectorXd w = phase1.weights;
    std::vector<Eigen::Index> free;
    for (Eigen::Index k = 0; k < w.size(); ++k)
        if (w[k] > 0.0) free.push_back(k);

    double currentLog = dual_log_objective(dp, w);
    int iterations = 0;
    bool budgetExhausted = false;
    bool diverged = false;

    auto record = [&]() {
        if (!opts.recordTrace) return;
        outcome.trace.push_back(IterateRecord{currentLog,
                                              (dp.equalityMatrix * w - dp.equalityRhs).cwiseAbs().maxCoeff(),
                                              w.size() ? w.minCoeff() : 0.0});
    };
    record();

    Eigen::MatrixXd aFree = detail::select_columns(dp.equalityMatrix, free);
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;

    auto subvector = [&](const Eigen::VectorXd& full) {
        Eigen::VectorXd sub(static_cast<Eigen::Index>(free.size()));
        for (std::size_t p = 0; p < free.size(); ++p) sub[static_cast<Eigen::Index>(p)] = full[free[p]];
        return sub;
    };
    auto scatter_add = [&](Eigen::VectorXd& full, const Eigen::VectorXd& sub, double factor) {
        for (std::size_t p = 0; p < free.size(); ++p) full[free[p]] += factor * sub[static_cast<Eigen::Index>(p)];
    };

    // Newton loop at fixed mu; returns false once no further step is accepted.
    auto center = [&](double mu) {
        for (int step = 0; step < 60; ++step) {
            if (iterations >= opts.maxIter) { budgetExhausted = true; return false; }
            detail::reduced_derivatives(dp, w, free, grad, hess);
            Eigen::VectorXd wFree = subvector(w);
            Eigen::VectorXd gradPhi = grad + mu * wFree.cwiseInverse();
            Eigen::MatrixXd hessPhi = hess;
            hessPhi.diagonal() -= mu * wFree.array().square().inverse().matrix();
            const Eigen::VectorXd d = detail::kkt_step(hessPhi, aFree, gradPhi);

            const double decrement = gradPhi.dot(d);
            if (decrement * 0.5 <= std::max(1e-14, 0.01 * mu)) return true;

            double alpha = detail::fraction_to_boundary(wFree, d);
            // a step blocked by the v-monotonicity guard (a centering move that
            // would lower the log-dual) fails fast so the caller shrinks mu
            const double alphaFloor = alpha * 0x1p-20;
            const double phi0 = currentLog + mu * wFree.array().log().sum();
            bool accepted = false;
            while (alpha > alphaFloor) {
                Eigen::VectorXd wTrial = w;
                scatter_add(wTrial, d, alpha);
                const Eigen::VectorXd wTrialFree = subvector(wTrial);
                if (wTrialFree.minCoeff() > 0.0) {
                    const double vTrial = dual_log_objective(dp, wTrial);
                    const double phiTrial = vTrial + mu * wTrialFree.array().log().sum();
                    if (phiTrial >= phi0 + 1e-4 * alpha * decrement && vTrial >= currentLog - 1e-12) {
                        w = wTrial;
                        currentLog = vTrial;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!accepted) return false;
            ++iterations;
            record();
            if (w.cwiseAbs().maxCoeff() > 1e12) { diverged = true; return false; }
        }
        return true;
    };

    for (double mu = opts.barrierInit;; mu *= opts.barrierShrink) {
        mu = std::max(mu, opts.barrierMin);
        center(mu);
        if (budgetExhausted || diverged || mu <= opts.barrierMin) break;
    }

    // round tiny weights to exact zeros, then polish on the survivors
    auto resnap = [&]() {
        bool changed = false;
        for (Eigen::Index k = 0; k < w.size(); ++k)
            if (w[k] != 0.0 && w[k] <= opts.zeroWeightThreshold) { w[k] = 0.0; changed = true; }
        if (!changed) return false;
        free.clear();
        for (Eigen::Index k = 0; k < w.size(); ++k)
            if (w[k] > 0.0) free.push_back(k);
        aFree = detail::select_columns(dp.equalityMatrix, free);
        currentLog = dual_log_objective(dp, w);
        return true;
    };

    if (!budgetExhausted && !diverged) {
        resnap();
        for (int round = 0; round < static_cast<int>(w.size()) + 1; ++round) {
            for (int step = 0; step < 40; ++step) {
                if (iterations >= opts.maxIter) { budgetExhausted = true; break; }
                if (free.empty()) break;
                detail::reduced_derivatives(dp, w, free, grad, hess);
                const Eigen::VectorXd d = detail::kkt_step(hess, aFree, grad);
                const double decrement = grad.dot(d);
                if (decrement * 0.5 <= 1e-16) break;
                double alpha = detail::fraction_to_boundary(subvector(w), d);
                const double alphaFloor = alpha * 0x1p-40;
                bool accepted = false;
                while (alpha > alphaFloor) {
                    Eigen::VectorXd wTrial = w;
                    scatter_add(wTrial, d, alpha);
                    if (subvector(wTrial).minCoeff() > 0.0) {
                        const double vTrial = dual_log_objective(dp, wTrial);
                        if (vTrial >= currentLog + 1e-4 * alpha * decrement && vTrial >= currentLog - 1e-12) {
                            w = wTrial;
                            currentLog = vTrial;
                            accepted = true;
                            break;
                        }
                    }
                    alpha *= 0.5;
                }
                if (!accepted) break;
                ++iterations;
                record();
            }
            if (budgetExhausted || !resnap()) break;
        }
    }

    outcome.solution.w = w;
    outcome.solution.lambda = dp.block_sums(w);
    outcome.solution.logDualValue = currentLog;
    outcome.solution.dualValue = std::exp(currentLog);
    outcome.solution.iterations = iterations;
    outcome.solution.kktResidual = detail::kkt_residual(dp, w, opts.zeroWeightThreshold);
    outcome.solution.converged = !budgetExhausted && !diverged && outcome.solution.kktResidual <= opts.tol;
    if (outcome.solution.converged) {
        outcome.status = DualStatus::Converged;
    } else {
        outcome.status = DualStatus::NonConverged;
        outcome.message = budgetExhausted ? "iteration budget exhausted"
                          : diverged      ? "dual iterates diverged; the primal is likely infeasible"
                                          : "KKT residual above tolerance";
    }
    return outcome;
}

}  // namespace posygp
