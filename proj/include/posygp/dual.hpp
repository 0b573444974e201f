#pragma once

#include "posygp/scenario.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

// Dual of a standard-form GP
//
//   min  g_0(x) = sum_t c_0t prod_j x_j^{a_0tj}
//   s.t. g_i(x) = sum_t d_it prod_j x_j^{a_itj} <= 1,   i = 1..m,  x > 0
//
// is the linearly constrained concave maximization
//
//   max  v(w) = sum_t w_0t ln(c_0t/w_0t)
//             + sum_{i>=1} [ sum_t w_it ln(d_it/w_it) + lambda_i ln lambda_i ]
//   s.t. sum_t w_0t = 1                        (normality)
//        sum_{i,t} a_itj w_it = 0  for each j  (orthogonality)
//        w >= 0,   lambda_i = sum_t w_it.
//
// v is continuous on the closed orthant under the convention
// w ln w -> 0 and lambda ln lambda -> 0 as the argument -> 0, which matters
// because optima can sit on the boundary (whole constraint blocks vanish).
// The optimal value satisfies Z = exp(v(w*)) = g_0(x*).

namespace posygp {

struct DualProgram {
    std::vector<int> blockSizes;     // T_0 .. T_m (block 0 = objective)
    Eigen::VectorXd dualCoef;        // N entries: c_0t then d_it, all > 0
    Eigen::MatrixXd exponentMatrix;  // N x n, row = flattened (i, t)
    Eigen::MatrixXd equalityMatrix;  // (1 + n) x N: normality row then orthogonality rows
    Eigen::VectorXd equalityRhs;     // (1, 0, ..., 0)

    Eigen::Index total_terms() const { return dualCoef.size(); }
    Eigen::Index variable_count() const { return exponentMatrix.cols(); }
    int block_count() const { return static_cast<int>(blockSizes.size()); }

    int block_start(int block) const {
        return std::accumulate(blockSizes.begin(), blockSizes.begin() + block, 0);
    }

    int block_of(Eigen::Index flat) const {
        int start = 0;
        for (std::size_t i = 0; i < blockSizes.size(); ++i) {
            start += blockSizes[i];
            if (flat < start) return static_cast<int>(i);
        }
        throw std::out_of_range("flat term index out of range");
    }

    // lambda_i = sum of the weights in constraint block i, for i = 1..m.
    Eigen::VectorXd block_sums(const Eigen::VectorXd& w) const {
        Eigen::VectorXd lambda(block_count() - 1);
        for (int i = 1; i < block_count(); ++i)
            lambda[i - 1] = w.segment(block_start(i), blockSizes[static_cast<std::size_t>(i)]).sum();
        return lambda;
    }
};

inline DualProgram build_dual(const StandardGp& g) {
    DualProgram dp;
    dp.blockSizes.push_back(static_cast<int>(g.objective.term_count()));
    for (const auto& c : g.constraints) dp.blockSizes.push_back(static_cast<int>(c.term_count()));

    const Eigen::Index n = g.variable_count();
    const Eigen::Index total = std::accumulate(dp.blockSizes.begin(), dp.blockSizes.end(), Eigen::Index{0});
    dp.dualCoef.resize(total);
    dp.exponentMatrix.resize(total, n);

    Eigen::Index row = 0;
    auto append = [&](const ConcretePosynomial& posy) {
        for (Eigen::Index t = 0; t < posy.term_count(); ++t, ++row) {
            dp.dualCoef[row] = posy.coefficients[t];
            dp.exponentMatrix.row(row) = posy.exponents.row(t);
        }
    };
    append(g.objective);
    for (const auto& c : g.constraints) append(c);

    dp.equalityMatrix = Eigen::MatrixXd::Zero(1 + n, total);
    dp.equalityMatrix.block(0, 0, 1, dp.blockSizes[0]).setOnes();
    dp.equalityMatrix.bottomRows(n) = dp.exponentMatrix.transpose();
    dp.equalityRhs = Eigen::VectorXd::Zero(1 + n);
    dp.equalityRhs[0] = 1.0;
    return dp;
}

namespace detail {

// w * ln(c / w) with the limit value 0 at w = 0.
inline double entropy_term(double w, double c) {
    return w > 0.0 ? w * (std::log(c) - std::log(w)) : 0.0;
}

}  // namespace detail

// v(w) for any w >= 0; feasibility with respect to the equality rows is not
// required.
inline double dual_log_objective(const DualProgram& dp, const Eigen::VectorXd& w) {
    if (w.size() != dp.total_terms()) throw std::invalid_argument("weight vector size mismatch");
    for (Eigen::Index k = 0; k < w.size(); ++k)
        if (w[k] < 0.0) throw std::domain_error("dual weights must be nonnegative");

    double value = 0.0;
    for (int t = 0; t < dp.blockSizes[0]; ++t) value += detail::entropy_term(w[t], dp.dualCoef[t]);
    for (int i = 1; i < dp.block_count(); ++i) {
        const int start = dp.block_start(i);
        double lambda = 0.0;
        for (int t = 0; t < dp.blockSizes[static_cast<std::size_t>(i)]; ++t) {
            value += detail::entropy_term(w[start + t], dp.dualCoef[start + t]);
            lambda += w[start + t];
        }
        if (lambda > 0.0) value += lambda * std::log(lambda);
    }
    return value;
}

// dv/dw_0t = ln c_0t - ln w_0t - 1
// dv/dw_it = ln d_it + ln(lambda_i / w_it)   for i >= 1
inline Eigen::VectorXd dual_gradient(const DualProgram& dp, const Eigen::VectorXd& w) {
    if (w.size() != dp.total_terms()) throw std::invalid_argument("weight vector size mismatch");
    for (Eigen::Index k = 0; k < w.size(); ++k)
        if (!(w[k] > 0.0)) throw std::domain_error("dual gradient requires strictly positive weights");

    Eigen::VectorXd grad(w.size());
    for (int t = 0; t < dp.blockSizes[0]; ++t) grad[t] = std::log(dp.dualCoef[t]) - std::log(w[t]) - 1.0;
    for (int i = 1; i < dp.block_count(); ++i) {
        const int start = dp.block_start(i);
        const int size = dp.blockSizes[static_cast<std::size_t>(i)];
        const double lambda = w.segment(start, size).sum();
        for (int t = 0; t < size; ++t)
            grad[start + t] = std::log(dp.dualCoef[start + t]) + std::log(lambda) - std::log(w[start + t]);
    }
    return grad;
}

// Hessian of v at strictly positive w: -diag(1/w) plus, inside each
// constraint block, the rank-one correction (1/lambda_i) * ones.
inline Eigen::MatrixXd dual_hessian(const DualProgram& dp, const Eigen::VectorXd& w) {
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(w.size(), w.size());
    hess.diagonal() = -w.cwiseInverse();
    for (int i = 1; i < dp.block_count(); ++i) {
        const int start = dp.block_start(i);
        const int size = dp.blockSizes[static_cast<std::size_t>(i)];
        const double lambda = w.segment(start, size).sum();
        hess.block(start, start, size, size).array() += 1.0 / lambda;
    }
    return hess;
}

// N - (n + 1): the dimension surplus of the dual variables over the linear
// conditions. Zero means the equality system alone pins w down.
inline int degrees_of_difficulty(const StandardGp& g) {
    Eigen::Index total = g.objective.term_count();
    for (const auto& c : g.constraints) total += c.term_count();
    return static_cast<int>(total - (g.variable_count() + 1));
}

}  // namespace posygp
