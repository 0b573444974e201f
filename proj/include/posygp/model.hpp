#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Core domain types for posynomial programs whose coefficients, exponents and
// constraint right-hand sides are {low, mid, high} triplets, plus evaluation
// of fully concrete (scalar) posynomials.
//
// A posynomial is sum_t c_t * prod_j x_j^{a_tj} with c_t > 0 and x_j > 0; the
// exponents a_tj are arbitrary reals.

namespace posygp {

// One uncertain value. The three components are positional scenario slots:
// the L/M/U scenario programs pick .low/.mid/.high respectively. Coefficients
// and right-hand sides must satisfy low <= mid <= high; exponent triplets may
// be listed in any order (decreasing exponent triplets appear in practice and
// the scenario labels still refer to the slot, not the magnitude).
struct Triplet {
    double low{0.0};
    double mid{0.0};
    double high{0.0};

    Triplet() = default;
    // Scalar promotion: v behaves exactly like {v, v, v}.
    Triplet(double v) : low(v), mid(v), high(v) {}
    Triplet(double l, double m, double h) : low(l), mid(m), high(h) {}

    // A degenerate triplet carries no uncertainty at all.
    bool degenerate() const { return low == mid && mid == high; }

    bool ordered() const { return low <= mid && mid <= high; }

    // The paper restricts mid to the average of the other two; inputs that
    // break this are legal but worth a warning.
    bool mid_is_average() const {
        return std::abs(mid - 0.5 * (low + high)) <= 1e-9 * std::max(1.0, std::abs(high - low));
    }

    bool operator==(const Triplet& o) const { return low == o.low && mid == o.mid && high == o.high; }
};

// One monomial term. Exponents are keyed by variable name; absent variables
// have exponent 0.
struct Term {
    Triplet coefficient{1.0};
    std::map<std::string, Triplet> exponents;

    bool operator==(const Term& o) const { return coefficient == o.coefficient && exponents == o.exponents; }
};

struct Posynomial {
    std::vector<Term> terms;  // length >= 1, order is meaningful for reporting

    bool operator==(const Posynomial& o) const { return terms == o.terms; }
};

// body <= rhs with rhs > 0 (normalization later divides by rhs).
struct ConstraintSpec {
    Posynomial body;
    Triplet rhs{1.0};

    bool operator==(const ConstraintSpec& o) const { return body == o.body && rhs == o.rhs; }
};

// The triplet-parameterized program: min objective s.t. body_i <= rhs_i.
// `variables` fixes the dense index order used by every concrete form.
struct MultiGpProblem {
    std::vector<std::string> variables;
    Posynomial objective;
    std::vector<ConstraintSpec> constraints;

    bool operator==(const MultiGpProblem& o) const {
        return variables == o.variables && objective == o.objective && constraints == o.constraints;
    }
};

// --- concrete (single scenario) forms -------------------------------------

// Terms of one posynomial with scalar parameters, exponents stored densely:
// row t of `exponents` holds a_t1..a_tn in `variables` order.
struct ConcretePosynomial {
    Eigen::VectorXd coefficients;  // T, all > 0
    Eigen::MatrixXd exponents;     // T x n

    Eigen::Index term_count() const { return coefficients.size(); }
};

struct ConcreteConstraint {
    ConcretePosynomial body;
    double rhs{1.0};
};

struct ConcreteGp {
    std::vector<std::string> variables;
    ConcretePosynomial objective;
    std::vector<ConcreteConstraint> constraints;
    std::string provenance;  // which scenario / combo this came from

    Eigen::Index variable_count() const { return static_cast<Eigen::Index>(variables.size()); }
};

// --- validation ------------------------------------------------------------

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool valid() const { return errors.empty(); }
};

namespace detail {

inline std::string triplet_str(const Triplet& t) {
    if (t.degenerate()) return std::to_string(t.low);
    return "{" + std::to_string(t.low) + ", " + std::to_string(t.mid) + ", " + std::to_string(t.high) + "}";
}

inline void check_positive_triplet(const Triplet& t, const std::string& where, ValidationReport& report) {
    if (t.low <= 0.0 || t.mid <= 0.0 || t.high <= 0.0)
        report.errors.push_back(where + ": " +
                                (where.find("rhs") != std::string::npos ? std::string("rhs must be positive")
                                                                        : std::string("coefficient must be positive")) +
                                ", got " + triplet_str(t));
    if (!t.ordered())
        report.errors.push_back(where + ": triplet order violated (want low <= mid <= high), got " + triplet_str(t));
    else if (!t.mid_is_average())
        report.warnings.push_back(where + ": mid " + std::to_string(t.mid) + " is not the average of low and high");
}

inline void check_term(const Term& term, const std::vector<std::string>& variables, const std::string& where,
                       ValidationReport& report) {
    check_positive_triplet(term.coefficient, where + " coefficient", report);
    for (const auto& [name, exp] : term.exponents) {
        bool known = false;
        for (const auto& v : variables)
            if (v == name) { known = true; break; }
        if (!known) report.errors.push_back(where + ": exponent references unknown variable '" + name + "'");
        // exponent triplets are positional slots; only the midpoint rule applies
        if (!exp.mid_is_average())
            report.warnings.push_back(where + " exponent of '" + name + "': mid " + std::to_string(exp.mid) +
                                      " is not the average of low and high");
    }
}

}  // namespace detail

// Collects every invariant violation instead of failing fast; an empty error
// list means the problem is well formed.
inline ValidationReport validate_problem(const MultiGpProblem& p) {
    ValidationReport report;
    if (p.variables.empty()) report.errors.push_back("problem must have at least one variable");
    for (std::size_t i = 0; i < p.variables.size(); ++i)
        for (std::size_t j = i + 1; j < p.variables.size(); ++j)
            if (p.variables[i] == p.variables[j])
                report.errors.push_back("duplicate variable name '" + p.variables[i] + "'");

    if (p.objective.terms.empty()) report.errors.push_back("objective must have at least one term");
    for (std::size_t t = 0; t < p.objective.terms.size(); ++t)
        detail::check_term(p.objective.terms[t], p.variables, "objective term " + std::to_string(t + 1), report);

    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        const auto& c = p.constraints[i];
        const std::string where = "constraint " + std::to_string(i + 1);
        if (c.body.terms.empty()) report.errors.push_back(where + ": must have at least one term");
        for (std::size_t t = 0; t < c.body.terms.size(); ++t)
            detail::check_term(c.body.terms[t], p.variables, where + " term " + std::to_string(t + 1), report);
        detail::check_positive_triplet(c.rhs, where + " rhs", report);
    }
    return report;
}

// --- evaluation ------------------------------------------------------------

namespace detail {

inline void require_positive(const Eigen::VectorXd& x) {
    for (Eigen::Index j = 0; j < x.size(); ++j)
        if (!(x[j] > 0.0)) throw std::domain_error("posynomial evaluation requires x > 0");
}

}  // namespace detail

// sum_t c_t * prod_j x_j^{a_tj}, computed in log space for scale robustness.
inline double evaluate_posynomial(const ConcretePosynomial& g, const Eigen::VectorXd& x) {
    if (g.exponents.cols() != x.size()) throw std::invalid_argument("variable count mismatch in evaluate_posynomial");
    detail::require_positive(x);
    const Eigen::VectorXd logx = x.array().log().matrix();
    double total = 0.0;
    for (Eigen::Index t = 0; t < g.term_count(); ++t)
        total += std::exp(g.exponents.row(t).dot(logx) + std::log(g.coefficients[t]));
    return total;
}

// residual_i = g_i(x)/b_i - 1; <= 0 means constraint i holds at x.
inline Eigen::VectorXd constraint_residuals(const ConcreteGp& p, const Eigen::VectorXd& x) {
    detail::require_positive(x);
    Eigen::VectorXd res(static_cast<Eigen::Index>(p.constraints.size()));
    for (std::size_t i = 0; i < p.constraints.size(); ++i)
        res[static_cast<Eigen::Index>(i)] = evaluate_posynomial(p.constraints[i].body, x) / p.constraints[i].rhs - 1.0;
    return res;
}

}  // namespace posygp
