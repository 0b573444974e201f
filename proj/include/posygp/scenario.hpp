#pragma once

#include "posygp/model.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// Expansion of a MultiGpProblem into concrete scenario programs and
// normalization to standard GP form (every constraint "posynomial <= 1").

namespace posygp {

enum class Scenario { Low, Mid, High };

inline constexpr std::array<Scenario, 3> kAllScenarios{Scenario::Low, Scenario::Mid, Scenario::High};

inline char scenario_label(Scenario s) {
    switch (s) {
        case Scenario::Low: return 'L';
        case Scenario::Mid: return 'M';
        default: return 'U';
    }
}

inline double select(const Triplet& t, Scenario s) {
    switch (s) {
        case Scenario::Low: return t.low;
        case Scenario::Mid: return t.mid;
        default: return t.high;
    }
}

// One concrete scenario normalized so every constraint reads
// "sum_t d_it prod_j x_j^{a_itj} <= 1" with d_it = C_it / b_i.
struct StandardGp {
    std::vector<std::string> variables;
    ConcretePosynomial objective;
    std::vector<ConcretePosynomial> constraints;
    std::string provenance;

    Eigen::Index variable_count() const { return static_cast<Eigen::Index>(variables.size()); }
    std::size_t constraint_count() const { return constraints.size(); }
};

// A non-degenerate triplet location inside a MultiGpProblem. Sites are listed
// in a fixed canonical order (objective terms first, coefficient before
// exponents, exponents in variable-map order; then each constraint's terms
// followed by its rhs) so that combo indices are reproducible.
struct ParameterSite {
    enum class Kind { Coefficient, Exponent, Rhs };
    Kind kind{Kind::Coefficient};
    int constraint{-1};    // -1 = objective
    int term{-1};          // -1 for rhs sites
    std::string variable;  // exponent sites only
    Triplet values;

    std::string describe() const {
        std::string loc = constraint < 0 ? "objective" : "constraint " + std::to_string(constraint + 1);
        switch (kind) {
            case Kind::Coefficient: return loc + " term " + std::to_string(term + 1) + " coefficient";
            case Kind::Exponent:
                return loc + " term " + std::to_string(term + 1) + " exponent of '" + variable + "'";
            default: return loc + " rhs";
        }
    }
};

struct ParameterSpace {
    std::vector<ParameterSite> sites;

    int site_count() const { return static_cast<int>(sites.size()); }
    std::int64_t combinations() const {
        std::int64_t n = 1;
        for (std::size_t k = 0; k < sites.size(); ++k) n *= 3;
        return n;
    }
};

namespace detail {

// Visits every triplet in canonical site order. The chooser sees the triplet
// plus its site metadata and returns the scalar to use.
using TripletChooser = std::function<double(const Triplet&, ParameterSite::Kind, int constraint, int term,
                                            const std::string& variable)>;

inline ConcretePosynomial make_concrete(const Posynomial& g, const std::vector<std::string>& variables,
                                        int constraintIndex, const TripletChooser& choose) {
    const auto n = static_cast<Eigen::Index>(variables.size());
    ConcretePosynomial out;
    out.coefficients.resize(static_cast<Eigen::Index>(g.terms.size()));
    out.exponents = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.terms.size()), n);
    for (std::size_t t = 0; t < g.terms.size(); ++t) {
        const Term& term = g.terms[t];
        out.coefficients[static_cast<Eigen::Index>(t)] =
            choose(term.coefficient, ParameterSite::Kind::Coefficient, constraintIndex, static_cast<int>(t), "");
        for (Eigen::Index j = 0; j < n; ++j) {
            auto it = term.exponents.find(variables[static_cast<std::size_t>(j)]);
            if (it == term.exponents.end()) continue;
            out.exponents(static_cast<Eigen::Index>(t), j) =
                choose(it->second, ParameterSite::Kind::Exponent, constraintIndex, static_cast<int>(t), it->first);
        }
    }
    return out;
}

inline ConcreteGp instantiate_with(const MultiGpProblem& p, const TripletChooser& choose, std::string provenance) {
    ConcreteGp out;
    out.variables = p.variables;
    out.provenance = std::move(provenance);
    out.objective = make_concrete(p.objective, p.variables, -1, choose);
    out.constraints.reserve(p.constraints.size());
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        ConcreteConstraint c;
        c.body = make_concrete(p.constraints[i].body, p.variables, static_cast<int>(i), choose);
        c.rhs = choose(p.constraints[i].rhs, ParameterSite::Kind::Rhs, static_cast<int>(i), -1, "");
        out.constraints.push_back(std::move(c));
    }
    return out;
}

}  // namespace detail

// The L/M/U rule: every triplet contributes the component named by the
// scenario; coefficients, exponents and right-hand sides all use the same
// index, never mixing.
inline ConcreteGp instantiate(const MultiGpProblem& p, Scenario s) {
    auto choose = [s](const Triplet& t, ParameterSite::Kind, int, int, const std::string&) { return select(t, s); };
    return detail::instantiate_with(p, choose, std::string("scenario ") + scenario_label(s));
}

// Lists the non-degenerate triplet sites; the enumeration of all 3^K
// component choices over them is the paper's set S.
inline ParameterSpace parameter_space(const MultiGpProblem& p) {
    ParameterSpace space;
    auto record = [&space](const Triplet& t, ParameterSite::Kind kind, int constraint, int term,
                           const std::string& variable) {
        if (!t.degenerate())
            space.sites.push_back(ParameterSite{kind, constraint, term, variable, t});
        return t.mid;
    };
    detail::instantiate_with(p, record, "");
    return space;
}

// Instantiates one combo of the parameter space: choices[k] picks the
// component of site k (canonical order); degenerate triplets are fixed.
inline ConcreteGp instantiate(const MultiGpProblem& p, const ParameterSpace& space,
                              const std::vector<Scenario>& choices) {
    if (choices.size() != space.sites.size())
        throw std::invalid_argument("combo size does not match parameter space");
    std::size_t next = 0;
    auto choose = [&](const Triplet& t, ParameterSite::Kind, int, int, const std::string&) {
        if (t.degenerate()) return t.mid;
        return select(t, choices[next++]);
    };
    std::string tag = "combo ";
    for (Scenario s : choices) tag += scenario_label(s);
    return detail::instantiate_with(p, choose, std::move(tag));
}

// d_it = C_it / b_i; the objective is untouched and every rhs becomes 1.
inline StandardGp normalize(const ConcreteGp& c) {
    StandardGp out;
    out.variables = c.variables;
    out.objective = c.objective;
    out.provenance = c.provenance;
    out.constraints.reserve(c.constraints.size());
    for (const auto& constraint : c.constraints) {
        ConcretePosynomial body = constraint.body;
        body.coefficients /= constraint.rhs;
        out.constraints.push_back(std::move(body));
    }
    return out;
}

}  // namespace posygp
