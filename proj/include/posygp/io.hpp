#pragma once

#include "posygp/model.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

// Problem-file parsing and serialization. The on-disk form is a single JSON
// document; every numeric parameter slot is either a scalar or a 3-array
// [low, mid, high]:
//
//   { "name": "example1",
//     "variables": ["t1", "t2", "t3"],
//     "objective": { "terms": [
//       { "coef": [10, 20, 30], "exponents": { "t1": [-3, -2, -1], "t3": -1 } },
//       { "coef": 40, "exponents": { "t1": 1, "t2": 1 } } ] },
//     "constraints": [ { "terms": [ ... ], "rhs": 1 } ] }
//
// Scalars promote to degenerate triplets. Unknown keys are rejected.

namespace posygp {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
    ParseError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what) {}
};

struct ProblemDocument {
    std::string name;
    MultiGpProblem problem;
    std::vector<std::string> warnings;  // validation warnings, surfaced in reports

    bool operator==(const ProblemDocument& o) const { return name == o.name && problem == o.problem; }
};

namespace detail {

using json = nlohmann::ordered_json;

inline void reject_unknown_keys(const json& node, std::initializer_list<const char*> allowed,
                                const std::string& path) {
    for (const auto& [key, value] : node.items()) {
        bool known = false;
        for (const char* name : allowed)
            if (key == name) { known = true; break; }
        if (!known) throw ParseError(path, "unknown key '" + key + "'");
    }
}

// `ordered` enforces low <= mid <= high; exponent slots pass ordered = false
// because their components are positional scenario slots.
inline Triplet parse_numeric(const json& node, const std::string& path, bool ordered) {
    if (node.is_number()) return Triplet(node.get<double>());
    if (node.is_array()) {
        if (node.size() != 3) throw ParseError(path, "triplet must have exactly 3 entries");
        for (const auto& entry : node)
            if (!entry.is_number()) throw ParseError(path, "triplet entries must be numbers");
        Triplet t(node[0].get<double>(), node[1].get<double>(), node[2].get<double>());
        if (ordered && !t.ordered()) throw ParseError(path, "triplet order violated (want low <= mid <= high)");
        return t;
    }
    throw ParseError(path, "expected a number or a 3-array [low, mid, high]");
}

inline Term parse_term(const json& node, const std::string& path) {
    if (!node.is_object()) throw ParseError(path, "term must be an object");
    reject_unknown_keys(node, {"coef", "exponents"}, path);
    if (!node.contains("coef")) throw ParseError(path, "term is missing 'coef'");
    Term term;
    term.coefficient = parse_numeric(node["coef"], path + ".coef", /*ordered=*/true);
    if (node.contains("exponents")) {
        if (!node["exponents"].is_object()) throw ParseError(path + ".exponents", "must be an object");
        for (const auto& [variable, value] : node["exponents"].items()) {
            const Triplet exponent =
                parse_numeric(value, path + ".exponents." + variable, /*ordered=*/false);
            if (!exponent.degenerate() || exponent.low != 0.0) term.exponents[variable] = exponent;
        }
    }
    return term;
}

inline Posynomial parse_posynomial(const json& node, const std::string& path, bool allowRhs = false) {
    if (!node.is_object()) throw ParseError(path, "must be an object with a 'terms' array");
    if (allowRhs)
        reject_unknown_keys(node, {"terms", "rhs"}, path);
    else
        reject_unknown_keys(node, {"terms"}, path);
    if (!node.contains("terms") || !node["terms"].is_array() || node["terms"].empty())
        throw ParseError(path, "needs a non-empty 'terms' array");
    Posynomial posy;
    for (std::size_t t = 0; t < node["terms"].size(); ++t)
        posy.terms.push_back(parse_term(node["terms"][t], path + ".terms[" + std::to_string(t) + "]"));
    return posy;
}

inline json numeric_json(const Triplet& t) {
    if (t.degenerate()) return json(t.low);
    return json::array({t.low, t.mid, t.high});
}

inline json term_json(const Term& term) {
    json node;
    node["coef"] = numeric_json(term.coefficient);
    if (!term.exponents.empty()) {
        json exps = json::object();
        for (const auto& [variable, exponent] : term.exponents) exps[variable] = numeric_json(exponent);
        node["exponents"] = std::move(exps);
    }
    return node;
}

inline json posynomial_json(const Posynomial& posy) {
    json terms = json::array();
    for (const auto& term : posy.terms) terms.push_back(term_json(term));
    return json{{"terms", std::move(terms)}};
}

}  // namespace detail

inline nlohmann::ordered_json document_json(const ProblemDocument& doc) {
    detail::json node;
    node["name"] = doc.name;
    node["variables"] = doc.problem.variables;
    node["objective"] = detail::posynomial_json(doc.problem.objective);
    detail::json constraints = detail::json::array();
    for (const auto& c : doc.problem.constraints) {
        detail::json entry = detail::posynomial_json(c.body);
        entry["rhs"] = detail::numeric_json(c.rhs);
        constraints.push_back(std::move(entry));
    }
    node["constraints"] = std::move(constraints);
    return node;
}

inline std::string serialize_problem(const ProblemDocument& doc) { return document_json(doc).dump(2) + "\n"; }

// Parses and validates; validation errors become ParseError, warnings ride
// along on the returned document.
inline ProblemDocument parse_problem(const std::string& text) {
    detail::json root;
    try {
        root = detail::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("problem document must be a JSON object");
    detail::reject_unknown_keys(root, {"name", "variables", "objective", "constraints"}, "document");

    ProblemDocument doc;
    if (root.contains("name")) {
        if (!root["name"].is_string()) throw ParseError("name", "must be a string");
        doc.name = root["name"].get<std::string>();
    }
    if (!root.contains("variables") || !root["variables"].is_array())
        throw ParseError("variables", "needs an array of variable names");
    for (const auto& v : root["variables"]) {
        if (!v.is_string()) throw ParseError("variables", "entries must be strings");
        doc.problem.variables.push_back(v.get<std::string>());
    }
    if (!root.contains("objective")) throw ParseError("objective", "missing");
    doc.problem.objective = detail::parse_posynomial(root["objective"], "objective");
    if (root.contains("constraints")) {
        if (!root["constraints"].is_array()) throw ParseError("constraints", "must be an array");
        for (std::size_t i = 0; i < root["constraints"].size(); ++i) {
            const auto& node = root["constraints"][i];
            const std::string path = "constraints[" + std::to_string(i) + "]";
            if (!node.is_object()) throw ParseError(path, "must be an object");
            ConstraintSpec constraint;
            constraint.body = detail::parse_posynomial(node, path, /*allowRhs=*/true);
            if (node.contains("rhs")) constraint.rhs = detail::parse_numeric(node["rhs"], path + ".rhs", true);
            doc.problem.constraints.push_back(std::move(constraint));
        }
    }

    const ValidationReport report = validate_problem(doc.problem);
    if (!report.valid()) {
        std::string message = "problem fails validation:";
        for (const auto& error : report.errors) message += "\n  - " + error;
        throw ParseError(message);
    }
    doc.warnings = report.warnings;
    return doc;
}

}  // namespace posygp
