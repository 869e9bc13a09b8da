#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "infgen/formula.hpp"
#include "infgen/structure.hpp"

namespace infgen {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline int resolve_term(const Term& t, const Structure& s, const Signature& sig,
                        const std::map<std::string, int>& env) {
    switch (t.kind) {
        case TermKind::Var: {
            auto it = env.find(t.name);
            if (it == env.end())
                throw EvalError("free variable '" + t.name + "' not covered by assignment");
            return it->second;
        }
        case TermKind::Const: {
            int c = sig.constant_index(t.name);
            if (c < 0) throw EvalError("undeclared constant '" + t.name + "'");
            return s.constant_assignment[static_cast<size_t>(c)];
        }
        case TermKind::Param: {
            int e = s.element_index(t.name);
            if (e < 0)
                throw EvalError("parameter '#" + t.name + "' names no element of '" +
                                s.id + "'");
            return e;
        }
    }
    return -1;
}

inline bool sat_rec(const Structure& s, const Signature& sig, const Formula& f,
                    std::map<std::string, int>& env) {
    switch (f.kind) {
        case FormulaKind::Atom: {
            std::vector<int> tuple;
            tuple.reserve(f.terms.size());
            for (const auto& t : f.terms) tuple.push_back(resolve_term(t, s, sig, env));
            return s.has_tuple(f.rel, tuple);
        }
        case FormulaKind::Equal:
            return resolve_term(f.terms[0], s, sig, env) ==
                   resolve_term(f.terms[1], s, sig, env);
        case FormulaKind::Not:
            return !sat_rec(s, sig, *f.left, env);
        case FormulaKind::And:
            return sat_rec(s, sig, *f.left, env) && sat_rec(s, sig, *f.right, env);
        case FormulaKind::Or:
            return sat_rec(s, sig, *f.left, env) || sat_rec(s, sig, *f.right, env);
        case FormulaKind::Exists: {
            auto saved = env.find(f.bound);
            int old = saved == env.end() ? -1 : saved->second;
            for (int e = 0; e < s.size(); ++e) {
                env[f.bound] = e;
                if (sat_rec(s, sig, *f.left, env)) {
                    if (old >= 0) env[f.bound] = old; else env.erase(f.bound);
                    return true;
                }
            }
            if (old >= 0) env[f.bound] = old; else env.erase(f.bound);
            return false;
        }
    }
    return false;
}

} // namespace detail

// Tarski satisfaction, total on finite structures. `assignment` maps free
// variable names to element names; parameters must name elements of s.
inline bool satisfies(const Structure& s, const Signature& sig, const Formula& f,
                      const std::map<std::string, std::string>& assignment = {}) {
    std::map<std::string, int> env;
    for (const auto& [v, elem] : assignment) {
        int e = s.element_index(elem);
        if (e < 0)
            throw EvalError("assignment maps '" + v + "' to '" + elem +
                            "', not an element of '" + s.id + "'");
        env[v] = e;
    }
    return detail::sat_rec(s, sig, f, env);
}

} // namespace infgen
