#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "infgen/signature.hpp"

namespace infgen {

enum class TermKind { Var, Const, Param };

struct Term {
    TermKind kind = TermKind::Var;
    std::string name;

    bool operator==(const Term& o) const { return kind == o.kind && name == o.name; }
};

inline Term var(std::string n) { return {TermKind::Var, std::move(n)}; }
inline Term cnst(std::string n) { return {TermKind::Const, std::move(n)}; }
inline Term param(std::string n) { return {TermKind::Param, std::move(n)}; }

// Formula kinds after abbreviation expansion. ∀ and → are eliminated by the
// parser (A x.φ ↦ !(E x.!φ), φ->ψ ↦ !φ|ψ, φ<->ψ via ->), so everything
// downstream — satisfaction, the forcing recursion, enumeration — handles
// exactly these six.
enum class FormulaKind { Atom, Equal, Not, And, Or, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FormulaKind kind;
    int rel = -1;               // Atom: index into Signature::relations
    std::vector<Term> terms;    // Atom: arity many; Equal: exactly 2
    std::string bound;          // Exists: bound variable name
    FormulaPtr left, right;     // Not/Exists: left; And/Or: left + right
};

inline FormulaPtr mk_atom(int rel, std::vector<Term> terms) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Atom;
    f->rel = rel;
    f->terms = std::move(terms);
    return f;
}

inline FormulaPtr mk_equal(Term a, Term b) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Equal;
    f->terms = {std::move(a), std::move(b)};
    return f;
}

inline FormulaPtr mk_not(FormulaPtr x) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Not;
    f->left = std::move(x);
    return f;
}

inline FormulaPtr mk_and(FormulaPtr l, FormulaPtr r) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::And;
    f->left = std::move(l);
    f->right = std::move(r);
    return f;
}

inline FormulaPtr mk_or(FormulaPtr l, FormulaPtr r) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Or;
    f->left = std::move(l);
    f->right = std::move(r);
    return f;
}

inline FormulaPtr mk_exists(std::string v, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Exists;
    f->bound = std::move(v);
    f->left = std::move(body);
    return f;
}

// AST size: every node counts, term leaves included. Atom is 1 + arity,
// Equal is 3, Not/Exists add 1, And/Or add 1.
inline int formula_size(const Formula& f) {
    switch (f.kind) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
            return 1 + static_cast<int>(f.terms.size());
        case FormulaKind::Not:
        case FormulaKind::Exists:
            return 1 + formula_size(*f.left);
        case FormulaKind::And:
        case FormulaKind::Or:
            return 1 + formula_size(*f.left) + formula_size(*f.right);
    }
    return 0;
}

inline bool struct_equal(const Formula& a, const Formula& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case FormulaKind::Atom:
            return a.rel == b.rel && a.terms == b.terms;
        case FormulaKind::Equal:
            return a.terms == b.terms;
        case FormulaKind::Not:
            return struct_equal(*a.left, *b.left);
        case FormulaKind::Exists:
            return a.bound == b.bound && struct_equal(*a.left, *b.left);
        case FormulaKind::And:
        case FormulaKind::Or:
            return struct_equal(*a.left, *b.left) && struct_equal(*a.right, *b.right);
    }
    return false;
}

namespace detail {

inline void collect_free_vars(const Formula& f, std::set<std::string>& bound,
                              std::set<std::string>& out) {
    switch (f.kind) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
            for (const auto& t : f.terms)
                if (t.kind == TermKind::Var && !bound.count(t.name)) out.insert(t.name);
            break;
        case FormulaKind::Not:
            collect_free_vars(*f.left, bound, out);
            break;
        case FormulaKind::And:
        case FormulaKind::Or:
            collect_free_vars(*f.left, bound, out);
            collect_free_vars(*f.right, bound, out);
            break;
        case FormulaKind::Exists: {
            bool fresh = bound.insert(f.bound).second;
            collect_free_vars(*f.left, bound, out);
            if (fresh) bound.erase(f.bound);
            break;
        }
    }
}

inline void collect_params(const Formula& f, std::set<std::string>& out) {
    switch (f.kind) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
            for (const auto& t : f.terms)
                if (t.kind == TermKind::Param) out.insert(t.name);
            break;
        case FormulaKind::Not:
        case FormulaKind::Exists:
            collect_params(*f.left, out);
            break;
        case FormulaKind::And:
        case FormulaKind::Or:
            collect_params(*f.left, out);
            collect_params(*f.right, out);
            break;
    }
}

} // namespace detail

inline std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    detail::collect_free_vars(f, bound, out);
    return out;
}

inline std::set<std::string> parameters_of(const Formula& f) {
    std::set<std::string> out;
    detail::collect_params(f, out);
    return out;
}

inline bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

// ---- canonical rendering ------------------------------------------------
//
// render ∘ parse is the identity on canonical text and parse ∘ render is the
// structural identity on every formula. Binary relations print infix, "!"
// always parenthesizes its operand, binary connective operands are
// parenthesized unless they are self-delimiting (atoms, equality, "!").

namespace detail {

inline std::string render_term(const Term& t) {
    if (t.kind == TermKind::Param) return "#" + t.name;
    return t.name;
}

inline std::string render_rec(const Formula& f, const Signature& sig);

inline std::string render_operand(const Formula& f, const Signature& sig) {
    switch (f.kind) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
        case FormulaKind::Not:
            return render_rec(f, sig);
        default:
            return "(" + render_rec(f, sig) + ")";
    }
}

inline std::string render_rec(const Formula& f, const Signature& sig) {
    switch (f.kind) {
        case FormulaKind::Atom: {
            const auto& r = sig.relations.at(static_cast<size_t>(f.rel));
            if (r.arity == 2)
                return render_term(f.terms[0]) + " " + r.name + " " + render_term(f.terms[1]);
            std::string s = r.name + "(";
            for (size_t i = 0; i < f.terms.size(); ++i) {
                if (i) s += ", ";
                s += render_term(f.terms[i]);
            }
            return s + ")";
        }
        case FormulaKind::Equal:
            return render_term(f.terms[0]) + " = " + render_term(f.terms[1]);
        case FormulaKind::Not:
            return "!(" + render_rec(*f.left, sig) + ")";
        case FormulaKind::And:
            return render_operand(*f.left, sig) + " & " + render_operand(*f.right, sig);
        case FormulaKind::Or:
            return render_operand(*f.left, sig) + " | " + render_operand(*f.right, sig);
        case FormulaKind::Exists:
            return "E " + f.bound + ". " + render_rec(*f.left, sig);
    }
    return "";
}

} // namespace detail

inline std::string render(const Formula& f, const Signature& sig) {
    return detail::render_rec(f, sig);
}

} // namespace infgen
