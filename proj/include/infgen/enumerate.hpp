#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "infgen/formula.hpp"
#include "infgen/signature.hpp"

namespace infgen {

namespace detail {

// Canonical order of sentences: by AST size, then lexicographically on the
// preorder traversal. Node codes follow declaration order: Atom(rel 0) <
// Atom(rel 1) < ... < Equal < Not < And < Or < Exists. Term codes: bound
// variables by binder depth (x0 < x1 < ...), then constants in declaration
// order, then parameters in the order supplied to the enumerator.
struct CanonicalCode {
    const Signature* sig;
    const std::vector<std::string>* params;

    std::vector<int> operator()(const Formula& f) const {
        std::vector<int> out;
        std::vector<std::string> binders;
        walk(f, binders, out);
        return out;
    }

private:
    int term_code(const Term& t, const std::vector<std::string>& binders) const {
        switch (t.kind) {
            case TermKind::Var:
                for (size_t i = 0; i < binders.size(); ++i)
                    if (binders[i] == t.name) return static_cast<int>(i);
                return 5000; // free variable; enumerated sentences never hit this
            case TermKind::Const:
                return 6000 + sig->constant_index(t.name);
            case TermKind::Param:
                for (size_t i = 0; i < params->size(); ++i)
                    if ((*params)[i] == t.name) return 7000 + static_cast<int>(i);
                return 8000;
        }
        return 9000;
    }

    void walk(const Formula& f, std::vector<std::string>& binders,
              std::vector<int>& out) const {
        const int R = static_cast<int>(sig->relations.size());
        switch (f.kind) {
            case FormulaKind::Atom:
                out.push_back(f.rel);
                for (const auto& t : f.terms) out.push_back(term_code(t, binders));
                break;
            case FormulaKind::Equal:
                out.push_back(R);
                for (const auto& t : f.terms) out.push_back(term_code(t, binders));
                break;
            case FormulaKind::Not:
                out.push_back(R + 1);
                walk(*f.left, binders, out);
                break;
            case FormulaKind::And:
                out.push_back(R + 2);
                walk(*f.left, binders, out);
                walk(*f.right, binders, out);
                break;
            case FormulaKind::Or:
                out.push_back(R + 3);
                walk(*f.left, binders, out);
                walk(*f.right, binders, out);
                break;
            case FormulaKind::Exists:
                out.push_back(R + 4);
                binders.push_back(f.bound);
                walk(*f.left, binders, out);
                binders.pop_back();
                break;
        }
    }
};

// Exhaustive generator of formulas of exact size `s` with `depth` bound
// variables in scope (named x0..x{depth-1} outermost-first). Memoized per
// (size, depth); subtrees are shared.
class SentenceGenerator {
public:
    SentenceGenerator(const Signature& sig, const std::vector<std::string>& params)
        : sig_(sig), params_(params) {}

    const std::vector<FormulaPtr>& exact(int size, int depth) {
        auto key = std::make_pair(size, depth);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<FormulaPtr> out;
        if (size >= 1) {
            gen_atoms(size, depth, out);
            gen_composites(size, depth, out);
        }
        return memo_.emplace(key, std::move(out)).first->second;
    }

private:
    void terms_in_scope(int depth, std::vector<Term>& out) const {
        for (int i = 0; i < depth; ++i) out.push_back(var("x" + std::to_string(i)));
        for (const auto& c : sig_.constants) out.push_back(cnst(c));
        for (const auto& p : params_) out.push_back(param(p));
    }

    void gen_atoms(int size, int depth, std::vector<FormulaPtr>& out) const {
        std::vector<Term> ts;
        terms_in_scope(depth, ts);
        if (ts.empty()) return;
        for (size_t r = 0; r < sig_.relations.size(); ++r) {
            const int arity = sig_.relations[r].arity;
            if (size != 1 + arity) continue;
            std::vector<size_t> idx(static_cast<size_t>(arity), 0);
            while (true) {
                std::vector<Term> tuple;
                for (size_t i : idx) tuple.push_back(ts[i]);
                out.push_back(mk_atom(static_cast<int>(r), std::move(tuple)));
                int k = arity - 1;
                while (k >= 0 && ++idx[static_cast<size_t>(k)] == ts.size())
                    idx[static_cast<size_t>(k--)] = 0;
                if (k < 0) break;
            }
        }
        if (size == 3) {
            for (const auto& a : ts)
                for (const auto& b : ts) out.push_back(mk_equal(a, b));
        }
    }

    void gen_composites(int size, int depth, std::vector<FormulaPtr>& out) {
        if (size < 2) return;
        for (const auto& f : exact(size - 1, depth)) out.push_back(mk_not(f));
        for (const auto& f : exact(size - 1, depth + 1))
            out.push_back(mk_exists("x" + std::to_string(depth), f));
        for (int a = 1; a <= size - 2; ++a) {
            const auto& ls = exact(a, depth);
            const auto& rs = exact(size - 1 - a, depth);
            for (const auto& l : ls)
                for (const auto& r : rs) {
                    out.push_back(mk_and(l, r));
                    out.push_back(mk_or(l, r));
                }
        }
    }

    const Signature& sig_;
    const std::vector<std::string>& params_;
    std::map<std::pair<int, int>, std::vector<FormulaPtr>> memo_;
};

} // namespace detail

// All sentences over `sig` with parameters drawn from `params` and AST size
// <= budget, in canonical order; deterministic across runs. budget <= 0
// yields the empty list.
inline std::vector<FormulaPtr> enumerate_sentences(const Signature& sig,
                                                   const std::vector<std::string>& params,
                                                   int budget) {
    std::vector<FormulaPtr> all;
    if (budget <= 0) return all;
    detail::SentenceGenerator gen(sig, params);
    for (int s = 1; s <= budget; ++s) {
        const auto& v = gen.exact(s, 0);
        all.insert(all.end(), v.begin(), v.end());
    }
    detail::CanonicalCode coder{&sig, &params};
    std::vector<std::pair<std::vector<int>, size_t>> keyed;
    keyed.reserve(all.size());
    for (size_t i = 0; i < all.size(); ++i) {
        std::vector<int> code;
        code.push_back(formula_size(*all[i]));
        auto body = coder(*all[i]);
        code.insert(code.end(), body.begin(), body.end());
        keyed.emplace_back(std::move(code), i);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<FormulaPtr> out;
    out.reserve(all.size());
    for (const auto& [code, i] : keyed) out.push_back(all[i]);
    return out;
}

} // namespace infgen
