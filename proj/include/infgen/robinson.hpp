#pragma once

#include <map>
#include <string>
#include <vector>

#include "infgen/forcing.hpp"
#include "infgen/parse.hpp"

namespace infgen {

// ---- verdicts with derivation traces ----------------------------------------

namespace detail {

inline std::string edge_label(const ExtensionSystem& sys, int ei) {
    const Edge& e = sys.edges[static_cast<size_t>(ei)];
    const Structure& a = sys.nodes[static_cast<size_t>(e.from)];
    const Structure& b = sys.nodes[static_cast<size_t>(e.to)];
    std::string s = "-> " + b.id + " {";
    for (size_t i = 0; i < e.map.size(); ++i) {
        if (i) s += ",";
        s += a.universe[i] + ":" + b.universe[static_cast<size_t>(e.map[i])];
    }
    return s + "}";
}

// traced twin of ForcingContext::forces; verdicts agree because the memoised
// engine is deterministic and the trace recursion recomputes the same clauses
inline TraceNode traced_force(ForcingContext& ctx, int node, const CNode* n) {
    TraceNode t;
    t.node = ctx.sys.nodes[static_cast<size_t>(node)].id;
    t.sentence = ctx.render_at(n, node);
    switch (n->kind) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
            t.clause = "atomic";
            t.forced = ctx.forces(node, n);
            break;
        case FormulaKind::And: {
            t.clause = "and";
            TraceNode l = traced_force(ctx, node, n->left);
            bool lf = l.forced;
            t.children.emplace_back("left", std::move(l));
            if (!lf) {
                t.forced = false;
                break;
            }
            TraceNode r = traced_force(ctx, node, n->right);
            t.forced = r.forced;
            t.children.emplace_back("right", std::move(r));
            break;
        }
        case FormulaKind::Or: {
            t.clause = "or";
            TraceNode l = traced_force(ctx, node, n->left);
            bool lf = l.forced;
            t.children.emplace_back("left", std::move(l));
            if (lf) {
                t.forced = true;
                break;
            }
            TraceNode r = traced_force(ctx, node, n->right);
            t.forced = r.forced;
            t.children.emplace_back("right", std::move(r));
            break;
        }
        case FormulaKind::Exists: {
            t.clause = "exists";
            t.forced = false;
            const Structure& s = ctx.sys.nodes[static_cast<size_t>(node)];
            for (int e = 0; e < s.size() && !t.forced; ++e) {
                TraceNode w = traced_force(ctx, node, ctx.instantiate(n->left, e));
                t.forced = w.forced;
                t.children.emplace_back("witness " + s.universe[static_cast<size_t>(e)],
                                        std::move(w));
            }
            break;
        }
        case FormulaKind::Not: {
            t.clause = "not";
            t.forced = true;
            for (int ei : ctx.sys.out_edges(node)) {
                const Edge& e = ctx.sys.edges[static_cast<size_t>(ei)];
                TraceNode w = traced_force(ctx, e.to, ctx.transport(n->left, ei));
                bool wf = w.forced;
                t.children.emplace_back(edge_label(ctx.sys, ei), std::move(w));
                if (wf) {
                    t.forced = false; // witnessing extension forces the body
                    break;
                }
            }
            break;
        }
    }
    return t;
}

} // namespace detail

// Replays a trace bottom-up: atoms are re-evaluated classically against the
// system, composite clauses are recomputed from the recorded children. The
// result must reproduce the recorded verdict.
inline bool replay_trace(const ExtensionSystem& sys, const TraceNode& t);

namespace detail {

inline bool replay_children_conj(const ExtensionSystem& sys, const TraceNode& t) {
    // early-exit recording: a failing child ends the list
    for (const auto& [lbl, c] : t.children)
        if (!replay_trace(sys, c)) return false;
    return t.children.size() == 2;
}

inline bool replay_children_disj(const ExtensionSystem& sys, const TraceNode& t) {
    for (const auto& [lbl, c] : t.children)
        if (replay_trace(sys, c)) return true;
    return false;
}

} // namespace detail

inline bool replay_trace(const ExtensionSystem& sys, const TraceNode& t) {
    if (t.clause == "atomic") {
        int node = sys.node_index(t.node);
        if (node < 0) throw ForcingError("trace names unknown node '" + t.node + "'");
        FormulaPtr phi = parse_formula(t.sentence, sys.sig);
        return satisfies(sys.nodes[static_cast<size_t>(node)], sys.sig, *phi);
    }
    if (t.clause == "and") return detail::replay_children_conj(sys, t);
    if (t.clause == "or" || t.clause == "exists") return detail::replay_children_disj(sys, t);
    if (t.clause == "not") {
        for (const auto& [lbl, c] : t.children)
            if (replay_trace(sys, c)) return false;
        return true;
    }
    throw ForcingError("trace has unknown clause '" + t.clause + "'");
}

// Robinson infinite forcing of a sentence at a node of the system.
inline ForcingVerdict forces(ForcingContext& ctx, const std::string& node_id,
                             const Formula& phi, bool with_trace = false) {
    int node = ctx.sys.node_index(node_id);
    if (node < 0) throw ForcingError("unknown node '" + node_id + "'");
    if (!is_sentence(phi)) throw ForcingError("forcing requires a sentence (no free variables)");
    const CNode* n = ctx.to_canon(phi, node);
    ForcingVerdict v;
    v.node = node_id;
    v.sentence = render(phi, ctx.sys.sig);
    v.forced = ctx.forces(node, n);
    if (with_trace) v.trace = detail::traced_force(ctx, node, n);
    return v;
}

// ---- genericity ----------------------------------------------------------------

inline GenericityReport is_generic(ForcingContext& ctx, int node, int budget,
                                   size_t list_limit = 32) {
    GenericityReport rep;
    rep.node = ctx.sys.nodes[static_cast<size_t>(node)].id;
    rep.budget = budget;
    for (const CNode* phi : ctx.node_pool(node, budget)) {
        if (ctx.decided(node, phi)) continue;
        ++rep.undecided_count;
        if (rep.undecided.size() < list_limit) rep.undecided.push_back(ctx.render_at(phi, node));
    }
    rep.generic = rep.undecided_count == 0;
    return rep;
}

inline GenericityReport is_generic(ForcingContext& ctx, const std::string& node_id,
                                   int budget, size_t list_limit = 32) {
    int node = ctx.sys.node_index(node_id);
    if (node < 0) throw ForcingError("unknown node '" + node_id + "'");
    return is_generic(ctx, node, budget, list_limit);
}

// ---- generic construction --------------------------------------------------------

// Walks from `start` to a budget-generic node: repeatedly takes the first
// undecided sentence in canonical order and moves along the canonically first
// edge whose target forces it. Decided sentences persist along edges, so on
// directed systems the walk terminates.
inline GenericPath build_generic(ForcingContext& ctx, const std::string& start_id,
                                 int budget, size_t sweep_cap = 10000) {
    int node = ctx.sys.node_index(start_id);
    if (node < 0) throw ForcingError("unknown node '" + start_id + "'");
    GenericPath path;
    path.start = start_id;
    while (true) {
        const CNode* undecided = nullptr;
        for (const CNode* phi : ctx.node_pool(node, budget)) {
            if (!ctx.decided(node, phi)) {
                undecided = phi;
                break;
            }
        }
        if (!undecided) break;
        if (path.steps.size() >= sweep_cap)
            throw ResourceExhausted("build_generic: sweep limit (" +
                                    std::to_string(sweep_cap) + " moves) exceeded");
        bool moved = false;
        for (int ei : ctx.sys.out_edges(node)) {
            const Edge& e = ctx.sys.edges[static_cast<size_t>(ei)];
            const CNode* moved_phi = ctx.transport(undecided, ei);
            if (ctx.forces(e.to, moved_phi)) {
                path.steps.push_back({ei, ctx.render_at(undecided, node)});
                node = e.to;
                moved = true;
                break;
            }
        }
        if (!moved)
            throw InternalConsistencyError(
                "build_generic: sentence undecided but no extension forces it — "
                "clause-5 semantics violated");
    }
    path.final_node = ctx.sys.nodes[static_cast<size_t>(node)].id;
    return path;
}

// ---- transfer theorems --------------------------------------------------------------

// Truth transfer between path-connected nodes at a size budget. `elementary`
// demands agreement both ways; `sigma1`/`pi2` demand downward reflection of
// the respective class. Checked along every edge lower -> upper.
inline TransferReport check_transfer(ForcingContext& ctx, TransferKind kind,
                                     const std::string& lower_id,
                                     const std::string& upper_id, int budget) {
    int lower = ctx.sys.node_index(lower_id);
    int upper = ctx.sys.node_index(upper_id);
    if (lower < 0 || upper < 0)
        throw ForcingError("unknown node '" + (lower < 0 ? lower_id : upper_id) + "'");
    std::vector<int> connecting;
    for (int ei : ctx.sys.out_edges(lower))
        if (ctx.sys.edges[static_cast<size_t>(ei)].to == upper) connecting.push_back(ei);
    if (connecting.empty())
        throw ForcingError("no extension path " + lower_id + " -> " + upper_id);

    TransferReport rep;
    for (const CNode* phi : ctx.node_pool(lower, budget)) {
        if (kind == TransferKind::Sigma1 && ctx.cclass(phi) != QuantifierClass::Sigma1) continue;
        if (kind == TransferKind::Pi2 && ctx.cclass(phi) != QuantifierClass::Pi2) continue;
        for (int ei : connecting) {
            bool low = ctx.sat(lower, phi);
            bool up = ctx.sat(upper, ctx.transport(phi, ei));
            bool bad = kind == TransferKind::Elementary ? (low != up) : (up && !low);
            if (bad) {
                rep.ok = false;
                rep.counterexamples.emplace_back(ctx.render_at(phi, lower), ei,
                                                 low ? lower_id : upper_id);
            }
        }
    }
    return rep;
}

// Persistence of a parameter-free sentence across the whole system: wherever
// it is satisfied, it stays satisfied along every outgoing edge.
inline PersistenceReport is_persistent(ForcingContext& ctx, const Formula& phi) {
    if (!parameters_of(phi).empty())
        throw ForcingError("is_persistent: sentence must be parameter-free");
    if (!is_sentence(phi)) throw ForcingError("is_persistent: formula has free variables");
    PersistenceReport rep;
    for (size_t n = 0; n < ctx.sys.nodes.size(); ++n) {
        const CNode* c = ctx.to_canon(phi, static_cast<int>(n));
        if (!ctx.sat(static_cast<int>(n), c)) continue;
        for (int ei : ctx.sys.out_edges(static_cast<int>(n))) {
            const Edge& e = ctx.sys.edges[static_cast<size_t>(ei)];
            if (!ctx.sat(e.to, c)) { // parameter-free: transport is the identity
                rep.persistent = false;
                rep.counter_node = ctx.sys.nodes[static_cast<size_t>(n)].id;
                rep.counter_edge = ei;
                return rep;
            }
        }
    }
    return rep;
}

// ---- naive reference evaluator ------------------------------------------------------
//
// The same five clauses evaluated by plain structural recursion over the
// surface AST, with an environment and a parameter map composed along edges.
// No interning, no memo — exponential, but an independent route for the
// oracle suite.

namespace detail {

struct NaiveEnv {
    std::map<std::string, int> vars;       // variable name -> element index
    std::map<std::string, int> params;     // parameter name -> element index

    NaiveEnv through(const std::vector<int>& map) const {
        NaiveEnv out;
        for (const auto& [k, v] : vars) out.vars[k] = map[static_cast<size_t>(v)];
        for (const auto& [k, v] : params) out.params[k] = map[static_cast<size_t>(v)];
        return out;
    }
};

inline int naive_term(const Term& t, const ExtensionSystem& sys, int node,
                      const NaiveEnv& env) {
    switch (t.kind) {
        case TermKind::Var: return env.vars.at(t.name);
        case TermKind::Const:
            return sys.nodes[static_cast<size_t>(node)]
                .constant_assignment[static_cast<size_t>(sys.sig.constant_index(t.name))];
        case TermKind::Param: return env.params.at(t.name);
    }
    return -1;
}

inline bool naive_rec(const ExtensionSystem& sys, int node, const Formula& f,
                      const NaiveEnv& env) {
    const Structure& s = sys.nodes[static_cast<size_t>(node)];
    switch (f.kind) {
        case FormulaKind::Atom: {
            std::vector<int> tuple;
            for (const auto& t : f.terms) tuple.push_back(naive_term(t, sys, node, env));
            return s.has_tuple(f.rel, tuple);
        }
        case FormulaKind::Equal:
            return naive_term(f.terms[0], sys, node, env) ==
                   naive_term(f.terms[1], sys, node, env);
        case FormulaKind::And:
            return naive_rec(sys, node, *f.left, env) && naive_rec(sys, node, *f.right, env);
        case FormulaKind::Or:
            return naive_rec(sys, node, *f.left, env) || naive_rec(sys, node, *f.right, env);
        case FormulaKind::Exists: {
            NaiveEnv e2 = env;
            for (int e = 0; e < s.size(); ++e) {
                e2.vars[f.bound] = e;
                if (naive_rec(sys, node, *f.left, e2)) return true;
            }
            return false;
        }
        case FormulaKind::Not: {
            for (int ei : sys.out_edges(node)) {
                const Edge& edge = sys.edges[static_cast<size_t>(ei)];
                if (naive_rec(sys, edge.to, *f.left, env.through(edge.map))) return false;
            }
            return true;
        }
    }
    return false;
}

} // namespace detail

inline bool naive_forces(const ExtensionSystem& sys, int node, const Formula& phi) {
    detail::NaiveEnv env;
    const Structure& s = sys.nodes[static_cast<size_t>(node)];
    for (const auto& p : parameters_of(phi)) {
        int e = s.element_index(p);
        if (e < 0) throw ForcingError("parameter '#" + p + "' names no element of '" + s.id + "'");
        env.params[p] = e;
    }
    return detail::naive_rec(sys, node, phi, env);
}

} // namespace infgen
