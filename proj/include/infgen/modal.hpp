#pragma once

#include <optional>
#include <string>
#include <vector>

#include "infgen/forcing.hpp"
#include "infgen/parse.hpp"
#include "infgen/robinson.hpp"

namespace infgen {

enum class ModalOp { Box, Diamond };

// A first-order sentence under outer modal operators, accessibility being the
// (reflexive) extension-edge relation. Modalities never occur under
// quantifiers — the prefix grammar makes that unrepresentable.
struct ModalFormula {
    std::vector<ModalOp> prefix; // outermost first
    FormulaPtr core;
};

// Concrete syntax: "[]" (Box) and "<>" (Diamond) prefixes before an ordinary
// sentence, e.g.  <>[]E x. E y. x < y
inline ModalFormula parse_modal(const std::string& text, const Signature& sig) {
    ModalFormula m;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (text.compare(i, 2, "[]") == 0) {
            m.prefix.push_back(ModalOp::Box);
            i += 2;
        } else if (text.compare(i, 2, "<>") == 0) {
            m.prefix.push_back(ModalOp::Diamond);
            i += 2;
        } else {
            break;
        }
    }
    m.core = parse_formula(text.substr(i), sig);
    return m;
}

inline std::string render_modal(const ModalFormula& m, const Signature& sig) {
    std::string s;
    for (ModalOp op : m.prefix) s += op == ModalOp::Box ? "[]" : "<>";
    return s + render(*m.core, sig);
}

namespace detail {

inline bool modal_eval_rec(ForcingContext& ctx, int node, const std::vector<ModalOp>& ops,
                           size_t i, const CNode* core) {
    if (i == ops.size()) return ctx.sat(node, core);
    bool need_all = ops[i] == ModalOp::Box;
    for (int ei : ctx.sys.out_edges(node)) {
        const Edge& e = ctx.sys.edges[static_cast<size_t>(ei)];
        bool sub = modal_eval_rec(ctx, e.to, ops, i + 1, ctx.transport(core, ei));
        if (need_all && !sub) return false;
        if (!need_all && sub) return true;
    }
    return need_all;
}

} // namespace detail

// Kripke evaluation over the extension frame: □φ at n means the core holds at
// every edge-successor (the identity edge puts n itself among them), ◇ is the
// dual. Parameters transport along each accessibility edge.
inline bool modal_eval(ForcingContext& ctx, const std::string& node_id,
                       const ModalFormula& m) {
    int node = ctx.sys.node_index(node_id);
    if (node < 0) throw ForcingError("unknown node '" + node_id + "'");
    if (!is_sentence(*m.core))
        throw ForcingError("modal core must be a sentence (no free variables)");
    const CNode* core = ctx.to_canon(*m.core, node);
    return detail::modal_eval_rec(ctx, node, m.prefix, 0, core);
}

enum class Principle { MP, RA };

struct PrincipleReport {
    std::string node;
    Principle principle = Principle::MP;
    int budget = 0;
    bool holds = true;
    bool desk_scale_reading = true; // RA is checked as budget-theory equality
    std::string violating_sentence;
    std::vector<std::string> violating_path;
};

namespace detail {

// witness path for a ◇□φ violation: the successor at which □φ holds
inline std::optional<int> diamond_box_witness(ForcingContext& ctx, int node,
                                              const CNode* phi) {
    for (int ei : ctx.sys.out_edges(node)) {
        const Edge& e = ctx.sys.edges[static_cast<size_t>(ei)];
        const CNode* moved = ctx.transport(phi, ei);
        bool box = true;
        for (int ej : ctx.sys.out_edges(e.to)) {
            const Edge& e2 = ctx.sys.edges[static_cast<size_t>(ej)];
            if (!ctx.sat(e2.to, ctx.transport(moved, ej))) {
                box = false;
                break;
            }
        }
        if (box) return ei;
    }
    return std::nullopt;
}

// parameter-free budget theory of a node, as a truth vector over the pool
inline std::vector<bool> budget_theory(ForcingContext& ctx, int node, int budget) {
    std::vector<bool> th;
    for (const CNode* phi : ctx.pool(0, budget)) th.push_back(ctx.sat(node, phi));
    return th;
}

} // namespace detail

// MP: ◇□φ → φ at the node for every budget sentence with parameters in it.
// RA (desk-scale): for every successor N1 there is a further successor N2
// whose parameter-free budget theory equals the node's.
inline PrincipleReport check_modal_principle(ForcingContext& ctx, const std::string& node_id,
                                             Principle p, int budget) {
    int node = ctx.sys.node_index(node_id);
    if (node < 0) throw ForcingError("unknown node '" + node_id + "'");
    PrincipleReport rep;
    rep.node = node_id;
    rep.principle = p;
    rep.budget = budget;

    if (p == Principle::MP) {
        for (const CNode* phi : ctx.node_pool(node, budget)) {
            if (ctx.sat(node, phi)) continue;
            auto wit = detail::diamond_box_witness(ctx, node, phi);
            if (!wit) continue;
            rep.holds = false;
            rep.violating_sentence = ctx.render_at(phi, node);
            const Edge& e = ctx.sys.edges[static_cast<size_t>(*wit)];
            rep.violating_path = {node_id, ctx.sys.nodes[static_cast<size_t>(e.to)].id};
            return rep;
        }
        return rep;
    }

    auto base = detail::budget_theory(ctx, node, budget);
    for (int ei : ctx.sys.out_edges(node)) {
        const Edge& e1 = ctx.sys.edges[static_cast<size_t>(ei)];
        bool resurrected = false;
        for (int ej : ctx.sys.out_edges(e1.to)) {
            const Edge& e2 = ctx.sys.edges[static_cast<size_t>(ej)];
            if (detail::budget_theory(ctx, e2.to, budget) == base) {
                resurrected = true;
                break;
            }
        }
        if (!resurrected) {
            rep.holds = false;
            rep.violating_path = {node_id, ctx.sys.nodes[static_cast<size_t>(e1.to)].id};
            return rep;
        }
    }
    return rep;
}

struct BfaViolation {
    std::string descendant;
    std::string sentence;
};

// Σ₁-absoluteness of a node into its cone: lists every reachable node and Σ₁
// budget sentence (parameters in the node, transported) true there but false
// at the node. Empty report = bounded-forcing-axiom style absoluteness.
inline std::vector<BfaViolation> bfa_sigma1_report(ForcingContext& ctx,
                                                   const std::string& node_id, int budget) {
    int node = ctx.sys.node_index(node_id);
    if (node < 0) throw ForcingError("unknown node '" + node_id + "'");
    std::vector<BfaViolation> out;
    std::set<std::pair<int, uint32_t>> seen;
    for (const CNode* phi : ctx.node_pool(node, budget)) {
        if (ctx.cclass(phi) != QuantifierClass::Sigma1) continue;
        if (ctx.sat(node, phi)) continue;
        for (int ei : ctx.sys.out_edges(node)) {
            const Edge& e = ctx.sys.edges[static_cast<size_t>(ei)];
            if (ctx.sat(e.to, ctx.transport(phi, ei)) &&
                seen.insert({e.to, phi->id}).second)
                out.push_back({ctx.sys.nodes[static_cast<size_t>(e.to)].id,
                               ctx.render_at(phi, node)});
        }
    }
    return out;
}

} // namespace infgen
