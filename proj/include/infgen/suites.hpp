#pragma once

#include <string>
#include <vector>

#include "infgen/modal.hpp"
#include "infgen/robinson.hpp"

namespace infgen {

struct SuiteReport {
    std::string suite;
    int budget = 0;
    bool passed = true;
    size_t checks = 0;
    std::vector<std::string> violations; // capped

    void fail(const std::string& msg, size_t cap = 32) {
        passed = false;
        if (violations.size() < cap) violations.push_back(msg);
    }

    static SuiteReport start(const char* name, int budget) {
        SuiteReport r;
        r.suite = name;
        r.budget = budget;
        return r;
    }
};

namespace detail {

inline std::vector<int> generic_nodes(ForcingContext& ctx, int budget) {
    std::vector<int> out;
    for (size_t n = 0; n < ctx.sys.nodes.size(); ++n)
        if (is_generic(ctx, static_cast<int>(n), budget, 0).generic)
            out.push_back(static_cast<int>(n));
    return out;
}

} // namespace detail

// No sentence is forced together with its negation, and forcing persists
// along every edge.
inline SuiteReport suite_facts(ForcingContext& ctx, int budget) {
    SuiteReport rep = SuiteReport::start("facts", budget);
    for (size_t n = 0; n < ctx.sys.nodes.size(); ++n) {
        int node = static_cast<int>(n);
        for (const CNode* phi : ctx.node_pool(node, budget)) {
            ++rep.checks;
            bool f = ctx.forces(node, phi);
            if (f && ctx.forces_not(node, phi))
                rep.fail("both forced at " + ctx.sys.nodes[n].id + ": " +
                         ctx.render_at(phi, node));
            if (!f) continue;
            for (int ei : ctx.sys.out_edges(node)) {
                const Edge& e = ctx.sys.edges[static_cast<size_t>(ei)];
                if (!ctx.forces(e.to, ctx.transport(phi, ei)))
                    rep.fail("persistence broken on edge " + ctx.sys.nodes[n].id + " -> " +
                             ctx.sys.nodes[static_cast<size_t>(e.to)].id + ": " +
                             ctx.render_at(phi, node));
            }
        }
    }
    return rep;
}

// Forcing = truth on budget-generic nodes.
inline SuiteReport suite_infgen(ForcingContext& ctx, int budget) {
    SuiteReport rep = SuiteReport::start("infgen", budget);
    for (int node : detail::generic_nodes(ctx, budget)) {
        for (const CNode* phi : ctx.node_pool(node, budget)) {
            ++rep.checks;
            if (ctx.forces(node, phi) != ctx.sat(node, phi))
                rep.fail("forcing != truth at " +
                         ctx.sys.nodes[static_cast<size_t>(node)].id + ": " +
                         ctx.render_at(phi, node));
        }
    }
    return rep;
}

// Path-connected budget-generic pairs are budget-elementarily equivalent over
// the lower node's parameters.
inline SuiteReport suite_geneq(ForcingContext& ctx, int budget) {
    SuiteReport rep = SuiteReport::start("geneq", budget);
    auto gens = detail::generic_nodes(ctx, budget);
    for (int lower : gens)
        for (int upper : gens) {
            bool connected = false;
            for (int ei : ctx.sys.out_edges(lower))
                if (ctx.sys.edges[static_cast<size_t>(ei)].to == upper) connected = true;
            if (!connected) continue;
            ++rep.checks;
            auto r = check_transfer(ctx, TransferKind::Elementary,
                                    ctx.sys.nodes[static_cast<size_t>(lower)].id,
                                    ctx.sys.nodes[static_cast<size_t>(upper)].id, budget);
            if (!r.ok)
                rep.fail("generic pair " + ctx.sys.nodes[static_cast<size_t>(lower)].id +
                         " -> " + ctx.sys.nodes[static_cast<size_t>(upper)].id +
                         " not elementary: " + std::get<0>(r.counterexamples.front()));
        }
    return rep;
}

// Budget-generic nodes are existentially complete in the system (empty BFA
// report into the cone).
inline SuiteReport suite_excomp(ForcingContext& ctx, int budget) {
    SuiteReport rep = SuiteReport::start("excomp", budget);
    for (int node : detail::generic_nodes(ctx, budget)) {
        ++rep.checks;
        auto viols = bfa_sigma1_report(ctx, ctx.sys.nodes[static_cast<size_t>(node)].id, budget);
        for (const auto& v : viols)
            rep.fail("Sigma1 sentence escapes " + ctx.sys.nodes[static_cast<size_t>(node)].id +
                     " at " + v.descendant + ": " + v.sentence);
    }
    return rep;
}

// Budget-generic nodes are Π₂-complete into every descendant.
inline SuiteReport suite_pi2(ForcingContext& ctx, int budget) {
    SuiteReport rep = SuiteReport::start("pi2", budget);
    for (int node : detail::generic_nodes(ctx, budget)) {
        for (int ei : ctx.sys.out_edges(node)) {
            const Edge& e = ctx.sys.edges[static_cast<size_t>(ei)];
            ++rep.checks;
            auto r = check_transfer(ctx, TransferKind::Pi2,
                                    ctx.sys.nodes[static_cast<size_t>(node)].id,
                                    ctx.sys.nodes[static_cast<size_t>(e.to)].id, budget);
            if (!r.ok)
                rep.fail("Pi2 transfer fails " + ctx.sys.nodes[static_cast<size_t>(node)].id +
                         " -> " + ctx.sys.nodes[static_cast<size_t>(e.to)].id + ": " +
                         std::get<0>(r.counterexamples.front()));
        }
    }
    return rep;
}

// Budget-generic nodes satisfy the Maximality Principle ◇□φ → φ.
inline SuiteReport suite_mp(ForcingContext& ctx, int budget) {
    SuiteReport rep = SuiteReport::start("mp", budget);
    for (int node : detail::generic_nodes(ctx, budget)) {
        ++rep.checks;
        auto r = check_modal_principle(ctx, ctx.sys.nodes[static_cast<size_t>(node)].id,
                                       Principle::MP, budget);
        if (!r.holds)
            rep.fail("MP fails at generic " + r.node + ": " + r.violating_sentence);
    }
    return rep;
}

// Budget-generic nodes satisfy the Resurrection Axiom (desk-scale reading).
inline SuiteReport suite_ra(ForcingContext& ctx, int budget) {
    SuiteReport rep = SuiteReport::start("ra", budget);
    for (int node : detail::generic_nodes(ctx, budget)) {
        ++rep.checks;
        auto r = check_modal_principle(ctx, ctx.sys.nodes[static_cast<size_t>(node)].id,
                                       Principle::RA, budget);
        if (!r.holds) rep.fail("RA fails at generic " + r.node);
    }
    return rep;
}

// Memoised engine vs naive recursive evaluator on every (node, sentence) pair.
inline SuiteReport suite_oracle(ForcingContext& ctx, int budget) {
    SuiteReport rep = SuiteReport::start("oracle", budget);
    for (size_t n = 0; n < ctx.sys.nodes.size(); ++n) {
        int node = static_cast<int>(n);
        for (const CNode* phi : ctx.node_pool(node, budget)) {
            ++rep.checks;
            FormulaPtr surface = ctx.from_canon(phi, node);
            if (ctx.forces(node, phi) != naive_forces(ctx.sys, node, *surface))
                rep.fail("engines disagree at " + ctx.sys.nodes[n].id + ": " +
                         ctx.render_at(phi, node));
        }
    }
    return rep;
}

inline SuiteReport run_suite(ForcingContext& ctx, const std::string& name, int budget) {
    if (name == "facts") return suite_facts(ctx, budget);
    if (name == "infgen") return suite_infgen(ctx, budget);
    if (name == "geneq") return suite_geneq(ctx, budget);
    if (name == "excomp") return suite_excomp(ctx, budget);
    if (name == "pi2") return suite_pi2(ctx, budget);
    if (name == "mp") return suite_mp(ctx, budget);
    if (name == "ra") return suite_ra(ctx, budget);
    if (name == "oracle") return suite_oracle(ctx, budget);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

} // namespace infgen
