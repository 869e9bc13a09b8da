#pragma once

// Test fixture tooling: small structure generators and the fixture corpus the
// acceptance suite runs over. Everything here is deterministic.

#include <string>
#include <vector>

#include "infgen/extension.hpp"
#include "infgen/rng.hpp"

namespace fixtures {

using namespace infgen;

inline Signature sig_order() { return Signature{{{"<", 2}}, {}}; }
inline Signature sig_graph() { return Signature{{{"R", 2}}, {}}; }
inline Signature sig_colored_order() { return Signature{{{"<", 2}, {"P", 1}}, {}}; }
inline Signature sig_order_const() { return Signature{{{"<", 2}}, {"c"}}; }

inline std::vector<std::string> universe(int n) {
    std::vector<std::string> u;
    for (int i = 0; i < n; ++i) u.push_back(std::to_string(i));
    return u;
}

// linear order 0 < 1 < ... < n-1
inline Structure make_lo(int n, const std::string& id = "") {
    Structure s;
    s.id = id.empty() ? "L" + std::to_string(n) : id;
    s.universe = universe(n);
    s.relations.resize(1);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s.relations[0].insert({i, j});
    return s;
}

// n elements, empty relation
inline Structure make_discrete(int n, const std::string& id = "") {
    Structure s;
    s.id = id.empty() ? "D" + std::to_string(n) : id;
    s.universe = universe(n);
    s.relations.resize(1);
    return s;
}

inline Structure make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                            const std::string& id) {
    Structure s;
    s.id = id;
    s.universe = universe(n);
    s.relations.resize(1);
    for (auto [a, b] : edges) s.relations[0].insert({a, b});
    return s;
}

inline ExtensionSystem lo_system(std::vector<int> sizes) {
    std::vector<Structure> nodes;
    for (int n : sizes) nodes.push_back(make_lo(n));
    return make_auto_system(sig_order(), std::move(nodes));
}

struct NamedSystem {
    std::string name;
    ExtensionSystem sys;
};

// The acceptance corpus: >= 20 systems, <= 6 structures each, universes <= 4,
// 1-2 relations. Mostly auto mode; two explicit multiverse graphs.
inline std::vector<NamedSystem> corpus() {
    std::vector<NamedSystem> out;

    out.push_back({"lo12", lo_system({1, 2})});
    out.push_back({"lo123", lo_system({1, 2, 3})});
    out.push_back({"lo1234", lo_system({1, 2, 3, 4})});
    out.push_back({"lo23", lo_system({2, 3})});
    out.push_back({"lo34", lo_system({3, 4})});
    out.push_back({"lo3-solo", lo_system({3})});

    { // two isomorphic copies of L2: embeddings both ways
        auto a = make_lo(2, "A");
        auto b = make_lo(2, "B");
        out.push_back({"iso-pair", make_auto_system(sig_order(), {a, b})});
    }
    out.push_back({"discrete123",
                   make_auto_system(sig_order(), {make_discrete(1), make_discrete(2),
                                                  make_discrete(3)})});
    { // incomparable pair: the 2-antichain does not embed into L2 (reflection)
        out.push_back({"antichain-vs-chain",
                       make_auto_system(sig_order(), {make_discrete(2, "A2"), make_lo(2)})});
    }
    { // directed graphs: point, one arc, path of length 2
        out.push_back({"digraphs",
                       make_auto_system(sig_graph(),
                                        {make_graph(1, {}, "N1"), make_graph(2, {{0, 1}}, "E2"),
                                         make_graph(3, {{0, 1}, {1, 2}}, "P3")})});
    }
    { // loop vs no loop: no embeddings either way beyond identities
        out.push_back({"loops",
                       make_auto_system(sig_graph(), {make_graph(1, {}, "F1"),
                                                      make_graph(1, {{0, 0}}, "G1")})});
    }
    { // reflexive graphs chain
        out.push_back(
            {"reflexive",
             make_auto_system(sig_graph(), {make_graph(1, {{0, 0}}, "R1"),
                                            make_graph(2, {{0, 0}, {1, 1}}, "R2"),
                                            make_graph(3, {{0, 0}, {1, 1}, {2, 2}}, "R3")})});
    }
    { // colored orders, two relations
        Structure c1 = make_lo(1, "C1");
        c1.relations.resize(2);
        Structure c1p = make_lo(1, "C1p");
        c1p.relations.resize(2);
        c1p.relations[1].insert({0});
        Structure c2 = make_lo(2, "C2");
        c2.relations.resize(2);
        c2.relations[1].insert({1});
        Structure c3 = make_lo(3, "C3");
        c3.relations.resize(2);
        c3.relations[1].insert({1});
        c3.relations[1].insert({2});
        out.push_back({"colored", make_auto_system(sig_colored_order(), {c1, c1p, c2, c3})});
    }
    { // constants pin embeddings
        Structure k1 = make_lo(1, "K1");
        k1.constant_assignment = {0};
        Structure k2 = make_lo(2, "K2");
        k2.constant_assignment = {0};
        Structure k2b = make_lo(2, "K2b");
        k2b.constant_assignment = {1};
        out.push_back({"constants", make_auto_system(sig_order_const(), {k1, k2, k2b})});
    }
    { // a vee and its subchains
        out.push_back({"vee",
                       make_auto_system(sig_order(), {make_lo(1), make_lo(2),
                                                      make_graph(3, {{0, 1}, {0, 2}}, "V3")})});
    }
    { // cyclic tournament vs chain: mutually non-embeddable
        out.push_back({"tournament",
                       make_auto_system(sig_graph(),
                                        {make_graph(3, {{0, 1}, {1, 2}, {2, 0}}, "T3"),
                                         make_graph(3, {{0, 1}, {1, 2}, {0, 2}}, "L3g")})});
    }
    { // equivalence-style graphs
        out.push_back(
            {"equivalences",
             make_auto_system(sig_graph(),
                              {make_graph(1, {{0, 0}}, "Q1"),
                               make_graph(2, {{0, 0}, {1, 1}}, "Q2"),
                               make_graph(2, {{0, 0}, {1, 1}, {0, 1}, {1, 0}}, "Q2j"),
                               make_graph(3, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 0}}, "Q3")})});
    }
    { // explicit multiverse: ground, one step, two steps (with labels)
        auto m = make_lo(1, "M");
        auto mc = make_lo(2, "Mc");
        auto mcd = make_lo(3, "Mcd");
        std::vector<Edge> edges;
        auto ident = [&](int n, int sz) {
            Edge e;
            e.from = e.to = n;
            for (int i = 0; i < sz; ++i) e.map.push_back(i);
            e.forcing = "trivial";
            e.size = 1;
            return e;
        };
        edges.push_back(ident(0, 1));
        edges.push_back(ident(1, 2));
        edges.push_back(ident(2, 3));
        edges.push_back(Edge{0, 1, {0}, "add-c", 2});
        edges.push_back(Edge{1, 2, {0, 1}, "add-d", 2});
        edges.push_back(Edge{0, 2, {0}, "add-c*add-d", 4});
        out.push_back({"explicit-chain",
                       make_explicit_system(sig_order(), {m, mc, mcd}, std::move(edges))});
    }
    { // explicit: diamond with two routes to the top
        auto g = make_lo(1, "G");
        auto l = make_lo(2, "Ga");
        auto r = make_lo(2, "Gb");
        auto t = make_lo(3, "Gt");
        std::vector<Edge> edges;
        auto ident = [&](int n, int sz) {
            Edge e;
            e.from = e.to = n;
            for (int i = 0; i < sz; ++i) e.map.push_back(i);
            e.size = 1;
            return e;
        };
        for (int i = 0; i < 4; ++i) edges.push_back(ident(i, i == 0 ? 1 : (i == 3 ? 3 : 2)));
        edges.push_back(Edge{0, 1, {0}, "", 2});
        edges.push_back(Edge{0, 2, {1}, "", 2});
        edges.push_back(Edge{1, 3, {0, 1}, "", 2});
        edges.push_back(Edge{2, 3, {1, 2}, "", 2});
        edges.push_back(Edge{0, 3, {0}, "", 4}); // composite via Ga
        edges.push_back(Edge{0, 3, {2}, "", 4}); // composite via Gb
        out.push_back({"explicit-diamond",
                       make_explicit_system(sig_order(), {g, l, r, t}, std::move(edges))});
    }
    { // seeded random digraph systems, validated by construction via auto mode
        SplitMix64 rng(20260810);
        for (int variant = 0; variant < 3; ++variant) {
            std::vector<Structure> nodes;
            int count = 3 + static_cast<int>(rng.below(3));
            for (int i = 0; i < count; ++i) {
                int n = 1 + static_cast<int>(rng.below(3));
                std::vector<std::pair<int, int>> es;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        if (rng.below(3) == 0) es.push_back({a, b});
                nodes.push_back(make_graph(n, es, "W" + std::to_string(variant) + "_" +
                                                       std::to_string(i)));
            }
            out.push_back({"random" + std::to_string(variant),
                           make_auto_system(sig_graph(), std::move(nodes))});
        }
    }
    { // all linear orders 1..4 plus a discrete pair (mixed component)
        auto d2 = make_discrete(2, "D2x");
        out.push_back({"mixed",
                       make_auto_system(sig_order(), {make_lo(1), make_lo(2), make_lo(3),
                                                      make_lo(4), d2})});
    }

    return out;
}

} // namespace fixtures
