#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "infgen/enumerate.hpp"
#include "infgen/eval.hpp"
#include "infgen/formula.hpp"
#include "infgen/rng.hpp"
#include "infgen/signature.hpp"
#include "infgen/structure.hpp"

namespace infgen {

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A strong embedding between two nodes: injective, preserves and reflects
// every relation tuple, and preserves constants. `map[i]` is the image of
// element i of the source.
struct Edge {
    int from = -1;
    int to = -1;
    std::vector<int> map;
    std::string forcing;          // optional label
    std::optional<int> size;      // optional label, models the κ bound

    bool is_identity() const {
        if (from != to) return false;
        for (size_t i = 0; i < map.size(); ++i)
            if (map[i] != static_cast<int>(i)) return false;
        return true;
    }
};

namespace detail {

inline bool strong_embedding_ok(const Structure& a, const Structure& b,
                                const Signature& sig, const std::vector<int>& map) {
    if (map.size() != a.universe.size()) return false;
    std::set<int> image;
    for (int v : map) {
        if (v < 0 || v >= b.size()) return false;
        if (!image.insert(v).second) return false; // not injective
    }
    for (size_t c = 0; c < sig.constants.size(); ++c)
        if (map[static_cast<size_t>(a.constant_assignment[c])] != b.constant_assignment[c])
            return false;
    const int n = a.size();
    for (size_t r = 0; r < sig.relations.size(); ++r) {
        const int arity = sig.relations[r].arity;
        std::vector<int> tuple(static_cast<size_t>(arity), 0);
        std::vector<int> mapped(static_cast<size_t>(arity), 0);
        while (true) {
            for (int i = 0; i < arity; ++i)
                mapped[static_cast<size_t>(i)] = map[static_cast<size_t>(tuple[static_cast<size_t>(i)])];
            if (a.has_tuple(static_cast<int>(r), tuple) !=
                b.has_tuple(static_cast<int>(r), mapped))
                return false;
            int k = arity - 1;
            while (k >= 0 && ++tuple[static_cast<size_t>(k)] == n)
                tuple[static_cast<size_t>(k--)] = 0;
            if (k < 0) break;
        }
    }
    return true;
}

} // namespace detail

// All strong embeddings a ↪ b, in lexicographic order of the image vector.
inline std::vector<std::vector<int>> compute_embeddings(const Structure& a,
                                                        const Structure& b,
                                                        const Signature& sig) {
    std::vector<std::vector<int>> out;
    const int n = a.size(), m = b.size();
    if (n > m) return out;
    std::vector<int> map(static_cast<size_t>(n), -1);
    std::vector<char> used(static_cast<size_t>(m), 0);
    std::function<void(int)> rec = [&](int d) {
        if (d == n) {
            if (detail::strong_embedding_ok(a, b, sig, map)) out.push_back(map);
            return;
        }
        for (int v = 0; v < m; ++v) {
            if (used[static_cast<size_t>(v)]) continue;
            used[static_cast<size_t>(v)] = 1;
            map[static_cast<size_t>(d)] = v;
            rec(d + 1);
            used[static_cast<size_t>(v)] = 0;
        }
    };
    rec(0);
    return out;
}

// Directed graph of structures with explicit strong embeddings. Unifies a
// "class of structures" (auto mode: the edge set is every embedding between
// listed nodes) and an explicit multiverse graph (reflexive and closed under
// composition, checked at load).
struct ExtensionSystem {
    Signature sig;
    std::vector<Structure> nodes;
    std::vector<Edge> edges;
    bool auto_mode = true;

    int node_index(const std::string& id) const {
        for (size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].id == id) return static_cast<int>(i);
        return -1;
    }

    const std::vector<int>& out_edges(int node) const {
        return out_edges_[static_cast<size_t>(node)];
    }

    void index_edges() {
        out_edges_.assign(nodes.size(), {});
        for (size_t e = 0; e < edges.size(); ++e)
            out_edges_[static_cast<size_t>(edges[e].from)].push_back(static_cast<int>(e));
    }

    // every ordered pair of nodes has a common extension target
    bool pairwise_directed() const {
        for (size_t a = 0; a < nodes.size(); ++a)
            for (size_t b = 0; b < nodes.size(); ++b) {
                bool found = false;
                for (size_t w = 0; w < nodes.size() && !found; ++w) {
                    bool a_in = false, b_in = false;
                    for (const auto& e : edges) {
                        if (e.from == static_cast<int>(a) && e.to == static_cast<int>(w)) a_in = true;
                        if (e.from == static_cast<int>(b) && e.to == static_cast<int>(w)) b_in = true;
                    }
                    found = a_in && b_in;
                }
                if (!found) return false;
            }
        return true;
    }

private:
    std::vector<std::vector<int>> out_edges_;
};

// ---- system construction -------------------------------------------------

inline ExtensionSystem make_auto_system(Signature sig, std::vector<Structure> nodes) {
    ExtensionSystem sys;
    sys.sig = std::move(sig);
    sys.sig.validate();
    sys.nodes = std::move(nodes);
    sys.auto_mode = true;
    std::set<std::string> ids;
    for (auto& n : sys.nodes) {
        n.finalize(sys.sig);
        if (!ids.insert(n.id).second)
            throw LoadError("duplicate node id '" + n.id + "'");
    }
    for (size_t i = 0; i < sys.nodes.size(); ++i)
        for (size_t j = 0; j < sys.nodes.size(); ++j)
            for (auto& m : compute_embeddings(sys.nodes[i], sys.nodes[j], sys.sig))
                sys.edges.push_back(Edge{static_cast<int>(i), static_cast<int>(j),
                                         std::move(m), "", std::nullopt});
    sys.index_edges();
    return sys;
}

struct SystemReport {
    bool reflexive_ok = true;
    bool composition_ok = true;
    bool strong_ok = true;
    std::vector<std::string> problems;

    bool passes() const { return reflexive_ok && composition_ok && strong_ok; }
};

// Law check for an assembled system: identity edge at each node, edge set
// closed under composition, every edge a strong embedding. Failures are
// report content, never exceptions.
inline SystemReport check_extension_system(const ExtensionSystem& sys) {
    SystemReport rep;
    std::set<std::tuple<int, int, std::vector<int>>> edge_set;
    for (const auto& e : sys.edges) edge_set.insert({e.from, e.to, e.map});
    for (size_t i = 0; i < sys.nodes.size(); ++i) {
        std::vector<int> ident(sys.nodes[i].universe.size());
        for (size_t k = 0; k < ident.size(); ++k) ident[k] = static_cast<int>(k);
        if (!edge_set.count({static_cast<int>(i), static_cast<int>(i), ident})) {
            rep.reflexive_ok = false;
            rep.problems.push_back("missing identity edge on node '" + sys.nodes[i].id + "'");
        }
    }
    for (const auto& e : sys.edges) {
        if (!detail::strong_embedding_ok(sys.nodes[static_cast<size_t>(e.from)],
                                         sys.nodes[static_cast<size_t>(e.to)], sys.sig,
                                         e.map)) {
            rep.strong_ok = false;
            rep.problems.push_back("edge " + sys.nodes[static_cast<size_t>(e.from)].id +
                                   " -> " + sys.nodes[static_cast<size_t>(e.to)].id +
                                   " is not a strong embedding");
        }
    }
    for (const auto& e1 : sys.edges)
        for (const auto& e2 : sys.edges) {
            if (e1.to != e2.from) continue;
            std::vector<int> comp(e1.map.size());
            for (size_t i = 0; i < e1.map.size(); ++i)
                comp[i] = e2.map[static_cast<size_t>(e1.map[i])];
            if (!edge_set.count({e1.from, e2.to, comp})) {
                rep.composition_ok = false;
                rep.problems.push_back(
                    "missing composite edge " + sys.nodes[static_cast<size_t>(e1.from)].id +
                    " -> " + sys.nodes[static_cast<size_t>(e2.to)].id);
            }
        }
    return rep;
}

inline ExtensionSystem make_explicit_system(Signature sig, std::vector<Structure> nodes,
                                            std::vector<Edge> edges, bool strict = true) {
    ExtensionSystem sys;
    sys.sig = std::move(sig);
    sys.sig.validate();
    sys.nodes = std::move(nodes);
    sys.edges = std::move(edges);
    sys.auto_mode = false;
    std::set<std::string> ids;
    for (auto& n : sys.nodes) {
        n.finalize(sys.sig);
        if (!ids.insert(n.id).second)
            throw LoadError("duplicate node id '" + n.id + "'");
    }
    for (const auto& e : sys.edges) {
        if (e.from < 0 || e.from >= static_cast<int>(sys.nodes.size()) || e.to < 0 ||
            e.to >= static_cast<int>(sys.nodes.size()))
            throw LoadError("edge references unknown node");
    }
    if (strict) {
        SystemReport rep = check_extension_system(sys);
        if (!rep.passes())
            throw LoadError("invalid extension system: " + rep.problems.front());
    }
    sys.index_edges();
    return sys;
}

// ---- JSON loading ----------------------------------------------------------
//
// Schema: {"signature": {"relations": [{"name","arity"}], "constants": [...]},
//          "structures": [{"id","universe":[...],"relations":{name:[[...]]},
//                          "constants":{name:elem}}],
//          "extensions": "auto" | [{"from","to","map":{elem:elem},
//                                   "forcing"?, "size"?}]}

inline ExtensionSystem load_class(const nlohmann::json& doc, bool strict = true) {
    if (!doc.is_object()) throw LoadError("top level must be an object");
    if (!doc.contains("signature") || !doc.contains("structures") ||
        !doc.contains("extensions"))
        throw LoadError("missing required field (signature/structures/extensions)");

    Signature sig;
    const auto& jsig = doc.at("signature");
    if (jsig.contains("relations"))
        for (const auto& r : jsig.at("relations"))
            sig.relations.push_back({r.at("name").get<std::string>(), r.at("arity").get<int>()});
    if (jsig.contains("constants"))
        for (const auto& c : jsig.at("constants")) sig.constants.push_back(c.get<std::string>());
    sig.validate();

    std::vector<Structure> nodes;
    for (const auto& js : doc.at("structures")) {
        Structure s;
        s.id = js.at("id").get<std::string>();
        for (const auto& e : js.at("universe")) s.universe.push_back(e.get<std::string>());
        s.relations.resize(sig.relations.size());
        if (js.contains("relations"))
            for (const auto& [name, tuples] : js.at("relations").items()) {
                int r = sig.relation_index(name);
                if (r < 0) throw LoadError("structure '" + s.id + "': undeclared relation '" + name + "'");
                for (const auto& jt : tuples) {
                    std::vector<int> tuple;
                    for (const auto& je : jt) {
                        int e = s.element_index(je.get<std::string>());
                        if (e < 0)
                            throw LoadError("structure '" + s.id + "': tuple element '" +
                                            je.get<std::string>() + "' not in universe");
                        tuple.push_back(e);
                    }
                    s.relations[static_cast<size_t>(r)].insert(std::move(tuple));
                }
            }
        s.constant_assignment.assign(sig.constants.size(), -1);
        if (js.contains("constants"))
            for (const auto& [name, elem] : js.at("constants").items()) {
                int c = sig.constant_index(name);
                if (c < 0) throw LoadError("structure '" + s.id + "': undeclared constant '" + name + "'");
                int e = s.element_index(elem.get<std::string>());
                if (e < 0)
                    throw LoadError("structure '" + s.id + "': constant '" + name +
                                    "' assigned to unknown element");
                s.constant_assignment[static_cast<size_t>(c)] = e;
            }
        for (size_t c = 0; c < sig.constants.size(); ++c)
            if (s.constant_assignment[c] < 0)
                throw LoadError("structure '" + s.id + "': constant '" + sig.constants[c] +
                                "' not assigned");
        nodes.push_back(std::move(s));
    }

    const auto& jext = doc.at("extensions");
    if (jext.is_string() && jext.get<std::string>() == "auto")
        return make_auto_system(std::move(sig), std::move(nodes));
    if (!jext.is_array()) throw LoadError("extensions must be \"auto\" or a list");

    // temporary index for id lookup before system assembly
    auto find_node = [&](const std::string& id) {
        for (size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].id == id) return static_cast<int>(i);
        throw LoadError("edge references unknown node '" + id + "'");
    };

    std::vector<Edge> edges;
    for (const auto& je : jext) {
        Edge e;
        e.from = find_node(je.at("from").get<std::string>());
        e.to = find_node(je.at("to").get<std::string>());
        const Structure& a = nodes[static_cast<size_t>(e.from)];
        const Structure& b = nodes[static_cast<size_t>(e.to)];
        e.map.assign(a.universe.size(), -1);
        for (const auto& [src, dst] : je.at("map").items()) {
            int i = a.element_index(src);
            int j = b.element_index(dst.get<std::string>());
            if (i < 0 || j < 0)
                throw LoadError("edge " + a.id + " -> " + b.id + ": map entry '" + src +
                                "' -> '" + dst.get<std::string>() + "' out of range");
            e.map[static_cast<size_t>(i)] = j;
        }
        for (int v : e.map)
            if (v < 0) throw LoadError("edge " + a.id + " -> " + b.id + ": map not total");
        if (je.contains("forcing")) e.forcing = je.at("forcing").get<std::string>();
        if (je.contains("size")) e.size = je.at("size").get<int>();
        edges.push_back(std::move(e));
    }
    return make_explicit_system(std::move(sig), std::move(nodes), std::move(edges), strict);
}

inline ExtensionSystem load_class_text(const std::string& text, bool strict = true) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(std::string("invalid JSON: ") + e.what());
    }
    try {
        return load_class(doc, strict);
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(std::string("schema violation: ") + e.what());
    }
}

// ---- class-level checks ----------------------------------------------------

struct CofinalityReport {
    bool mutually_cofinal = false;
    // forward: per node of s, (t-node it embeds into, embedding);
    // backward: per node of t, (s-node embedding into it, embedding)
    std::vector<std::pair<std::string, std::vector<int>>> forward, backward;
    std::vector<std::string> unembeddable; // node ids with no witness
};

// Interleaving of the two classes in the extension order: every node of s
// embeds into some node of t, and every node of t sits above some node of s.
inline CofinalityReport mutually_cofinal(const ExtensionSystem& s, const ExtensionSystem& t) {
    if (!(s.sig == t.sig)) throw std::invalid_argument("mutually_cofinal: signature mismatch");
    CofinalityReport rep;
    rep.mutually_cofinal = true;
    for (const auto& n : s.nodes) {
        bool found = false;
        for (const auto& m : t.nodes) {
            auto embs = compute_embeddings(n, m, s.sig);
            if (!embs.empty()) {
                rep.forward.emplace_back(m.id, embs.front());
                found = true;
                break;
            }
        }
        if (!found) {
            rep.mutually_cofinal = false;
            rep.unembeddable.push_back(n.id);
        }
    }
    for (const auto& m : t.nodes) {
        bool found = false;
        for (const auto& n : s.nodes) {
            auto embs = compute_embeddings(n, m, s.sig);
            if (!embs.empty()) {
                rep.backward.emplace_back(n.id, embs.front());
                found = true;
                break;
            }
        }
        if (!found) {
            rep.mutually_cofinal = false;
            rep.unembeddable.push_back(m.id);
        }
    }
    return rep;
}

struct ModelCompleteReport {
    bool model_complete = true;
    // (edge index, sentence, true-side id) for each elementarity failure
    std::vector<std::tuple<int, std::string, std::string>> counterexamples;
};

// transport a sentence's parameters along an embedding (element names)
inline FormulaPtr transport_params(const FormulaPtr& f, const Structure& from,
                                   const Structure& to, const std::vector<int>& map) {
    switch (f->kind) {
        case FormulaKind::Atom:
        case FormulaKind::Equal: {
            std::vector<Term> ts = f->terms;
            bool changed = false;
            for (auto& t : ts) {
                if (t.kind != TermKind::Param) continue;
                int e = from.element_index(t.name);
                if (e < 0) throw EvalError("parameter '#" + t.name + "' names no element of '" + from.id + "'");
                t.name = to.universe[static_cast<size_t>(map[static_cast<size_t>(e)])];
                changed = true;
            }
            if (!changed) return f;
            if (f->kind == FormulaKind::Atom) return mk_atom(f->rel, std::move(ts));
            return mk_equal(ts[0], ts[1]);
        }
        case FormulaKind::Not:
            return mk_not(transport_params(f->left, from, to, map));
        case FormulaKind::And:
            return mk_and(transport_params(f->left, from, to, map),
                          transport_params(f->right, from, to, map));
        case FormulaKind::Or:
            return mk_or(transport_params(f->left, from, to, map),
                         transport_params(f->right, from, to, map));
        case FormulaKind::Exists:
            return mk_exists(f->bound, transport_params(f->left, from, to, map));
    }
    return f;
}

// Model completeness at a size budget: every edge is budget-elementary.
inline ModelCompleteReport check_model_complete(const ExtensionSystem& sys, int budget) {
    ModelCompleteReport rep;
    for (size_t ei = 0; ei < sys.edges.size(); ++ei) {
        const Edge& e = sys.edges[ei];
        const Structure& a = sys.nodes[static_cast<size_t>(e.from)];
        const Structure& b = sys.nodes[static_cast<size_t>(e.to)];
        auto pool = enumerate_sentences(sys.sig, a.universe, budget);
        for (const auto& phi : pool) {
            bool at_a = satisfies(a, sys.sig, *phi);
            bool at_b = satisfies(b, sys.sig, *transport_params(phi, a, b, e.map));
            if (at_a != at_b) {
                rep.model_complete = false;
                rep.counterexamples.emplace_back(static_cast<int>(ei), render(*phi, sys.sig),
                                                 at_a ? a.id : b.id);
            }
        }
    }
    return rep;
}

// ---- σ-closedness probe ------------------------------------------------------

struct ChainProbe {
    std::vector<std::string> node_path;
    bool bounded = false;
    std::string bound_id;
};

struct ChainProbeReport {
    std::vector<ChainProbe> chains;
    bool directed = true;   // all sampled chains have a lower bound
    bool exhaustive = false;
};

// Samples descending chains (composable non-identity edge paths) and checks
// each for a node extending every member. Exhaustive when the path count is
// small (<= 10^4), otherwise seeded random walks. With kappa set, only edges
// whose size label is <= kappa participate (unlabeled edges count as size 1).
inline ChainProbeReport sigma_closed_probe(const ExtensionSystem& sys, int chain_length,
                                           int sample_count, uint64_t seed,
                                           std::optional<int> kappa = std::nullopt) {
    ChainProbeReport rep;
    auto edge_ok = [&](const Edge& e) {
        if (e.is_identity()) return false;
        if (kappa && e.size.value_or(1) > *kappa) return false;
        return true;
    };

    auto has_bound = [&](const std::vector<int>& nodes_on_path) -> std::optional<int> {
        int last = nodes_on_path.back();
        for (size_t w = 0; w < sys.nodes.size(); ++w) {
            bool ok = true;
            for (int n : nodes_on_path) {
                bool found = false;
                for (const auto& e : sys.edges)
                    if (e.from == n && e.to == static_cast<int>(w)) { found = true; break; }
                if (!found) { ok = false; break; }
            }
            if (ok) return static_cast<int>(w);
        }
        (void)last;
        return std::nullopt;
    };

    auto add_chain = [&](const std::vector<int>& path) {
        ChainProbe p;
        for (int n : path) p.node_path.push_back(sys.nodes[static_cast<size_t>(n)].id);
        auto b = has_bound(path);
        p.bounded = b.has_value();
        if (b) p.bound_id = sys.nodes[static_cast<size_t>(*b)].id;
        if (!p.bounded) rep.directed = false;
        rep.chains.push_back(std::move(p));
    };

    // count paths of length 1..chain_length over admissible edges
    long long count = 0;
    {
        std::vector<long long> cur(sys.nodes.size(), 1);
        for (int len = 1; len <= chain_length && count <= 10000; ++len) {
            std::vector<long long> nxt(sys.nodes.size(), 0);
            for (const auto& e : sys.edges)
                if (edge_ok(e)) nxt[static_cast<size_t>(e.to)] += cur[static_cast<size_t>(e.from)];
            long long level = 0;
            for (long long v : nxt) level += v;
            count += level;
            cur = std::move(nxt);
        }
    }

    if (count <= 10000) {
        rep.exhaustive = true;
        std::vector<int> path;
        std::function<void(int, int)> walk = [&](int node, int remaining) {
            if (static_cast<int>(path.size()) >= 2) add_chain(path);
            if (remaining == 0) return;
            for (int ei : sys.out_edges(node)) {
                const Edge& e = sys.edges[static_cast<size_t>(ei)];
                if (!edge_ok(e)) continue;
                path.push_back(e.to);
                walk(e.to, remaining - 1);
                path.pop_back();
            }
        };
        for (size_t n = 0; n < sys.nodes.size(); ++n) {
            path = {static_cast<int>(n)};
            walk(static_cast<int>(n), chain_length);
        }
    } else {
        SplitMix64 rng(seed);
        for (int s = 0; s < sample_count; ++s) {
            std::vector<int> path{static_cast<int>(rng.below(sys.nodes.size()))};
            for (int step = 0; step < chain_length; ++step) {
                std::vector<int> cands;
                for (int ei : sys.out_edges(path.back()))
                    if (edge_ok(sys.edges[static_cast<size_t>(ei)])) cands.push_back(ei);
                if (cands.empty()) break;
                int ei = cands[rng.below(cands.size())];
                path.push_back(sys.edges[static_cast<size_t>(ei)].to);
            }
            if (path.size() >= 2) add_chain(path);
        }
    }
    return rep;
}

} // namespace infgen
