#pragma once

#include <cassert>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "infgen/classify.hpp"
#include "infgen/enumerate.hpp"
#include "infgen/extension.hpp"

namespace infgen {

struct ForcingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- interned canonical sentences -----------------------------------------
//
// The engine works on a hash-consed DAG with de Bruijn variables and
// parameters as element indices of the node under evaluation. Memoisation
// keys are (node index, canonical formula id): two sentences that normalise
// to the same parameters and binder structure share one verdict, which is
// what makes size-9 budgets tractable.

enum class CTermKind : uint8_t { Var, Const, Param };

struct CTerm {
    CTermKind kind;
    int32_t idx; // Var: de Bruijn index; Const: constant index; Param: element index

    bool operator==(const CTerm& o) const { return kind == o.kind && idx == o.idx; }
    bool operator<(const CTerm& o) const {
        if (kind != o.kind) return kind < o.kind;
        return idx < o.idx;
    }
};

struct CNode {
    FormulaKind kind;
    int16_t rel = -1;
    uint32_t id = 0;
    const CNode* left = nullptr;
    const CNode* right = nullptr;
    uint32_t term_begin = 0;
    uint16_t term_count = 0;
    int16_t maxfree = -1;  // max de Bruijn index occurring free, -1 if closed
    uint8_t has_param = 0;
    uint16_t size = 0;     // AST size, term leaves included
};

class Interner {
public:
    const CNode* atom(int rel, const std::vector<CTerm>& ts) { return leaf(FormulaKind::Atom, rel, ts); }
    const CNode* equal(CTerm a, CTerm b) { return leaf(FormulaKind::Equal, -1, {a, b}); }

    const CNode* not_(const CNode* x) { return composite(FormulaKind::Not, x, nullptr); }
    const CNode* and_(const CNode* l, const CNode* r) { return composite(FormulaKind::And, l, r); }
    const CNode* or_(const CNode* l, const CNode* r) { return composite(FormulaKind::Or, l, r); }
    const CNode* exists(const CNode* body) { return composite(FormulaKind::Exists, body, nullptr); }

    const CTerm* terms(const CNode* n) const { return terms_.data() + n->term_begin; }

    size_t node_count() const { return arena_.size(); }

private:
    const CNode* leaf(FormulaKind kind, int rel, const std::vector<CTerm>& ts) {
        std::vector<int64_t> key;
        key.reserve(2 + 2 * ts.size());
        key.push_back(static_cast<int64_t>(kind));
        key.push_back(rel);
        for (const auto& t : ts) {
            key.push_back(static_cast<int64_t>(t.kind));
            key.push_back(t.idx);
        }
        auto it = leaf_table_.find(key);
        if (it != leaf_table_.end()) return it->second;
        CNode n;
        n.kind = kind;
        n.rel = static_cast<int16_t>(rel);
        n.term_begin = static_cast<uint32_t>(terms_.size());
        n.term_count = static_cast<uint16_t>(ts.size());
        for (const auto& t : ts) {
            terms_.push_back(t);
            if (t.kind == CTermKind::Var)
                n.maxfree = std::max(n.maxfree, static_cast<int16_t>(t.idx));
            if (t.kind == CTermKind::Param) n.has_param = 1;
        }
        n.size = static_cast<uint16_t>(1 + ts.size());
        const CNode* stored = store(n);
        leaf_table_.emplace(std::move(key), stored);
        return stored;
    }

    const CNode* composite(FormulaKind kind, const CNode* l, const CNode* r) {
        uint64_t key = (static_cast<uint64_t>(kind) << 60) |
                       (static_cast<uint64_t>(l->id) << 30) |
                       static_cast<uint64_t>(r ? r->id : 0x3fffffffu);
        auto it = comp_table_.find(key);
        if (it != comp_table_.end()) return it->second;
        CNode n;
        n.kind = kind;
        n.left = l;
        n.right = r;
        int mf = l->maxfree;
        uint8_t hp = l->has_param;
        int sz = 1 + l->size;
        if (r) {
            mf = std::max(mf, static_cast<int>(r->maxfree));
            hp |= r->has_param;
            sz += r->size;
        }
        if (kind == FormulaKind::Exists) mf = std::max(-1, l->maxfree - 1);
        n.maxfree = static_cast<int16_t>(mf);
        n.has_param = hp;
        n.size = static_cast<uint16_t>(sz);
        const CNode* stored = store(n);
        comp_table_.emplace(key, stored);
        return stored;
    }

    const CNode* store(CNode n) {
        // composite keys pack two ids into 30 bits each
        if (arena_.size() >= 0x3fffffffu)
            throw std::runtime_error("interner exhausted its id space");
        n.id = static_cast<uint32_t>(arena_.size());
        arena_.push_back(n);
        return &arena_.back();
    }

    std::deque<CNode> arena_;
    std::vector<CTerm> terms_;
    std::map<std::vector<int64_t>, const CNode*> leaf_table_;
    std::unordered_map<uint64_t, const CNode*> comp_table_;
};

// ---- reports ----------------------------------------------------------------

struct TraceNode {
    std::string node;
    std::string sentence;
    bool forced = false;
    std::string clause;
    // label per child: "edge -> <id>" with the map, or "witness <elem>", etc.
    std::vector<std::pair<std::string, TraceNode>> children;
};

struct ForcingVerdict {
    std::string node;
    std::string sentence;
    bool forced = false;
    std::optional<TraceNode> trace;
};

struct GenericityReport {
    std::string node;
    int budget = 0;
    bool generic = false;
    size_t undecided_count = 0;
    std::vector<std::string> undecided; // first few, rendered
};

struct GenericStep {
    int edge_index;
    std::string sentence;
};

struct GenericPath {
    std::string start;
    std::vector<GenericStep> steps;
    std::string final_node;
};

enum class TransferKind { Elementary, Sigma1, Pi2 };

struct TransferReport {
    bool ok = true;
    // (sentence, edge index, side that satisfied it)
    std::vector<std::tuple<std::string, int, std::string>> counterexamples;
};

struct PersistenceReport {
    bool persistent = true;
    std::string counter_node;
    int counter_edge = -1;
};

// ---- the engine ---------------------------------------------------------------

class ForcingContext {
public:
    explicit ForcingContext(const ExtensionSystem& system) : sys(system) {
        // cache keys pack node, edge, depth and element into fixed bit fields
        if (sys.edges.size() >= (1u << 14))
            throw ForcingError("extension system has too many edges for the engine");
        for (const auto& n : sys.nodes)
            if (n.size() >= 64)
                throw ForcingError("universe of '" + n.id + "' is too large for the engine");
    }

    const ExtensionSystem& sys;
    Interner in;

    // -- conversion ---------------------------------------------------------

    // parameters resolve to element indices of `node`
    const CNode* to_canon(const Formula& f, int node) {
        std::vector<std::string> binders;
        return to_canon_rec(f, sys.nodes[static_cast<size_t>(node)], binders);
    }

    FormulaPtr from_canon(const CNode* n, int node) const {
        return from_canon_rec(n, sys.nodes[static_cast<size_t>(node)], 0);
    }

    std::string render_at(const CNode* n, int node) const {
        return render(*from_canon(n, node), sys.sig);
    }

    // -- rewriting ------------------------------------------------------------

    // substitute the binder being stripped (de Bruijn index `depth` at the
    // walk position) by a parameter
    const CNode* instantiate(const CNode* body, int elem) { return inst_rec(body, 0, elem); }

    // remap parameters along an embedding; `edge` indexes sys.edges
    const CNode* transport(const CNode* n, int edge) {
        if (!n->has_param) return n;
        uint64_t key = (static_cast<uint64_t>(n->id) << 14) | static_cast<uint64_t>(edge);
        auto it = transport_cache_.find(key);
        if (it != transport_cache_.end()) return it->second;
        const CNode* out = transport_rec(n, sys.edges[static_cast<size_t>(edge)].map);
        transport_cache_.emplace(key, out);
        return out;
    }

    // -- classical satisfaction (memoised) -----------------------------------

    bool sat(int node, const CNode* n) {
        uint64_t key = memo_key(node, n);
        auto it = sat_memo_.find(key);
        if (it != sat_memo_.end()) return it->second;
        bool v = sat_compute(node, n);
        sat_memo_.emplace(key, v);
        return v;
    }

    // -- the five-clause forcing recursion ------------------------------------

    bool forces(int node, const CNode* n) {
        uint64_t key = memo_key(node, n);
        auto it = force_memo_.find(key);
        if (it != force_memo_.end()) return it->second;
        bool v = force_compute(node, n);
        force_memo_.emplace(key, v);
        return v;
    }

    bool forces_not(int node, const CNode* n) { return forces(node, in.not_(n)); }
    bool decided(int node, const CNode* n) { return forces(node, n) || forces_not(node, n); }

    // -- sentence pools --------------------------------------------------------

    // all sentences with parameters among the node's elements and size <=
    // budget, canonical order; shared between nodes of equal universe size
    const std::vector<const CNode*>& pool(int universe_size, int budget) {
        auto key = std::make_pair(universe_size, budget);
        auto it = pools_.find(key);
        if (it != pools_.end()) return it->second;
        std::vector<std::string> names;
        for (int i = 0; i < universe_size; ++i) names.push_back("p" + std::to_string(i));
        auto surface = enumerate_sentences(sys.sig, names, budget);
        std::vector<const CNode*> canon;
        canon.reserve(surface.size());
        for (const auto& f : surface) canon.push_back(to_canon_positional(*f, names));
        return pools_.emplace(key, std::move(canon)).first->second;
    }

    const std::vector<const CNode*>& node_pool(int node, int budget) {
        return pool(sys.nodes[static_cast<size_t>(node)].size(), budget);
    }

    // quantifier class, cached per canonical id
    QuantifierClass cclass(const CNode* n) {
        auto it = class_cache_.find(n->id);
        if (it != class_cache_.end()) return it->second;
        unsigned m = cmask(n);
        QuantifierClass c = QuantifierClass::Other;
        if (m & detail::PM_D) c = QuantifierClass::Delta0;
        else if (m & detail::PM_S1) c = QuantifierClass::Sigma1;
        else if (m & (detail::PM_P1 | detail::PM_P2)) c = QuantifierClass::Pi2;
        class_cache_.emplace(n->id, c);
        return c;
    }

private:
    unsigned cmask(const CNode* n) {
        switch (n->kind) {
            case FormulaKind::Atom:
            case FormulaKind::Equal: return detail::PM_D;
            case FormulaKind::Not: return detail::pm_dual(cmask(n->left));
            case FormulaKind::And:
            case FormulaKind::Or: return detail::pm_merge(cmask(n->left), cmask(n->right));
            case FormulaKind::Exists: return detail::pm_exists(cmask(n->left));
        }
        return 0;
    }

    static uint64_t memo_key(int node, const CNode* n) {
        return (static_cast<uint64_t>(node) << 34) | static_cast<uint64_t>(n->id);
    }

    bool sat_compute(int node, const CNode* n) {
        const Structure& s = sys.nodes[static_cast<size_t>(node)];
        switch (n->kind) {
            case FormulaKind::Atom:
            case FormulaKind::Equal: return atomic_truth(s, n);
            case FormulaKind::Not: return !sat(node, n->left);
            case FormulaKind::And: return sat(node, n->left) && sat(node, n->right);
            case FormulaKind::Or: return sat(node, n->left) || sat(node, n->right);
            case FormulaKind::Exists: {
                for (int e = 0; e < s.size(); ++e)
                    if (sat(node, instantiate(n->left, e))) return true;
                return false;
            }
        }
        return false;
    }

    bool force_compute(int node, const CNode* n) {
        const Structure& s = sys.nodes[static_cast<size_t>(node)];
        switch (n->kind) {
            case FormulaKind::Atom:
            case FormulaKind::Equal: return atomic_truth(s, n); // clause (1)
            case FormulaKind::And: return forces(node, n->left) && forces(node, n->right);
            case FormulaKind::Or: return forces(node, n->left) || forces(node, n->right);
            case FormulaKind::Exists: {
                for (int e = 0; e < s.size(); ++e)
                    if (forces(node, instantiate(n->left, e))) return true;
                return false;
            }
            case FormulaKind::Not: {
                // clause (5): no extension edge forces the body
                for (int ei : sys.out_edges(node)) {
                    const Edge& e = sys.edges[static_cast<size_t>(ei)];
                    if (forces(e.to, transport(n->left, ei))) return false;
                }
                return true;
            }
        }
        return false;
    }

    bool atomic_truth(const Structure& s, const CNode* n) const {
        const CTerm* ts = in.terms(n);
        if (n->kind == FormulaKind::Equal)
            return resolve(s, ts[0]) == resolve(s, ts[1]);
        thread_local std::vector<int> tuple;
        tuple.clear();
        for (int i = 0; i < n->term_count; ++i) tuple.push_back(resolve(s, ts[i]));
        return s.has_tuple(n->rel, tuple);
    }

    int resolve(const Structure& s, const CTerm& t) const {
        switch (t.kind) {
            case CTermKind::Param: return t.idx;
            case CTermKind::Const: return s.constant_assignment[static_cast<size_t>(t.idx)];
            case CTermKind::Var: throw ForcingError("open sentence reached atomic evaluation");
        }
        return -1;
    }

    const CNode* inst_rec(const CNode* n, int depth, int elem) {
        if (n->maxfree < depth) return n; // target variable does not occur
        if (depth >= 64) throw ForcingError("quantifier nesting too deep for the engine");
        uint64_t key = (static_cast<uint64_t>(n->id) << 12) |
                       (static_cast<uint64_t>(depth) << 6) | static_cast<uint64_t>(elem);
        auto it = inst_cache_.find(key);
        if (it != inst_cache_.end()) return it->second;
        const CNode* out = nullptr;
        switch (n->kind) {
            case FormulaKind::Atom:
            case FormulaKind::Equal: {
                std::vector<CTerm> ts(in.terms(n), in.terms(n) + n->term_count);
                for (auto& t : ts)
                    if (t.kind == CTermKind::Var && t.idx == depth)
                        t = CTerm{CTermKind::Param, elem};
                out = n->kind == FormulaKind::Atom ? in.atom(n->rel, ts) : in.equal(ts[0], ts[1]);
                break;
            }
            case FormulaKind::Not: out = in.not_(inst_rec(n->left, depth, elem)); break;
            case FormulaKind::And:
                out = in.and_(inst_rec(n->left, depth, elem), inst_rec(n->right, depth, elem));
                break;
            case FormulaKind::Or:
                out = in.or_(inst_rec(n->left, depth, elem), inst_rec(n->right, depth, elem));
                break;
            case FormulaKind::Exists:
                out = in.exists(inst_rec(n->left, depth + 1, elem));
                break;
        }
        inst_cache_.emplace(key, out);
        return out;
    }

    const CNode* transport_rec(const CNode* n, const std::vector<int>& map) {
        if (!n->has_param) return n;
        switch (n->kind) {
            case FormulaKind::Atom:
            case FormulaKind::Equal: {
                std::vector<CTerm> ts(in.terms(n), in.terms(n) + n->term_count);
                for (auto& t : ts)
                    if (t.kind == CTermKind::Param)
                        t.idx = map[static_cast<size_t>(t.idx)];
                return n->kind == FormulaKind::Atom ? in.atom(n->rel, ts) : in.equal(ts[0], ts[1]);
            }
            case FormulaKind::Not: return in.not_(transport_rec(n->left, map));
            case FormulaKind::And:
                return in.and_(transport_rec(n->left, map), transport_rec(n->right, map));
            case FormulaKind::Or:
                return in.or_(transport_rec(n->left, map), transport_rec(n->right, map));
            case FormulaKind::Exists: return in.exists(transport_rec(n->left, map));
        }
        return n;
    }

    const CNode* to_canon_rec(const Formula& f, const Structure& node,
                              std::vector<std::string>& binders) {
        switch (f.kind) {
            case FormulaKind::Atom:
            case FormulaKind::Equal: {
                std::vector<CTerm> ts;
                for (const auto& t : f.terms) ts.push_back(cterm(t, node, binders));
                return f.kind == FormulaKind::Atom ? in.atom(f.rel, ts) : in.equal(ts[0], ts[1]);
            }
            case FormulaKind::Not: return in.not_(to_canon_rec(*f.left, node, binders));
            case FormulaKind::And:
                return in.and_(to_canon_rec(*f.left, node, binders),
                               to_canon_rec(*f.right, node, binders));
            case FormulaKind::Or:
                return in.or_(to_canon_rec(*f.left, node, binders),
                              to_canon_rec(*f.right, node, binders));
            case FormulaKind::Exists: {
                binders.push_back(f.bound);
                const CNode* body = to_canon_rec(*f.left, node, binders);
                binders.pop_back();
                return in.exists(body);
            }
        }
        throw ForcingError("unreachable");
    }

    CTerm cterm(const Term& t, const Structure& node, const std::vector<std::string>& binders) {
        switch (t.kind) {
            case TermKind::Var:
                for (size_t i = binders.size(); i-- > 0;)
                    if (binders[i] == t.name)
                        return {CTermKind::Var, static_cast<int32_t>(binders.size() - 1 - i)};
                throw ForcingError("free variable '" + t.name + "' in sentence position");
            case TermKind::Const: {
                int c = sys.sig.constant_index(t.name);
                if (c < 0) throw ForcingError("undeclared constant '" + t.name + "'");
                return {CTermKind::Const, c};
            }
            case TermKind::Param: {
                int e = node.element_index(t.name);
                if (e < 0)
                    throw ForcingError("parameter '#" + t.name + "' names no element of '" +
                                       node.id + "'");
                return {CTermKind::Param, e};
            }
        }
        throw ForcingError("unreachable");
    }

    // positional conversion used by pools: params named by position
    const CNode* to_canon_positional(const Formula& f, const std::vector<std::string>& names) {
        std::vector<std::string> binders;
        return to_canon_pos_rec(f, names, binders);
    }

    const CNode* to_canon_pos_rec(const Formula& f, const std::vector<std::string>& names,
                                  std::vector<std::string>& binders) {
        switch (f.kind) {
            case FormulaKind::Atom:
            case FormulaKind::Equal: {
                std::vector<CTerm> ts;
                for (const auto& t : f.terms) {
                    if (t.kind == TermKind::Param) {
                        int idx = -1;
                        for (size_t i = 0; i < names.size(); ++i)
                            if (names[i] == t.name) { idx = static_cast<int>(i); break; }
                        ts.push_back({CTermKind::Param, idx});
                    } else {
                        ts.push_back(cterm_no_param(t, binders));
                    }
                }
                return f.kind == FormulaKind::Atom ? in.atom(f.rel, ts) : in.equal(ts[0], ts[1]);
            }
            case FormulaKind::Not: return in.not_(to_canon_pos_rec(*f.left, names, binders));
            case FormulaKind::And:
                return in.and_(to_canon_pos_rec(*f.left, names, binders),
                               to_canon_pos_rec(*f.right, names, binders));
            case FormulaKind::Or:
                return in.or_(to_canon_pos_rec(*f.left, names, binders),
                              to_canon_pos_rec(*f.right, names, binders));
            case FormulaKind::Exists: {
                binders.push_back(f.bound);
                const CNode* body = to_canon_pos_rec(*f.left, names, binders);
                binders.pop_back();
                return in.exists(body);
            }
        }
        throw ForcingError("unreachable");
    }

    CTerm cterm_no_param(const Term& t, const std::vector<std::string>& binders) {
        if (t.kind == TermKind::Var) {
            for (size_t i = binders.size(); i-- > 0;)
                if (binders[i] == t.name)
                    return {CTermKind::Var, static_cast<int32_t>(binders.size() - 1 - i)};
            throw ForcingError("free variable '" + t.name + "' in sentence position");
        }
        int c = sys.sig.constant_index(t.name);
        if (c < 0) throw ForcingError("undeclared constant '" + t.name + "'");
        return {CTermKind::Const, c};
    }

    FormulaPtr from_canon_rec(const CNode* n, const Structure& node, int depth) const {
        switch (n->kind) {
            case FormulaKind::Atom:
            case FormulaKind::Equal: {
                std::vector<Term> ts;
                const CTerm* cts = in.terms(n);
                for (int i = 0; i < n->term_count; ++i) {
                    const CTerm& t = cts[i];
                    switch (t.kind) {
                        case CTermKind::Var:
                            ts.push_back(var("x" + std::to_string(depth - 1 - t.idx)));
                            break;
                        case CTermKind::Const:
                            ts.push_back(cnst(sys.sig.constants[static_cast<size_t>(t.idx)]));
                            break;
                        case CTermKind::Param:
                            ts.push_back(param(node.universe[static_cast<size_t>(t.idx)]));
                            break;
                    }
                }
                if (n->kind == FormulaKind::Atom) return mk_atom(n->rel, std::move(ts));
                return mk_equal(ts[0], ts[1]);
            }
            case FormulaKind::Not: return mk_not(from_canon_rec(n->left, node, depth));
            case FormulaKind::And:
                return mk_and(from_canon_rec(n->left, node, depth),
                              from_canon_rec(n->right, node, depth));
            case FormulaKind::Or:
                return mk_or(from_canon_rec(n->left, node, depth),
                             from_canon_rec(n->right, node, depth));
            case FormulaKind::Exists:
                return mk_exists("x" + std::to_string(depth),
                                 from_canon_rec(n->left, node, depth + 1));
        }
        throw ForcingError("unreachable");
    }

    std::unordered_map<uint64_t, bool> sat_memo_, force_memo_;
    std::unordered_map<uint64_t, const CNode*> inst_cache_, transport_cache_;
    std::map<std::pair<int, int>, std::vector<const CNode*>> pools_;
    std::unordered_map<uint32_t, QuantifierClass> class_cache_;
};

} // namespace infgen
