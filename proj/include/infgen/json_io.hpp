#pragma once

#include "json.hpp"

#include "infgen/cohen.hpp"
#include "infgen/extension.hpp"
#include "infgen/modal.hpp"
#include "infgen/robinson.hpp"
#include "infgen/suites.hpp"

namespace infgen {

using nlohmann::json;

inline json to_json(const TraceNode& t) {
    json j;
    j["node"] = t.node;
    j["sentence"] = t.sentence;
    j["verdict"] = t.forced ? "forced" : "not-forced";
    j["clause"] = t.clause;
    json kids = json::array();
    for (const auto& [label, child] : t.children)
        kids.push_back({{"label", label}, {"trace", to_json(child)}});
    j["children"] = kids;
    return j;
}

inline json to_json(const ForcingVerdict& v) {
    json j;
    j["node"] = v.node;
    j["sentence"] = v.sentence;
    j["verdict"] = v.forced ? "forced" : "not-forced";
    if (v.trace) j["trace"] = to_json(*v.trace);
    return j;
}

inline json to_json(const GenericityReport& r) {
    json j;
    j["node"] = r.node;
    j["budget"] = r.budget;
    j["generic"] = r.generic;
    j["undecided_count"] = r.undecided_count;
    j["undecided"] = r.undecided;
    return j;
}

inline json to_json(const ExtensionSystem& sys, const GenericPath& p) {
    json j;
    j["start"] = p.start;
    j["final"] = p.final_node;
    json steps = json::array();
    for (const auto& s : p.steps) {
        const Edge& e = sys.edges[static_cast<size_t>(s.edge_index)];
        json map;
        const Structure& a = sys.nodes[static_cast<size_t>(e.from)];
        const Structure& b = sys.nodes[static_cast<size_t>(e.to)];
        for (size_t i = 0; i < e.map.size(); ++i)
            map[a.universe[i]] = b.universe[static_cast<size_t>(e.map[i])];
        steps.push_back({{"from", a.id},
                         {"to", b.id},
                         {"map", map},
                         {"decided", s.sentence}});
    }
    j["steps"] = steps;
    return j;
}

inline json to_json(const SuiteReport& r) {
    json j;
    j["suite"] = r.suite;
    j["budget"] = r.budget;
    j["passed"] = r.passed;
    j["checks"] = r.checks;
    j["violations"] = r.violations;
    return j;
}

inline json to_json(const PrincipleReport& r) {
    json j;
    j["node"] = r.node;
    j["principle"] = r.principle == Principle::MP ? "MP" : "RA";
    j["budget"] = r.budget;
    j["holds"] = r.holds;
    if (r.principle == Principle::RA) j["desk_scale_reading"] = true;
    if (!r.holds) {
        if (!r.violating_sentence.empty()) j["violating_sentence"] = r.violating_sentence;
        j["violating_path"] = r.violating_path;
    }
    return j;
}

inline json to_json(const std::vector<BfaViolation>& v) {
    json arr = json::array();
    for (const auto& x : v) arr.push_back({{"descendant", x.descendant}, {"sentence", x.sentence}});
    return arr;
}

inline json to_json(const ChainProbeReport& r) {
    json j;
    j["directed"] = r.directed;
    j["exhaustive"] = r.exhaustive;
    json chains = json::array();
    for (const auto& c : r.chains)
        chains.push_back({{"nodes", c.node_path}, {"bounded", c.bounded}, {"bound", c.bound_id}});
    j["chains"] = chains;
    return j;
}

inline json to_json(const SystemReport& r) {
    json j;
    j["passes"] = r.passes();
    j["reflexive"] = r.reflexive_ok;
    j["composition_closed"] = r.composition_ok;
    j["strong_embeddings"] = r.strong_ok;
    j["problems"] = r.problems;
    return j;
}

// ---- cohen types ----------------------------------------------------------

inline json to_json(const RealApprox& r) {
    json j;
    j["bits"] = to_string(r);
    json prov = json::array();
    for (const auto& w : r.provenance)
        prov.push_back({{"family", w.family}, {"prefix_len", w.prefix_len}});
    j["provenance"] = prov;
    return j;
}

inline json to_json(const ProductCondition& p) {
    json arr = json::array();
    for (const auto& [pos, bit] : p.entries)
        arr.push_back({{"slice", pos.first}, {"pos", pos.second}, {"bit", static_cast<int>(bit)}});
    return arr;
}

inline ProductCondition product_condition_from_json(const json& arr) {
    ProductCondition p;
    for (const auto& e : arr)
        p.entries[{e.at("slice").get<uint32_t>(), e.at("pos").get<uint32_t>()}] =
            static_cast<uint8_t>(e.at("bit").get<int>());
    return p;
}

inline std::string bits_to_string(const std::vector<uint8_t>& bits) {
    std::string s;
    for (uint8_t b : bits) s += b ? '1' : '0';
    return s;
}

inline std::vector<uint8_t> bits_from_string(const std::string& s) {
    return condition_from_string(s).bits;
}

inline json to_json(const AmalgamationCertificate& c) {
    json j;
    j["k"] = c.k;
    j["depth"] = c.depth;
    j["seed"] = c.seed;
    j["families"] = c.family_specs;
    json inputs = json::array();
    for (const auto& b : c.inputs) inputs.push_back(bits_to_string(b));
    j["inputs"] = inputs;
    json d = json::array();
    for (const auto& b : c.d_slices) d.push_back(bits_to_string(b));
    j["d"] = d;
    j["diffs"] = c.diffs;
    json chain = json::array();
    for (const auto& p : c.p_chain) chain.push_back(to_json(p));
    j["p_chain"] = chain;
    json aux = json::array();
    for (const auto& b : c.aux) aux.push_back(bits_to_string(b));
    j["aux"] = aux;
    j["note"] = c.note;
    return j;
}

inline AmalgamationCertificate certificate_from_json(const json& j) {
    AmalgamationCertificate c;
    c.k = j.at("k").get<uint32_t>();
    c.depth = j.at("depth").get<uint32_t>();
    c.seed = j.at("seed").get<uint64_t>();
    c.family_specs = j.at("families").get<std::vector<std::string>>();
    for (const auto& s : j.at("inputs")) c.inputs.push_back(bits_from_string(s.get<std::string>()));
    for (const auto& s : j.at("d")) c.d_slices.push_back(bits_from_string(s.get<std::string>()));
    c.diffs = j.at("diffs").get<std::vector<std::vector<uint32_t>>>();
    for (const auto& p : j.at("p_chain")) c.p_chain.push_back(product_condition_from_json(p));
    for (const auto& s : j.at("aux")) c.aux.push_back(bits_from_string(s.get<std::string>()));
    if (j.contains("note")) c.note = j.at("note").get<std::string>();
    return c;
}

} // namespace infgen
