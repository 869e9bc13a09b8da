#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "infgen/signature.hpp"

namespace infgen {

// Finite structure over a Signature. Elements are indexed by position in
// `universe`; relation tables hold tuples of element indices. A flat bitset
// per relation (mixed-radix index) backs the hot atomic lookups.
struct Structure {
    std::string id;
    std::vector<std::string> universe;
    std::vector<std::set<std::vector<int>>> relations; // one table per relation symbol
    std::vector<int> constant_assignment;              // one element index per constant

    int element_index(const std::string& name) const {
        for (size_t i = 0; i < universe.size(); ++i)
            if (universe[i] == name) return static_cast<int>(i);
        return -1;
    }

    int size() const { return static_cast<int>(universe.size()); }

    bool has_tuple(int rel, const std::vector<int>& tuple) const {
        return bits_[static_cast<size_t>(rel)][flat_index(rel, tuple)] != 0;
    }

    // Validates invariants against the signature and builds lookup caches.
    void finalize(const Signature& sig) {
        if (universe.empty())
            throw std::invalid_argument("structure '" + id + "': empty universe");
        std::set<std::string> seen;
        for (const auto& e : universe)
            if (!seen.insert(e).second)
                throw std::invalid_argument("structure '" + id + "': duplicate element '" +
                                            e + "'");
        if (relations.size() != sig.relations.size())
            throw std::invalid_argument("structure '" + id +
                                        "': relation table count mismatch");
        if (constant_assignment.size() != sig.constants.size())
            throw std::invalid_argument("structure '" + id +
                                        "': every constant must be assigned");
        const int n = size();
        for (size_t r = 0; r < relations.size(); ++r) {
            const int arity = sig.relations[r].arity;
            for (const auto& t : relations[r]) {
                if (static_cast<int>(t.size()) != arity)
                    throw std::invalid_argument("structure '" + id + "': tuple arity " +
                                                std::to_string(t.size()) + " for relation '" +
                                                sig.relations[r].name + "'");
                for (int e : t)
                    if (e < 0 || e >= n)
                        throw std::invalid_argument("structure '" + id +
                                                    "': tuple element out of range");
            }
        }
        for (int c : constant_assignment)
            if (c < 0 || c >= n)
                throw std::invalid_argument("structure '" + id +
                                            "': constant assigned outside universe");
        build_bits(sig);
    }

private:
    void build_bits(const Signature& sig) {
        bits_.clear();
        bits_.resize(relations.size());
        const size_t n = universe.size();
        for (size_t r = 0; r < relations.size(); ++r) {
            size_t cells = 1;
            for (int a = 0; a < sig.relations[r].arity; ++a) cells *= n;
            bits_[r].assign(cells, 0);
            for (const auto& t : relations[r]) bits_[r][flat_index(static_cast<int>(r), t)] = 1;
        }
    }

    size_t flat_index(int rel, const std::vector<int>& tuple) const {
        (void)rel;
        size_t idx = 0;
        const size_t n = universe.size();
        for (int e : tuple) idx = idx * n + static_cast<size_t>(e);
        return idx;
    }

    std::vector<std::vector<char>> bits_;
};

} // namespace infgen
