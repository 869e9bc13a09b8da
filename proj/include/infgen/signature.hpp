#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace infgen {

struct RelationSymbol {
    std::string name;
    int arity = 0;
};

// Finite relational signature plus constants. No function symbols: atomic
// satisfaction and embedding checks stay table lookups.
struct Signature {
    std::vector<RelationSymbol> relations;
    std::vector<std::string> constants;

    int relation_index(const std::string& name) const {
        for (size_t i = 0; i < relations.size(); ++i)
            if (relations[i].name == name) return static_cast<int>(i);
        return -1;
    }

    int constant_index(const std::string& name) const {
        for (size_t i = 0; i < constants.size(); ++i)
            if (constants[i] == name) return static_cast<int>(i);
        return -1;
    }

    // Names the grammar reserves; a relation or constant may not shadow them.
    static bool reserved_name(const std::string& s) {
        static const char* words[] = {"E", "A", "=",  "&", "|", "!",
                                      "->", "<->", "(", ")", ".", ",", "#"};
        for (const char* w : words)
            if (s == w) return true;
        return false;
    }

    void validate() const {
        std::set<std::string> seen;
        for (const auto& r : relations) {
            if (r.name.empty()) throw std::invalid_argument("relation with empty name");
            if (r.arity < 1)
                throw std::invalid_argument("relation '" + r.name + "' has arity < 1");
            if (reserved_name(r.name))
                throw std::invalid_argument("relation name '" + r.name + "' is reserved");
            if (!seen.insert(r.name).second)
                throw std::invalid_argument("duplicate symbol name '" + r.name + "'");
        }
        for (const auto& c : constants) {
            if (c.empty()) throw std::invalid_argument("constant with empty name");
            if (reserved_name(c))
                throw std::invalid_argument("constant name '" + c + "' is reserved");
            if (!seen.insert(c).second)
                throw std::invalid_argument("duplicate symbol name '" + c + "'");
        }
    }

    bool operator==(const Signature& o) const {
        if (constants != o.constants) return false;
        if (relations.size() != o.relations.size()) return false;
        for (size_t i = 0; i < relations.size(); ++i)
            if (relations[i].name != o.relations[i].name ||
                relations[i].arity != o.relations[i].arity)
                return false;
        return true;
    }
};

} // namespace infgen
