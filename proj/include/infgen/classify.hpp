#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "infgen/formula.hpp"

namespace infgen {

enum class QuantifierClass { Delta0, Sigma1, Pi2, Other };

inline const char* to_string(QuantifierClass c) {
    switch (c) {
        case QuantifierClass::Delta0: return "Delta0";
        case QuantifierClass::Sigma1: return "Sigma1";
        case QuantifierClass::Pi2: return "Pi2";
        case QuantifierClass::Other: return "Other";
    }
    return "?";
}

namespace detail {

// Prenex-class lattice. A formula's achievable prefix shapes (over all
// quantifier-pull orders) are tracked as a bitmask over the two-alternation
// patterns: "" (Δ₀), E* (Σ₁), A* (Π₁), E*A* (Σ₂), A*E* (Π₂). Anything needing
// three alternations is dropped — it can only classify as Other.
enum PrenexMask : unsigned {
    PM_D = 1u,   // quantifier free
    PM_S1 = 2u,  // ∃*
    PM_P1 = 4u,  // ∀*
    PM_S2 = 8u,  // ∃*∀*
    PM_P2 = 16u, // ∀*∃*
};

inline unsigned pm_dual(unsigned m) {
    unsigned out = 0;
    if (m & PM_D) out |= PM_D;
    if (m & PM_S1) out |= PM_P1;
    if (m & PM_P1) out |= PM_S1;
    if (m & PM_S2) out |= PM_P2;
    if (m & PM_P2) out |= PM_S2;
    return out;
}

inline unsigned pm_exists(unsigned m) {
    unsigned out = 0;
    if (m & (PM_D | PM_S1)) out |= PM_S1;
    if (m & (PM_P1 | PM_S2)) out |= PM_S2;
    // ∃ over ∀*∃* needs three blocks; dropped
    return out;
}

// pattern strings for each mask bit, used to precompute the merge table
inline const char* pm_pattern(int bit_index) {
    switch (bit_index) {
        case 0: return "";
        case 1: return "E";
        case 2: return "A";
        case 3: return "EA";
        case 4: return "AE";
    }
    return "";
}

inline unsigned pm_of_pattern(const std::string& p) {
    // collapse runs first
    std::string q;
    for (char c : p)
        if (q.empty() || q.back() != c) q.push_back(c);
    if (q.empty()) return PM_D;
    if (q == "E") return PM_S1;
    if (q == "A") return PM_P1;
    if (q == "EA") return PM_S2;
    if (q == "AE") return PM_P2;
    return 0; // three or more alternations
}

inline void pm_shuffles(const std::string& a, const std::string& b, std::string& cur,
                        size_t i, size_t j, unsigned& acc) {
    if (i == a.size() && j == b.size()) {
        acc |= pm_of_pattern(cur);
        return;
    }
    if (i < a.size()) {
        cur.push_back(a[i]);
        pm_shuffles(a, b, cur, i + 1, j, acc);
        cur.pop_back();
    }
    if (j < b.size()) {
        cur.push_back(b[j]);
        pm_shuffles(a, b, cur, i, j + 1, acc);
        cur.pop_back();
    }
}

// merge table for ∧/∨: all order-preserving interleavings of the two prefixes
inline unsigned pm_merge(unsigned m1, unsigned m2) {
    static const auto table = [] {
        std::array<std::array<unsigned, 5>, 5> t{};
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                std::string cur;
                unsigned acc = 0;
                pm_shuffles(pm_pattern(i), pm_pattern(j), cur, 0, 0, acc);
                t[static_cast<size_t>(i)][static_cast<size_t>(j)] = acc;
            }
        return t;
    }();
    unsigned out = 0;
    for (int i = 0; i < 5; ++i)
        if (m1 & (1u << i))
            for (int j = 0; j < 5; ++j)
                if (m2 & (1u << j)) out |= table[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return out;
}

inline unsigned prenex_mask(const Formula& f) {
    switch (f.kind) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
            return PM_D;
        case FormulaKind::Not:
            return pm_dual(prenex_mask(*f.left));
        case FormulaKind::And:
        case FormulaKind::Or:
            return pm_merge(prenex_mask(*f.left), prenex_mask(*f.right));
        case FormulaKind::Exists:
            return pm_exists(prenex_mask(*f.left));
    }
    return 0;
}

} // namespace detail

// Syntactic quantifier-prefix classification of a sentence. Δ₀ if quantifier
// free, Σ₁ if some prenexing is ∃*-over-Δ₀, Π₂ if some prenexing is ∀*∃*,
// Other otherwise. Throws on free variables.
inline QuantifierClass classify(const Formula& f) {
    if (!is_sentence(f))
        throw std::invalid_argument("classify: formula has free variables");
    unsigned m = detail::prenex_mask(f);
    if (m & detail::PM_D) return QuantifierClass::Delta0;
    if (m & detail::PM_S1) return QuantifierClass::Sigma1;
    if (m & (detail::PM_P1 | detail::PM_P2)) return QuantifierClass::Pi2;
    return QuantifierClass::Other;
}

} // namespace infgen
