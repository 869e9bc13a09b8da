#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "infgen/rng.hpp"

namespace infgen {

struct DepthExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FamilyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MutualGenericityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- conditions -------------------------------------------------------------

// Add(ω,1) condition: a finite binary sequence; q <= p iff q end-extends p.
struct Condition {
    std::vector<uint8_t> bits;

    bool extends(const Condition& p) const {
        if (p.bits.size() > bits.size()) return false;
        return std::equal(p.bits.begin(), p.bits.end(), bits.begin());
    }
};

inline Condition condition_from_string(const std::string& s) {
    Condition c;
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw FamilyError("condition strings are over {0,1}");
        c.bits.push_back(ch == '1');
    }
    return c;
}

inline std::string to_string(const Condition& c) {
    std::string s;
    for (uint8_t b : c.bits) s += b ? '1' : '0';
    return s;
}

// Add(ω,ω) condition: a finite partial map (slice, position) -> bit;
// q <= p iff q's mapping extends p's.
struct ProductCondition {
    std::map<std::pair<uint32_t, uint32_t>, uint8_t> entries;

    bool extends(const ProductCondition& p) const {
        for (const auto& [pos, bit] : p.entries) {
            auto it = entries.find(pos);
            if (it == entries.end() || it->second != bit) return false;
        }
        return true;
    }

    uint32_t max_slice() const {
        uint32_t m = 0;
        for (const auto& [pos, bit] : entries) m = std::max(m, pos.first);
        return m;
    }
};

// ---- dense families -----------------------------------------------------------
//
// decide(i) / decide(n,i): conditions defined at the position; pattern(w@m) /
// pattern(n,w@m): conditions containing the word at some start >= m; explicit
// lists are validated for density and openness up to their working depth. All
// built-in kinds are open: supersets of members stay members.

struct DenseFamily {
    enum class Kind { DecideSingle, DecideProduct, PatternSingle, PatternProduct, List };

    Kind kind = Kind::DecideSingle;
    uint32_t slice = 0;
    uint32_t position = 0;
    std::vector<uint8_t> word;
    uint32_t min_position = 0;
    std::vector<Condition> members; // List
    std::string spec;

    bool is_product() const {
        return kind == Kind::DecideProduct || kind == Kind::PatternProduct;
    }

    bool contains(const Condition& p) const {
        switch (kind) {
            case Kind::DecideSingle: return p.bits.size() > position;
            case Kind::PatternSingle: return find_word(p.bits, min_position).has_value();
            case Kind::List:
                for (const auto& m : members)
                    if (m.bits == p.bits) return true;
                return false;
            default: throw FamilyError("product family applied to a single condition");
        }
    }

    bool contains(const ProductCondition& p) const {
        switch (kind) {
            case Kind::DecideProduct: return p.entries.count({slice, position}) != 0;
            case Kind::PatternProduct: {
                // fully defined occurrence at some start >= min_position
                uint32_t hi = 0;
                for (const auto& [pos, bit] : p.entries)
                    if (pos.first == slice) hi = std::max(hi, pos.second + 1);
                if (hi < word.size()) return false;
                for (uint32_t s = min_position; s + word.size() <= hi; ++s) {
                    bool ok = true;
                    for (size_t t = 0; t < word.size() && ok; ++t) {
                        auto it = p.entries.find({slice, s + static_cast<uint32_t>(t)});
                        ok = it != p.entries.end() && it->second == word[t];
                    }
                    if (ok) return true;
                }
                return false;
            }
            default: throw FamilyError("single-real family applied to a product condition");
        }
    }

    // the family's constraint read within one slice: decide means "defined at
    // the position", pattern means "word occurs at some start >= min"
    bool met_by_slice_prefix(const std::vector<uint8_t>& bits) const {
        switch (kind) {
            case Kind::DecideSingle:
            case Kind::DecideProduct: return bits.size() > position;
            case Kind::PatternSingle:
            case Kind::PatternProduct: return find_word(bits, min_position).has_value();
            case Kind::List:
                for (const auto& m : members)
                    if (m.bits == bits) return true;
                return false;
        }
        return false;
    }

    static std::optional<uint32_t> find_word(const std::vector<uint8_t>& bits,
                                             uint32_t min_pos,
                                             const std::vector<uint8_t>& w) {
        if (w.empty() || bits.size() < w.size()) return std::nullopt;
        for (uint32_t s = min_pos; s + w.size() <= bits.size(); ++s)
            if (std::equal(w.begin(), w.end(), bits.begin() + s)) return s;
        return std::nullopt;
    }

    std::optional<uint32_t> find_word(const std::vector<uint8_t>& bits, uint32_t min_pos) const {
        return find_word(bits, min_pos, word);
    }
};

namespace detail {

inline void validate_list_family(const DenseFamily& f) {
    if (f.members.empty()) throw FamilyError("explicit family is empty");
    size_t wd = 0;
    for (const auto& m : f.members) wd = std::max(wd, m.bits.size());
    if (wd > 12)
        throw FamilyError("explicit family too deep to validate (working depth > 12)");
    std::set<std::vector<uint8_t>> set;
    for (const auto& m : f.members) set.insert(m.bits);
    auto member_below = [&](const std::vector<uint8_t>& cur) {
        for (const auto& m : f.members) {
            if (m.bits.size() < cur.size()) continue;
            if (std::equal(cur.begin(), cur.end(), m.bits.begin())) return true;
        }
        return false;
    };
    // density: every condition up to the working depth has a member below it
    std::vector<std::vector<uint8_t>> frontier{{}};
    for (size_t len = 0; len <= wd; ++len) {
        std::vector<std::vector<uint8_t>> next;
        for (auto& cand : frontier) {
            if (!member_below(cand))
                throw FamilyError("explicit family not dense below '" +
                                  to_string(Condition{cand}) + "'");
            if (cand.size() < wd)
                for (uint8_t b : {uint8_t{0}, uint8_t{1}}) {
                    auto e = cand;
                    e.push_back(b);
                    next.push_back(std::move(e));
                }
        }
        frontier = std::move(next);
    }
    // openness: supersets of members within the working depth are members
    for (const auto& m : f.members) {
        std::vector<std::vector<uint8_t>> ext{m.bits};
        while (!ext.empty()) {
            auto cur = ext.back();
            ext.pop_back();
            if (cur.size() >= wd) continue;
            for (uint8_t b : {uint8_t{0}, uint8_t{1}}) {
                auto e = cur;
                e.push_back(b);
                if (!set.count(e))
                    throw FamilyError("explicit family not open: missing '" +
                                      to_string(Condition{e}) + "'");
                ext.push_back(std::move(e));
            }
        }
    }
}

inline std::vector<uint8_t> parse_word(const std::string& w, const std::string& spec) {
    if (w.empty()) throw FamilyError("empty pattern word in '" + spec + "'");
    std::vector<uint8_t> out;
    for (char c : w) {
        if (c != '0' && c != '1')
            throw FamilyError("pattern word must be over {0,1} in '" + spec + "'");
        out.push_back(c == '1');
    }
    return out;
}

inline uint32_t parse_nat(const std::string& s, const std::string& spec) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw FamilyError("expected a number in '" + spec + "'");
    return static_cast<uint32_t>(std::stoul(s));
}

} // namespace detail

// Parses one family spec: decide:i | decide:n,i | pattern:w@m | pattern:n,w@m
// | list:<file with a JSON array of bit strings>. `read_file` supplies the
// list payload (tests inject it; the CLI reads from disk).
inline DenseFamily parse_family(
    const std::string& spec,
    const std::function<std::vector<std::string>(const std::string&)>& read_list = {}) {
    DenseFamily f;
    f.spec = spec;
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw FamilyError("family spec '" + spec + "' has no kind");
    std::string kind = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    if (kind == "decide") {
        auto comma = rest.find(',');
        if (comma == std::string::npos) {
            f.kind = DenseFamily::Kind::DecideSingle;
            f.position = detail::parse_nat(rest, spec);
        } else {
            f.kind = DenseFamily::Kind::DecideProduct;
            f.slice = detail::parse_nat(rest.substr(0, comma), spec);
            f.position = detail::parse_nat(rest.substr(comma + 1), spec);
        }
        return f;
    }
    if (kind == "pattern") {
        auto at = rest.find('@');
        if (at == std::string::npos) throw FamilyError("pattern spec '" + spec + "' needs @min");
        f.min_position = detail::parse_nat(rest.substr(at + 1), spec);
        std::string head = rest.substr(0, at);
        auto comma = head.find(',');
        if (comma == std::string::npos) {
            f.kind = DenseFamily::Kind::PatternSingle;
            f.word = detail::parse_word(head, spec);
        } else {
            f.kind = DenseFamily::Kind::PatternProduct;
            f.slice = detail::parse_nat(head.substr(0, comma), spec);
            f.word = detail::parse_word(head.substr(comma + 1), spec);
        }
        return f;
    }
    if (kind == "list") {
        if (!read_list) throw FamilyError("list families are not available here");
        f.kind = DenseFamily::Kind::List;
        for (const auto& s : read_list(rest)) f.members.push_back(condition_from_string(s));
        detail::validate_list_family(f);
        return f;
    }
    throw FamilyError("unknown family kind '" + kind + "'");
}

// Semicolon-separated family specs.
inline std::vector<DenseFamily> parse_families(
    const std::string& text,
    const std::function<std::vector<std::string>(const std::string&)>& read_list = {}) {
    std::vector<DenseFamily> out;
    size_t start = 0;
    while (start <= text.size()) {
        auto semi = text.find(';', start);
        std::string one =
            semi == std::string::npos ? text.substr(start) : text.substr(start, semi - start);
        if (!one.empty()) out.push_back(parse_family(one, read_list));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    return out;
}

// ---- meets ----------------------------------------------------------------------

// Returns q <= p with q in the family, following the zero-fill policy: fill
// required positions with 0; place pattern words min_position past the
// current end. Members are returned unchanged.
inline Condition extend_to_meet(const Condition& p, const DenseFamily& f, uint32_t depth) {
    switch (f.kind) {
        case DenseFamily::Kind::DecideSingle: {
            if (f.contains(p)) return p;
            if (f.position + 1 > depth)
                throw DepthExhausted("decide:" + std::to_string(f.position) +
                                     " needs depth " + std::to_string(f.position + 1));
            Condition q = p;
            q.bits.resize(f.position + 1, 0);
            return q;
        }
        case DenseFamily::Kind::PatternSingle: {
            if (f.contains(p)) return p;
            Condition q = p;
            size_t start = p.bits.size() + f.min_position;
            if (start + f.word.size() > depth)
                throw DepthExhausted("pattern placement at " + std::to_string(start) +
                                     " exceeds depth " + std::to_string(depth));
            q.bits.resize(start, 0);
            q.bits.insert(q.bits.end(), f.word.begin(), f.word.end());
            return q;
        }
        case DenseFamily::Kind::List: {
            for (const auto& m : f.members)
                if (m.extends(p)) {
                    if (m.bits.size() > depth)
                        throw DepthExhausted("list member exceeds depth");
                    return m;
                }
            throw DepthExhausted("no member of explicit family below the condition");
        }
        default:
            throw FamilyError("product family in a single-real meet");
    }
}

inline ProductCondition extend_to_meet(const ProductCondition& p, const DenseFamily& f,
                                       uint32_t depth) {
    switch (f.kind) {
        case DenseFamily::Kind::DecideProduct: {
            if (f.contains(p)) return p;
            if (f.position + 1 > depth)
                throw DepthExhausted("decide position beyond depth");
            ProductCondition q = p;
            q.entries[{f.slice, f.position}] = 0;
            return q;
        }
        case DenseFamily::Kind::PatternProduct: {
            if (f.contains(p)) return p;
            uint32_t len = 0;
            for (const auto& [pos, bit] : p.entries)
                if (pos.first == f.slice) len = std::max(len, pos.second + 1);
            uint32_t start = len + f.min_position;
            if (start + f.word.size() > depth)
                throw DepthExhausted("pattern placement exceeds depth");
            ProductCondition q = p;
            for (size_t t = 0; t < f.word.size(); ++t)
                q.entries[{f.slice, start + static_cast<uint32_t>(t)}] = f.word[t];
            return q;
        }
        default:
            throw FamilyError("single-real family in a product meet");
    }
}

// ---- generic reals ------------------------------------------------------------------

struct RealApprox {
    std::vector<uint8_t> bits; // length exactly the working depth
    struct Witness {
        std::string family;
        uint32_t prefix_len; // bits[0..prefix_len) already meets the family
    };
    std::vector<Witness> provenance;
};

inline std::string to_string(const RealApprox& r) { return to_string(Condition{r.bits}); }

// Meets the families in order starting from the empty condition, then
// zero-fills to the working depth.
inline RealApprox build_generic_real(const std::vector<DenseFamily>& families,
                                     uint32_t depth) {
    Condition p;
    RealApprox out;
    for (const auto& f : families) {
        if (f.is_product())
            throw FamilyError("build_generic_real takes single-real families");
        p = extend_to_meet(p, f, depth);
        out.provenance.push_back({f.spec, static_cast<uint32_t>(p.bits.size())});
    }
    out.bits = p.bits;
    out.bits.resize(depth, 0);
    return out;
}

// Every recorded witness must replay: the stated prefix of the real already
// meets the named family (read within the real's own slice).
inline bool witnesses_replay(const RealApprox& r, const std::vector<DenseFamily>& families) {
    for (const auto& w : r.provenance) {
        if (w.prefix_len > r.bits.size()) return false;
        const DenseFamily* fam = nullptr;
        for (const auto& f : families)
            if (f.spec == w.family) fam = &f;
        if (!fam) return false;
        std::vector<uint8_t> prefix(r.bits.begin(), r.bits.begin() + w.prefix_len);
        if (!fam->met_by_slice_prefix(prefix)) return false;
    }
    return true;
}

// Mutual genericity by construction: one Add(ω,ω) condition meets every
// product family, free positions of the first k slices are seeded-random
// filled, and the slices are returned. The product of the outputs meets every
// family confined to slices < k; families on higher slices are met inside the
// construction and impose nothing on the outputs.
inline std::vector<RealApprox> build_mutual_tower(uint32_t k,
                                                  const std::vector<DenseFamily>& families,
                                                  uint32_t depth, uint64_t seed) {
    if (k < 1) throw FamilyError("tower needs k >= 1");
    ProductCondition p;
    for (const auto& f : families) {
        if (!f.is_product()) throw FamilyError("build_mutual_tower takes product families");
        p = extend_to_meet(p, f, depth);
    }
    SplitMix64 rng(seed);
    std::vector<RealApprox> out(k);
    for (uint32_t n = 0; n < k; ++n) {
        out[n].bits.resize(depth, 0);
        for (uint32_t i = 0; i < depth; ++i) {
            auto it = p.entries.find({n, i});
            out[n].bits[i] = it != p.entries.end() ? it->second : static_cast<uint8_t>(rng.bit());
        }
    }
    // per-slice witnesses for the families the output actually constrains
    for (size_t fi = 0; fi < families.size(); ++fi) {
        const auto& f = families[fi];
        if (f.slice >= k) continue;
        uint32_t len = 0;
        if (f.kind == DenseFamily::Kind::DecideProduct) {
            len = f.position + 1;
        } else {
            auto s = f.find_word(out[f.slice].bits, f.min_position);
            if (!s) continue; // cannot happen: the meet placed the word
            len = *s + static_cast<uint32_t>(f.word.size());
        }
        out[f.slice].provenance.push_back({f.spec, len});
    }
    return out;
}

// ---- amalgamation -------------------------------------------------------------------

struct AmalgamationCertificate {
    uint32_t k = 0;
    uint32_t depth = 0;
    uint64_t seed = 0;
    std::vector<std::string> family_specs;
    std::vector<std::vector<uint8_t>> inputs;   // the c_n, echoed
    std::vector<std::vector<uint8_t>> d_slices; // the combined real d
    std::vector<std::vector<uint32_t>> diffs;   // per input slice: positions changed
    std::vector<ProductCondition> p_chain;      // p_n, one per stage
    std::vector<std::vector<uint8_t>> aux;      // auxiliary real e per stage
    std::string note =
        "joint genericity desk-scale reading: d meets every supplied family and each "
        "input is recoverable from its slice of d up to the recorded finite diff";
};

namespace detail {

// stage-n auxiliary real: start from the committed slice-n bits, meet the
// slice-n projections of the remaining families, fill the rest from the seed
inline std::vector<uint8_t> stage_aux(const ProductCondition& committed, uint32_t slice,
                                      const std::vector<DenseFamily>& families,
                                      size_t first_remaining, uint32_t depth,
                                      SplitMix64& rng) {
    std::map<uint32_t, uint8_t> part;
    for (const auto& [pos, bit] : committed.entries)
        if (pos.first == slice) part[pos.second] = bit;
    for (size_t m = first_remaining; m < families.size(); ++m) {
        const auto& f = families[m];
        if (f.slice != slice) continue;
        if (f.kind == DenseFamily::Kind::DecideProduct) {
            if (f.position + 1 > depth) throw DepthExhausted("decide position beyond depth");
            part.emplace(f.position, 0);
        } else {
            // already met?
            bool met = false;
            uint32_t hi = part.empty() ? 0 : part.rbegin()->first + 1;
            for (uint32_t s = f.min_position; !met && s + f.word.size() <= hi; ++s) {
                bool ok = true;
                for (size_t t = 0; t < f.word.size() && ok; ++t) {
                    auto it = part.find(s + static_cast<uint32_t>(t));
                    ok = it != part.end() && it->second == f.word[t];
                }
                met = ok;
            }
            if (met) continue;
            uint32_t len = part.empty() ? 0 : part.rbegin()->first + 1;
            uint32_t start = len + f.min_position;
            if (start + f.word.size() > depth)
                throw DepthExhausted("pattern placement exceeds depth");
            for (size_t t = 0; t < f.word.size(); ++t)
                part[start + static_cast<uint32_t>(t)] = f.word[t];
        }
    }
    std::vector<uint8_t> e(depth, 0);
    for (uint32_t i = 0; i < depth; ++i) {
        auto it = part.find(i);
        e[i] = it != part.end() ? it->second : static_cast<uint8_t>(rng.bit());
    }
    return e;
}

} // namespace detail

// Combines mutually generic input reals into one product real d meeting
// every supplied family, changing each input only finitely (exactly where
// the condition chain commits its slice). Stage n: commit p_{n-1}, pick the
// stage auxiliary e, find the canonical member of family n below
// [fixed slices | e | commitments], take the union, fix slice n.
inline AmalgamationCertificate amalgamate(const std::vector<RealApprox>& inputs,
                                          const std::vector<DenseFamily>& families,
                                          uint32_t depth, uint64_t seed) {
    const uint32_t k = static_cast<uint32_t>(inputs.size());
    const uint32_t K = static_cast<uint32_t>(families.size());
    for (const auto& f : families)
        if (!f.is_product()) throw FamilyError("amalgamate takes product families");
    for (const auto& c : inputs)
        if (c.bits.size() != depth)
            throw FamilyError("input reals must have length exactly the working depth");

    // mutual-genericity precondition: the input product must already meet
    // every family confined to the input slices
    for (const auto& f : families) {
        if (f.slice >= k) continue;
        if (f.kind == DenseFamily::Kind::DecideProduct) {
            if (f.position >= depth)
                throw DepthExhausted("family '" + f.spec + "' lies beyond the depth");
            continue; // inputs are total to depth
        }
        if (!f.find_word(inputs[f.slice].bits, f.min_position))
            throw MutualGenericityViolation(
                "inputs are not mutually generic for '" + f.spec +
                "': pattern not realized in input slice " + std::to_string(f.slice));
    }

    AmalgamationCertificate cert;
    cert.k = k;
    cert.depth = depth;
    cert.seed = seed;
    for (const auto& f : families) cert.family_specs.push_back(f.spec);
    for (const auto& c : inputs) cert.inputs.push_back(c.bits);
    cert.diffs.resize(k);

    const uint32_t stages = std::max(K, k);
    SplitMix64 rng(seed);
    ProductCondition chain; // p_{n-1}
    std::vector<std::vector<uint8_t>> fixed; // d_0 .. d_{n-1}

    auto value_at = [&](uint32_t a, uint32_t i,
                        const std::vector<uint8_t>& e, uint32_t n) -> std::optional<uint8_t> {
        if (a < n && a < fixed.size()) return fixed[a][i];
        if (a == n) return e[i];
        auto it = chain.entries.find({a, i});
        if (it != chain.entries.end()) return it->second;
        return std::nullopt;
    };

    for (uint32_t n = 0; n < stages; ++n) {
        std::vector<uint8_t> e =
            detail::stage_aux(chain, n, families, n, depth, rng);
        cert.aux.push_back(e);

        if (n < K) {
            const DenseFamily& fam = families[n];
            ProductCondition add;
            if (fam.kind == DenseFamily::Kind::DecideProduct) {
                if (fam.position >= depth) throw DepthExhausted("decide beyond depth");
                auto v = value_at(fam.slice, fam.position, e, n);
                add.entries[{fam.slice, fam.position}] = v.value_or(0);
            } else {
                uint32_t a = fam.slice;
                std::optional<uint32_t> start;
                if (a < n && a < fixed.size()) {
                    start = fam.find_word(fixed[a], fam.min_position);
                    if (!start)
                        throw MutualGenericityViolation(
                            "pattern '" + fam.spec + "' absent from fixed slice " +
                            std::to_string(a));
                } else if (a == n) {
                    start = fam.find_word(e, fam.min_position);
                    if (!start)
                        throw DepthExhausted("auxiliary real misses pattern '" + fam.spec + "'");
                } else {
                    // future slice: least compatible placement
                    for (uint32_t s = fam.min_position; s + fam.word.size() <= depth; ++s) {
                        bool ok = true;
                        for (size_t t = 0; t < fam.word.size() && ok; ++t) {
                            auto it = chain.entries.find(
                                {a, s + static_cast<uint32_t>(t)});
                            ok = it == chain.entries.end() || it->second == fam.word[t];
                        }
                        if (ok) { start = s; break; }
                    }
                    if (!start)
                        throw DepthExhausted("no compatible placement for '" + fam.spec + "'");
                }
                for (size_t t = 0; t < fam.word.size(); ++t)
                    add.entries[{a, *start + static_cast<uint32_t>(t)}] = fam.word[t];
            }
            for (const auto& [pos, bit] : add.entries) chain.entries[pos] = bit;
        }
        cert.p_chain.push_back(chain);

        // fix slice n
        std::vector<uint8_t> d = n < k ? inputs[n].bits : e;
        for (const auto& [pos, bit] : chain.entries)
            if (pos.first == n && pos.second < depth) d[pos.second] = bit;
        if (n < k)
            for (uint32_t i = 0; i < depth; ++i)
                if (d[i] != inputs[n].bits[i]) cert.diffs[n].push_back(i);
        fixed.push_back(std::move(d));
    }

    // assemble d: fixed slices plus any chain commitments on higher slices
    uint32_t top = stages;
    if (!chain.entries.empty()) top = std::max(top, chain.max_slice() + 1);
    cert.d_slices = fixed;
    cert.d_slices.resize(top, std::vector<uint8_t>(depth, 0));
    for (const auto& [pos, bit] : chain.entries)
        if (pos.first >= stages) cert.d_slices[pos.first][pos.second] = bit;
    return cert;
}

struct VerifyResult {
    bool ok = true;
    std::string first_failure;
};

// Replays a certificate: chain membership and growth, d extending the chain,
// and the per-slice diff sets being exactly right. Failures name the first
// check that breaks.
inline VerifyResult verify_amalgamation(const AmalgamationCertificate& cert,
                                        const std::vector<DenseFamily>& families) {
    auto fail = [](const std::string& m) { return VerifyResult{false, m}; };
    const uint32_t K = static_cast<uint32_t>(families.size());
    if (cert.p_chain.size() < K) return fail("chain shorter than the family list");
    for (uint32_t n = 0; n < K; ++n)
        if (!families[n].contains(cert.p_chain[n]))
            return fail("p_" + std::to_string(n) + " is not in family " + std::to_string(n) +
                        " ('" + families[n].spec + "')");
    for (size_t n = 1; n < cert.p_chain.size(); ++n)
        if (!cert.p_chain[n].extends(cert.p_chain[n - 1]))
            return fail("chain not increasing at p_" + std::to_string(n));
    for (size_t n = 0; n < cert.p_chain.size(); ++n)
        for (const auto& [pos, bit] : cert.p_chain[n].entries) {
            if (pos.first >= cert.d_slices.size() || pos.second >= cert.depth)
                return fail("p_" + std::to_string(n) + " commits outside d");
            if (cert.d_slices[pos.first][pos.second] != bit)
                return fail("d does not extend p_" + std::to_string(n) + " at slice " +
                            std::to_string(pos.first) + ", position " +
                            std::to_string(pos.second));
        }
    if (cert.inputs.size() != cert.diffs.size()) return fail("diff list length mismatch");
    for (size_t n = 0; n < cert.inputs.size(); ++n) {
        if (n >= cert.d_slices.size()) return fail("input slice missing from d");
        std::vector<uint32_t> diff;
        for (uint32_t i = 0; i < cert.depth; ++i)
            if (cert.d_slices[n][i] != cert.inputs[n][i]) diff.push_back(i);
        if (diff != cert.diffs[n])
            return fail("recorded diff for slice " + std::to_string(n) +
                        " does not match the replay");
    }
    // d itself meets every family
    for (const auto& f : families) {
        if (f.slice >= cert.d_slices.size()) return fail("family slice missing from d");
        const auto& bits = cert.d_slices[f.slice];
        if (f.kind == DenseFamily::Kind::DecideProduct) {
            if (f.position >= cert.depth) return fail("family position beyond depth");
        } else if (!f.find_word(bits, f.min_position)) {
            return fail("d does not meet '" + f.spec + "'");
        }
    }
    return {};
}

// ---- product/single transport ---------------------------------------------------------

// Cantor pairing realizing Add(ω,ω) ≅ Add(ω,1).
inline uint64_t pair_index(uint64_t n, uint64_t i) { return (n + i) * (n + i + 1) / 2 + n; }

inline std::pair<uint64_t, uint64_t> unpair_index(uint64_t z) {
    uint64_t w = 0;
    while ((w + 1) * (w + 2) / 2 <= z) ++w;
    uint64_t n = z - w * (w + 1) / 2;
    return {n, w - n};
}

// partial single-real view of a product condition
inline std::map<uint64_t, uint8_t> to_single_map(const ProductCondition& p) {
    std::map<uint64_t, uint8_t> out;
    for (const auto& [pos, bit] : p.entries) out[pair_index(pos.first, pos.second)] = bit;
    return out;
}

inline ProductCondition to_product(const std::map<uint64_t, uint8_t>& m) {
    ProductCondition p;
    for (const auto& [z, bit] : m) {
        auto [n, i] = unpair_index(z);
        p.entries[{static_cast<uint32_t>(n), static_cast<uint32_t>(i)}] = bit;
    }
    return p;
}

inline ProductCondition to_product(const Condition& c) {
    std::map<uint64_t, uint8_t> m;
    for (size_t j = 0; j < c.bits.size(); ++j) m[j] = c.bits[j];
    return to_product(m);
}

inline bool map_extends(const std::map<uint64_t, uint8_t>& q,
                        const std::map<uint64_t, uint8_t>& p) {
    for (const auto& [k, v] : p) {
        auto it = q.find(k);
        if (it == q.end() || it->second != v) return false;
    }
    return true;
}

} // namespace infgen
