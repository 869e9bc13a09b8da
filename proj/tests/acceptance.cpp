// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Budgets, depths and grids are pinned here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "infgen/cohen.hpp"
#include "infgen/modal.hpp"
#include "infgen/robinson.hpp"
#include "infgen/suites.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace infgen;

namespace {

constexpr int kBudget = 9;

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& msg) {
        ok = false;
        if (detail.empty()) detail = msg;
    }
    void note(const std::string& msg) {
        if (detail.empty()) detail = msg;
    }
};

using Criterion = std::function<void(Outcome&)>;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// contexts are expensive to fill at budget 9; build them once and share
std::vector<fixtures::NamedSystem>& corpus() {
    static std::vector<fixtures::NamedSystem> c = fixtures::corpus();
    return c;
}

std::vector<ForcingContext>& contexts() {
    static std::vector<ForcingContext> ctxs = [] {
        std::vector<ForcingContext> v;
        v.reserve(corpus().size());
        for (const auto& ns : corpus()) v.emplace_back(ns.sys);
        return v;
    }();
    return ctxs;
}

// ---- criteria -------------------------------------------------------------

void criterion_forcing_equals_truth(Outcome& o) {
    if (corpus().size() < 20) o.fail("corpus has fewer than 20 systems");
    size_t generic_nodes = 0, checked = 0;
    for (size_t s = 0; s < corpus().size(); ++s) {
        ForcingContext& ctx = contexts()[s];
        for (size_t n = 0; n < ctx.sys.nodes.size(); ++n) {
            auto rep = is_generic(ctx, static_cast<int>(n), kBudget, 0);
            if (!rep.generic) continue;
            ++generic_nodes;
            for (const CNode* phi : ctx.node_pool(static_cast<int>(n), kBudget)) {
                ++checked;
                if (ctx.forces(static_cast<int>(n), phi) != ctx.sat(static_cast<int>(n), phi)) {
                    o.fail(corpus()[s].name + "/" + ctx.sys.nodes[n].id + ": " +
                           ctx.render_at(phi, static_cast<int>(n)));
                    return;
                }
            }
        }
    }
    if (generic_nodes == 0) o.fail("no budget-generic node in the corpus");
    o.note(std::to_string(generic_nodes) + " generic nodes, " + std::to_string(checked) +
           " sentences");
}

void criterion_facts(Outcome& o) {
    size_t checked = 0;
    for (size_t s = 0; s < corpus().size(); ++s) {
        auto rep = suite_facts(contexts()[s], kBudget);
        checked += rep.checks;
        if (!rep.passed) {
            o.fail(corpus()[s].name + ": " + rep.violations.front());
            return;
        }
    }
    o.note(std::to_string(checked) + " (node, sentence) pairs");
}

void criterion_reach_generic(Outcome& o) {
    size_t directed = 0, walks = 0;
    for (size_t s = 0; s < corpus().size(); ++s) {
        if (!corpus()[s].sys.pairwise_directed()) continue;
        ++directed;
        ForcingContext& ctx = contexts()[s];
        int max_universe = 0;
        for (const auto& n : ctx.sys.nodes) max_universe = std::max(max_universe, n.size());
        size_t pool_bound = ctx.pool(max_universe, kBudget).size();
        for (const auto& node : ctx.sys.nodes) {
            ++walks;
            GenericPath path;
            try {
                path = build_generic(ctx, node.id, kBudget, pool_bound);
            } catch (const std::exception& e) {
                o.fail(corpus()[s].name + "/" + node.id + ": " + e.what());
                return;
            }
            if (path.steps.size() > pool_bound) {
                o.fail(corpus()[s].name + "/" + node.id + ": walk exceeds the sentence pool");
                return;
            }
            if (!is_generic(ctx, path.final_node, kBudget, 0).generic) {
                o.fail(corpus()[s].name + "/" + node.id + ": endpoint " + path.final_node +
                       " is not generic");
                return;
            }
        }
    }
    if (directed < 5) o.fail("fewer than 5 directed fixture systems");
    o.note(std::to_string(walks) + " walks over " + std::to_string(directed) +
           " directed systems");
}

void criterion_geneq(Outcome& o) {
    size_t pairs = 0;
    for (size_t s = 0; s < corpus().size(); ++s) {
        auto rep = suite_geneq(contexts()[s], kBudget);
        pairs += rep.checks;
        if (!rep.passed) {
            o.fail(corpus()[s].name + ": " + rep.violations.front());
            return;
        }
    }
    o.note(std::to_string(pairs) + " generic pairs");
}

void criterion_excomp_pi2(Outcome& o) {
    size_t checks = 0;
    for (size_t s = 0; s < corpus().size(); ++s) {
        auto ex = suite_excomp(contexts()[s], kBudget);
        auto pi = suite_pi2(contexts()[s], kBudget);
        checks += ex.checks + pi.checks;
        if (!ex.passed) {
            o.fail(corpus()[s].name + ": " + ex.violations.front());
            return;
        }
        if (!pi.passed) {
            o.fail(corpus()[s].name + ": " + pi.violations.front());
            return;
        }
    }
    o.note(std::to_string(checks) + " BFA reports and transfers");
}

void criterion_mp(Outcome& o) {
    for (size_t s = 0; s < corpus().size(); ++s) {
        auto rep = suite_mp(contexts()[s], kBudget);
        if (!rep.passed) {
            o.fail(corpus()[s].name + ": " + rep.violations.front());
            return;
        }
    }
    // the recorded failing instance: L1 in {L1, L2} with E x. E y. x < y
    for (size_t s = 0; s < corpus().size(); ++s) {
        if (corpus()[s].name != "lo12") continue;
        ForcingContext& ctx = contexts()[s];
        auto rep = check_modal_principle(ctx, "L1", Principle::MP, kBudget);
        if (rep.holds) {
            o.fail("MP unexpectedly holds at the non-generic L1");
            return;
        }
        auto phi = parse_formula("E x. E y. x < y", ctx.sys.sig);
        bool dia_box =
            modal_eval(ctx, "L1", ModalFormula{{ModalOp::Diamond, ModalOp::Box}, phi});
        bool truth = ctx.sat(ctx.sys.node_index("L1"), ctx.to_canon(*phi, 0));
        if (!dia_box || truth) {
            o.fail("(L1, E x. E y. x < y) is not the recorded MP violation");
            return;
        }
        o.note("all generics pass; (L1, E x. E y. x < y) violates MP in lo12");
        return;
    }
    o.fail("lo12 fixture missing");
}

void criterion_oracle(Outcome& o) {
    size_t checked = 0;
    for (size_t s = 0; s < corpus().size(); ++s) {
        auto rep = suite_oracle(contexts()[s], kBudget);
        checked += rep.checks;
        if (!rep.passed) {
            o.fail(corpus()[s].name + ": " + rep.violations.front());
            return;
        }
    }
    o.note(std::to_string(checked) + " pairs, memoized == naive on all");
}

// deterministic family list for one (k, K) cell; pattern families never sit
// at an index above their slice, so their meets never depend on random input
// content beyond the tower's own placements
std::vector<DenseFamily> grid_families(uint32_t k, uint32_t K, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<DenseFamily> fams;
    for (uint32_t j = 0; j < K; ++j) {
        uint32_t slice = static_cast<uint32_t>(rng.below(k + 3));
        bool pattern = slice >= j && rng.bit();
        if (pattern) {
            std::string w;
            uint64_t len = 1 + rng.below(3);
            for (uint64_t t = 0; t < len; ++t) w += rng.bit() ? '1' : '0';
            fams.push_back(parse_family("pattern:" + std::to_string(slice) + "," + w + "@" +
                                        std::to_string(rng.below(8))));
        } else {
            fams.push_back(parse_family("decide:" + std::to_string(slice) + "," +
                                        std::to_string(rng.below(48))));
        }
    }
    return fams;
}

void criterion_amalgamation_grid(Outcome& o) {
    double worst = 0;
    size_t configs = 0;
    for (uint32_t k = 1; k <= 5; ++k)
        for (uint32_t K = 1; K <= 32; ++K)
            for (uint32_t depth : {64u, 256u}) {
                auto t0 = std::chrono::steady_clock::now();
                uint64_t seed = 1000003ULL * k + 1009ULL * K + depth;
                auto fams = grid_families(k, K, seed);
                std::vector<RealApprox> tower;
                AmalgamationCertificate cert;
                try {
                    tower = build_mutual_tower(k, fams, depth, seed);
                    cert = amalgamate(tower, fams, depth, seed);
                } catch (const std::exception& e) {
                    o.fail("k=" + std::to_string(k) + " K=" + std::to_string(K) + " D=" +
                           std::to_string(depth) + ": " + e.what());
                    return;
                }
                auto v = verify_amalgamation(cert, fams);
                if (!v.ok) {
                    o.fail("k=" + std::to_string(k) + " K=" + std::to_string(K) + " D=" +
                           std::to_string(depth) + ": " + v.first_failure);
                    return;
                }
                // finite-modification bound: diffs only at chain commitments
                for (uint32_t n = 0; n < k; ++n) {
                    std::set<uint32_t> committed;
                    for (const auto& [pos, bit] : cert.p_chain.back().entries)
                        if (pos.first == n) committed.insert(pos.second);
                    if (cert.diffs[n].size() > committed.size()) {
                        o.fail("diff bound broken at slice " + std::to_string(n));
                        return;
                    }
                    for (uint32_t i : cert.diffs[n])
                        if (!committed.count(i)) {
                            o.fail("diff position " + std::to_string(i) +
                                   " not committed by the chain");
                            return;
                        }
                }
                worst = std::max(worst, seconds_since(t0));
                ++configs;
            }
    if (worst >= 10.0) {
        o.fail("a configuration took " + std::to_string(worst) + "s (target < 10s)");
        return;
    }
    std::ostringstream ss;
    ss.precision(3);
    ss << configs << " configs, worst " << std::fixed << worst << "s";
    o.note(ss.str());
}

void criterion_sigma_closed_and_pairing(Outcome& o) {
    const uint32_t depth = 512;
    for (uint32_t T = 1; T <= 8; ++T) {
        uint64_t seed = 77000 + T;
        auto fams = grid_families(T, 2 * T, seed);
        try {
            auto tower = build_mutual_tower(T, fams, depth, seed);
            auto cert = amalgamate(tower, fams, depth, seed);
            auto v1 = verify_amalgamation(cert, fams);
            if (!v1.ok) {
                o.fail("T=" + std::to_string(T) + " first pass: " + v1.first_failure);
                return;
            }
            // extend the tower by a fresh mutually generic real and repeat
            std::vector<RealApprox> extended;
            for (uint32_t i = 0; i < T; ++i)
                extended.push_back(RealApprox{cert.d_slices[i], {}});
            auto fresh = build_mutual_tower(T + 1, fams, depth, seed + 1);
            extended.push_back(fresh[T]);
            auto cert2 = amalgamate(extended, fams, depth, seed + 2);
            auto v2 = verify_amalgamation(cert2, fams);
            if (!v2.ok) {
                o.fail("T=" + std::to_string(T) + " second pass: " + v2.first_failure);
                return;
            }
        } catch (const std::exception& e) {
            o.fail("T=" + std::to_string(T) + ": " + e.what());
            return;
        }
    }
    // pairing transport: exhaustive on short sequences, sampled to depth 64
    for (uint32_t len = 0; len <= 10; ++len)
        for (uint32_t bits = 0; bits < (1u << len); ++bits) {
            Condition c;
            for (uint32_t i = 0; i < len; ++i) c.bits.push_back((bits >> i) & 1);
            Condition ext = c;
            ext.bits.push_back(1);
            if (!to_product(ext).extends(to_product(c)) ||
                to_product(c).extends(to_product(ext))) {
                o.fail("pairing breaks the order on short sequences");
                return;
            }
        }
    SplitMix64 rng(99);
    for (int t = 0; t < 4000; ++t) {
        ProductCondition p;
        for (uint64_t e = rng.below(10); e > 0; --e)
            p.entries[{static_cast<uint32_t>(rng.below(8)),
                       static_cast<uint32_t>(rng.below(64))}] =
                static_cast<uint8_t>(rng.bit());
        ProductCondition q = p;
        for (uint64_t e = rng.below(6); e > 0; --e)
            q.entries[{static_cast<uint32_t>(rng.below(8)),
                       static_cast<uint32_t>(rng.below(64))}] =
                static_cast<uint8_t>(rng.bit());
        if (map_extends(to_single_map(q), to_single_map(p)) != q.extends(p)) {
            o.fail("pairing transport disagrees with the product order");
            return;
        }
    }
    for (uint64_t n = 0; n < 8; ++n)
        for (uint64_t i = 0; i < 64; ++i)
            if (unpair_index(pair_index(n, i)) != std::make_pair(n, i)) {
                o.fail("pairing is not invertible");
                return;
            }
    o.note("towers of length <= 8 amalgamate twice at depth 512; order transport holds");
}

void criterion_parser(Outcome& o) {
    SplitMix64 rng(20260810);
    Signature sig{{{"R", 1}, {"<", 2}, {"S", 3}}, {"c", "d"}};
    int round_trips = 0, classified = 0;
    for (int i = 0; i < 2500 && round_trips < 1000; ++i) {
        auto f = oracles::random_formula(rng, sig, {"a", "b"}, 0,
                                         1 + static_cast<int>(rng.below(7)));
        auto g = parse_formula(render(*f, sig), sig);
        if (!struct_equal(*f, *g)) {
            o.fail("round trip broke on: " + render(*f, sig));
            return;
        }
        ++round_trips;
        if (!is_sentence(*f)) continue;
        ++classified;
        if (classify(*f) != oracles::classify(*f)) {
            o.fail("classification disagrees on: " + render(*f, sig));
            return;
        }
    }
    if (round_trips < 1000) {
        o.fail("generator produced fewer than 1000 formulas");
        return;
    }
    o.note("1000 round trips, " + std::to_string(classified) + " classified vs oracle");
}

} // namespace

int main() {
    struct Entry {
        const char* name;
        Criterion run;
        double limit_seconds; // 0 = unlimited
    };
    std::vector<Entry> entries{
        {"1. forcing = truth on budget-generic nodes (budget 9, full corpus)",
         criterion_forcing_equals_truth, 60.0},
        {"2. facts: no double forcing, persistence along every edge", criterion_facts, 0},
        {"3. every start reaches a generic node on directed systems",
         criterion_reach_generic, 0},
        {"4. connected generic pairs are budget-elementarily equivalent",
         criterion_geneq, 0},
        {"5. generics are existentially and Pi2-complete (empty BFA reports)",
         criterion_excomp_pi2, 0},
        {"6. maximality principle at generics, recorded failure at lo12/L1",
         criterion_mp, 0},
        {"7. memoized forcing engine == naive evaluator on the whole corpus",
         criterion_oracle, 0},
        {"8. amalgamation grid k<=5, K<=32, D in {64,256} with verified certificates",
         criterion_amalgamation_grid, 0},
        {"9. iterated amalgamation at depth 512; pairing is an order isomorphism",
         criterion_sigma_closed_and_pairing, 0},
        {"10. parser round trip x1000; classification vs brute-force prenex oracle",
         criterion_parser, 0},
    };

    int failures = 0;
    for (auto& e : entries) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            e.run(o);
        } catch (const std::exception& ex) {
            o.fail(std::string("exception: ") + ex.what());
        }
        double dt = seconds_since(t0);
        if (o.ok && e.limit_seconds > 0 && dt >= e.limit_seconds)
            o.fail("exceeded the time target of " + std::to_string(e.limit_seconds) + "s");
        std::printf("[%s] %s (%.2fs)%s%s\n", o.ok ? "PASS" : "FAIL", e.name, dt,
                    o.detail.empty() ? "" : " -- ", o.detail.c_str());
        if (!o.ok) ++failures;
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria hold\n", entries.size());
    else
        std::printf("acceptance: %d of %zu criteria FAILED\n", failures, entries.size());
    return failures;
}
