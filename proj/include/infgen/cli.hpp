#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "infgen/json_io.hpp"

namespace infgen {

struct CommandResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

namespace cli_detail {

// exit codes: 0 success / property holds; 1 property fails; 2 usage or parse
// error; 3 resource exhaustion (budget cap, depth exhaustion)
constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> read_bit_list(const std::string& path) {
    json j = json::parse(slurp(path));
    if (!j.is_array()) throw FamilyError("list file '" + path + "' must hold a JSON array");
    std::vector<std::string> out;
    for (const auto& e : j) out.push_back(e.get<std::string>());
    return out;
}

inline ExtensionSystem load_system(const std::string& path) {
    return load_class_text(slurp(path));
}

inline void emit(std::ostream& os, const json& payload) { os << payload.dump(2) << "\n"; }

} // namespace cli_detail

// Dispatches one command line. Streams take the report (stdout) and errors
// (stderr); the return value is the process exit code.
inline int run_command(const std::vector<std::string>& argv, std::ostream& out,
                       std::ostream& err) {
    using namespace cli_detail;

    CLI::App app{"Robinson infinite forcing workbench"};
    app.name("infgen");
    app.require_subcommand(1);

    std::string class_path, formula_text, node_id, suite_name, principle_name;
    std::string families_spec, cert_path, inputs_path;
    int budget = 5;
    int chain_length = 3, samples = 64;
    std::optional<int> kappa;
    uint32_t depth = 64, k = 1;
    uint64_t seed = 0;
    size_t cap = 10000;
    bool want_json = false, want_trace = false;

    auto add_common = [&](CLI::App* c, bool with_class = true) {
        if (with_class) c->add_option("--class", class_path, "class/multiverse JSON file")->required();
        c->add_flag("--json", want_json, "emit a JSON payload");
    };

    auto* cmd_parse = app.add_subcommand("parse", "parse a formula against the class signature");
    add_common(cmd_parse);
    cmd_parse->add_option("--formula", formula_text)->required();

    auto* cmd_eval = app.add_subcommand("eval", "Tarski satisfaction of a sentence at a node");
    add_common(cmd_eval);
    cmd_eval->add_option("--node", node_id)->required();
    cmd_eval->add_option("--formula", formula_text)->required();

    auto* cmd_force = app.add_subcommand("force", "infinite-forcing verdict at a node");
    add_common(cmd_force);
    cmd_force->add_option("--node", node_id)->required();
    cmd_force->add_option("--formula", formula_text)->required();
    cmd_force->add_flag("--trace", want_trace, "record the derivation trace");

    auto* cmd_generics = app.add_subcommand("generics", "budget-genericity report per node");
    add_common(cmd_generics);
    cmd_generics->add_option("--node", node_id, "restrict to one node");
    cmd_generics->add_option("--budget", budget)->required();

    auto* cmd_build = app.add_subcommand("build-generic", "walk from a node to a generic one");
    add_common(cmd_build);
    cmd_build->add_option("--node", node_id)->required();
    cmd_build->add_option("--budget", budget)->required();
    cmd_build->add_option("--cap", cap, "sweep limit");

    auto* cmd_check = app.add_subcommand("check", "run a theorem suite over the class");
    add_common(cmd_check);
    cmd_check->add_option("--suite", suite_name,
                          "facts|infgen|geneq|excomp|pi2|mp|ra|oracle")->required();
    cmd_check->add_option("--budget", budget)->required();

    auto* cmd_modal = app.add_subcommand("modal", "modal evaluation / MP / RA at a node");
    add_common(cmd_modal);
    cmd_modal->add_option("--node", node_id)->required();
    cmd_modal->add_option("--formula", formula_text, "modal formula, prefixes [] and <>");
    cmd_modal->add_option("--principle", principle_name, "mp|ra");
    cmd_modal->add_option("--budget", budget);

    auto* cmd_bfa = app.add_subcommand("bfa", "Sigma1-absoluteness report into the cone");
    add_common(cmd_bfa);
    cmd_bfa->add_option("--node", node_id)->required();
    cmd_bfa->add_option("--budget", budget)->required();

    auto* cmd_probe = app.add_subcommand("probe", "sampled chain lower-bound probe");
    add_common(cmd_probe);
    cmd_probe->add_option("--length", chain_length);
    cmd_probe->add_option("--samples", samples);
    cmd_probe->add_option("--seed", seed)->required();
    cmd_probe->add_option("--kappa", kappa, "only edges with size label <= kappa");

    auto* cmd_cohen = app.add_subcommand("cohen", "Cohen forcing combinatorics");
    cmd_cohen->require_subcommand(1);
    auto* cg = cmd_cohen->add_subcommand("gen", "build a generic real from dense families");
    cg->add_option("--families", families_spec)->required();
    cg->add_option("--depth", depth)->required();
    cg->add_flag("--json", want_json);
    auto* ct = cmd_cohen->add_subcommand("tower", "build a mutually generic tower");
    ct->add_option("--k", k)->required();
    ct->add_option("--families", families_spec)->required();
    ct->add_option("--depth", depth)->required();
    ct->add_option("--seed", seed)->required();
    ct->add_flag("--json", want_json);
    auto* ca = cmd_cohen->add_subcommand("amalgamate", "amalgamate a tower into one real");
    ca->add_option("--k", k)->required();
    ca->add_option("--families", families_spec)->required();
    ca->add_option("--depth", depth)->required();
    ca->add_option("--seed", seed)->required();
    ca->add_option("--inputs", inputs_path, "JSON array of input bit strings");
    ca->add_flag("--json", want_json);
    auto* cv = cmd_cohen->add_subcommand("verify", "replay an amalgamation certificate");
    cv->add_option("--cert", cert_path)->required();
    cv->add_option("--families", families_spec)->required();
    cv->add_flag("--json", want_json);

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*cmd_parse) {
            auto sys = load_system(class_path);
            FormulaPtr f = parse_formula(formula_text, sys.sig);
            std::string rendered = render(*f, sys.sig);
            std::string cls = is_sentence(*f) ? to_string(classify(*f)) : "open";
            if (want_json)
                emit(out, json{{"formula", rendered},
                               {"size", formula_size(*f)},
                               {"class", cls}});
            else
                out << rendered << "\nsize: " << formula_size(*f) << "\nclass: " << cls << "\n";
            return kOk;
        }
        if (*cmd_eval) {
            auto sys = load_system(class_path);
            int node = sys.node_index(node_id);
            if (node < 0) throw LoadError("unknown node '" + node_id + "'");
            FormulaPtr f = parse_formula(formula_text, sys.sig);
            if (!is_sentence(*f)) throw ParseError("eval requires a sentence", 0);
            bool v = satisfies(sys.nodes[static_cast<size_t>(node)], sys.sig, *f);
            if (want_json)
                emit(out, json{{"node", node_id},
                               {"sentence", render(*f, sys.sig)},
                               {"satisfied", v}});
            else
                out << (v ? "true" : "false") << "\n";
            return kOk;
        }
        if (*cmd_force) {
            auto sys = load_system(class_path);
            ForcingContext ctx(sys);
            FormulaPtr f = parse_formula(formula_text, sys.sig);
            ForcingVerdict v = forces(ctx, node_id, *f, want_trace);
            if (want_json)
                emit(out, to_json(v));
            else
                out << v.node << " " << (v.forced ? "forces" : "does not force") << " "
                    << v.sentence << "\n";
            return kOk;
        }
        if (*cmd_generics) {
            auto sys = load_system(class_path);
            ForcingContext ctx(sys);
            json arr = json::array();
            std::string text;
            for (size_t n = 0; n < sys.nodes.size(); ++n) {
                if (!node_id.empty() && sys.nodes[n].id != node_id) continue;
                auto rep = is_generic(ctx, static_cast<int>(n), budget);
                arr.push_back(to_json(rep));
                text += rep.node + ": " + (rep.generic ? "generic" : "not generic (" +
                        std::to_string(rep.undecided_count) + " undecided)") + "\n";
            }
            if (!node_id.empty() && arr.empty()) throw LoadError("unknown node '" + node_id + "'");
            if (want_json)
                emit(out, arr);
            else
                out << text;
            return kOk;
        }
        if (*cmd_build) {
            auto sys = load_system(class_path);
            ForcingContext ctx(sys);
            GenericPath p = build_generic(ctx, node_id, budget, cap);
            if (want_json)
                emit(out, to_json(sys, p));
            else
                out << p.start << " -> " << p.final_node << " in " << p.steps.size()
                    << " steps\n";
            return kOk;
        }
        if (*cmd_check) {
            auto sys = load_system(class_path);
            ForcingContext ctx(sys);
            SuiteReport rep = run_suite(ctx, suite_name, budget);
            if (want_json)
                emit(out, to_json(rep));
            else {
                out << rep.suite << ": " << (rep.passed ? "pass" : "FAIL") << " ("
                    << rep.checks << " checks)\n";
                for (const auto& v : rep.violations) out << "  " << v << "\n";
            }
            return rep.passed ? kOk : kFail;
        }
        if (*cmd_modal) {
            auto sys = load_system(class_path);
            ForcingContext ctx(sys);
            if (!principle_name.empty()) {
                Principle p;
                if (principle_name == "mp") p = Principle::MP;
                else if (principle_name == "ra") p = Principle::RA;
                else throw LoadError("unknown principle '" + principle_name + "'");
                PrincipleReport rep = check_modal_principle(ctx, node_id, p, budget);
                if (want_json)
                    emit(out, to_json(rep));
                else
                    out << rep.node << " " << (rep.holds ? "satisfies" : "violates") << " "
                        << (p == Principle::MP ? "MP" : "RA (desk-scale reading)") << "\n";
                return rep.holds ? kOk : kFail;
            }
            if (formula_text.empty())
                throw ParseError("modal needs --formula or --principle", 0);
            ModalFormula m = parse_modal(formula_text, sys.sig);
            bool v = modal_eval(ctx, node_id, m);
            if (want_json)
                emit(out, json{{"node", node_id},
                               {"formula", render_modal(m, sys.sig)},
                               {"holds", v}});
            else
                out << (v ? "true" : "false") << "\n";
            return kOk;
        }
        if (*cmd_bfa) {
            auto sys = load_system(class_path);
            ForcingContext ctx(sys);
            auto viols = bfa_sigma1_report(ctx, node_id, budget);
            if (want_json)
                emit(out, to_json(viols));
            else if (viols.empty())
                out << node_id << " is Sigma1-absolute into its cone\n";
            else
                for (const auto& v : viols)
                    out << v.descendant << ": " << v.sentence << "\n";
            return viols.empty() ? kOk : kFail;
        }
        if (*cmd_probe) {
            auto sys = load_system(class_path);
            auto rep = sigma_closed_probe(sys, chain_length, samples, seed, kappa);
            if (want_json)
                emit(out, to_json(rep));
            else
                out << (rep.directed ? "directed" : "NOT directed") << " ("
                    << rep.chains.size() << " chains, "
                    << (rep.exhaustive ? "exhaustive" : "sampled") << ")\n";
            return rep.directed ? kOk : kFail;
        }
        if (*cg) {
            auto fams = parse_families(families_spec, read_bit_list);
            RealApprox r = build_generic_real(fams, depth);
            if (want_json)
                emit(out, to_json(r));
            else
                out << to_string(r) << "\n";
            return kOk;
        }
        if (*ct) {
            auto fams = parse_families(families_spec, read_bit_list);
            auto reals = build_mutual_tower(k, fams, depth, seed);
            if (want_json) {
                json arr = json::array();
                for (const auto& r : reals) arr.push_back(to_json(r));
                emit(out, arr);
            } else {
                for (const auto& r : reals) out << to_string(r) << "\n";
            }
            return kOk;
        }
        if (*ca) {
            auto fams = parse_families(families_spec, read_bit_list);
            std::vector<RealApprox> inputs;
            if (!inputs_path.empty()) {
                for (const auto& s : read_bit_list(inputs_path))
                    inputs.push_back(RealApprox{bits_from_string(s), {}});
                k = static_cast<uint32_t>(inputs.size());
            } else {
                inputs = build_mutual_tower(k, fams, depth, seed);
            }
            AmalgamationCertificate cert = amalgamate(inputs, fams, depth, seed);
            emit(out, to_json(cert)); // certificates are always JSON
            return kOk;
        }
        if (*cv) {
            auto fams = parse_families(families_spec, read_bit_list);
            AmalgamationCertificate cert = certificate_from_json(json::parse(slurp(cert_path)));
            VerifyResult r = verify_amalgamation(cert, fams);
            if (want_json)
                emit(out, json{{"ok", r.ok}, {"first_failure", r.first_failure}});
            else
                out << (r.ok ? "certificate verifies" : "FAIL: " + r.first_failure) << "\n";
            return r.ok ? kOk : kFail;
        }
    } catch (const ResourceExhausted& e) {
        err << "resource exhaustion: " << e.what() << "\n";
        return kResource;
    } catch (const DepthExhausted& e) {
        err << "depth exhaustion: " << e.what() << "\n";
        return kResource;
    } catch (const MutualGenericityViolation& e) {
        err << "precondition violated: " << e.what() << "\n";
        return kFail;
    } catch (const InternalConsistencyError& e) {
        err << "internal consistency failure: " << e.what() << "\n";
        return kFail;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    err << "unknown subcommand\n";
    return kUsage;
}

inline CommandResult run_command(const std::vector<std::string>& argv) {
    std::ostringstream out, err;
    CommandResult r;
    r.exit_code = run_command(argv, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

} // namespace infgen
