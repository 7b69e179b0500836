// Command-line front end. Exit codes: 0 positive verdict, 1 negative,
// 2 error, 3 conditional or unknown.

#include <algorithm>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "indep/entailment.h"
#include "indep/general.h"
#include "indep/model_io.h"
#include "indep/proof_io.h"
#include "indep/selftest.h"

using namespace indep;

namespace {

enum Exit { Positive = 0, Negative = 1, Failure = 2, Conditional = 3 };

struct Output {
    bool machine = false;

    void kv(const std::string &key, const std::string &value) const { std::cout << key << "=" << value << "\n"; }
    void kv(const std::string &key, bool value) const { kv(key, std::string(value ? "true" : "false")); }
    void kv(const std::string &key, std::size_t value) const { kv(key, std::to_string(value)); }
    /// Human-only text; suppressed in machine format.
    void text(const std::string &s) const {
        if (!machine) std::cout << s << (s.empty() || s.back() != '\n' ? "\n" : "");
    }
};

struct Common {
    std::string format = "plain";
    int prover_depth = 5;
    int prover_ms = 5000;
    int cm_size = 3;
    int max_size = 3;
    int bound = 4;

    ProverBudget budget() const { return {prover_depth, prover_ms, cm_size}; }
};

Structure load_model(const std::string &path) { return parse_structure(read_file(path)); }

Team load_team(const std::string &path, const std::string &name, const Structure &m) {
    auto teams = parse_teams(read_file(path), m);
    if (name.empty()) {
        if (teams.size() != 1) throw Error(path + ": holds " + std::to_string(teams.size()) + " teams; pick one with --team-name");
        return teams.front().team;
    }
    for (auto &t : teams)
        if (t.name == name) return t.team;
    throw Error(path + ": no team named '" + name + "'");
}

ParamAssignment parse_params(const std::string &text, const Structure &m) {
    ParamAssignment h;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        item = trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("parameter binding '" + item + "' lacks '='");
        std::string p = trim(item.substr(0, eq));
        if (!p.empty() && p[0] == '$') p = p.substr(1);
        const std::string e = trim(item.substr(eq + 1));
        if (!m.has_element(e)) throw Error("unknown element '" + e + "' for parameter $" + p);
        h[p] = m.element(e);
    }
    return h;
}

std::string describe_params(const ParamAssignment &h, const Structure &m) {
    std::string out;
    for (const auto &[p, v] : h) out += (out.empty() ? "$" : ", $") + p + "=" + m.element_name(v);
    return out;
}

int verdict(bool ok) { return ok ? Positive : Negative; }

void print_warnings(const Output &o, const std::vector<std::string> &ws) {
    for (const auto &w : ws) {
        if (o.machine) o.kv("warning", w);
        else std::cerr << "warning: " << w << "\n";
    }
}

int report_check(const Output &o, const Proof &p, const CheckReport &r) {
    o.kv("proof", p.name);
    o.kv("steps", p.steps.size());
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        const auto &s = r.steps[i];
        const std::string idx = std::to_string(i + 1);
        if (o.machine) {
            o.kv("step." + idx + ".rule", std::string(to_string(p.steps[i].rule)));
            o.kv("step." + idx + ".status", std::string(to_string(s.status)));
            if (!s.reason.empty()) o.kv("step." + idx + ".reason", s.reason);
        } else {
            std::cout << "step " << idx << " " << to_string(p.steps[i].rule) << ": " << to_string(s.status)
                      << (s.reason.empty() ? "" : " (" + s.reason + ")") << "\n";
        }
    }
    if (!r.reason.empty()) o.kv("reason", r.reason);
    o.kv("overall", std::string(to_string(r.overall)));
    switch (r.overall) {
    case CheckReport::Overall::Verified: return Positive;
    case CheckReport::Overall::ConditionallyVerified: return Conditional;
    case CheckReport::Overall::Rejected: return Negative;
    }
    return Failure;
}

TeamFamily load_family(const std::string &path, const Structure &m) {
    TeamFamily f;
    for (auto &t : parse_teams(read_file(path), m)) f.insert(t.team);
    return f;
}

std::set<std::string> split_vars(const std::string &text) {
    std::set<std::string> out;
    std::stringstream ss(text);
    std::string v;
    while (std::getline(ss, v, ',')) {
        v.erase(0, v.find_first_not_of(" \t"));
        v.erase(v.find_last_not_of(" \t") + 1);
        if (!v.empty()) out.insert(v);
    }
    return out;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Independence logic toolkit: team semantics, entailment semantics and the sequent calculus"};
    app.require_subcommand(1);
    Common c;
    auto add_format = [&](CLI::App *s) {
        s->add_option("--format", c.format, "plain or machine")->check(CLI::IsMember({"plain", "machine"}));
    };
    auto add_prover = [&](CLI::App *s) {
        s->add_option("--prover-depth", c.prover_depth, "inference depth bound of the entailment prover");
        s->add_option("--prover-ms", c.prover_ms, "time budget per entailment, in milliseconds");
        s->add_option("--cm-size", c.cm_size, "largest countermodel size tried");
    };

    std::string phi, gamma, model_path, team_path, team_name, params, sig_text, family, proof_path, seq_path,
        theta_path, universe = "x,y", dep_terms, dep_target;
    bool fo_only = false, naive = false, check = false;

    auto *parse = app.add_subcommand("parse", "parse a formula and print its normal form");
    parse->add_option("--phi", phi, "formula text")->required();
    parse->add_option("--sig", sig_text, "signature, e.g. \"sig { rel R/2; const c }\"");
    parse->add_flag("--fo", fo_only, "parse as a first-order formula");
    add_format(parse);

    auto *eval_team = app.add_subcommand("eval-team", "team semantics over the full model");
    eval_team->add_option("--model", model_path)->required();
    eval_team->add_option("--team", team_path)->required();
    eval_team->add_option("--team-name", team_name);
    eval_team->add_option("--phi", phi)->required();
    eval_team->add_flag("--naive", naive, "search the clauses literally, without shortcuts");
    add_format(eval_team);

    auto *gts_cmd = app.add_subcommand("eval-gts", "general team semantics over a team family");
    gts_cmd->add_option("--model", model_path)->required();
    gts_cmd->add_option("--team", team_path)->required();
    gts_cmd->add_option("--team-name", team_name);
    gts_cmd->add_option("--phi", phi)->required();
    gts_cmd->add_option("--family", family, "file of teams; omitted means the full family");
    gts_cmd->add_option("--universe", universe, "comma-separated variables for full families and closure checks");
    gts_cmd->add_option("--bound", c.bound, "formula size bound of the closure check");
    gts_cmd->add_flag("--check-closure", check, "also check the family's closure under definability");
    add_format(gts_cmd);

    auto *eval_ent = app.add_subcommand("eval-ent", "entailment semantics M |=_{gamma(h)} phi");
    auto *witness = app.add_subcommand("witness", "entailment semantics with a checked witness tree");
    for (auto *s : {eval_ent, witness}) {
        s->add_option("--model", model_path)->required();
        s->add_option("--gamma", gamma)->required();
        s->add_option("--params", params, "bindings such as \"p=a, q=b\"");
        s->add_option("--phi", phi)->required();
        add_format(s);
    }

    auto *check_proof_cmd = app.add_subcommand("check-proof", "check a proof file");
    check_proof_cmd->add_option("--proof", proof_path)->required();
    add_prover(check_proof_cmd);
    add_format(check_proof_cmd);

    auto *derive = app.add_subcommand("derive", "generate a PS-FO or PS-dep proof");
    derive->add_option("--sig", sig_text)->required();
    derive->add_option("--gamma", gamma)->required();
    derive->add_option("--phi", phi, "first-order formula for PS-FO");
    derive->add_option("--dep-terms", dep_terms, "conditioning terms for PS-dep, comma separated");
    derive->add_option("--dep-target", dep_target, "dependent term for PS-dep");
    derive->add_flag("--check", check, "check the generated proof");
    add_prover(derive);
    add_format(derive);

    auto *validate = app.add_subcommand("validate-seq", "search small structures for a counterexample to a sequent");
    validate->add_option("--seq", seq_path)->required();
    validate->add_option("--max-size", c.max_size, "largest structure size");
    add_format(validate);

    auto *theta_check = app.add_subcommand("theta-check", "is a general model closed under a relation existence theory");
    theta_check->add_option("--model", model_path)->required();
    theta_check->add_option("--theta", theta_path)->required();
    theta_check->add_option("--family", family, "file of teams; omitted means the full family");
    add_format(theta_check);

    auto *selftest = app.add_subcommand("selftest", "run the built-in invariant suite");
    add_format(selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? Positive : Failure;
    }

    Output o;
    o.machine = c.format == "machine";
    try {
        if (*parse) {
            const Signature sig = sig_text.empty() ? Signature{} : parse_signature(sig_text);
            if (fo_only) {
                const FoFormula f = parse_fo(phi, sig);
                o.kv("formula", to_string(f));
                o.kv("size", formula_size(f));
                const auto fv = free_vars(f);
                o.kv("free_team", std::to_string(fv.team.size()));
                o.kv("free_params", std::to_string(fv.params.size()));
            } else {
                std::vector<std::string> warnings;
                const IlFormula f = parse_il(phi, sig, &warnings);
                print_warnings(o, warnings);
                o.kv("formula", to_string(f));
                o.kv("size", formula_size(f));
                o.kv("first_order", is_flat_fragment(f));
                std::string vars;
                for (const auto &v : free_team_vars(f)) vars += (vars.empty() ? "" : ",") + v;
                o.kv("free", vars);
            }
            return Positive;
        }
        if (*eval_team) {
            const Structure m = load_model(model_path);
            const Team x = load_team(team_path, team_name, m);
            std::vector<std::string> warnings;
            const IlFormula f = parse_il(phi, m.signature(), &warnings);
            print_warnings(o, warnings);
            const bool ok = eval_full(m, x, f, EvalOptions{!naive});
            o.kv("satisfied", ok);
            return verdict(ok);
        }
        if (*gts_cmd) {
            const Structure m = load_model(model_path);
            const Team x = load_team(team_path, team_name, m);
            const IlFormula f = parse_il(phi, m.signature());
            GeneralModel g{m, family.empty() ? FamilyKind::Full : FamilyKind::Explicit, {}};
            if (!family.empty()) {
                g.family = load_family(family, m);
                g.family.insert(Team(x.vars()));
            }
            auto u = split_vars(universe);
            for (const auto &v : x.vars()) u.insert(v);
            for (const auto &v : all_team_vars(f)) u.insert(v);
            const TeamFamily fam = family.empty() ? materialize_family(g, u) : g.family;
            if (check) {
                const auto cv = check_general_closure(g, u, c.bound);
                o.kv("closed", cv.closed);
                if (!cv.closed) {
                    o.kv("closure_witness", to_string(cv.witness));
                    o.text(describe(cv.missing, m));
                }
            }
            const bool ok = eval_gts(m, fam, x, f);
            o.kv("satisfied", ok);
            return verdict(ok);
        }
        if (*eval_ent || *witness) {
            const Structure m = load_model(model_path);
            const Signature sig = m.signature();
            const FoFormula gm = parse_fo(gamma, sig);
            const IlFormula f = parse_il(phi, sig);
            const ParamAssignment h = parse_params(params, m);
            if (*eval_ent) {
                const bool ok = eval_entailment(m, gm, h, f);
                o.kv("satisfied", ok);
                return verdict(ok);
            }
            const auto w = eval_entailment_witnessed(m, gm, h, f);
            o.kv("satisfied", w.has_value());
            if (!w) return Negative;
            const bool accepted = check_witness(m, gm, h, f, *w);
            o.text(format_witness(*w, m));
            o.kv("witness_checked", accepted);
            return accepted ? Positive : Failure;
        }
        if (*check_proof_cmd) {
            const Proof p = parse_proof(read_file(proof_path));
            return report_check(o, p, check_proof(p, p.theta, c.budget()));
        }
        if (*derive) {
            const Signature sig = parse_signature(sig_text);
            const FoFormula gm = parse_fo(gamma, sig);
            Proof p;
            if (!phi.empty()) {
                if (!dep_target.empty() || !dep_terms.empty()) throw Error("give either --phi or --dep-target, not both");
                p = derive_fo(gm, parse_il(phi, sig));
            } else {
                if (dep_target.empty()) throw Error("derive needs --phi or --dep-target");
                p = derive_dep(gm, parse_term_tuple(dep_terms, sig), parse_term(dep_target, sig));
            }
            p.signature.merge(sig);
            if (!o.machine) std::cout << format_proof(p);
            else o.kv("steps", p.steps.size());
            if (!check) return Positive;
            return report_check(o, p, check_proof(p, p.theta, c.budget()));
        }
        if (*validate) {
            const NamedSequent s = parse_sequent(read_file(seq_path));
            const auto v = validate_sequent(s.sequent, s.signature, c.max_size);
            o.kv("sequent", s.name);
            o.kv("valid", v.valid);
            if (v.valid) {
                o.kv("checked_size", std::to_string(v.checked_size));
                return Positive;
            }
            o.kv("counter_size", v.model->size());
            o.kv("counter_params", describe_params(v.params, *v.model));
            if (o.machine) {
                std::string rels;
                for (const auto &line : format_structure(*v.model)) rels += line == '\n' ? ' ' : line;
                o.kv("counter_model", rels);
            } else {
                std::cout << format_structure(*v.model);
            }
            return Negative;
        }
        if (*theta_check) {
            const Structure m = load_model(model_path);
            const Theta th = parse_theta(read_file(theta_path), m.signature());
            GeneralModel g{m, family.empty() ? FamilyKind::Full : FamilyKind::Explicit, {}};
            if (!family.empty()) g.family = load_family(family, m);
            const auto v = check_theta_closed(g, th);
            o.kv("theta_closed", v.closed);
            if (!v.closed) o.kv("failed_sentence", std::to_string(v.failed + 1));
            return verdict(v.closed);
        }
        if (*selftest) {
            bool all = true;
            for (const auto &t : run_selftest()) {
                all = all && t.passed;
                if (o.machine) {
                    std::string key = t.name;
                    std::replace_if(key.begin(), key.end(), [](char ch) { return ch == ' ' || ch == ','; }, '_');
                    o.kv("case." + key, t.passed);
                }
                else std::cout << (t.passed ? "PASS " : "FAIL ") << t.name << (t.detail.empty() ? "" : ": " + t.detail) << "\n";
            }
            o.kv("selftest", std::string(all ? "pass" : "fail"));
            return verdict(all);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return Failure;
    }
    return Failure;
}
