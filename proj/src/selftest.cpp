#include "indep/selftest.h"

#include <functional>

#include "indep/entailment.h"
#include "indep/general.h"
#include "indep/proof.h"
#include "indep/sampling.h"

namespace indep {

namespace {

Row values(const Structure &m, const Team &x, const Row &r, const TermTuple &ts) {
    Row out;
    for (const auto &t : ts) out.push_back(eval_term(m, {}, x.assignment(r), t));
    return out;
}

bool indep_by_loops(const Structure &m, const Team &x, const TermTuple &a, const TermTuple &b, const TermTuple &c) {
    for (const auto &s : x.rows())
        for (const auto &s1 : x.rows()) {
            if (values(m, x, s, a) != values(m, x, s1, a)) continue;
            bool found = false;
            for (const auto &s2 : x.rows())
                if (values(m, x, s2, a) == values(m, x, s, a) && values(m, x, s2, b) == values(m, x, s, b) &&
                    values(m, x, s2, c) == values(m, x, s1, c))
                    found = true;
            if (!found) return false;
        }
    return true;
}

std::set<std::string> join_free(const FoFormula &gamma, const IlFormula &phi) {
    auto s = free_team_vars(gamma);
    const auto t = free_team_vars(phi);
    s.insert(t.begin(), t.end());
    return s;
}

struct Runner {
    std::vector<SelftestCase> out;

    void run(const std::string &name, const std::function<std::string()> &body) {
        SelftestCase c{name, true, ""};
        try {
            c.detail = body();
            c.passed = c.detail.empty();
        } catch (const std::exception &e) {
            c.passed = false;
            c.detail = std::string("exception: ") + e.what();
        }
        out.push_back(std::move(c));
    }
};

} // namespace

std::vector<SelftestCase> run_selftest() {
    Runner r;
    Rng rng(20240611);
    Signature sig;
    sig.add_relation("P", 1);
    sig.add_relation("R", 2);
    const std::vector<std::string> xyz{"x", "y", "z"};

    FormulaGrammar g;
    for (const char *a : {"P(x)", "~P(y)", "x = z", "dep(y, z)", "indep(x ; y ; z)"}) g.atoms.push_back(parse_il(a, sig));
    g.exists_vars = {"x"};
    g.forall_vars = {"y"};
    const auto sample = enumerate_formulas(g, 3);

    r.run("print-parse round trip", [&] {
        for (const auto &f : sample)
            if (parse_il(to_string(f), sig) != f) return "round trip failed for " + to_string(f);
        return std::string();
    });

    r.run("independence atom against nested loops", [&] {
        for (int i = 0; i < 200; ++i) {
            const Structure m = random_structure(sig, 1 + i % 3, rng);
            const Team x = random_team(m, xyz, 6, rng);
            const auto a = random_var_tuple(xyz, 2, rng), b = random_var_tuple(xyz, 2, rng),
                       c = random_var_tuple(xyz, 2, rng);
            if (sat_independence_atom(m, x, a, b, c) != indep_by_loops(m, x, a, b, c))
                return "disagreement on " + describe(x, m);
        }
        return std::string();
    });

    r.run("empty team, locality and naive search", [&] {
        for (std::size_t size = 1; size <= 2; ++size)
            for (int k = 0; k < 3; ++k) {
                const Structure m = random_structure(sig, size, rng);
                const Team empty(xyz);
                for (const auto &f : sample) {
                    if (!eval_full(m, empty, f)) return "empty team fails " + to_string(f);
                    const Team x = random_team(m, xyz, 5, rng);
                    const bool v = eval_full(m, x, f);
                    if (v != eval_full(m, team_restrict(x, free_team_vars(f)), f))
                        return "locality fails for " + to_string(f);
                    if (v != eval_full(m, x, f, EvalOptions{false})) return "naive search disagrees on " + to_string(f);
                }
            }
        return std::string();
    });

    r.run("entailment semantics against team semantics", [&] {
        for (int i = 0; i < 60; ++i) {
            const Structure m = random_structure(sig, 1 + i % 3, rng);
            const FoFormula gamma = random_fo(sig, {"x", "y"}, {"p"}, 2, rng);
            const ParamAssignment h{{"p", static_cast<Element>(i % m.size())}};
            const IlFormula phi = random_formula(g, 4, rng);
            const auto vars = var_domain(join_free(gamma, phi));
            const bool ent = eval_entailment(m, gamma, h, phi, vars);
            const bool team = eval_full(m, team_of_definition(m, gamma, h, vars), phi);
            if (ent != team) return "disagreement for " + to_string(gamma) + " / " + to_string(phi);
            auto w = eval_entailment_witnessed(m, gamma, h, phi);
            if (w.has_value() != ent || (w && !check_witness(m, gamma, h, phi, *w)))
                return "witness mismatch for " + to_string(gamma) + " / " + to_string(phi);
        }
        return std::string();
    });

    r.run("least family collapse", [&] {
        const Structure m = random_structure(sig, 2, rng);
        for (const auto &x : least_family(m, {"x", "y"})) {
            const auto d = canonical_team_definition(x);
            if (team_of_definition(m, d.gamma, d.params, x.vars()) != x) return std::string("diagram does not round-trip");
        }
        return std::string();
    });

    r.run("prover examples", [&] {
        Signature s;
        s.add_relation("P", 1);
        s.add_relation("Q", 1);
        auto f = [&](const char *t) { return parse_fo(t, s); };
        if (prove_entailment({f("forall x. P(x)")}, {f("forall x. (Q(x) -> P(x))")}).kind != ProverVerdict::Kind::Proved)
            return std::string("valid entailment not proved");
        if (prove_entailment({}, {f("exists x. x = x")}).kind != ProverVerdict::Kind::Proved)
            return std::string("nonempty domain not proved");
        const auto v = prove_entailment({f("exists x. P(x)")}, {f("forall x. P(x)")});
        if (v.kind != ProverVerdict::Kind::Refuted || v.model->size() != 2) return std::string("countermodel not found");
        return std::string();
    });

    r.run("derived rules verify", [&] {
        const FoFormula gamma = parse_fo("R(x, y)", sig);
        const std::vector<IlFormula> phis{parse_il("P(x) \\/ ~P(y)", sig), parse_il("exists z. R(z, x)", sig),
                                          parse_il("forall z. (P(z) \\/ ~P(z))", sig)};
        for (const auto &phi : phis)
            if (check_proof(derive_fo(gamma, phi), {}).overall != CheckReport::Overall::Verified)
                return "derive_fo proof rejected for " + to_string(phi);
        const auto dep = derive_dep(gamma, {Term::team_var("x")}, Term::team_var("y"));
        if (check_proof(dep, {}).overall != CheckReport::Overall::Verified) return std::string("derive_dep proof rejected");
        if (!validate_sequent(dep.conclusion(), 2).valid) return std::string("derive_dep conclusion invalid");
        return std::string();
    });

    return r.out;
}

} // namespace indep
