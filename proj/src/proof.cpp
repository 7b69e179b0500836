#include "indep/proof.h"

#include <algorithm>

#include "indep/entailment.h"

namespace indep {

namespace {

std::set<std::string> join(std::set<std::string> a, const std::set<std::string> &b) {
    a.insert(b.begin(), b.end());
    return a;
}

std::set<std::string> team_vars_of(const TermTuple &ts) { return free_vars(ts).team; }

template <class T> std::vector<T> concat(std::vector<T> a, const std::vector<T> &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

FoFormula universal_closure_of_implication(const FoFormula &gamma, const FoFormula &phi) {
    return fo::forall_all(var_domain(join(free_team_vars(gamma), free_team_vars(phi))), fo::implies(gamma, phi));
}

std::vector<FoFormula> as_vector(const std::set<FoFormula> &s) { return {s.begin(), s.end()}; }

void flatten_conjuncts(const FoFormula &f, std::vector<FoFormula> &out) {
    if (f.kind == FoFormula::Kind::And) {
        flatten_conjuncts(f.subs[0], out);
        flatten_conjuncts(f.subs[1], out);
        return;
    }
    out.push_back(f);
}

// The three renamed copies of ⃗v used by PS-ind and PS-dep.
struct Copies {
    std::vector<std::string> vars;
    std::array<VarRenaming, 3> ren;
    std::array<std::vector<std::string>, 3> names;
};

Copies fresh_copies(const FoFormula &gamma, const std::vector<const TermTuple *> &tuples) {
    Copies c;
    std::set<std::string> fv = free_team_vars(gamma);
    std::set<std::string> taken = all_team_vars(gamma);
    for (const auto *t : tuples) {
        fv = join(fv, team_vars_of(*t));
        taken = join(taken, all_team_vars(*t));
    }
    c.vars = var_domain(fv);
    taken.insert(c.vars.begin(), c.vars.end());
    for (int j = 0; j < 3; ++j)
        for (const auto &v : c.vars) {
            const std::string n = fresh_variant(v, std::to_string(j + 1), taken);
            taken.insert(n);
            c.ren[static_cast<std::size_t>(j)][v] = n;
            c.names[static_cast<std::size_t>(j)].push_back(n);
        }
    return c;
}

void require_param_free(const TermTuple &ts, const char *what) {
    if (!free_vars(ts).params.empty()) throw Error(std::string(what) + " must not contain parameter variables");
}

} // namespace

bool same_sequent(const Sequent &a, const Sequent &b) {
    return a.context == b.context && a.gamma == b.gamma && desugar_dep(a.phi) == desugar_dep(b.phi);
}

void require_well_formed(const Sequent &s) {
    for (const auto &f : s.context)
        if (!free_team_vars(f).empty())
            throw Error("context formula '" + to_string(f) + "' has free team variable '" + *free_team_vars(f).begin() +
                        "'");
    if (!free_vars(s.phi).params.empty()) throw Error("phi must not contain parameter variables");
}

std::string to_string(const Sequent &s) {
    std::string out;
    bool first = true;
    for (const auto &f : s.context) {
        out += (first ? "" : ", ") + to_string(f);
        first = false;
    }
    return out + " | " + to_string(s.gamma) + " |- " + to_string(s.phi);
}

const char *to_string(RuleTag t) {
    switch (t) {
    case RuleTag::Lit: return "PS-lit";
    case RuleTag::Ind: return "PS-ind";
    case RuleTag::Or: return "PS-or";
    case RuleTag::And: return "PS-and";
    case RuleTag::Exists: return "PS-exists";
    case RuleTag::Forall: return "PS-forall";
    case RuleTag::Ent: return "PS-ent";
    case RuleTag::Depar: return "PS-depar";
    case RuleTag::Split: return "PS-split";
    case RuleTag::Theta: return "PS-theta";
    }
    return "?";
}

std::optional<RuleTag> parse_rule_tag(const std::string &s) {
    for (int i = 0; i <= static_cast<int>(RuleTag::Theta); ++i)
        if (s == to_string(static_cast<RuleTag>(i))) return static_cast<RuleTag>(i);
    return std::nullopt;
}

const char *to_string(StepReport::Status s) {
    switch (s) {
    case StepReport::Status::OK: return "OK";
    case StepReport::Status::Failed: return "Failed";
    case StepReport::Status::Conditional: return "Conditional";
    }
    return "?";
}

const char *to_string(CheckReport::Overall o) {
    switch (o) {
    case CheckReport::Overall::Verified: return "Verified";
    case CheckReport::Overall::ConditionallyVerified: return "ConditionallyVerified";
    case CheckReport::Overall::Rejected: return "Rejected";
    }
    return "?";
}

// ------------------------------------------------------------------ axioms

Sequent axiom_lit(const FoFormula &gamma, const IlFormula &lit) {
    if (lit.kind != IlFormula::Kind::Literal) throw Error("PS-lit needs a first-order literal, got '" + to_string(lit) + "'");
    if (!free_vars(lit).params.empty()) throw Error("PS-lit literal must not contain parameter variables");
    const FoFormula l = to_fo(lit);
    return {{universal_closure_of_implication(gamma, l)}, gamma, lit};
}

Sequent axiom_ind(const FoFormula &gamma, const TermTuple &t1, const TermTuple &t2, const TermTuple &t3) {
    require_param_free(t1, "PS-ind terms");
    require_param_free(t2, "PS-ind terms");
    require_param_free(t3, "PS-ind terms");
    const Copies c = fresh_copies(gamma, {&t1, &t2, &t3});
    auto g = [&](int j) { return rename_team_vars(gamma, c.ren[static_cast<std::size_t>(j)]); };
    auto t = [&](const TermTuple &ts, int j) { return rename_team_vars(ts, c.ren[static_cast<std::size_t>(j)]); };
    const TermTuple t12 = concat(t1, t2), t13 = concat(t1, t3);

    std::vector<FoFormula> lhs{g(0), g(1)};
    for (auto &e : fo::tuple_equalities(t(t1, 0), t(t1, 1))) lhs.push_back(std::move(e));
    std::vector<FoFormula> rhs{g(2)};
    for (auto &e : fo::tuple_equalities(t(t12, 2), t(t12, 0))) rhs.push_back(std::move(e));
    for (auto &e : fo::tuple_equalities(t(t13, 2), t(t13, 1))) rhs.push_back(std::move(e));

    const FoFormula body = fo::implies(fo::conj_all(lhs), fo::exists_all(c.names[2], fo::conj_all(rhs)));
    return {{fo::forall_all(concat(c.names[0], c.names[1]), body)}, gamma, il::indep(t1, t2, t3)};
}

FoFormula dependency_context(const FoFormula &gamma, const TermTuple &t, const Term &t2) {
    const TermTuple last{t2};
    require_param_free(t, "PS-dep terms");
    require_param_free(last, "PS-dep terms");
    const Copies c = fresh_copies(gamma, {&t, &last, &last});
    std::vector<FoFormula> lhs{rename_team_vars(gamma, c.ren[0]), rename_team_vars(gamma, c.ren[1])};
    for (auto &e : fo::tuple_equalities(rename_team_vars(t, c.ren[0]), rename_team_vars(t, c.ren[1])))
        lhs.push_back(std::move(e));
    const FoFormula rhs = fo::eq(rename_team_vars(t2, c.ren[0]), rename_team_vars(t2, c.ren[1]));
    return fo::forall_all(concat(c.names[0], c.names[1]), fo::implies(fo::conj_all(lhs), rhs));
}

// ------------------------------------------------------------------- rules

std::string depar_variable(const std::string &p, const std::vector<FoFormula> &context) {
    std::set<std::string> taken;
    for (const auto &f : context) taken = join(taken, all_team_vars(f));
    return taken.count(p) ? fresh_variant(p, "1", taken) : p;
}

RuleApplication apply_rule(RuleTag tag, const std::vector<Sequent> &premises, const RuleParams &params,
                           const Theta *theta) {
    auto need = [&](std::size_t n) {
        if (premises.size() != n)
            throw Error(std::string(to_string(tag)) + " takes " + std::to_string(n) + " premise(s), got " +
                        std::to_string(premises.size()));
    };
    RuleApplication out;
    Sequent &c = out.conclusion;
    switch (tag) {
    case RuleTag::Lit:
    case RuleTag::Ind: throw Error(std::string(to_string(tag)) + " is an axiom, not a rule");
    case RuleTag::Or: {
        need(2);
        const auto &a = premises[0];
        const auto &b = premises[1];
        c.context = a.context;
        c.context.insert(b.context.begin(), b.context.end());
        const auto v = var_domain(
            join(join(free_team_vars(params.gamma), free_team_vars(a.gamma)), free_team_vars(b.gamma)));
        c.context.insert(fo::forall_all(v, fo::iff(params.gamma, fo::disj(a.gamma, b.gamma))));
        c.gamma = params.gamma;
        c.phi = il::tensor_or(a.phi, b.phi);
        break;
    }
    case RuleTag::And: {
        need(2);
        if (premises[0].gamma != premises[1].gamma) throw Error("PS-and premises must share gamma");
        c.context = premises[0].context;
        c.context.insert(premises[1].context.begin(), premises[1].context.end());
        c.gamma = premises[0].gamma;
        c.phi = il::conj(premises[0].phi, premises[1].phi);
        break;
    }
    case RuleTag::Exists:
    case RuleTag::Forall: {
        need(1);
        if (params.var.empty()) throw Error(std::string(to_string(tag)) + " needs a bound variable");
        const auto &p = premises[0];
        const auto &x = params.var;
        const auto v = var_domain(join(free_team_vars(params.gamma), free_team_vars(p.gamma)));
        c.context = p.context;
        const FoFormula side = tag == RuleTag::Exists
                                   ? fo::iff(fo::exists(x, p.gamma), fo::exists(x, params.gamma))
                                   : fo::iff(p.gamma, fo::exists(x, params.gamma));
        c.context.insert(fo::forall_all(v, side));
        c.gamma = params.gamma;
        c.phi = tag == RuleTag::Exists ? il::exists(x, p.phi) : il::forall(x, p.phi);
        break;
    }
    case RuleTag::Ent: {
        need(1);
        c = premises[0];
        c.context = {params.context.begin(), params.context.end()};
        out.obligation = Obligation{params.context, as_vector(premises[0].context)};
        break;
    }
    case RuleTag::Depar: {
        need(1);
        const auto &p = premises[0];
        if (params.param.empty()) throw Error("PS-depar needs a parameter variable");
        if (free_vars(p.gamma).params.count(params.param))
            throw Error("PS-depar: $" + params.param + " occurs free in gamma");
        const auto ctx = as_vector(p.context);
        const std::string v = depar_variable(params.param, ctx);
        c.context = {fo::exists(v, param_to_team_var(fo::conj_all(ctx), params.param, v))};
        c.gamma = p.gamma;
        c.phi = p.phi;
        break;
    }
    case RuleTag::Split: {
        need(2);
        const auto &a = premises[0];
        const auto &b = premises[1];
        if (a.gamma != b.gamma || desugar_dep(a.phi) != desugar_dep(b.phi))
            throw Error("PS-split premises must share gamma and phi");
        c.context = {fo::disj(fo::conj_all(as_vector(a.context)), fo::conj_all(as_vector(b.context)))};
        c.gamma = a.gamma;
        c.phi = a.phi;
        break;
    }
    case RuleTag::Theta: {
        need(1);
        if (!theta) throw Error("PS-theta needs a relation existence theory");
        if (params.theta >= theta->sentences.size())
            throw Error("PS-theta: no sentence with index " + std::to_string(params.theta));
        const auto &s = theta->sentences[params.theta];
        if (params.symbols.size() != s.relations.size())
            throw Error("PS-theta: expected " + std::to_string(s.relations.size()) + " symbol(s)");
        std::map<std::string, std::string> ren;
        for (std::size_t i = 0; i < s.relations.size(); ++i) {
            if (!ren.emplace(s.relations[i].first, params.symbols[i]).second) throw Error("PS-theta: repeated relation variable");
            for (std::size_t j = 0; j < i; ++j)
                if (params.symbols[j] == params.symbols[i]) throw Error("PS-theta: symbols must be distinct");
        }
        const FoFormula body = rename_relations(s.body, ren);
        const auto &p = premises[0];
        std::vector<FoFormula> gamma1;
        if (p.context.count(body)) {
            gamma1 = {body};
        } else {
            flatten_conjuncts(body, gamma1);
            for (const auto &f : gamma1)
                if (!p.context.count(f)) throw Error("PS-theta: context lacks '" + to_string(f) + "'");
        }
        c = p;
        for (const auto &f : gamma1) c.context.erase(f);
        for (const auto &sym : params.symbols) {
            for (const auto &f : c.context)
                if (mentions_relation(f, sym)) throw Error("PS-theta: " + sym + " occurs in the remaining context");
            if (mentions_relation(c.gamma, sym)) throw Error("PS-theta: " + sym + " occurs in gamma");
            if (mentions_relation(c.phi, sym)) throw Error("PS-theta: " + sym + " occurs in phi");
        }
        break;
    }
    }
    return out;
}

// ------------------------------------------------------------------ checker

CheckReport check_proof(const Proof &proof, const Theta &theta, const ProverBudget &budget) {
    CheckReport r;
    if (proof.steps.empty()) {
        r.overall = CheckReport::Overall::Rejected;
        r.reason = "proof has no steps";
        return r;
    }
    for (std::size_t i = 0; i < proof.steps.size(); ++i) {
        const auto &step = proof.steps[i];
        StepReport sr;
        try {
            require_well_formed(step.sequent);
            for (auto p : step.premises)
                if (p >= i) throw Error("premise " + std::to_string(p + 1) + " is not an earlier step");
            Sequent expected;
            std::optional<Obligation> obligation;
            if (step.rule == RuleTag::Lit || step.rule == RuleTag::Ind) {
                if (!step.premises.empty()) throw Error("axioms take no premises");
                if (step.rule == RuleTag::Lit) {
                    expected = axiom_lit(step.sequent.gamma, step.sequent.phi);
                } else {
                    const IlFormula phi = desugar_dep(step.sequent.phi);
                    if (phi.kind != IlFormula::Kind::Indep) throw Error("PS-ind concludes an independence atom");
                    expected = axiom_ind(step.sequent.gamma, phi.tuples[0], phi.tuples[1], phi.tuples[2]);
                }
            } else {
                std::vector<Sequent> prem;
                for (auto p : step.premises) prem.push_back(proof.steps[p].sequent);
                RuleParams params = step.params;
                params.gamma = step.sequent.gamma;
                if (step.rule == RuleTag::Exists || step.rule == RuleTag::Forall) {
                    const auto want = step.rule == RuleTag::Exists ? IlFormula::Kind::Exists : IlFormula::Kind::Forall;
                    if (step.sequent.phi.kind != want) throw Error("conclusion phi has the wrong quantifier");
                    if (!params.var.empty() && params.var != step.sequent.phi.var)
                        throw Error("var= disagrees with the quantifier of phi");
                    params.var = step.sequent.phi.var;
                }
                if (step.rule == RuleTag::Ent) params.context = as_vector(step.sequent.context);
                auto app = apply_rule(step.rule, prem, params, &theta);
                expected = std::move(app.conclusion);
                obligation = std::move(app.obligation);
            }
            if (!same_sequent(expected, step.sequent))
                throw Error("stated sequent differs from the rule's conclusion " + to_string(expected));
            if (obligation) {
                const auto v = prove_entailment(obligation->premises, obligation->goals, budget);
                sr.prover_steps = v.steps;
                if (v.kind == ProverVerdict::Kind::Refuted) {
                    sr.status = StepReport::Status::Failed;
                    sr.reason = "entailment refuted by a countermodel of size " + std::to_string(v.model->size());
                } else if (v.kind == ProverVerdict::Kind::Unknown) {
                    sr.status = StepReport::Status::Conditional;
                    sr.reason = "entailment unresolved: " + v.reason;
                }
            }
        } catch (const Error &e) {
            sr.status = StepReport::Status::Failed;
            sr.reason = e.what();
        }
        r.steps.push_back(std::move(sr));
    }
    bool conditional = false;
    for (const auto &s : r.steps) {
        if (s.status == StepReport::Status::Failed) {
            r.overall = CheckReport::Overall::Rejected;
            return r;
        }
        conditional = conditional || s.status == StepReport::Status::Conditional;
    }
    r.overall = conditional ? CheckReport::Overall::ConditionallyVerified : CheckReport::Overall::Verified;
    return r;
}

// ---------------------------------------------------------- derived rules

namespace {

class FoDeriver {
public:
    explicit FoDeriver(Proof &p) : p_(p) {}

    std::size_t build(const FoFormula &gamma, const IlFormula &phi) {
        using K = IlFormula::Kind;
        switch (phi.kind) {
        case K::Literal: return push({axiom_lit(gamma, phi), RuleTag::Lit, {}, {}});
        case K::Indep:
        case K::Dep: throw Error("PS-FO applies to first-order formulas only");
        case K::Or: {
            const FoFormula g1 = fo::conj(gamma, to_fo(phi.subs[0]));
            const FoFormula g2 = fo::conj(gamma, to_fo(phi.subs[1]));
            const std::size_t a = build(g1, phi.subs[0]);
            const std::size_t b = build(g2, phi.subs[1]);
            const std::size_t c = entail(a, {});
            const std::size_t d = entail(b, {});
            RuleParams rp;
            rp.gamma = gamma;
            const std::size_t e = rule(RuleTag::Or, {c, d}, rp);
            return entail(e, {universal_closure_of_implication(gamma, to_fo(phi))});
        }
        case K::And: {
            const std::size_t a = build(gamma, phi.subs[0]);
            const std::size_t b = build(gamma, phi.subs[1]);
            const std::size_t c = rule(RuleTag::And, {a, b}, {});
            return entail(c, {universal_closure_of_implication(gamma, to_fo(phi))});
        }
        case K::Exists: {
            const std::string &x = phi.var;
            const FoFormula ex_gamma = fo::exists(x, gamma);
            const FoFormula psi = to_fo(phi.subs[0]);
            const FoFormula ga = fo::conj(ex_gamma, psi);
            const std::size_t a = build(ga, phi.subs[0]);
            const std::size_t b = entail(a, {});
            RuleParams rp;
            rp.gamma = gamma;
            rp.var = x;
            const std::size_t c = rule(RuleTag::Exists, {b}, rp);
            const auto v = var_domain(join(free_team_vars(gamma), free_team_vars(ga)));
            const std::size_t d =
                entail(c, {fo::forall_all(v, fo::iff(fo::conj(ex_gamma, fo::exists(x, psi)), ex_gamma))});
            return entail(d, {universal_closure_of_implication(gamma, to_fo(phi))});
        }
        case K::Forall: {
            const FoFormula ga = fo::exists(phi.var, gamma);
            const std::size_t a = build(ga, phi.subs[0]);
            RuleParams rp;
            rp.gamma = gamma;
            rp.var = phi.var;
            const std::size_t b = rule(RuleTag::Forall, {a}, rp);
            const std::size_t c = entail(b, as_vector(p_.steps[a].sequent.context));
            return entail(c, {universal_closure_of_implication(gamma, to_fo(phi))});
        }
        }
        throw Error("unreachable");
    }

private:
    std::size_t push(ProofStep s) {
        p_.steps.push_back(std::move(s));
        return p_.steps.size() - 1;
    }

    std::size_t rule(RuleTag tag, std::vector<std::size_t> prem, RuleParams rp) {
        std::vector<Sequent> ps;
        for (auto i : prem) ps.push_back(p_.steps[i].sequent);
        auto app = apply_rule(tag, ps, rp);
        return push({std::move(app.conclusion), tag, std::move(prem), std::move(rp)});
    }

    std::size_t entail(std::size_t from, std::vector<FoFormula> ctx) {
        RuleParams rp;
        rp.context = std::move(ctx);
        return rule(RuleTag::Ent, {from}, std::move(rp));
    }

    Proof &p_;
};

Signature sequent_signature(const Sequent &s) {
    Signature sig = signature_of(s.gamma);
    sig.merge(signature_of(s.phi));
    for (const auto &f : s.context) sig.merge(signature_of(f));
    return sig;
}

} // namespace

Proof derive_fo(const FoFormula &gamma, const IlFormula &phi) {
    if (contains_dependency_atom(phi)) throw Error("PS-FO applies to first-order formulas only");
    if (!free_vars(phi).params.empty()) throw Error("PS-FO: phi must not contain parameter variables");
    Proof p;
    p.name = "derived_fo";
    FoDeriver d(p);
    d.build(gamma, phi);
    for (const auto &s : p.steps) p.signature.merge(sequent_signature(s.sequent));
    return p;
}

Proof derive_dep(const FoFormula &gamma, const TermTuple &t, const Term &t2) {
    Proof p;
    p.name = "derived_dep";
    p.steps.push_back({axiom_ind(gamma, t, TermTuple{t2}, TermTuple{t2}), RuleTag::Ind, {}, {}});
    ProofStep last;
    last.rule = RuleTag::Ent;
    last.premises = {0};
    last.params.context = {dependency_context(gamma, t, t2)};
    last.sequent = {{last.params.context[0]}, gamma, il::dep(concat(t, TermTuple{t2}))};
    p.steps.push_back(std::move(last));
    for (const auto &s : p.steps) p.signature.merge(sequent_signature(s.sequent));
    return p;
}

ThetaFo theta_fo(const Theta &theta, const Signature &sig) {
    ThetaFo out;
    out.signature = sig;
    std::set<std::string> used;
    for (const auto &[n, a] : sig.relations) used.insert(n);
    for (const auto &[n, a] : sig.functions) used.insert(n);
    used.insert(sig.constants.begin(), sig.constants.end());
    for (const auto &s : theta.sentences) {
        for (const auto &[n, a] : signature_of(s.body).relations) used.insert(n);
        for (const auto &[n, a] : s.relations) used.insert(n);
    }
    int next = 1;
    for (const auto &s : theta.sentences) {
        std::map<std::string, std::string> ren;
        std::vector<std::string> syms;
        for (const auto &[r, arity] : s.relations) {
            std::string n;
            do n = "S" + std::to_string(next++);
            while (used.count(n));
            used.insert(n);
            ren[r] = n;
            syms.push_back(n);
            out.signature.add_relation(n, arity);
        }
        out.sentences.push_back(rename_relations(s.body, ren));
        out.symbols.push_back(std::move(syms));
    }
    return out;
}

SequentVerdict validate_sequent(const Sequent &s, int max_size) {
    return validate_sequent(s, sequent_signature(s), max_size);
}

SequentVerdict validate_sequent(const Sequent &s, const Signature &sig, int max_size) {
    if (max_size < 1) throw Error("model size bound must be at least 1");
    require_well_formed(s);
    std::set<std::string> params = free_vars(s.gamma).params;
    for (const auto &f : s.context) params = join(params, free_vars(f).params);
    const std::vector<std::string> ps(params.begin(), params.end());
    SequentVerdict v;
    for (int size = 1; size <= max_size; ++size) {
        for_each_structure(sig, static_cast<std::size_t>(size), ps, [&](const Structure &m, const ParamAssignment &h) {
            for (const auto &f : s.context)
                if (!eval_fo(m, h, {}, f)) return true;
            if (eval_entailment(m, s.gamma, h, s.phi)) return true;
            v.valid = false;
            v.model = m;
            v.params = h;
            return false;
        });
        if (!v.valid) return v;
        v.checked_size = size;
    }
    return v;
}

} // namespace indep
