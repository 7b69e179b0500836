#include <gtest/gtest.h>

#include <filesystem>

#include "indep/entailment.h"
#include "indep/model_io.h"
#include "indep/proof.h"
#include "indep/proof_io.h"
#include "indep/sampling.h"

using namespace indep;

namespace {

Signature sig() {
    Signature s;
    s.add_relation("R", 1);
    s.add_relation("S", 2);
    s.add_relation("P", 1);
    s.add_relation("Q", 1);
    return s;
}

FoFormula f(const std::string &t) { return parse_fo(t, sig()); }
IlFormula ilf(const std::string &t) { return parse_il(t, sig()); }
Term v(const char *n) { return Term::team_var(n); }

bool verified(const Proof &p, const Theta &th = {}) { return check_proof(p, th).overall == CheckReport::Overall::Verified; }

Proof load(const std::string &name) { return parse_proof(read_file(std::string(INDEP_CORPUS_DIR) + "/" + name)); }

} // namespace

TEST(AxiomLit, Examples) {
    const Sequent s = axiom_lit(f("R(x)"), ilf("x = x"));
    EXPECT_EQ(s.context, (std::set<FoFormula>{f("forall x. (R(x) -> x = x)")}));
    const Sequent t = axiom_lit(f("S(x, $p1)"), ilf("P(y)"));
    EXPECT_EQ(t.context, (std::set<FoFormula>{f("forall x. forall y. (S(x, $p1) -> P(y))")}));
    EXPECT_THROW(axiom_lit(f("R(x)"), ilf("dep(x)")), Error);
}

TEST(AxiomInd, DisplayedShape) {
    const Sequent s = axiom_ind(f("S(x, y)"), {v("x")}, {v("y")}, {v("y")});
    ASSERT_EQ(s.context.size(), 1u);
    const FoFormula &c = *s.context.begin();
    EXPECT_TRUE(free_vars(c).team.empty());
    // ∀x_1 ∀y_1 ∀x_2 ∀y_2 ( ... → ∃x_3 ∃y_3 ...)
    const FoFormula *q = &c;
    std::vector<std::string> prefix;
    while (q->kind == FoFormula::Kind::Forall) {
        prefix.push_back(q->name);
        q = &q->subs[0];
    }
    EXPECT_EQ(prefix, (std::vector<std::string>{"x_1", "y_1", "x_2", "y_2"}));
    ASSERT_EQ(q->kind, FoFormula::Kind::Implies);
    EXPECT_EQ(q->subs[1].kind, FoFormula::Kind::Exists);
    EXPECT_EQ(s.phi, il::indep({v("x")}, {v("y")}, {v("y")}));
}

TEST(AxiomInd, ParameterRejected) {
    EXPECT_THROW(axiom_ind(f("R(x)"), {Term::param_var("p")}, {v("x")}, {v("x")}), Error);
}

TEST(AxiomInd, SideConditionMeansTheAtom) {
    // In every small structure, the context sentence holds iff the team
    // defined by gamma satisfies the atom.
    const std::vector<std::tuple<std::string, TermTuple, TermTuple, TermTuple>> cases{
        {"true", {}, {v("x")}, {v("x")}},
        {"S(x, y)", {v("x")}, {v("y")}, {v("y")}},
        {"S(x, y) | R(x)", {}, {v("x")}, {v("y")}},
        {"S(x, y) & not (x = y)", {v("y")}, {v("x")}, {v("x")}},
    };
    Signature sg;
    sg.add_relation("R", 1);
    sg.add_relation("S", 2);
    for (const auto &[g, a, b, c] : cases) {
        const FoFormula gamma = parse_fo(g, sg);
        const Sequent s = axiom_ind(gamma, a, b, c);
        for (std::size_t n = 1; n <= 2; ++n)
            for_each_structure(sg, n, {}, [&](const Structure &m, const ParamAssignment &) {
                std::set<std::string> vs = free_team_vars(gamma);
                for (const auto &t : {a, b, c})
                    for (const auto &x : free_vars(t).team) vs.insert(x);
                const Team x = team_of_definition(m, gamma, {}, var_domain(vs));
                EXPECT_EQ(eval_fo(m, {}, {}, *s.context.begin()), sat_independence_atom(m, x, a, b, c)) << g;
                return true;
            });
        EXPECT_TRUE(validate_sequent(s, 3).valid) << g;
    }
}

TEST(ApplyRule, AndShape) {
    const Sequent a = axiom_lit(f("R(x)"), ilf("R(x)"));
    const Sequent b = axiom_lit(f("R(x)"), ilf("x = x"));
    const auto r = apply_rule(RuleTag::And, {a, b}, {});
    std::set<FoFormula> both = a.context;
    both.insert(b.context.begin(), b.context.end());
    EXPECT_EQ(r.conclusion.context, both);
    EXPECT_EQ(r.conclusion.phi, il::conj(a.phi, b.phi));
    EXPECT_FALSE(r.obligation.has_value());
    EXPECT_THROW(apply_rule(RuleTag::And, {a, axiom_lit(f("P(x)"), ilf("x = x"))}, {}), Error);
}

TEST(ApplyRule, DeparSideCondition) {
    const Sequent s = axiom_lit(f("S(x, $p)"), ilf("x = x"));
    RuleParams rp;
    rp.param = "p";
    EXPECT_THROW(apply_rule(RuleTag::Depar, {s}, rp), Error);
    Sequent t = axiom_lit(f("R(x)"), ilf("R(x)"));
    t.context = {f("R($p)"), f("P($p)")};
    const auto r = apply_rule(RuleTag::Depar, {t}, rp);
    EXPECT_EQ(r.conclusion.context, (std::set<FoFormula>{f("exists p. (P(p) & R(p))")}));
}

TEST(ApplyRule, DeparRenamesWhenTaken) {
    Sequent t = axiom_lit(f("R(x)"), ilf("R(x)"));
    t.context = {f("R($p) & forall p. P(p)")};
    RuleParams rp;
    rp.param = "p";
    const auto r = apply_rule(RuleTag::Depar, {t}, rp);
    EXPECT_EQ(r.conclusion.context, (std::set<FoFormula>{f("exists p_1. (R(p_1) & forall p. P(p))")}));
}

TEST(ApplyRule, SplitShape) {
    Sequent a = axiom_lit(f("R(x)"), ilf("R(x)"));
    Sequent b = a;
    a.context = {f("P($p)")};
    b.context = {f("not P($p)"), f("Q($p)")};
    const auto r = apply_rule(RuleTag::Split, {a, b}, {});
    EXPECT_EQ(r.conclusion.context, (std::set<FoFormula>{f("P($p) | (Q($p) & not P($p))")}));
    Sequent c = axiom_lit(f("R(x)"), ilf("x = x"));
    EXPECT_THROW(apply_rule(RuleTag::Split, {a, c}, {}), Error);
}

TEST(ApplyRule, EntAttachesObligation) {
    const Sequent a = axiom_lit(f("R(x)"), ilf("R(x)"));
    RuleParams rp;
    rp.context = {f("P($p)")};
    const auto r = apply_rule(RuleTag::Ent, {a}, rp);
    ASSERT_TRUE(r.obligation.has_value());
    EXPECT_EQ(r.obligation->premises, rp.context);
    EXPECT_EQ(r.obligation->goals, std::vector<FoFormula>(a.context.begin(), a.context.end()));
}

TEST(ApplyRule, ArityAndAxiomErrors) {
    const Sequent a = axiom_lit(f("R(x)"), ilf("R(x)"));
    EXPECT_THROW(apply_rule(RuleTag::Or, {a}, {}), Error);
    EXPECT_THROW(apply_rule(RuleTag::Lit, {}, {}), Error);
    EXPECT_THROW(apply_rule(RuleTag::Exists, {a}, {}), Error);
}

TEST(ApplyRule, ThetaSideConditions) {
    Signature s = sig();
    s.add_relation("T", 1);
    const Theta th = parse_theta("theta { exists U/1 : forall y. (U(y) <-> R(y)) }", sig());
    Sequent a = axiom_lit(f("R(x)"), ilf("R(x)"));
    a.context = {parse_fo("forall y. (T(y) <-> R(y))", s), f("P($p)")};
    RuleParams rp;
    rp.theta = 0;
    rp.symbols = {"T"};
    const auto r = apply_rule(RuleTag::Theta, {a}, rp, &th);
    EXPECT_EQ(r.conclusion.context, (std::set<FoFormula>{f("P($p)")}));
    Sequent b = a;
    b.context.insert(parse_fo("T($p)", s));
    EXPECT_THROW(apply_rule(RuleTag::Theta, {b}, rp, &th), Error);
    rp.symbols = {"Q"};
    EXPECT_THROW(apply_rule(RuleTag::Theta, {a}, rp, &th), Error);
    rp.theta = 3;
    EXPECT_THROW(apply_rule(RuleTag::Theta, {a}, rp, &th), Error);
}

TEST(CheckProof, DisjunctionDerivation) {
    const Proof p = load("fo_or.proof");
    ASSERT_EQ(p.steps.size(), 6u);
    EXPECT_EQ(p.length(), 5u);
    const CheckReport r = check_proof(p, p.theta);
    EXPECT_EQ(r.overall, CheckReport::Overall::Verified);
    for (const auto &s : r.steps) EXPECT_EQ(s.status, StepReport::Status::OK);
}

TEST(CheckProof, AlteredStepRejected) {
    Proof p = load("fo_or.proof");
    // step (e): swap its side condition for a non-equivalent one; the PS-or
    // recomputation no longer matches.
    p.steps[4].sequent.context = {f("forall x. (P(x) <-> (P(x) & Q(x)))")};
    const CheckReport r = check_proof(p, p.theta);
    EXPECT_EQ(r.overall, CheckReport::Overall::Rejected);
    EXPECT_EQ(r.steps[4].status, StepReport::Status::Failed);
    EXPECT_EQ(r.steps[5].status, StepReport::Status::Failed);
}

TEST(CheckProof, ZeroBudgetIsConditional) {
    const Proof p = load("fo_or.proof");
    const CheckReport r = check_proof(p, p.theta, {0, 1000, 0});
    EXPECT_EQ(r.overall, CheckReport::Overall::ConditionallyVerified);
}

TEST(CheckProof, InvalidEntailmentFails) {
    Proof p;
    p.signature = sig();
    p.steps.push_back({axiom_lit(f("x = x"), ilf("R(x)")), RuleTag::Lit, {}, {}});
    Sequent weak = p.steps[0].sequent;
    weak.context = {};
    p.steps.push_back({weak, RuleTag::Ent, {0}, {}});
    const CheckReport r = check_proof(p, {});
    EXPECT_EQ(r.overall, CheckReport::Overall::Rejected);
    EXPECT_EQ(r.steps[0].status, StepReport::Status::OK);
    EXPECT_EQ(r.steps[1].status, StepReport::Status::Failed);
}

TEST(CheckProof, ForwardPremiseRejected) {
    Proof p = load("fo_or.proof");
    p.steps[2].premises = {3};
    EXPECT_EQ(check_proof(p, {}).overall, CheckReport::Overall::Rejected);
    EXPECT_EQ(check_proof(Proof{}, {}).overall, CheckReport::Overall::Rejected);
}

TEST(DeriveFo, Examples) {
    const Proof one = derive_fo(f("R(x)"), ilf("x = x"));
    EXPECT_EQ(one.steps.size(), 1u);
    EXPECT_EQ(one.steps[0].rule, RuleTag::Lit);
    const Proof conj = derive_fo(f("R(x)"), ilf("P(x) /\\ Q(x)"));
    ASSERT_EQ(conj.steps.size(), 4u);
    EXPECT_EQ(conj.steps.back().rule, RuleTag::Ent);
    EXPECT_TRUE(verified(conj));
    const Proof ex = derive_fo(f("R(x)"), ilf("exists y. y = x"));
    EXPECT_TRUE(verified(ex));
    EXPECT_EQ(ex.conclusion().context, (std::set<FoFormula>{f("forall x. (R(x) -> exists y. y = x)")}));
    EXPECT_THROW(derive_fo(f("R(x)"), ilf("dep(x)")), Error);
}

TEST(DeriveFo, ConclusionShape) {
    Rng rng(71);
    FormulaGrammar g;
    for (const char *a : {"P(x)", "~Q(y)", "x = y"}) g.atoms.push_back(ilf(a));
    g.exists_vars = {"y"};
    g.forall_vars = {"x"};
    for (int i = 0; i < 15; ++i) {
        const IlFormula phi = random_formula(g, 5, rng);
        const Proof p = derive_fo(f("S(x, y)"), phi);
        const auto &c = p.conclusion();
        EXPECT_EQ(c.phi, phi);
        std::set<std::string> vs = free_team_vars(f("S(x, y)"));
        for (const auto &x : free_team_vars(phi)) vs.insert(x);
        EXPECT_EQ(c.context, (std::set<FoFormula>{fo::forall_all(var_domain(vs), fo::implies(f("S(x, y)"), to_fo(phi)))}));
        EXPECT_TRUE(verified(p)) << to_string(phi);
    }
}

TEST(DeriveDep, DisplayedContext) {
    const Proof p = derive_dep(f("S(x, y)"), {v("x")}, v("y"));
    ASSERT_EQ(p.steps.size(), 2u);
    EXPECT_EQ(p.steps[0].rule, RuleTag::Ind);
    EXPECT_EQ(p.steps[1].rule, RuleTag::Ent);
    EXPECT_EQ(p.conclusion().context,
              (std::set<FoFormula>{f("forall x_1. forall y_1. forall x_2. forall y_2. (((S(x_1, y_1) & S(x_2, y_2)) & x_1 = x_2) -> y_1 = y_2)")}));
    EXPECT_EQ(p.conclusion().phi, ilf("dep(x, y)"));
    EXPECT_TRUE(verified(p));
}

TEST(DeriveDep, Constancy) {
    const Proof p = derive_dep(f("R(x)"), {}, v("x"));
    EXPECT_EQ(p.conclusion().context, (std::set<FoFormula>{f("forall x_1. forall x_2. ((R(x_1) & R(x_2)) -> x_1 = x_2)")}));
    EXPECT_TRUE(verified(p));
}

TEST(DeriveDep, ObligationProvedQuickly) {
    const Proof p = derive_dep(f("S(x, y)"), {v("x")}, v("y"));
    const CheckReport r = check_proof(p, {}, {2, 2000, 2});
    EXPECT_EQ(r.steps[1].status, StepReport::Status::OK);
}

TEST(ThetaFo, Examples) {
    const Theta one = parse_theta("theta { exists R/1 : forall x. R(x) }", {});
    const ThetaFo t = theta_fo(one, {});
    ASSERT_EQ(t.sentences.size(), 1u);
    Signature ext;
    ext.add_relation("S1", 1);
    EXPECT_EQ(t.sentences[0], parse_fo("forall x. S1(x)", ext));
    EXPECT_TRUE(theta_fo({}, {}).sentences.empty());
    const Theta two = parse_theta("theta { exists R/1 : forall x. R(x) ; exists R/1 : exists x. R(x) }", {});
    const ThetaFo u = theta_fo(two, {});
    ASSERT_EQ(u.symbols.size(), 2u);
    EXPECT_NE(u.symbols[0], u.symbols[1]);
}

TEST(ThetaFo, AvoidsUsedNames) {
    Signature s;
    s.add_relation("S1", 1);
    const Theta th = parse_theta("theta { exists R/1 : forall x. (R(x) -> S1(x)) }", s);
    const ThetaFo t = theta_fo(th, s);
    EXPECT_NE(t.symbols[0][0], "S1");
    EXPECT_TRUE(t.signature.has_relation(t.symbols[0][0]));
}

TEST(ValidateSequent, Examples) {
    EXPECT_TRUE(validate_sequent(axiom_lit(f("R(x)"), ilf("x = x")), 3).valid);
    Signature s;
    s.add_relation("R", 1);
    s.add_relation("P", 1);
    const Sequent bad{{}, parse_fo("R(x)", s), parse_il("P(x)", s)};
    const auto v = validate_sequent(bad, 3);
    ASSERT_FALSE(v.valid);
    ASSERT_TRUE(v.model.has_value());
    EXPECT_EQ(v.model->size(), 1u);
    EXPECT_TRUE(v.model->holds("R", {0}));
    EXPECT_FALSE(v.model->holds("P", {0}));
    const Sequent vac{{parse_fo("false", s)}, parse_fo("R(x)", s), parse_il("P(x)", s)};
    EXPECT_TRUE(validate_sequent(vac, 3).valid);
}

TEST(Soundness, RandomRuleApplications) {
    // One rule application on top of random axioms; the conclusions
    // must be valid.
    Signature s;
    s.add_relation("P", 1);
    s.add_relation("Q", 1);
    Rng rng(73);
    FormulaGrammar g;
    for (const char *a : {"P(x)", "~Q(x)", "x = y"}) g.atoms.push_back(parse_il(a, s));
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        const FoFormula gamma = random_fo(s, {"x", "y"}, {}, 1, rng);
        std::vector<Sequent> pool{axiom_lit(gamma, g.atoms[i % 3]), axiom_ind(gamma, {}, {v("x")}, {v("y")})};
        const FoFormula gamma2 = random_fo(s, {"x", "y"}, {}, 1, rng);
        pool.push_back(axiom_ind(gamma2, {v("x")}, {v("y")}, {v("y")}));
        RuleParams rp;
        rp.gamma = random_fo(s, {"x", "y"}, {}, 1, rng);
        rp.var = i % 2 ? "x" : "y";
        std::vector<RuleApplication> out;
        out.push_back(apply_rule(RuleTag::Or, {pool[0], pool[2]}, rp));
        out.push_back(apply_rule(RuleTag::And, {pool[0], pool[1]}, rp));
        out.push_back(apply_rule(i % 2 ? RuleTag::Exists : RuleTag::Forall, {pool[1]}, rp));
        for (const auto &a : out) {
            EXPECT_TRUE(validate_sequent(a.conclusion, 2).valid) << to_string(a.conclusion);
            ++checked;
        }
    }
    EXPECT_EQ(checked, 120);
}

TEST(Soundness, ThetaClosedGeneralModels) {
    // The conclusion needs two distinct elements; it must hold in every
    // Θ-closed explicit general model of size 2 whose family has the team.
    const Proof p = parse_proof(read_file(std::string(INDEP_CORPUS_DIR) + "/general/theta_two_elements.proof"));
    ASSERT_TRUE(verified(p, p.theta));
    const Sequent &c = p.conclusion();
    EXPECT_FALSE(validate_sequent(c, 1).valid);
    Rng rng(79);
    Structure m({"0", "1"});
    const Team x = team_of_definition(m, c.gamma, {}, {"x"});
    std::vector<Team> candidates;
    for (const auto &vars : {std::vector<std::string>{"x"}, {"x", "y"}})
        for (const auto &t : all_teams(m, vars)) candidates.push_back(t);
    int closed = 0;
    for (int i = 0; i < 12; ++i) {
        TeamFamily seed{x};
        for (const auto &t : candidates)
            if (rng() % 4 == 0) seed.insert(t);
        const TeamFamily fam = close_family(m, seed, {"x", "y"}, 3);
        GeneralModel g{m, FamilyKind::Explicit, fam};
        if (!check_theta_closed(g, p.theta).closed) continue;
        ++closed;
        EXPECT_TRUE(eval_gts(m, fam, x, c.phi));
    }
    EXPECT_GT(closed, 0);
}

TEST(ProofIo, RoundTripCorpus) {
    int n = 0;
    for (const auto &e : std::filesystem::directory_iterator(INDEP_CORPUS_DIR)) {
        if (e.path().extension() != ".proof") continue;
        const Proof p = parse_proof(read_file(e.path().string()));
        const Proof q = parse_proof(format_proof(p));
        ASSERT_EQ(q.steps.size(), p.steps.size());
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            EXPECT_TRUE(same_sequent(p.steps[i].sequent, q.steps[i].sequent));
            EXPECT_EQ(p.steps[i].premises, q.steps[i].premises);
            EXPECT_EQ(p.steps[i].rule, q.steps[i].rule);
        }
        ++n;
    }
    EXPECT_GE(n, 15);
}

TEST(ProofIo, Errors) {
    EXPECT_THROW(parse_proof("proof p { sig { rel R/1 } 2: PS-lit gamma=\"R(x)\" phi=\"R(x)\" ctx=[] }"), ParseError);
    EXPECT_THROW(parse_proof("proof p { sig { rel R/1 } 1: PS-foo gamma=\"R(x)\" phi=\"R(x)\" ctx=[] }"), ParseError);
    EXPECT_THROW(parse_proof("proof p { sig { rel R/1 } 1: PS-lit gamma=\"Q(x)\" phi=\"R(x)\" ctx=[] }"), ParseError);
    EXPECT_THROW(parse_proof("proof p { sig { rel R/1 } 1: PS-lit gamma=\"R(x)\" ctx=[] }"), ParseError);
    EXPECT_THROW(parse_proof("proof p { sig { rel R/1 } 1: PS-lit from [0] gamma=\"R(x)\" phi=\"R(x)\" ctx=[] }"), ParseError);
}

TEST(SequentIo, RoundTrip) {
    const NamedSequent s = parse_sequent(read_file(std::string(INDEP_CORPUS_DIR) + "/sequents/bad.seq"));
    EXPECT_EQ(s.name, "bad");
    const NamedSequent t = parse_sequent(format_sequent(s));
    EXPECT_TRUE(same_sequent(s.sequent, t.sequent));
    EXPECT_EQ(t.signature, s.signature);
    EXPECT_FALSE(validate_sequent(s.sequent, s.signature, 2).valid);
}

TEST(SequentWellFormed, Restrictions) {
    Sequent s = axiom_lit(f("R(x)"), ilf("R(x)"));
    EXPECT_NO_THROW(require_well_formed(s));
    s.context.insert(f("R(x)"));
    EXPECT_THROW(require_well_formed(s), Error);
}
