#include <gtest/gtest.h>

#include "helpers.h"
#include "indep/entailment.h"
#include "indep/sampling.h"

using namespace indep;

namespace {

struct Fixture {
    Signature sig;
    Structure m{{"0", "1"}};
    Fixture() {
        sig.add_relation("R", 1);
        sig.add_constant("c0");
        sig.add_constant("c1");
        m.declare_relation("R", 1);
        m.add_tuple("R", {0});
        m.set_constant("c0", 0);
        m.set_constant("c1", 1);
    }
    FoFormula fo(const std::string &s) const { return parse_fo(s, sig); }
    IlFormula il(const std::string &s) const { return parse_il(s, sig); }
};

} // namespace

TEST(Entailment, WorkedExamples) {
    const Fixture f;
    EXPECT_TRUE(eval_entailment(f.m, f.fo("false"), {}, f.il("R(x) /\\ ~R(x)")));
    EXPECT_TRUE(eval_entailment(f.m, f.fo("x = $p1"), {{"p1", 0}}, f.il("dep(x)")));
    EXPECT_FALSE(eval_entailment(f.m, f.fo("x = x"), {}, f.il("dep(x)")));
}

TEST(Entailment, MissingParameterThrows) {
    const Fixture f;
    EXPECT_THROW(eval_entailment(f.m, f.fo("x = $p"), {}, f.il("dep(x)")), Error);
}

TEST(Entailment, VarDomainIndependence) {
    const Fixture f;
    Rng rng(51);
    FormulaGrammar g;
    for (const char *a : {"R(x)", "dep(x, y)", "indep(; x ; y)", "x = c1"}) g.atoms.push_back(f.il(a));
    g.exists_vars = {"y"};
    g.forall_vars = {"x"};
    for (int i = 0; i < 80; ++i) {
        const FoFormula gamma = random_fo(f.sig, {"x", "y"}, {"p"}, 2, rng);
        const IlFormula phi = random_formula(g, 4, rng);
        const ParamAssignment h{{"p", static_cast<Element>(i % 2)}};
        auto vars = free_team_vars(gamma);
        for (const auto &v : free_team_vars(phi)) vars.insert(v);
        const bool base = eval_entailment(f.m, gamma, h, phi, var_domain(vars));
        vars.insert("z");
        EXPECT_EQ(eval_entailment(f.m, gamma, h, phi, var_domain(vars)), base);
    }
}

TEST(Witness, DisjunctionSplit) {
    const Fixture f;
    const IlFormula phi = f.il("x = c0 \\/ x = c1");
    const auto w = eval_entailment_witnessed(f.m, f.fo("x = x"), {}, phi);
    ASSERT_TRUE(w.has_value());
    ASSERT_EQ(w->rule, WitnessNode::Rule::Or);
    ASSERT_EQ(w->formulas.size(), 2u);
    ParamAssignment h = w->extension;
    EXPECT_EQ(team_of_definition(f.m, w->formulas[0], h, {"x"}), Team({"x"}, {{0}}));
    EXPECT_EQ(team_of_definition(f.m, w->formulas[1], h, {"x"}), Team({"x"}, {{1}}));
    EXPECT_TRUE(check_witness(f.m, f.fo("x = x"), {}, phi, *w));
}

TEST(Witness, LiteralLeafAndFalseVerdict) {
    const Fixture f;
    const auto leaf = eval_entailment_witnessed(f.m, f.fo("R(x)"), {}, f.il("R(x)"));
    ASSERT_TRUE(leaf.has_value());
    EXPECT_EQ(leaf->rule, WitnessNode::Rule::Lit);
    EXPECT_TRUE(leaf->children.empty());
    EXPECT_FALSE(eval_entailment_witnessed(f.m, f.fo("x = x"), {}, f.il("R(x)")).has_value());
}

TEST(Witness, TamperedTreeRejected) {
    const Fixture f;
    const FoFormula gamma = f.fo("x = x");
    const IlFormula phi = f.il("x = c0 \\/ x = c1");
    auto w = *eval_entailment_witnessed(f.m, gamma, {}, phi);
    std::swap(w.formulas[0], w.formulas[1]);
    EXPECT_FALSE(check_witness(f.m, gamma, {}, phi, w));
    auto w2 = *eval_entailment_witnessed(f.m, gamma, {}, phi);
    w2.formulas[1] = w2.formulas[0]; // no longer a cover
    EXPECT_FALSE(check_witness(f.m, gamma, {}, phi, w2));
}

TEST(Witness, ShapeMismatchThrows) {
    const Fixture f;
    WitnessNode bad;
    bad.rule = WitnessNode::Rule::Or;
    EXPECT_THROW(check_witness(f.m, f.fo("R(x)"), {}, f.il("R(x)"), bad), Error);
}

TEST(Witness, QuantifierNodes) {
    const Fixture f;
    const FoFormula gamma = f.fo("x = x");
    for (const char *s : {"exists y. (dep(x, y) /\\ x != y)", "forall y. indep(; x ; y)", "forall y. exists z. dep(y, z)"}) {
        const IlFormula phi = f.il(s);
        const auto w = eval_entailment_witnessed(f.m, gamma, {}, phi);
        ASSERT_TRUE(w.has_value()) << s;
        EXPECT_TRUE(check_witness(f.m, gamma, {}, phi, *w)) << s;
        EXPECT_FALSE(format_witness(*w, f.m).empty());
    }
}

TEST(Witness, AgreesWithVerdict) {
    Signature sig;
    sig.add_relation("R", 1);
    FormulaGrammar g;
    for (const char *a : {"R(x)", "dep(x, y)", "indep(; x ; y)", "~R(y)", "x = y"}) g.atoms.push_back(parse_il(a, sig));
    g.exists_vars = {"y"};
    g.forall_vars = {"x"};
    Rng rng(53);
    for (int i = 0; i < 120; ++i) {
        const Structure m = random_structure(sig, 1 + i % 3, rng);
        const FoFormula gamma = random_fo(sig, {"x", "y"}, {"p"}, 2, rng);
        const ParamAssignment h{{"p", static_cast<Element>(i % m.size())}};
        const IlFormula phi = random_formula(g, 4, rng);
        const bool v = eval_entailment(m, gamma, h, phi);
        const auto w = eval_entailment_witnessed(m, gamma, h, phi);
        EXPECT_EQ(w.has_value(), v);
        if (w) EXPECT_TRUE(check_witness(m, gamma, h, phi, *w));
    }
}
