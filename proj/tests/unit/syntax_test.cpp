#include <gtest/gtest.h>

#include "helpers.h"
#include "indep/sampling.h"

using namespace indep;
using indep::testing::sig_of;

namespace {

const Signature kSig = [] {
    Signature s = sig_of("R/1 S/2");
    s.add_function("f", 1);
    s.add_constant("c");
    return s;
}();

Term v(const char *n) { return Term::team_var(n); }

} // namespace

TEST(ParseFo, ForallImplication) {
    const FoFormula f = parse_fo("forall x. (R(x) -> x = x)", kSig);
    EXPECT_EQ(f, fo::forall("x", fo::implies(fo::rel("R", {v("x")}), fo::eq(v("x"), v("x")))));
}

TEST(ParseFo, ParameterPrefix) {
    const FoFormula f = parse_fo("S($p1, x)", kSig);
    EXPECT_EQ(f, fo::rel("S", {Term::param_var("p1"), v("x")}));
}

TEST(ParseFo, BoundParameterRejected) { EXPECT_THROW(parse_fo("exists $p1. R($p1)", kSig), ParseError); }

TEST(ParseFo, UndeclaredAndArity) {
    EXPECT_THROW(parse_fo("Q(x)", kSig), ParseError);
    EXPECT_THROW(parse_fo("R(x, y)", kSig), ParseError);
    EXPECT_THROW(parse_fo("f(x, x) = c", kSig), ParseError);
}

TEST(ParseFo, ErrorCarriesOffset) {
    try {
        parse_fo("R(x) & & R(y)", kSig);
        FAIL() << "expected a parse error";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.offset(), 7u);
    }
}

TEST(ParseFo, Precedence) {
    const FoFormula f = parse_fo("not R(x) & R(y) | R(z) -> R(c)", kSig);
    const auto r = [](const char *n) { return fo::rel("R", {Term::team_var(n)}); };
    EXPECT_EQ(f, fo::implies(fo::disj(fo::conj(fo::neg(r("x")), r("y")), r("z")), fo::rel("R", {Term::constant("c")})));
}

TEST(ParseIl, IndependenceAtom) {
    EXPECT_EQ(parse_il("indep(x ; y ; z)", kSig), il::indep({v("x")}, {v("y")}, {v("z")}));
}

TEST(ParseIl, ExistsTensor) {
    const IlFormula f = parse_il("exists y. (x = y \\/ ~R(x))", kSig);
    EXPECT_EQ(f, il::exists("y", il::tensor_or(il::literal(true, fo::eq(v("x"), v("y"))),
                                               il::literal(false, fo::rel("R", {v("x")})))));
}

TEST(ParseIl, NegationOnCompoundRejected) { EXPECT_THROW(parse_il("~(R(x) /\\ R(y))", kSig), ParseError); }

TEST(ParseIl, ParameterRejected) { EXPECT_THROW(parse_il("R($p)", kSig), ParseError); }

TEST(ParseIl, FoConnectivesRejected) { EXPECT_THROW(parse_il("R(x) & R(y)", kSig), ParseError); }

TEST(ParseIl, EmptySecondTupleWarns) {
    std::vector<std::string> warnings;
    parse_il("indep(x ; ; y)", kSig, &warnings);
    EXPECT_EQ(warnings.size(), 1u);
    warnings.clear();
    parse_il("indep(; x ; y)", kSig, &warnings);
    EXPECT_TRUE(warnings.empty());
}

TEST(FreeVars, Examples) {
    EXPECT_EQ(free_vars(parse_il("exists y. x = y", kSig)), (FreeVars{{"x"}, {}}));
    EXPECT_EQ(free_vars(parse_il("indep(x ; y ; z)", kSig)), (FreeVars{{"x", "y", "z"}, {}}));
    EXPECT_EQ(free_vars(parse_fo("x = $p1", kSig)), (FreeVars{{"x"}, {"p1"}}));
}

TEST(FreeVars, QuantifierShadowing) {
    EXPECT_EQ(free_team_vars(parse_fo("R(x) & exists x. S(x, y)", kSig)), (std::set<std::string>{"x", "y"}));
}

TEST(Rename, Examples) {
    EXPECT_EQ(rename_team_vars(parse_fo("S(x, y)", kSig), {{"x", "v1"}, {"y", "v2"}}), parse_fo("S(v1, v2)", kSig));
    const TermTuple t{Term::app("f", {v("x")}), v("y")};
    const TermTuple want{Term::app("f", {v("v1")}), v("v2")};
    EXPECT_EQ(rename_team_vars(t, {{"x", "v1"}, {"y", "v2"}}), want);
}

TEST(Rename, CaptureAndNonInjective) {
    EXPECT_THROW(rename_team_vars(parse_fo("exists x. S(x, y)", kSig), {{"y", "x"}}), Error);
    EXPECT_THROW(rename_team_vars(parse_fo("S(x, y)", kSig), {{"x", "z"}, {"y", "z"}}), Error);
}

TEST(Rename, BoundOccurrencesUntouched) {
    EXPECT_EQ(rename_team_vars(parse_fo("R(x) & forall x. R(x)", kSig), {{"x", "u"}}),
              parse_fo("R(u) & forall x. R(x)", kSig));
}

TEST(Desugar, Examples) {
    EXPECT_EQ(desugar_dep(parse_il("dep(x, y)", kSig)), il::indep({v("x")}, {v("y")}, {v("y")}));
    EXPECT_EQ(desugar_dep(parse_il("dep(y)", kSig)), il::indep({}, {v("y")}, {v("y")}));
    const IlFormula plain = parse_il("exists y. (R(y) /\\ indep(x ; y ; x))", kSig);
    EXPECT_EQ(desugar_dep(plain), plain);
    EXPECT_THROW(parse_il("dep()", kSig), ParseError);
}

TEST(Desugar, IdempotentAndPreservesFreeVars) {
    FormulaGrammar g;
    for (const char *a : {"dep(x, y)", "dep(f(z))", "R(x)", "indep(x ; y ; z)"}) g.atoms.push_back(parse_il(a, kSig));
    g.exists_vars = {"y"};
    g.forall_vars = {"x"};
    for (const auto &f : enumerate_formulas(g, 4)) {
        const IlFormula d = desugar_dep(f);
        EXPECT_FALSE(contains_dep(d));
        EXPECT_EQ(desugar_dep(d), d);
        EXPECT_EQ(free_vars(d), free_vars(f));
    }
}

TEST(RoundTrip, GeneratedFormulas) {
    Rng rng(7);
    for (int i = 0; i < 300; ++i) {
        const FoFormula f = random_fo(kSig, {"x", "y"}, {"p"}, 4, rng);
        EXPECT_EQ(parse_fo(to_string(f), kSig), f) << to_string(f);
    }
    FormulaGrammar g;
    for (const char *a : {"R(x)", "~S(x, y)", "f(x) != c", "dep(x, y)", "indep(; x ; y)", "indep(x, y ; z ; f(x))"})
        g.atoms.push_back(parse_il(a, kSig));
    g.exists_vars = {"y", "z"};
    g.forall_vars = {"x"};
    for (const auto &f : enumerate_formulas(g, 4)) EXPECT_EQ(parse_il(to_string(f), kSig), f) << to_string(f);
}

TEST(RoundTrip, RenamingMapsFreeVariables) {
    Rng rng(11);
    const VarRenaming m{{"x", "u"}, {"y", "w"}};
    for (int i = 0; i < 200; ++i) {
        const FoFormula f = random_fo(kSig, {"x", "y"}, {}, 3, rng);
        std::set<std::string> want;
        for (const auto &x : free_team_vars(f)) want.insert(m.count(x) ? m.at(x) : x);
        EXPECT_EQ(free_team_vars(rename_team_vars(f, m)), want);
    }
}

TEST(Conversions, ToFoAndBack) {
    const IlFormula f = parse_il("forall x. (R(x) \\/ exists y. (~S(x, y) /\\ x != y))", kSig);
    EXPECT_EQ(fo_to_il(to_fo(f)), f);
    EXPECT_THROW(to_fo(parse_il("dep(x)", kSig)), Error);
    EXPECT_THROW(fo_to_il(parse_fo("R(x) -> R(y)", kSig)), Error);
}

TEST(FreshVariant, SkipsTaken) {
    EXPECT_EQ(fresh_variant("x", "1", {"x"}), "x_1");
    EXPECT_EQ(fresh_variant("x", "1", {"x", "x_1"}), "x__1");
}

TEST(SignatureTest, ConflictingDeclarations) {
    Signature s;
    s.add_relation("R", 1);
    EXPECT_THROW(s.add_relation("R", 2), Error);
    EXPECT_THROW(s.add_constant("R"), Error);
}
