#include <gtest/gtest.h>

#include <functional>

#include "helpers.h"
#include "indep/sampling.h"
#include "indep/semantics.h"

using namespace indep;
using indep::testing::team;

namespace {

// Domain {0,1} with constants c0, c1 naming the elements.
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
    IlFormula il(const std::string &s) const { return parse_il(s, sig); }
};

// Brute force: some pair of subteams covering X makes both halves true.
bool split_oracle(const Structure &m, const Team &x, const std::function<bool(const Team &)> &a,
                  const std::function<bool(const Team &)> &b) {
    const auto rows = x.row_vector();
    const std::uint64_t n = std::uint64_t{1} << rows.size();
    for (std::uint64_t y = 0; y < n; ++y)
        for (std::uint64_t z = 0; z < n; ++z)
            if ((y | z) == n - 1 && a(x.subteam(rows, y)) && b(x.subteam(rows, z))) return true;
    return false;
}

} // namespace

TEST(IndependenceAtom, Examples) {
    const Structure m = Fixture().m;
    const TermTuple x{Term::team_var("x")}, y{Term::team_var("y")};
    EXPECT_TRUE(sat_independence_atom(m, Team({"x", "y"}), {}, x, y));
    EXPECT_TRUE(sat_independence_atom(m, team({"x", "y"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}), {}, x, y));
    EXPECT_FALSE(sat_independence_atom(m, team({"x", "y"}, {{0, 0}, {1, 1}}), {}, x, y));
    EXPECT_TRUE(sat_independence_atom(m, team({"x", "y"}, {{0, 0}, {1, 1}}), x, y, y));
}

TEST(IndependenceAtom, ParameterRejected) {
    const Structure m = Fixture().m;
    EXPECT_THROW(sat_independence_atom(m, team({"x"}, {{0}}), {}, {Term::param_var("p")}, {}), Error);
    EXPECT_THROW(sat_independence_atom(m, team({"x"}, {{0}}), {}, {Term::team_var("y")}, {}), Error);
}

TEST(EvalFull, WorkedExamples) {
    const Fixture f;
    const Team both = team({"x"}, {{0}, {1}});
    EXPECT_TRUE(eval_full(f.m, both, f.il("x = c0 \\/ x = c1")));
    EXPECT_FALSE(eval_full(f.m, both, f.il("x = c0 \\/ x = c0")));
    EXPECT_FALSE(eval_full(f.m, both, f.il("dep(x)")));
    EXPECT_TRUE(eval_full(f.m, team({"x"}, {{1}}), f.il("dep(x)")));
}

TEST(EvalFull, LaxExistential) {
    const Fixture f;
    // Each row may pick both values of y, so y can be made independent of x.
    const Team x = team({"x"}, {{0}, {1}});
    EXPECT_TRUE(eval_full(f.m, x, f.il("exists y. indep(; x ; y)")));
    EXPECT_TRUE(eval_full(f.m, x, f.il("exists y. (dep(x, y) /\\ x != y)")));
    EXPECT_FALSE(eval_full(f.m, x, f.il("exists y. (dep(y) /\\ x != y)")));
}

TEST(EvalFull, UniversalExtension) {
    const Fixture f;
    EXPECT_TRUE(eval_full(f.m, team({"x"}, {{0}}), f.il("forall y. indep(; x ; y)")));
    EXPECT_FALSE(eval_full(f.m, team({"x"}, {{0}}), f.il("forall y. dep(x, y)")));
    EXPECT_TRUE(eval_full(f.m, team({"x"}, {{0}}), f.il("forall y. (y = c0 \\/ y = c1)")));
}

TEST(EvalFull, DisjunctionAgreesWithCoverOracle) {
    const Fixture f;
    Rng rng(17);
    const std::vector<IlFormula> halves{f.il("dep(x)"), f.il("R(y)"), f.il("indep(; x ; y)"), f.il("dep(x, y)")};
    for (int i = 0; i < 150; ++i) {
        const Team x = random_team(f.m, {"x", "y"}, 4, rng);
        const IlFormula &a = halves[i % halves.size()];
        const IlFormula &b = halves[(i / 4) % halves.size()];
        const bool want = split_oracle(
            f.m, x, [&](const Team &y) { return eval_full(f.m, y, a); }, [&](const Team &z) { return eval_full(f.m, z, b); });
        EXPECT_EQ(eval_full(f.m, x, il::tensor_or(a, b)), want);
    }
}

TEST(EvalFull, FlatnessOfFirstOrderFormulas) {
    const Fixture f;
    FormulaGrammar g;
    for (const char *a : {"R(x)", "~R(y)", "x = y", "y != c1"}) g.atoms.push_back(f.il(a));
    g.exists_vars = {"x"};
    g.forall_vars = {"y"};
    Rng rng(23);
    for (const auto &phi : enumerate_formulas(g, 4)) {
        const Team x = random_team(f.m, {"x", "y"}, 4, rng);
        bool every = true;
        for (const auto &r : x.rows()) every = every && eval_full(f.m, Team(x.vars(), {r}), phi);
        EXPECT_EQ(eval_full(f.m, x, phi), every) << to_string(phi);
    }
}

TEST(EvalFull, NaiveSearchAgrees) {
    const Fixture f;
    FormulaGrammar g;
    for (const char *a : {"R(x)", "dep(x, y)", "indep(; x ; y)", "x = c0"}) g.atoms.push_back(f.il(a));
    g.exists_vars = {"y"};
    g.forall_vars = {"x"};
    Rng rng(29);
    for (const auto &phi : enumerate_formulas(g, 4)) {
        const Team x = random_team(f.m, {"x", "y"}, 4, rng);
        EXPECT_EQ(eval_full(f.m, x, phi), eval_full(f.m, x, phi, EvalOptions{false})) << to_string(phi);
    }
}

TEST(EvalFull, ExplainTraceShape) {
    const Fixture f;
    const Team both = team({"x"}, {{0}, {1}});
    const auto t = explain_full(f.m, both, f.il("x = c0 \\/ x = c1"));
    ASSERT_TRUE(t.has_value());
    ASSERT_EQ(t->children.size(), 2u);
    EXPECT_EQ(t->children[0].team, team({"x"}, {{0}}));
    EXPECT_EQ(t->children[1].team, team({"x"}, {{1}}));
    EXPECT_FALSE(explain_full(f.m, both, f.il("dep(x)")).has_value());
}

TEST(EvalFull, FreeVariableOutsideTeamThrows) {
    const Fixture f;
    EXPECT_THROW(eval_full(f.m, team({"x"}, {{0}}), f.il("R(y)")), Error);
}

TEST(EvalGts, SplitNeedsFamilyMembers) {
    const Fixture f;
    const Team x = team({"x"}, {{0}, {1}});
    const Team y0 = team({"x"}, {{0}});
    const Team y1 = team({"x"}, {{1}});
    const Team e({"x"});
    const IlFormula phi = f.il("x = c0 \\/ x = c1");
    EXPECT_FALSE(eval_gts(f.m, {x, y0, e}, x, phi));
    EXPECT_TRUE(eval_full(f.m, x, phi));
    EXPECT_TRUE(eval_gts(f.m, {x, y0, y1, e}, x, phi));
    EXPECT_TRUE(eval_gts(f.m, {x, e}, x, f.il("x = x")));
    EXPECT_THROW(eval_gts(f.m, {y0}, x, phi), Error);
}

TEST(EvalGts, EmptyTeamAlwaysAvailable) {
    const Fixture f;
    const Team y0 = team({"x"}, {{0}});
    // y0 = y0 ∪ ∅, and ∅ need not be listed
    EXPECT_TRUE(eval_gts(f.m, {y0}, y0, f.il("R(x) \\/ ~R(x)")));
    EXPECT_FALSE(eval_gts(f.m, {y0}, y0, f.il("~R(x) \\/ ~R(x)")));
    EXPECT_TRUE(eval_gts(f.m, {y0}, Team({"x"}), f.il("exists y. x != y")));
}

TEST(EvalGts, ExistentialNeedsFamilyWitness) {
    const Fixture f;
    const Team x = team({"x"}, {{0}});
    const Team w = team({"x", "y"}, {{0, 0}});
    const IlFormula phi = f.il("exists y. x = y");
    EXPECT_FALSE(eval_gts(f.m, {x}, x, phi));
    EXPECT_TRUE(eval_gts(f.m, {x, w}, x, phi));
}

TEST(EvalGts, UniversalIgnoresMembership) {
    const Fixture f;
    const Team x = team({"x"}, {{0}});
    EXPECT_TRUE(eval_gts(f.m, {x}, x, f.il("forall y. indep(; x ; y)")));
}

TEST(EvalGts, FullFamilyAgreesWithFull) {
    const Fixture f;
    FormulaGrammar g;
    for (const char *a : {"R(x)", "dep(x, y)", "indep(; x ; y)", "y = c1"}) g.atoms.push_back(f.il(a));
    g.exists_vars = {"y"};
    g.forall_vars = {"y"};
    TeamFamily all;
    for (const auto &vars : {std::vector<std::string>{"x"}, {"x", "y"}})
        for (const auto &t : all_teams(f.m, vars)) all.insert(t);
    for (const auto &phi : enumerate_formulas(g, 4))
        for (const auto &x : all_teams(f.m, {"x"}))
            if (free_team_vars(phi).count("y") == 0) EXPECT_EQ(eval_gts(f.m, all, x, phi), eval_full(f.m, x, phi)) << to_string(phi);
}
