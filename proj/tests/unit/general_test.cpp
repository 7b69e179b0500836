#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.h"
#include "indep/general.h"
#include "indep/sampling.h"

using namespace indep;
using indep::testing::numbered;
using indep::testing::team;

namespace {

TeamFamily with_empties(TeamFamily f, const std::vector<std::vector<std::string>> &domains) {
    for (const auto &d : domains) f.insert(Team(d));
    return f;
}

TeamFamily all_over(const Structure &m, const std::vector<std::vector<std::string>> &domains) {
    TeamFamily f;
    for (const auto &d : domains)
        for (const auto &t : all_teams(m, d)) f.insert(t);
    return f;
}

} // namespace

TEST(Closure, MissingUniversalExtension) {
    const Structure m = numbered(2, {0});
    // X over (x) present, X[M/y] over (x, y) absent.
    const Team x = team({"x"}, {{0}});
    GeneralModel g{m, FamilyKind::Explicit, with_empties({x, team({"x"}, {{0}, {1}})}, {{}, {"x"}, {"x", "y"}})};
    const auto v = check_general_closure(g, {"x", "y"}, 3);
    ASSERT_FALSE(v.closed);
    EXPECT_FALSE(g.family.count(v.missing));
    // the witness really defines the missing team
    const auto back = team_of_definition(
        [&] {
            std::vector<std::pair<std::string, int>> names;
            std::vector<std::set<Row>> rels;
            for (const auto &[n, t] : v.relation_params) {
                names.emplace_back(n, static_cast<int>(t.vars().size()));
                rels.push_back(team_relation(t));
            }
            return expand_structure(m, names, rels);
        }(),
        v.witness, v.params, v.domain);
    EXPECT_EQ(back, v.missing);
}

TEST(Closure, FullFamilyClosed) {
    const Structure m = numbered(2, {1});
    GeneralModel g{m, FamilyKind::Full, {}};
    EXPECT_TRUE(check_general_closure(g, {"x", "y"}, 4).closed);
    GeneralModel e{m, FamilyKind::Explicit, all_over(m, {{}, {"x"}, {"y"}, {"x", "y"}})};
    EXPECT_TRUE(check_general_closure(e, {"x", "y"}, 3).closed);
}

TEST(Closure, OmittingOneTeamIsCaught) {
    const Structure m = numbered(2);
    const TeamFamily full = all_over(m, {{}, {"x"}});
    for (const auto &t : full) {
        if (t.empty()) continue;
        TeamFamily f = full;
        f.erase(t);
        GeneralModel g{m, FamilyKind::Explicit, f};
        const auto v = check_general_closure(g, {"x"}, 5);
        EXPECT_FALSE(v.closed) << describe(t, m);
    }
}

TEST(Closure, BadBound) {
    GeneralModel g{numbered(1), FamilyKind::Explicit, {Team()}};
    EXPECT_THROW(check_general_closure(g, {"x"}, 0), Error);
}

TEST(Closure, IntersectionOfClosedFamilies) {
    const Structure m = numbered(2, {0});
    const std::set<std::string> u{"x"};
    Rng rng(41);
    const TeamFamily full = all_over(m, {{}, {"x"}});
    for (int i = 0; i < 6; ++i) {
        TeamFamily s1, s2;
        for (const auto &t : full) {
            if (rng() % 3 == 0) s1.insert(t);
            if (rng() % 3 == 0) s2.insert(t);
        }
        const TeamFamily f1 = close_family(m, s1, u, 3);
        const TeamFamily f2 = close_family(m, s2, u, 3);
        TeamFamily both;
        std::set_intersection(f1.begin(), f1.end(), f2.begin(), f2.end(), std::inserter(both, both.end()));
        EXPECT_TRUE(check_general_closure({m, FamilyKind::Explicit, both}, u, 3).closed);
    }
}

TEST(LeastFamily, Examples) {
    const Structure m = numbered(2);
    const TeamFamily f = least_family(m, {"x"});
    // 4 teams over (x), 2 over ()
    EXPECT_EQ(f.size(), 6u);
    EXPECT_TRUE(f.count(Team(std::vector<std::string>{})));
    EXPECT_TRUE(family_teams_definable(m, f));
    EXPECT_EQ(least_family(m, {}).size(), 2u);
}

TEST(LeastFamily, ContainedInClosedFamilies) {
    const Structure m = numbered(2, {1});
    const std::set<std::string> u{"x"};
    const TeamFamily least = least_family(m, u);
    const TeamFamily closed = close_family(m, {team({"x"}, {{1}})}, u, 5);
    EXPECT_TRUE(std::includes(closed.begin(), closed.end(), least.begin(), least.end()));
}

TEST(LeastFamily, AgreesWithFullSemantics) {
    Signature sig;
    sig.add_relation("R", 1);
    FormulaGrammar g;
    for (const char *a : {"R(x)", "dep(x, y)", "indep(; x ; y)", "~R(y)"}) g.atoms.push_back(parse_il(a, sig));
    g.exists_vars = {"y"};
    g.forall_vars = {"x"};
    Rng rng(43);
    for (int i = 0; i < 100; ++i) {
        const Structure m = random_structure(sig, 1 + i % 3, rng);
        const TeamFamily fam = least_family(m, {"x", "y"});
        const IlFormula phi = random_formula(g, 4, rng);
        const Team x = random_team(m, {"x", "y"}, 4, rng);
        EXPECT_EQ(eval_gts(m, fam, x, phi), eval_full(m, x, phi));
    }
}

TEST(Theta, ParseAndPrint) {
    Signature sig;
    sig.add_relation("P", 1);
    const Theta th = parse_theta("theta { exists R/1, S/2 : forall x. (R(x) -> S(x, x)) ; exists R/1 : (exists x. P(x)) | true }", sig);
    ASSERT_EQ(th.sentences.size(), 2u);
    EXPECT_EQ(th.sentences[0].relations.size(), 2u);
    EXPECT_EQ(parse_theta("theta { " + to_string(th.sentences[0]) + " }", sig).sentences[0].body, th.sentences[0].body);
    EXPECT_THROW(parse_theta("theta { exists R/1 : R(x) }", sig), Error);
    EXPECT_THROW(parse_theta("theta { exists P/1 : P(x) }", sig), Error);
}

TEST(Theta, Examples) {
    Signature sig;
    const Theta taut = parse_theta("theta { exists U/1 : forall x. (U(x) | not U(x)) }", sig);
    const Theta two = parse_theta("theta { exists U/1 : (exists x. U(x)) & (exists x. not U(x)) }", sig);
    const Structure m1 = numbered(1);
    const Structure m2 = numbered(2);
    GeneralModel some{m2, FamilyKind::Explicit, {Team({"x"}), team({"x"}, {{1}})}};
    EXPECT_TRUE(check_theta_closed(some, taut).closed);
    const auto v = check_theta_closed({m1, FamilyKind::Full, {}}, two);
    EXPECT_FALSE(v.closed);
    EXPECT_EQ(v.failed, 0u);
    const auto w = check_theta_closed({m2, FamilyKind::Full, {}}, two);
    EXPECT_TRUE(w.closed);
    ASSERT_EQ(w.witnesses.size(), 1u);
    EXPECT_EQ(w.witnesses[0][0].size(), 1u);
    GeneralModel only_full{m2, FamilyKind::Explicit, {Team({"x"}), team({"x"}, {{0}, {1}})}};
    EXPECT_FALSE(check_theta_closed(only_full, two).closed);
}

TEST(Theta, FamilyTeamsOfWrongArityIgnored) {
    Signature sig;
    const Theta two = parse_theta("theta { exists U/1 : (exists x. U(x)) & (exists x. not U(x)) }", sig);
    GeneralModel g{numbered(2), FamilyKind::Explicit, {Team({"x", "y"}), team({"x", "y"}, {{0, 1}})}};
    EXPECT_FALSE(check_theta_closed(g, two).closed);
}
