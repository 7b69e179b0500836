#include <gtest/gtest.h>

#include "helpers.h"
#include "indep/model_io.h"
#include "indep/sampling.h"

using namespace indep;
using indep::testing::numbered;
using indep::testing::team;

namespace {

const Signature kR = [] {
    Signature s;
    s.add_relation("R", 1);
    return s;
}();

} // namespace

TEST(EvalFo, Examples) {
    const Structure m = numbered(2, {0});
    const FoFormula rx = parse_fo("R(x)", kR);
    EXPECT_TRUE(eval_fo(m, {}, {{"x", 0}}, rx));
    EXPECT_FALSE(eval_fo(m, {}, {{"x", 1}}, rx));
    EXPECT_TRUE(eval_fo(m, {}, {}, parse_fo("exists x. x = x", kR)));
}

TEST(EvalFo, UnboundVariableThrows) {
    const Structure m = numbered(2, {0});
    EXPECT_THROW(eval_fo(m, {}, {}, parse_fo("R(x)", kR)), Error);
    EXPECT_THROW(eval_fo(m, {}, {}, parse_fo("R($p)", kR)), Error);
}

TEST(TeamOfDefinition, Examples) {
    const Structure m = numbered(2, {0});
    EXPECT_EQ(team_of_definition(m, parse_fo("R(x)", kR), {}, {"x"}), team({"x"}, {{0}}));
    EXPECT_EQ(team_of_definition(m, parse_fo("false", kR), {}, {"x", "y"}), Team({"x", "y"}));
    EXPECT_EQ(team_of_definition(m, parse_fo("x = $p1", kR), {{"p1", 1}}, {"x", "y"}), team({"x", "y"}, {{1, 0}, {1, 1}}));
}

TEST(TeamOfDefinition, FreeVariableOutsideDomainThrows) {
    const Structure m = numbered(2);
    EXPECT_THROW(team_of_definition(m, parse_fo("x = y", kR), {}, {"x"}), Error);
}

TEST(CanonicalDefinition, Examples) {
    const auto empty = canonical_team_definition(Team({"x"}));
    EXPECT_EQ(empty.gamma, fo::bottom());
    EXPECT_TRUE(empty.params.empty());

    const auto single = canonical_team_definition(team({"x"}, {{0}}));
    EXPECT_EQ(to_string(single.gamma), "x = $q1");
    EXPECT_EQ(single.params, (ParamAssignment{{"q1", 0}}));

    const auto pair = canonical_team_definition(team({"x", "y"}, {{0, 1}}));
    EXPECT_EQ(to_string(pair.gamma), "(x = $q1 & y = $q2)");
    EXPECT_EQ(pair.params, (ParamAssignment{{"q1", 0}, {"q2", 1}}));
}

TEST(CanonicalDefinition, RoundTripsOnAllSmallTeams) {
    for (std::size_t n = 1; n <= 3; ++n) {
        const Structure m = numbered(n);
        for (const auto &vars : {std::vector<std::string>{}, {"x"}, {"x", "y"}})
            for (const auto &x : all_teams(m, vars)) {
                const auto d = canonical_team_definition(x);
                EXPECT_EQ(team_of_definition(m, d.gamma, d.params, x.vars()), x);
            }
    }
}

TEST(Restrict, Examples) {
    const Team x = team({"x", "y"}, {{0, 0}, {0, 1}});
    EXPECT_EQ(team_restrict(x, std::vector<std::string>{"x"}), team({"x"}, {{0}}));
    EXPECT_EQ(team_restrict(x, std::vector<std::string>{"x", "y"}), x);
    EXPECT_EQ(team_restrict(Team({"x", "y"}), std::vector<std::string>{"y"}), Team({"y"}));
    EXPECT_THROW(team_restrict(x, std::vector<std::string>{"z"}), Error);
}

TEST(ExtendUniversal, Examples) {
    const Structure m = numbered(2);
    EXPECT_EQ(team_extend_universal(m, team({"x"}, {{0}}), "y"), team({"x", "y"}, {{0, 0}, {0, 1}}));
    EXPECT_EQ(team_extend_universal(m, Team({"x"}), "y"), Team({"x", "y"}));
    EXPECT_EQ(team_extend_universal(m, team({"x"}, {{0}}), "x"), team({"x"}, {{0}, {1}}));
}

TEST(ExtendUniversal, RestrictionInverts) {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const Structure m = numbered(1 + i % 3);
        const Team x = random_team(m, {"x", "y"}, 5, rng);
        for (const char *v : {"x", "z"}) {
            std::set<std::string> rest(x.vars().begin(), x.vars().end());
            rest.erase(v);
            EXPECT_EQ(team_restrict(team_extend_universal(m, x, v), rest), team_restrict(x, rest));
        }
    }
}

namespace {

// Oracle: all subsets of X[M/var] whose restriction matches X's.
std::vector<Team> variations_by_filter(const Structure &m, const Team &x, const std::string &var) {
    const Team ext = team_extend_universal(m, x, var);
    std::set<std::string> rest(x.vars().begin(), x.vars().end());
    rest.erase(var);
    const Team want = team_restrict(x, rest);
    const auto rows = ext.row_vector();
    std::vector<Team> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rows.size()); ++mask) {
        const Team y = ext.subteam(rows, mask);
        if (team_restrict(y, rest) == want) out.push_back(y);
    }
    return out;
}

} // namespace

TEST(XVariationsTest, WorkedExample) {
    const Structure m = numbered(2);
    const auto vs = enumerate_x_variations(m, team({"x"}, {{0}}), "y");
    EXPECT_EQ(vs.size(), 3u);
    for (const auto &y : vs) {
        EXPECT_FALSE(y.empty());
        EXPECT_TRUE(y.subset_of(team({"x", "y"}, {{0, 0}, {0, 1}})));
    }
    const auto none = enumerate_x_variations(m, Team({"x"}), "y");
    ASSERT_EQ(none.size(), 1u);
    EXPECT_TRUE(none.front().empty());
}

TEST(XVariationsTest, MatchesFilterOracleAndCount) {
    Rng rng(5);
    for (std::size_t n = 1; n <= 3; ++n) {
        const Structure m = numbered(n);
        for (int k = 0; k < 20; ++k) {
            const Team x = random_team(m, {"x", "y"}, 3, rng);
            for (const char *v : {"x", "y", "z"}) {
                const auto got = enumerate_x_variations(m, x, v);
                const std::set<Team> got_set(got.begin(), got.end());
                const auto want = variations_by_filter(m, x, v);
                EXPECT_EQ(got_set, std::set<Team>(want.begin(), want.end()));
                EXPECT_EQ(got.size(), got_set.size());
                std::set<std::string> rest(x.vars().begin(), x.vars().end());
                rest.erase(v);
                std::uint64_t count = 1;
                for (std::size_t r = 0; r < team_restrict(x, rest).size(); ++r) count *= (std::uint64_t{1} << n) - 1;
                EXPECT_EQ(got.size(), count);
                EXPECT_EQ(XVariations(m, x, v).count(), count);
                for (const auto &y : got) EXPECT_TRUE(is_x_variation(x, y, v));
            }
        }
    }
}

TEST(XVariationsTest, DeterministicOrder) {
    const Structure m = numbered(2);
    const Team x = team({"x"}, {{0}, {1}});
    EXPECT_EQ(enumerate_x_variations(m, x, "y"), enumerate_x_variations(m, x, "y"));
}

TEST(ModelIo, ParseAndFormat) {
    const std::string text = R"(model m {
  domain = {a, b, c}
  rel R/2 = {(a, b), (c, c)}
  fun f/1 = {a -> b, b -> c, c -> a}
  const k = b
})";
    const Structure m = parse_structure(text);
    EXPECT_EQ(m.size(), 3u);
    EXPECT_TRUE(m.holds("R", {0, 1}));
    EXPECT_FALSE(m.holds("R", {1, 0}));
    EXPECT_EQ(m.apply("f", {2}), 0);
    EXPECT_EQ(m.constant("k"), 1);
    EXPECT_EQ(parse_structure(format_structure(m)), m);

    const Team x = parse_team("team t over (y, x) { (a, b) (c, a) }", m);
    EXPECT_EQ(x.vars(), (std::vector<std::string>{"x", "y"}));
    EXPECT_TRUE(x.contains({1, 0}));
    EXPECT_EQ(parse_team(format_team(x, m), m), x);
}

TEST(ModelIo, Errors) {
    EXPECT_THROW(parse_structure("model m { domain = {} }"), ParseError);
    EXPECT_THROW(parse_structure("model m { domain = {a} fun f/1 = {} }"), Error);
    EXPECT_THROW(parse_structure("model m { domain = {a} rel R/1 = {(b)} }"), ParseError);
    const Structure m = parse_structure("model m { domain = {a} }");
    EXPECT_THROW(parse_team("team t over (x) { (a, a) }", m), ParseError);
}
