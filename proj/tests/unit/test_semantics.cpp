#include <doctest.h>

#include "ctlab/error.hpp"
#include "ctlab/generate.hpp"
#include "ctlab/semantics.hpp"
#include "ctlab/syntax.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace ctlab;
using namespace fixtures;

namespace {

FormulaShape shape_of(Language lang, int depth = 3)
{
    FormulaShape s;
    s.language = lang;
    s.depth = depth;
    s.inconsistent = 0.1;
    s.max_determinants = 2;
    return s;
}

}  // namespace

TEST_CASE("the worked judgments on the four-variable team")
{
    const auto sig = uxyz();
    const auto t = uxyz_team();
    const auto tx = intervene_causal_team(t, parse_intervention("X=1", *sig));
    CHECK(satisfies(t, parse("(X=1) []-> Y=2", sig)));
    CHECK(satisfies(t, parse("dep(Y; Z)", sig)));
    CHECK_FALSE(satisfies(tx, parse("dep(Y; Z)", sig)));
    CHECK(satisfies(t, parse("!Y=2 \\/ Y=2", sig)));
    CHECK_FALSE(satisfies(t, parse("!Y=2 \\\\/ Y=2", sig)));
    CHECK(satisfies(t, parse("X=1 => Y=2", sig)));
    CHECK(satisfies(tx, parse("Y=2", sig)));

    const auto g = to_generalized(t).members();
    CHECK(oracle::sat(g, parse("(X=1) []-> Y=2", sig)));
    CHECK(oracle::sat(g, parse("dep(Y; Z)", sig)));
    CHECK_FALSE(oracle::sat(to_generalized(tx).members(), parse("dep(Y; Z)", sig)));
    CHECK(oracle::sat(g, parse("!Y=2 \\/ Y=2", sig)));
    CHECK_FALSE(oracle::sat(g, parse("!Y=2 \\\\/ Y=2", sig)));
    CHECK(oracle::sat(g, parse("X=1 => Y=2", sig)));
}

TEST_CASE("inconsistent antecedents hold vacuously")
{
    const auto sig = uxyz();
    CHECK(satisfies(uxyz_team(), parse("(X=1 & X=0) []-> Y=1 /\\ Y=2", sig)));
}

TEST_CASE("the empty team satisfies everything")
{
    const auto sig = binary({"X", "Y"});
    Rng rng(1);
    SatContext ctx;
    const GeneralizedCausalTeam empty(sig);
    for (Language lang : {Language::CO, Language::COD, Language::COV})
        for (int i = 0; i < 100; ++i)
            CHECK(ctx.satisfies(empty, random_formula(rng, *sig, shape_of(lang))));
    CHECK(satisfies(CausalTeam::empty(sig), bottom()));
}

TEST_CASE("satisfaction agrees with the literal clauses")
{
    const auto sig = binary({"X", "Y", "W"});
    Rng rng(2);
    SatContext ctx;
    for (Language lang : {Language::CO, Language::COD, Language::COV})
        for (int i = 0; i < 400; ++i) {
            const auto t = random_team(rng, sig, 5, i % 2 == 0);
            const auto f = random_formula(rng, *sig, shape_of(lang));
            CHECK(ctx.satisfies(t, f) == oracle::sat(t.members(), f));
        }
}

TEST_CASE("causal teams and their generalized view")
{
    const auto sig = binary({"X", "Y", "W"});
    Rng rng(3);
    SatContext ctx;
    for (int i = 0; i < 300; ++i) {
        const auto t = random_causal_team(rng, sig, 5);
        const auto f = random_formula(rng, *sig, shape_of(i % 2 ? Language::COD : Language::COV));
        CHECK(ctx.satisfies(t, f) == ctx.satisfies(to_generalized(t), f));
    }
}

TEST_CASE("mixed formulas need an explicit opt-in")
{
    const auto sig = binary({"X", "Y"});
    const auto f = parse("con(X) \\\\/ Y=1", sig);
    const GeneralizedCausalTeam t(sig);
    SatContext strict;
    CHECK_THROWS_AS(strict.satisfies(t, f), InvalidArgument);
    SatContext mixed(Limits::defaults(), true);
    CHECK(mixed.satisfies(t, f));
}

TEST_CASE("flatness")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    Rng rng(4);
    for (int i = 0; i < 50; ++i)
        CHECK(is_flat(random_co(rng, *sig, 3), sig, ctx));

    const auto two_rows = GeneralizedCausalTeam(
        sig, {{row(*sig, {"0", "0"}), std::make_shared<const FunctionSystem>(FunctionSystem::all_exogenous(sig))},
              {row(*sig, {"0", "1"}), std::make_shared<const FunctionSystem>(FunctionSystem::all_exogenous(sig))}});
    CHECK_FALSE(is_flat(con(1), {two_rows}, ctx));
    CHECK_FALSE(is_flat(con(1), sig, ctx));
    CHECK_FALSE(is_flat(dep({0}, 1), sig, ctx));
    CHECK(is_flat(dep({0}, 1), {GeneralizedCausalTeam(sig)}, ctx));
}

TEST_CASE("bounded entailment examples")
{
    const auto sig = binary({"X"});
    SatContext ctx;
    for (Semantics sem : {Semantics::causal, Semantics::generalized}) {
        CHECK(entails_bounded({con(0)}, con(0), sig, 4, sem, ctx));
        CHECK(entails_bounded({eq(0, 1)}, con(0), sig, 4, sem, ctx));
        CHECK_FALSE(entails_bounded({con(0)}, eq(0, 1), sig, 4, sem, ctx));
        const auto w = bounded_counterexample({con(0)}, eq(0, 1), sig, 4, sem, ctx);
        REQUIRE(w.has_value());
        CHECK(ctx.satisfies(*w, con(0)));
        CHECK_FALSE(ctx.satisfies(*w, eq(0, 1)));
    }
}

TEST_CASE("bounded entailment agrees with literal enumeration")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto universe = enumerate_sem_reduced(sig);
    const auto gteams = oracle::teams_upto(universe, 3);
    const auto cteams = oracle::causal_teams_upto(universe, 3);
    Rng rng(5);
    for (int i = 0; i < 150; ++i) {
        const auto lang = i % 3 == 0 ? Language::CO : i % 3 == 1 ? Language::COD : Language::COV;
        const auto g = random_formula(rng, *sig, shape_of(lang, 2));
        const auto p = random_formula(rng, *sig, shape_of(lang, 2));
        CHECK(entails_bounded({g}, p, sig, 3, Semantics::generalized, ctx) == oracle::entails({g}, p, gteams));
        CHECK(entails_bounded({g}, p, sig, 3, Semantics::causal, ctx) == oracle::entails({g}, p, cteams));
    }
}

TEST_CASE("dependence atoms through constancy, constancy through global disjunction")
{
    const auto sig = make_signature({{"X", {"0", "1"}}, {"Y", {"a", "b", "c"}}});
    SatContext ctx;
    const auto dep_form = parse("dep(X; Y)", sig);
    const auto eq1 = parse("X=0 /\\ con(Y) \\/ X=1 /\\ con(Y)", sig);
    const auto con_form = parse("con(Y)", sig);
    const auto eq2 = parse("Y=a \\\\/ Y=b \\\\/ Y=c", sig);
    for (Semantics sem : {Semantics::causal, Semantics::generalized}) {
        CHECK(entails_bounded({dep_form}, eq1, sig, 4, sem, ctx));
        CHECK(entails_bounded({eq1}, dep_form, sig, 4, sem, ctx));
        CHECK(entails_bounded({con_form}, eq2, sig, 4, sem, ctx));
        CHECK(entails_bounded({eq2}, con_form, sig, 4, sem, ctx));
    }
}

TEST_CASE("downward closure, union closure and invariance")
{
    const auto sig = binary({"X", "Y", "W"});
    Rng rng(6);
    SatContext ctx;
    for (int i = 0; i < 200; ++i) {
        const auto lang = i % 3 == 0 ? Language::CO : i % 3 == 1 ? Language::COD : Language::COV;
        const auto f = random_formula(rng, *sig, shape_of(lang));
        const auto t = random_team(rng, sig, 5);
        const bool holds = ctx.satisfies(t, f);
        if (holds)
            for (std::size_t k = 0; k < t.size(); ++k) {
                auto ms = t.members();
                ms.erase(ms.begin() + static_cast<std::ptrdiff_t>(k));
                CHECK(ctx.satisfies(GeneralizedCausalTeam(sig, ms), f));
            }
        CHECK(ctx.satisfies(canonical_team(t), f) == holds);
        if (lang == Language::CO) {
            const auto s = random_team(rng, sig, 5);
            if (holds && ctx.satisfies(s, f))
                CHECK(ctx.satisfies(team_union(s, t), f));
        }
    }
}

TEST_CASE("counterfactual-free formulas only see the team component")
{
    const auto sig = binary({"X", "Y", "W"});
    Rng rng(8);
    SatContext ctx;
    FormulaShape shape = shape_of(Language::COD);
    shape.counterfactuals = false;
    for (int i = 0; i < 200; ++i) {
        const auto t = random_team(rng, sig, 5);
        const auto f = random_formula(rng, *sig, shape);
        CHECK(ctx.satisfies(t, f) == ctx.satisfies(swap_laws(rng, t), f));
    }
}
