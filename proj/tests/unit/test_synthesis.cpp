#include <doctest.h>

#include "ctlab/charform.hpp"
#include "ctlab/error.hpp"
#include "ctlab/generate.hpp"
#include "ctlab/synthesis.hpp"
#include "ctlab/syntax.hpp"
#include "fixtures.hpp"

using namespace ctlab;
using namespace fixtures;

namespace {

TeamClass only_empty(const SignaturePtr& sig, Semantics kind, SatContext& ctx)
{
    return make_class(sig, kind, {GeneralizedCausalTeam(sig)}, ctx);
}

}  // namespace

TEST_CASE("the class of the empty team")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    for (Semantics kind : {Semantics::causal, Semantics::generalized}) {
        const auto k = only_empty(sig, kind, ctx);
        CHECK(check_closure(k, ClosureMode::flat, ctx));
        CHECK(check_closure(k, ClosureMode::downward_equiv, ctx));
        CHECK(close_under_succeq(k, ctx).teams == k.teams);
        CHECK(verify_defines(bottom(), k, ctx));
        CHECK(verify_defines(synthesize_co(k, ctx), k, ctx));
        CHECK(verify_defines(synthesize_cod(k, ctx), k, ctx));
    }
}

TEST_CASE("closure of a singleton")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto& universe = ctx.universe(sig);
    for (const auto& m : universe) {
        const auto k = close_under_succeq(make_class(sig, Semantics::generalized, {GeneralizedCausalTeam(sig, {m})}, ctx), ctx);
        REQUIRE(k.teams.size() == 2);
        CHECK(k.teams[0].empty() != k.teams[1].empty());
    }
}

TEST_CASE("a class missing a subteam is not downward closed")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto& u = ctx.universe(sig);
    const GeneralizedCausalTeam pair(sig, {u[0], u[1]});
    const auto k = make_class(sig, Semantics::generalized, {GeneralizedCausalTeam(sig), pair, GeneralizedCausalTeam(sig, {u[0]})}, ctx);
    CHECK_FALSE(check_closure(k, ClosureMode::downward_equiv, ctx));
    CHECK_THROWS_AS(synthesize_cod(k, ctx), InvalidArgument);
    const auto closed = close_under_succeq(k, ctx);
    CHECK(closed.teams.size() == 4);
    CHECK(check_closure(closed, ClosureMode::downward_equiv, ctx));
}

TEST_CASE("CO synthesis for the subteams of one uniform team")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    Rng rng(31);
    for (int i = 0; i < 10; ++i) {
        const auto t = random_team(rng, sig, 4, true);
        const auto k = close_under_succeq(make_class(sig, Semantics::generalized, {t}, ctx), ctx);
        REQUIRE(check_closure(k, ClosureMode::flat, ctx));
        const auto phi = synthesize_co(k, ctx);
        CHECK(phi.is_co());
        CHECK(verify_defines(phi, k, ctx));
    }
}

TEST_CASE("CO synthesis over causal teams")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    Rng rng(32);
    for (int i = 0; i < 10; ++i) {
        const auto k = random_flat_class(rng, sig, Semantics::causal, ctx);
        const auto phi = synthesize_co(k, ctx);
        CHECK(verify_defines(phi, k, ctx));
    }
}

TEST_CASE("CO synthesis rejects classes that are not flat")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto k = class_of(con(0), sig, Semantics::generalized, ctx);
    CHECK_FALSE(check_closure(k, ClosureMode::flat, ctx));
    CHECK(check_closure(k, ClosureMode::downward_equiv, ctx));
    CHECK_THROWS_AS(synthesize_co(k, ctx), InvalidArgument);
    CHECK(verify_defines(synthesize_cod(k, ctx), k, ctx));
}

TEST_CASE("COD synthesis of a downset")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    Rng rng(33);
    for (Semantics kind : {Semantics::generalized, Semantics::causal}) {
        const auto k = random_downset_class(rng, sig, kind, 2, ctx);
        CHECK(verify_defines(synthesize_cod(k, ctx), k, ctx));
    }
}

TEST_CASE("COD synthesis of every team is the empty conjunction")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto k = make_class(sig, Semantics::generalized, enumerate_teams(sig, Semantics::generalized, ctx), ctx);
    const auto phi = synthesize_cod(k, ctx);
    CHECK(phi == conj_all({}));
    CHECK(verify_defines(phi, k, ctx));
}

TEST_CASE("COD synthesis without the largest team")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const GeneralizedCausalTeam full(sig, ctx.universe(sig));
    std::vector<GeneralizedCausalTeam> rest;
    for (const auto& t : enumerate_teams(sig, Semantics::generalized, ctx))
        if (!(t == full))
            rest.push_back(t);
    const auto k = make_class(sig, Semantics::generalized, rest, ctx);
    const auto phi = synthesize_cod(k, ctx);
    CHECK(phi == build_xi(full).formula);
    CHECK(verify_defines(phi, k, ctx));
}

TEST_CASE("uniformity defines the uniform teams")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    std::vector<GeneralizedCausalTeam> uniform;
    for (const auto& t : enumerate_teams(sig, Semantics::generalized, ctx))
        if (is_uniform(t))
            uniform.push_back(t);
    const auto k = make_class(sig, Semantics::generalized, uniform, ctx);
    CHECK(verify_defines(build_unf(sig).formula, k, ctx));
    CHECK_FALSE(verify_defines(top(), k, ctx));
    CHECK(definition_mismatch(top(), k, ctx).has_value());
}

TEST_CASE("classes of formulas have the expected closure")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    Rng rng(34);
    for (int i = 0; i < 30; ++i) {
        FormulaShape shape;
        shape.depth = 3;
        shape.language = i % 3 == 0 ? Language::CO : i % 3 == 1 ? Language::COD : Language::COV;
        const auto f = random_formula(rng, *sig, shape);
        for (Semantics kind : {Semantics::causal, Semantics::generalized}) {
            const auto k = class_of(f, sig, kind, ctx);
            CHECK(check_closure(k, ClosureMode::downward_equiv, ctx));
            if (shape.language == Language::CO)
                CHECK(check_closure(k, ClosureMode::flat, ctx));
        }
    }
}
