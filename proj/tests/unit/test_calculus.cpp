#include <doctest.h>

#include <algorithm>

#include "ctlab/charform.hpp"
#include "ctlab/decision.hpp"
#include "ctlab/derivation.hpp"
#include "ctlab/error.hpp"
#include "ctlab/fuzz.hpp"
#include "ctlab/golden.hpp"
#include "ctlab/io.hpp"
#include "ctlab/syntax.hpp"
#include "fixtures.hpp"

using namespace ctlab;
using namespace fixtures;

TEST_CASE("a single value-definiteness node")
{
    const auto sig = binary({"X", "Y"});
    const auto d = infer("ValDef", parse("X=0 \\/ X=1", sig), {});
    for (System s : all_systems())
        CHECK(check_derivation(d, s, sig).ok);
    const auto r = check_derivation(infer("ValDef", parse("X=0 \\/ X=0", sig), {}), System::co_g, sig);
    CHECK_FALSE(r.ok);
    CHECK(r.path == "root");
}

TEST_CASE("tensor elimination needs a CO conclusion")
{
    const auto sig = binary({"X", "Y"});
    const auto major = infer("ValDef", parse("X=0 \\/ X=1", sig), {});
    const auto left = infer("ConI", con(0), {hyp(eq(0, 0), "a")});
    const auto right = infer("ConI", con(0), {hyp(eq(0, 1), "b")});
    const auto d = infer("or-E", con(0), {major, left, right}, {{}, {"a"}, {"b"}});
    const auto r = check_derivation(d, System::cod_g, sig);
    CHECK_FALSE(r.ok);
    CHECK(r.reason.find("CO") != std::string::npos);

    // The same shape with a CO conclusion goes through.
    const auto l2 = infer("or-I", parse("X=0 \\/ X=1", sig), {hyp(eq(0, 0), "a")});
    const auto r2 = infer("or-I", parse("X=0 \\/ X=1", sig), {hyp(eq(0, 1), "b")});
    CHECK(check_derivation(infer("or-E", parse("X=0 \\/ X=1", sig), {major, l2, r2}, {{}, {"a"}, {"b"}}),
                           System::co_g, sig)
              .ok);
}

TEST_CASE("assumptions")
{
    const auto sig = binary({"X", "Y"});
    const auto d = infer("ConI", con(0), {hyp(eq(0, 1))});
    const auto r = check_derivation(d, System::cod_g, sig);
    REQUIRE(r.ok);
    CHECK(r.open == std::vector<Formula>{eq(0, 1)});
    CHECK(check_derivation(d, System::cod_g, sig, std::vector<Formula>{eq(0, 1)}).ok);
    CHECK_FALSE(check_derivation(d, System::cod_g, sig, std::vector<Formula>{}).ok);
    // A labelled leaf nobody discharges.
    CHECK_FALSE(check_derivation(infer("ConI", con(0), {hyp(eq(0, 1), "a")}), System::cod_g, sig).ok);
    // Rules outside the system.
    CHECK_FALSE(check_derivation(d, System::co_g, sig).ok);
    CHECK_FALSE(check_derivation(infer("no-such-rule", eq(0, 1), {}), System::co_g, sig).ok);
}

TEST_CASE("golden derived rules check and hold")
{
    SatContext ctx;
    const auto goldens = golden_derived_rules();
    CHECK(goldens.size() >= 20);
    for (const auto& g : goldens) {
        CAPTURE(g.name);
        const auto r = check_derivation(g.proof, g.system, g.sig, g.assumptions);
        CHECK(r.ok);
        CHECK(g.proof.conclusion == g.conclusion);
        CHECK(decide_entails(g.assumptions, g.conclusion, g.sig, system_semantics(g.system), ctx).holds);

        ProofFile pf{g.sig, g.system, g.assumptions, g.proof};
        const auto j = proof_to_json(pf);
        const auto back = proof_from_json(parse_json(dump_json(j)));
        CHECK(dump_json(proof_to_json(back)) == dump_json(j));
        CHECK(check_derivation(back.proof, *back.system, back.sig, back.assumptions).ok);
    }
    const auto has = [&](const std::string& n) {
        return std::any_of(goldens.begin(), goldens.end(), [&](const GoldenDerivation& g) { return g.name == n; });
    };
    CHECK(has("composition"));
    CHECK(has("weak-modus-ponens"));
    CHECK(has("dep-normal-form"));
}

TEST_CASE("uniformity axiom for dependence")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto& u = ctx.universe(sig);
    auto a = u.begin();
    auto b = std::find_if(u.begin(), u.end(), [&](const Member& m) { return !similar(*m.law, *a->law); });
    REQUIRE(b != u.end());
    const GeneralizedCausalTeam t(sig, {*a, *b});
    const auto xi = build_xi(t).formula;
    CHECK(decide_valid(xi, sig, Semantics::causal, ctx).holds);
    const auto g = decide_valid(xi, sig, Semantics::generalized, ctx);
    CHECK_FALSE(g.holds);
    REQUIRE(g.counterexample.has_value());
    CHECK_FALSE(ctx.satisfies(*g.counterexample, xi));

    const auto d = infer("Unf_D", xi, {});
    CHECK(check_derivation(d, System::cod_c, sig).ok);
    CHECK_FALSE(check_derivation(d, System::cod_g, sig).ok);
    Json w;
    w["team"] = team_to_json(t);
    CHECK(check_derivation(infer("Unf_D", xi, {}, {}, w), System::cod_c, sig).ok);
}

TEST_CASE("causal-only rules")
{
    for (System s : {System::co_g, System::cov_g, System::cod_g})
        for (const auto* r : rules_of(s))
            CHECK(r->name.rfind("Unf", 0) != 0);
    CHECK(find_rule("FunE")->in(System::cov_c));
    CHECK_FALSE(find_rule("FunE")->in(System::cov_g));
}

TEST_CASE("axiom instances are valid")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    for (System s : all_systems()) {
        const auto sem = system_semantics(s);
        CHECK(decide_valid(parse("X=0 \\/ X=1", sig), sig, sem, ctx).holds);
        CHECK(decide_valid(parse("(X=1 & Y=0) []-> Y=0", sig), sig, sem, ctx).holds);
        CHECK(decide_valid(parse("(Y=0 & X=1 & X=0) []-> con(Y)", sig), sig, sem, ctx).holds);
    }
    CHECK(decide_valid(build_unf(sig).formula, sig, Semantics::causal, ctx).holds);
}

TEST_CASE("recursiveness over two variables")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    for (Semantics sem : {Semantics::causal, Semantics::generalized}) {
        const auto r = recur_exhaustive(sig, 2, sem);
        CHECK(r.ok());
        CHECK(r.chains > 0);
        CHECK(decide_entails({build_leadsto(0, 1, sig).formula}, neg(build_leadsto(1, 0, sig).formula), sig, sem,
                             ctx)
                  .holds);
    }
}

TEST_CASE("fuzzing a sound rule")
{
    FuzzOptions opts;
    opts.trials = 40;
    const auto r = rule_soundness_fuzz("boxright-Eff", System::co_g, fuzz_signature(), opts);
    CHECK(r.ok());
    CHECK(r.trials == 40);
    const auto e = rule_soundness_fuzz("gor-E", System::cov_g, fuzz_signature(), opts);
    CHECK(e.ok());
    CHECK(e.effective > 0);
    CHECK_THROWS_AS(rule_soundness_fuzz("FunE", System::cod_g, fuzz_signature(), opts), InvalidArgument);
}

TEST_CASE("fuzzing catches a broken discharge")
{
    // Reductio that closes α instead of ¬α.
    RuleSchema broken = *find_rule("RAA");
    broken.discharges = [](const Derivation& d, RuleContext&) {
        return std::vector<Discharge>{{{d.conclusion}, false}};
    };
    FuzzOptions opts;
    opts.trials = 100;
    const auto r = rule_soundness_fuzz(broken, System::co_g, fuzz_signature(), opts);
    CHECK_FALSE(r.ok());
    CHECK(rule_soundness_fuzz(*find_rule("RAA"), System::co_g, fuzz_signature(), opts).ok());
}

TEST_CASE("positive substitution refuses negated occurrences")
{
    const auto sig = binary({"X", "Y"});
    const auto d = hyp(parse("!X=0", sig));
    const auto th = hyp(eq(0, 0), "t");
    CHECK_THROWS_AS(substitute_positive(d, eq(0, 0), 1, th, "t", System::co_g), InvalidArgument);
}
