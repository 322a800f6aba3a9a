#include <doctest.h>

#include <set>

#include "ctlab/error.hpp"
#include "ctlab/generate.hpp"
#include "ctlab/intervention.hpp"
#include "ctlab/syntax.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace ctlab;
using namespace fixtures;

namespace {

// Every consistent antecedent over the signature, one equality per variable at most.
std::vector<InterventionSpec> all_interventions(const Signature& sig)
{
    std::vector<std::vector<Equality>> out{{}};
    for (std::size_t v = 0; v < sig.size(); ++v) {
        std::vector<std::vector<Equality>> next;
        for (const auto& e : out) {
            next.push_back(e);
            for (int x = 0; x < sig.range_size(static_cast<int>(v)); ++x) {
                auto f = e;
                f.push_back({static_cast<int>(v), x});
                next.push_back(f);
            }
        }
        out = std::move(next);
    }
    std::vector<InterventionSpec> specs;
    for (auto& e : out)
        if (!e.empty())
            specs.emplace_back(std::move(e));
    return specs;
}

std::set<Assignment> row_set(const std::vector<Assignment>& rows) { return {rows.begin(), rows.end()}; }

}  // namespace

TEST_CASE("do(X=1) on the two rows")
{
    const auto sig = uxyz();
    const auto f = uxyz_law();
    const auto iv = parse_intervention("X=1", *sig);
    const auto [a, fa] = intervene_assignment(row(*sig, {"0", "0", "1", "2"}), *f, iv);
    CHECK(a == row(*sig, {"0", "1", "2", "5"}));
    const auto [b, fb] = intervene_assignment(row(*sig, {"1", "1", "2", "6"}), *f, iv);
    CHECK(b == row(*sig, {"1", "1", "2", "6"}));
    CHECK_FALSE(fa.endogenous(1));
    CHECK(fa.endogenous(2));
    CHECK(fa.endogenous(3));
    CHECK(is_compatible(a, fa));

    const auto t = intervene_causal_team(uxyz_team(), iv);
    CHECK(row_set(t.rows()) == std::set<Assignment>{row(*sig, {"0", "1", "2", "5"}), row(*sig, {"1", "1", "2", "6"})});
}

TEST_CASE("intervening on a variable without descendants at its current value")
{
    const auto sig = uxyz();
    const auto s = row(*sig, {"0", "0", "1", "2"});
    CHECK(intervene_row(s, *uxyz_law(), parse_intervention("Z=2", *sig)) == s);
}

TEST_CASE("do(Y=1) on the two-law team")
{
    const auto sig = xyz_wide();
    const auto t = intervene_gct(fg_team(), parse_intervention("Y=1", *sig));
    std::set<std::pair<Assignment, FunctionSystem>> got;
    for (const auto& m : t.members())
        got.insert({m.row, *m.law});
    // Y is exogenous in both laws, so the laws are kept.
    const std::set<std::pair<Assignment, FunctionSystem>> expected{
        {row(*sig, {"2", "1", "4"}), *law_f()},
        {row(*sig, {"2", "1", "3"}), *law_g()},
        {row(*sig, {"1", "1", "2"}), *law_g()},
    };
    CHECK(got == expected);
}

TEST_CASE("empty teams stay empty")
{
    const auto sig = uxyz();
    const auto iv = parse_intervention("X=1", *sig);
    CHECK(intervene_causal_team(CausalTeam::empty(sig), iv).empty());
    CHECK(intervene_gct(GeneralizedCausalTeam(sig), iv).empty());
}

TEST_CASE("rows that differ only on intervened variables collapse")
{
    const auto sig = binary({"X", "Y"});
    auto law = std::make_shared<const FunctionSystem>(FunctionSystem::all_exogenous(sig));
    const CausalTeam t(sig, {row(*sig, {"0", "0"}), row(*sig, {"1", "0"})}, law);
    const auto u = intervene_causal_team(t, parse_intervention("X=1", *sig));
    CHECK(u.size() == 1);
    CHECK(u.rows().front() == row(*sig, {"1", "0"}));
}

TEST_CASE("inconsistent antecedents are rejected")
{
    const auto sig = binary({"X", "Y"});
    const auto iv = parse_intervention("X=1 & X=0", *sig);
    CHECK_FALSE(iv.consistent());
    CHECK_THROWS_AS(intervene_gct(GeneralizedCausalTeam(sig, {{row(*sig, {"0", "0"}),
                                                               std::make_shared<const FunctionSystem>(
                                                                   FunctionSystem::all_exogenous(sig))}}),
                                  iv),
                    InvalidArgument);
}

TEST_CASE("agreement with fixpoint evaluation over all of Sem")
{
    const auto sig = binary({"X", "Y", "W"});
    const auto sem = enumerate_sem(sig);
    const auto ivs = all_interventions(*sig);
    for (const auto& m : sem)
        for (const auto& iv : ivs) {
            const auto [s, f] = intervene_assignment(m.row, *m.law, iv);
            CHECK(s == oracle::do_row(m.row, *m.law, iv));
            CHECK(f == *oracle::do_law(*m.law, iv));
            CHECK(is_compatible(s, f));
            // Intervened variables are exogenous and keep their values.
            const auto [s2, f2] = intervene_assignment(s, f, iv);
            CHECK(s2 == s);
            CHECK(f2 == f);
        }
}

TEST_CASE("similar laws stay similar after intervention")
{
    const auto sig = binary({"X", "Y"});
    const auto laws = enumerate_function_systems(sig, true);
    for (const auto& iv : all_interventions(*sig))
        for (const auto& f : laws)
            for (const auto& g : laws)
                if (similar(f, g))
                    CHECK(similar(intervene_law(f, iv), intervene_law(g, iv)));
}

TEST_CASE("equivalent teams stay equivalent after intervention")
{
    const auto sig = binary({"X", "Y", "W"});
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto t = random_team(rng, sig, 4);
        const auto c = canonical_team(t);
        REQUIRE(team_equivalent(t, c));
        const auto iv = random_antecedent(rng, *sig, 2);
        CHECK(team_equivalent(intervene_gct(t, iv), intervene_gct(c, iv)));
        const auto twice = intervene_gct(intervene_gct(t, iv), iv);
        CHECK(twice == intervene_gct(t, iv));
    }
}
