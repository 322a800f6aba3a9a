#include <doctest.h>

#include <set>

#include "ctlab/charform.hpp"
#include "ctlab/error.hpp"
#include "ctlab/semantics.hpp"
#include "ctlab/syntax.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace ctlab;
using namespace fixtures;

namespace {

GeneralizedCausalTeam team_of(const SignaturePtr& sig, const std::vector<Member>& ms)
{
    return GeneralizedCausalTeam(sig, ms);
}

std::vector<Assignment> rows_of(const std::vector<Member>& t)
{
    std::set<Assignment> s;
    for (const auto& m : t)
        s.insert(m.row);
    return {s.begin(), s.end()};
}

// Y changes with X after the intervention do(Z=z) (possibly empty) on the singleton.
bool affects(const Member& m, int x, int y, const InterventionSpec& z)
{
    const auto s = oracle::do_row(m.row, *m.law, z);
    const auto f = oracle::do_law(*m.law, z);
    const auto& sig = *m.law->signature();
    std::set<int> outcomes;
    for (int v = 0; v < sig.range_size(x); ++v)
        outcomes.insert(oracle::do_row(s, *f, InterventionSpec({{x, v}}))[y]);
    return outcomes.size() > 1;
}

// Every choice of values for the given variables.
std::vector<InterventionSpec> settings(const Signature& sig, const std::vector<int>& vars)
{
    std::vector<std::vector<Equality>> out{{}};
    for (int v : vars) {
        std::vector<std::vector<Equality>> next;
        for (const auto& e : out)
            for (int x = 0; x < sig.range_size(v); ++x) {
                auto f = e;
                f.push_back({v, x});
                next.push_back(f);
            }
        out = std::move(next);
    }
    std::vector<InterventionSpec> specs;
    for (auto& e : out)
        specs.emplace_back(std::move(e));
    return specs;
}

bool leads_to(const Member& m, int x, int y)
{
    const auto& sig = *m.law->signature();
    std::vector<int> others;
    for (int v = 0; v < static_cast<int>(sig.size()); ++v)
        if (v != x && v != y)
            others.push_back(v);
    for (unsigned mask = 0; mask < (1u << others.size()); ++mask) {
        std::vector<int> zs;
        for (std::size_t i = 0; i < others.size(); ++i)
            if (mask >> i & 1u)
                zs.push_back(others[i]);
        for (const auto& z : settings(sig, zs))
            if (affects(m, x, y, z))
                return true;
    }
    return false;
}

bool direct_cause(const Member& m, int x, int y)
{
    const auto& sig = *m.law->signature();
    std::vector<int> others;
    for (int v = 0; v < static_cast<int>(sig.size()); ++v)
        if (v != x && v != y)
            others.push_back(v);
    for (const auto& z : settings(sig, others))
        if (affects(m, x, y, z))
            return true;
    return false;
}

}  // namespace

TEST_CASE("Theta over no rows is falsum")
{
    const auto sig = binary({"X", "Y"});
    CHECK(is_bottom(build_theta({}, sig).formula));
}

TEST_CASE("Theta characterizes subsets of the team component")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto all = enumerate_assignments(*sig);
    auto teams = oracle::teams_upto(enumerate_sem(sig), 2);
    for (auto& t : oracle::teams_upto(enumerate_sem_reduced(sig), 4))
        teams.push_back(t);
    for (unsigned mask = 0; mask < 16; ++mask) {
        std::vector<Assignment> rows;
        for (std::size_t i = 0; i < 4; ++i)
            if (mask >> i & 1u)
                rows.push_back(all[i]);
        const auto theta = build_theta(rows, sig).formula;
        const std::set<Assignment> allowed(rows.begin(), rows.end());
        for (const auto& t : teams) {
            bool inside = true;
            for (const auto& r : rows_of(t))
                inside = inside && allowed.count(r);
            CHECK(ctx.satisfies(team_of(sig, t), theta) == inside);
        }
    }
}

TEST_CASE("Phi characterizes laws up to similarity")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto laws = enumerate_function_systems(sig, true);
    const auto teams = oracle::teams_upto(enumerate_sem(sig), 2);
    for (const auto& f : laws) {
        const auto phi = build_phi(f).formula;
        CHECK(phi.is_co());
        for (const auto& t : teams) {
            bool all_similar = true;
            for (const auto& m : t)
                all_similar = all_similar && oracle::similar(*m.law, f);
            CHECK(ctx.satisfies(team_of(sig, t), phi) == all_similar);
        }
        // The law's own causal teams satisfy it.
        const auto law = std::make_shared<const FunctionSystem>(f);
        CHECK(ctx.satisfies(CausalTeam(sig, compatible_assignments(f), law), phi));
    }
}

TEST_CASE("similar laws have equivalent Phi")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto laws = enumerate_function_systems(sig, true);
    const auto& universe = ctx.universe(sig);
    for (const auto& f : laws)
        for (const auto& g : laws)
            if (similar(f, g))
                CHECK(ctx.satisfying_subteams(universe, build_phi(f).formula) ==
                      ctx.satisfying_subteams(universe, build_phi(g).formula));
}

TEST_CASE("mu and chi")
{
    const auto sig = xyz_wide();
    SatContext ctx;
    const auto s = row(*sig, {"2", "2", "4"});
    const GeneralizedCausalTeam single(sig, {{s, law_f()}});
    const GeneralizedCausalTeam two(sig, {{s, law_f()}, {s, law_g()}});
    CHECK(ctx.satisfies(single, build_mu(sig).formula));
    CHECK(ctx.satisfies(single, build_chi(sig).formula));
    CHECK_FALSE(ctx.satisfies(two, build_chi(sig).formula));
    CHECK(ctx.satisfies(two, build_chi_k(sig, 2).formula));
    CHECK(is_bottom(build_chi_k(sig, 0).formula));
    CHECK_THROWS_AS(build_chi_k(sig, -1), InvalidArgument);
}

TEST_CASE("chi_k counts equivalence classes of members")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto gteams = oracle::teams_upto(enumerate_sem(sig), 3);
    for (long long k = 0; k <= 3; ++k) {
        const auto chi = build_chi_k(sig, k).formula;
        for (const auto& t : gteams)
            CHECK(ctx.satisfies(team_of(sig, t), chi) == (oracle::quotient(t) <= static_cast<std::size_t>(k)));
    }
    // On causal teams χ is plain constancy of every variable.
    const auto cteams = oracle::causal_teams_upto(enumerate_sem(sig), 3);
    const auto all_con = parse("con(X) /\\ con(Y)", sig);
    for (const auto& t : cteams) {
        const auto ct = to_causal(team_of(sig, t));
        CHECK(ctx.satisfies(ct, build_chi(sig).formula) == ctx.satisfies(ct, all_con));
        for (long long k = 0; k <= 3; ++k)
            CHECK(ctx.satisfies(ct, build_chi_k(sig, k).formula) == (ct.size() <= static_cast<std::size_t>(k)));
    }
}

TEST_CASE("Xi characterizes teams not above T")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto universe = enumerate_sem_reduced(sig);
    const auto targets = oracle::teams_upto(universe, 2);
    const auto probes = oracle::teams_upto(universe, 3);
    for (const auto& t : targets) {
        if (t.empty())
            continue;
        const auto gt = team_of(sig, t);
        const auto xi = build_xi(gt).formula;
        CHECK(ctx.satisfies(GeneralizedCausalTeam(sig), xi));
        CHECK_FALSE(ctx.satisfies(gt, xi));
        for (const auto& s : probes)
            CHECK(ctx.satisfies(team_of(sig, s), xi) == !oracle::preceq(t, s));
    }
    CHECK_THROWS_AS(build_xi(GeneralizedCausalTeam(sig)), InvalidArgument);
}

TEST_CASE("reduced and unreduced Xi agree")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto& universe = ctx.universe(sig);
    for (const auto& t : oracle::teams_upto(enumerate_sem(sig), 2)) {
        if (t.empty())
            continue;
        const auto gt = team_of(sig, t);
        CHECK(ctx.satisfying_subteams(universe, build_xi(gt).formula) ==
              ctx.satisfying_subteams(universe, build_xi_unreduced(gt).formula));
    }
}

TEST_CASE("Xi of a causal team")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto law = std::make_shared<const FunctionSystem>(FunctionSystem::all_exogenous(sig));
    const CausalTeam t(sig, {row(*sig, {"0", "1"}), row(*sig, {"1", "1"})}, law);
    const auto xi = build_xi(t).formula;
    CHECK(xi == build_xi(to_generalized(t)).formula);
    CHECK_FALSE(ctx.satisfies(t, xi));
    const CausalTeam one(sig, {t.rows().front()}, law);
    CHECK(ctx.satisfies(one, xi));
}

TEST_CASE("uniformity")
{
    const auto sig = binary({"X", "Y"});
    SatContext ctx;
    const auto unf = build_unf(sig).formula;
    CHECK(classify(unf) == Language::COV);
    for (const auto& t : oracle::causal_teams_upto(enumerate_sem(sig), 3))
        CHECK(ctx.satisfies(to_causal(team_of(sig, t)), unf));
    for (const auto& t : oracle::teams_upto(enumerate_sem(sig), 2)) {
        bool uniform = true;
        for (const auto& a : t)
            for (const auto& b : t)
                uniform = uniform && oracle::similar(*a.law, *b.law);
        CHECK(ctx.satisfies(team_of(sig, t), unf) == uniform);
    }
    const auto s = row(*sig, {"0", "0"});
    std::vector<std::optional<Mechanism>> m(2);
    m[1] = tabulate(*sig, 1, {0}, [](const std::vector<int>& p) { return p[0]; });
    const GeneralizedCausalTeam mixed(
        sig, {{s, std::make_shared<const FunctionSystem>(FunctionSystem::all_exogenous(sig))},
              {s, std::make_shared<const FunctionSystem>(sig, m)}});
    CHECK_FALSE(ctx.satisfies(mixed, unf));
    CHECK(ctx.satisfies(GeneralizedCausalTeam(sig), unf));
}

TEST_CASE("X leads to Y under the four-variable law")
{
    const auto sig = uxyz();
    SatContext ctx;
    const auto t = uxyz_team();
    const CausalTeam single(sig, {t.rows().front()}, t.law());
    CHECK(ctx.satisfies(single, build_leadsto(1, 2, sig).formula));
    CHECK_FALSE(ctx.satisfies(single, build_leadsto(2, 1, sig).formula));
    CHECK(ctx.satisfies(single, build_direct_cause(0, 1, sig).formula));
    CHECK_FALSE(ctx.satisfies(single, build_direct_cause(3, 1, sig).formula));
    CHECK_THROWS_AS(build_leadsto(1, 1, sig), InvalidArgument);
    CHECK_THROWS_AS(build_leadsto(0, 0, binary({"X"})), InvalidArgument);
}

TEST_CASE("causal influence formulas against their readings")
{
    const auto sig = binary({"X", "Y", "W"});
    SatContext ctx;
    const auto sem = enumerate_sem(sig);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            if (x == y)
                continue;
            const auto lt = build_leadsto(x, y, sig).formula;
            const auto dc = build_direct_cause(x, y, sig).formula;
            for (const auto& m : sem) {
                const GeneralizedCausalTeam t(sig, {m});
                CHECK(ctx.satisfies(t, lt) == leads_to(m, x, y));
                CHECK(ctx.satisfies(t, dc) == direct_cause(m, x, y));
            }
        }
    for (int v = 0; v < 3; ++v) {
        const auto en = build_beta_en(v, sig).formula;
        for (const auto& m : sem) {
            const GeneralizedCausalTeam t(sig, {m});
            CHECK(ctx.satisfies(t, en) == (m.law->endogenous(v) && !oracle::constant(*m.law, v)));
        }
    }
}

TEST_CASE("no variable is endogenous under the exogenous law")
{
    const auto sig = uxyz();
    SatContext ctx;
    const auto law = std::make_shared<const FunctionSystem>(FunctionSystem::all_exogenous(sig));
    const CausalTeam t(sig, {row(*sig, {"0", "1", "2", "6"})}, law);
    for (int v = 0; v < 4; ++v)
        CHECK_FALSE(ctx.satisfies(t, build_beta_en(v, sig).formula));
}

TEST_CASE("constructed formulas reparse")
{
    const auto sig = binary({"X", "Y"});
    const auto t = GeneralizedCausalTeam(sig, {enumerate_sem_reduced(sig).front()});
    for (const auto& f : {build_unf(sig).formula, build_xi(t).formula, build_chi_k(sig, 2).formula,
                          build_leadsto(0, 1, sig).formula, build_beta_en(1, sig).formula})
        CHECK(parse_formula(print_formula(f, *sig), *sig) == f);
}

TEST_CASE("node budget")
{
    const auto sig = uxyz();
    Limits small;
    small.nodes = 10;
    CHECK_THROWS_AS(build_unf(sig, small), BudgetExceeded);
    CHECK(estimate_phi(*uxyz_law()) == build_phi(*uxyz_law()).formula.size());
}
