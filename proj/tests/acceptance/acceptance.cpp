// One PASS/FAIL line per acceptance criterion. A criterion fails when any
// check fails, when it throws, or when it runs past its time limit.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ctlab/charform.hpp"
#include "ctlab/decision.hpp"
#include "ctlab/derivation.hpp"
#include "ctlab/fuzz.hpp"
#include "ctlab/generate.hpp"
#include "ctlab/golden.hpp"
#include "ctlab/intervention.hpp"
#include "ctlab/io.hpp"
#include "ctlab/semantics.hpp"
#include "ctlab/synthesis.hpp"
#include "ctlab/syntax.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace ctlab;
using namespace fixtures;

namespace {

// Collects failed checks; the first few are kept for the report.
struct Checks {
    std::size_t run = 0;
    std::size_t failed = 0;
    std::vector<std::string> notes;

    void operator()(bool ok, const std::string& what)
    {
        ++run;
        if (ok)
            return;
        ++failed;
        if (notes.size() < 5)
            notes.push_back(what);
    }
};

FormulaShape shape(Language lang, int depth, bool counterfactuals = true)
{
    FormulaShape s;
    s.language = lang;
    s.depth = depth;
    s.counterfactuals = counterfactuals;
    s.inconsistent = 0.1;
    s.max_determinants = 2;
    return s;
}

Language rotate(int i)
{
    return i % 3 == 0 ? Language::CO : i % 3 == 1 ? Language::COD : Language::COV;
}

GeneralizedCausalTeam subteam(const SignaturePtr& sig, const std::vector<Member>& u, std::uint64_t mask)
{
    std::vector<Member> ms;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (mask >> i & 1u)
            ms.push_back(u[i]);
    return GeneralizedCausalTeam(sig, std::move(ms));
}

std::vector<Member> members_of(const std::vector<Member>& u, std::uint64_t mask)
{
    std::vector<Member> ms;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (mask >> i & 1u)
            ms.push_back(u[i]);
    return ms;
}

SignaturePtr micro_a() { return binary({"X", "Y"}); }

SignaturePtr micro_b() { return make_signature({{"X", {"0", "1"}}, {"Y", {"0", "1", "2"}}}); }

std::string intervened(const std::string& team_file, const std::string& spec)
{
    const auto lt = team_from_json(load_json_file(source_path(team_file)));
    const auto iv = parse_intervention(spec, *lt.sig);
    if (lt.kind == Semantics::causal)
        return dump_json(team_to_json(intervene_causal_team(causal_from_loaded(lt), iv), true));
    return dump_json(team_to_json(intervene_gct(lt.team, iv), Semantics::generalized, true));
}

void golden_interventions(Checks& c)
{
    c(intervened("data/exct.json", "X=1") == read_text_file(source_path("tests/data/exct_do_x1.json")),
      "do(X=1) output differs from the golden file");
    c(intervened("data/exgct.json", "Y=1") == read_text_file(source_path("tests/data/exgct_do_y1.json")),
      "do(Y=1) output differs from the golden file");

    const auto sig = uxyz();
    const auto t = intervene_causal_team(uxyz_team(), parse_intervention("X=1", *sig));
    const std::vector<Assignment> want{row(*sig, {"0", "1", "2", "5"}), row(*sig, {"1", "1", "2", "6"})};
    c(t.rows() == want, "do(X=1) rows");

    const auto w = xyz_wide();
    const auto g = intervene_gct(fg_team(), parse_intervention("Y=1", *w));
    const auto iv = parse_intervention("Y=1", *w);
    const auto f1 = canonicalize(intervene_law(*law_f(), iv)).law;
    const auto g1 = canonicalize(intervene_law(*law_g(), iv)).law;
    std::set<std::pair<Assignment, FunctionSystem>> got, expect{{row(*w, {"1", "1", "2"}), g1},
                                                                 {row(*w, {"2", "1", "3"}), g1},
                                                                 {row(*w, {"2", "1", "4"}), f1}};
    for (const auto& m : g.members())
        got.insert({m.row, canonicalize(*m.law).law});
    c(got == expect, "do(Y=1) members");
}

void worked_judgments(Checks& c)
{
    const auto sig = uxyz();
    const auto t = uxyz_team();
    const auto tx = intervene_causal_team(t, parse_intervention("X=1", *sig));
    c(satisfies(t, parse("(X=1) []-> Y=2", sig)), "T |= X=1 []-> Y=2");
    c(satisfies(t, parse("dep(Y; Z)", sig)), "T |= dep(Y;Z)");
    c(!satisfies(tx, parse("dep(Y; Z)", sig)), "T_{X=1} |/= dep(Y;Z)");
    c(satisfies(t, parse("!Y=2 \\/ Y=2", sig)), "T |= Y!=2 \\/ Y=2");
    c(!satisfies(t, parse("!Y=2 \\\\/ Y=2", sig)), "T |/= Y!=2 \\\\/ Y=2");
    c(satisfies(t, parse("X=1 => Y=2", sig)), "T |= X=1 => Y=2");
}

void closure_suite(Checks& c)
{
    // A context serves one signature.
    const SignaturePtr sigs[2] = {micro_a(), micro_b()};
    SatContext ctxs[2];
    Rng rng(3001);
    for (int i = 0; i < 1000; ++i) {
        const auto& sig = sigs[i % 2];
        auto& ctx = ctxs[i % 2];
        const auto lang = rotate(i);
        const auto f = random_formula(rng, *sig, shape(lang, 3));
        const auto t = random_team(rng, sig, 5, i % 5 == 0);
        const auto text = print_formula(f, *sig);
        const bool holds = ctx.satisfies(t, f);

        c(ctx.satisfies(GeneralizedCausalTeam(sig), f), "empty team: " + text);
        if (holds) {
            const auto& ms = t.members();
            for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << ms.size()); ++mask)
                c(ctx.satisfies(subteam(sig, ms, mask), f), "downward closure: " + text);
        }
        c(ctx.satisfies(canonical_team(t), f) == holds, "invariance under ≈: " + text);
        if (lang == Language::CO) {
            bool all = true;
            for (const auto& m : t.members())
                all = all && ctx.satisfies(GeneralizedCausalTeam(sig, {m}), f);
            c(all == holds, "flatness: " + text);
            const auto s = random_team(rng, sig, 5);
            if (holds && ctx.satisfies(s, f))
                c(ctx.satisfies(team_union(s, t), f), "union closure: " + text);
        }
    }
}

void phi_characterization(Checks& c)
{
    const auto sig = micro_a();
    SatContext ctx;
    const auto& u = ctx.universe(sig);
    c(u.size() == 12, "Sem/≈ has 12 members");
    const auto raw = oracle::teams_upto(enumerate_sem(sig), 2);
    for (const auto& f : enumerate_similarity_representatives(sig)) {
        const auto phi = build_phi(f).formula;
        const auto name = print_formula(phi, *sig);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << u.size()); ++mask) {
            bool all = true;
            for (const auto& m : members_of(u, mask))
                all = all && oracle::similar(*m.law, f);
            c(ctx.satisfies(subteam(sig, u, mask), phi) == all, "Phi over Sem/≈: " + name);
        }
        for (const auto& t : raw) {
            bool all = true;
            for (const auto& m : t)
                all = all && oracle::similar(*m.law, f);
            c(ctx.satisfies(GeneralizedCausalTeam(sig, t), phi) == all, "Phi over raw Sem: " + name);
        }
    }
}

void team_characterizations(Checks& c)
{
    const auto sig = micro_a();
    SatContext ctx;
    const auto& u = ctx.universe(sig);
    const std::uint64_t n = std::uint64_t{1} << u.size();
    const auto rows = enumerate_assignments(*sig);

    std::vector<std::vector<Member>> teams;
    std::vector<std::set<Assignment>> comps;
    std::vector<std::size_t> quotients;
    for (std::uint64_t mask = 0; mask < n; ++mask) {
        teams.push_back(members_of(u, mask));
        std::set<Assignment> s;
        for (const auto& m : teams.back())
            s.insert(m.row);
        comps.push_back(std::move(s));
        quotients.push_back(oracle::quotient(teams.back()));
    }

    for (std::uint64_t rmask = 0; rmask < (1u << rows.size()); ++rmask) {
        std::vector<Assignment> s;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rmask >> i & 1u)
                s.push_back(rows[i]);
        const std::set<Assignment> allowed(s.begin(), s.end());
        const auto theta = build_theta(s, sig).formula;
        const auto fam = ctx.satisfying_subteams(u, theta);
        for (std::uint64_t mask = 0; mask < n; ++mask) {
            const bool inside = std::includes(allowed.begin(), allowed.end(), comps[mask].begin(), comps[mask].end());
            c(fam.contains(mask) == inside, "Theta family");
        }
        for (std::uint64_t mask = 0; mask < n; mask += 37) {
            const bool inside = std::includes(allowed.begin(), allowed.end(), comps[mask].begin(), comps[mask].end());
            c(ctx.satisfies(subteam(sig, u, mask), theta) == inside, "Theta direct");
        }
    }

    const auto chi = build_chi(sig).formula;
    for (std::uint64_t mask = 0; mask < n; ++mask)
        c(ctx.satisfies(subteam(sig, u, mask), chi) == (quotients[mask] <= 1), "chi");
    for (long long k = 0; k <= static_cast<long long>(u.size()); ++k) {
        const auto fam = ctx.satisfying_subteams(u, build_chi_k(sig, k).formula);
        for (std::uint64_t mask = 0; mask < n; ++mask)
            c(fam.contains(mask) == (quotients[mask] <= static_cast<std::size_t>(k)),
              "chi_" + std::to_string(k));
    }

    // Distinct members of Sem/≈ are pairwise inequivalent, so ≼ between its
    // subsets is inclusion; sampled pairs are cross-checked literally.
    Rng rng(5005);
    for (std::uint64_t tm = 1; tm < n; ++tm) {
        const auto xi = build_xi(subteam(sig, u, tm)).formula;
        const auto fam = ctx.satisfying_subteams(u, xi);
        for (std::uint64_t sm = 0; sm < n; ++sm)
            c(fam.contains(sm) == ((tm & ~sm) != 0), "Xi family");
        for (int k = 0; k < 4; ++k) {
            const auto sm = std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
            c(fam.contains(sm) == !oracle::preceq(teams[tm], teams[sm]), "Xi literal");
        }
    }
}

void normal_forms(Checks& c)
{
    const auto sig = micro_a();
    SatContext ctx;
    Rng rng(6006);
    for (int i = 0; i < 50; ++i) {
        const auto lang = i % 2 ? Language::COD : Language::COV;
        const auto f = random_formula(rng, *sig, shape(lang, 3));
        const auto text = print_formula(f, *sig);
        const auto nf = global_all(lang == Language::COV ? resolutions(f) : instantiations(f, *sig));
        const bool there = entails_bounded({f}, nf, sig, 12, Semantics::generalized, ctx);
        const bool back = entails_bounded({nf}, f, sig, 12, Semantics::generalized, ctx);
        c(there && back, (lang == Language::COV ? "resolutions: " : "instantiations: ") + text);
    }
}

void disjunction_property(Checks& c)
{
    const auto sig = micro_a();
    SatContext ctx;
    Rng rng(7007);
    std::size_t premises = 0;
    for (int i = 0; i < 100; ++i) {
        std::vector<Formula> delta;
        const int k = static_cast<int>(rng() % 3);
        for (int j = 0; j < k; ++j)
            delta.push_back(random_co(rng, *sig, 2));
        const auto lang = i % 2 ? Language::COD : Language::COV;
        auto phi = random_formula(rng, *sig, shape(lang, 2));
        auto psi = random_formula(rng, *sig, shape(lang, 2));
        // Some cases where the premise holds without either side being obvious.
        if (i % 4 == 0 && !delta.empty()) {
            const auto a = random_co(rng, *sig, 1, false);
            phi = conj(delta.front(), a);
            psi = conj(delta.front(), neg(a));
        }
        const auto r = check_disjunction_property(delta, phi, psi, sig, Semantics::generalized, ctx);
        premises += r.premise;
        c(r.holds(), "disjunction property: " + print_formula(phi, *sig) + " | " + print_formula(psi, *sig));
    }
    c(premises > 0, "no case had its premise hold");

    c(decide_valid(build_unf(sig).formula, sig, Semantics::causal, ctx).holds, "unf is causally valid");
    const auto reps = enumerate_similarity_representatives(sig);
    c(reps.size() >= 2, "at least two similarity classes");
    for (const auto& f : reps) {
        const auto r = decide_valid(build_phi(f).formula, sig, Semantics::causal, ctx);
        c(!r.holds && r.counterexample && !ctx.satisfies(*r.counterexample, build_phi(f).formula),
          "a single Phi is causally valid");
    }
}

void collapse(Checks& c)
{
    const auto sig = micro_a();
    SatContext ctx;
    const auto reps = enumerate_similarity_representatives(sig);
    std::vector<Formula> phis;
    for (const auto& f : reps)
        phis.push_back(build_phi(f).formula);
    for (std::size_t i = 0; i < phis.size(); ++i)
        for (std::size_t j = i + 1; j < phis.size(); ++j)
            c(incompatible(phis[i], phis[j], sig, ctx), "representatives incompatible");

    const auto both = [&](const std::vector<Formula>& fs, Semantics sem) {
        const auto g = global_all(fs), t = tensor_all(fs);
        return decide_entails({g}, t, sig, sem, ctx).holds && decide_entails({t}, g, sig, sem, ctx).holds;
    };
    c(both(phis, Semantics::causal), "all representatives: gor and or not causally equivalent");
    Rng rng(8008);
    for (int i = 0; i < 20; ++i) {
        std::vector<Formula> pick;
        for (const auto& p : phis)
            if (rng() % 2)
                pick.push_back(p);
        if (pick.size() >= 2)
            c(both(pick, Semantics::causal), "subset: gor and or not causally equivalent");
    }

    const auto r = decide_entails({tensor_all(phis)}, global_all(phis), sig, Semantics::generalized, ctx);
    c(!r.holds && r.counterexample.has_value(), "no generalized counterexample");
    if (r.counterexample) {
        c(ctx.satisfies(*r.counterexample, tensor_all(phis)), "counterexample misses the tensor side");
        c(!ctx.satisfies(*r.counterexample, global_all(phis)), "counterexample satisfies the gor side");
    }
}

void decision_agreement(Checks& c)
{
    const auto sig = micro_a();
    SatContext ctx;
    Rng rng(9009);
    for (Semantics sem : {Semantics::causal, Semantics::generalized})
        for (int i = 0; i < 200; ++i) {
            const auto lang = i % 2 ? Language::COD : Language::COV;
            std::vector<Formula> gamma;
            for (int j = 0; j < i % 3; ++j)
                gamma.push_back(random_formula(rng, *sig, shape(lang, 2)));
            const auto psi = random_formula(rng, *sig, shape(lang, 2));
            const auto r = decide_entails(gamma, psi, sig, sem, ctx);
            c(r.holds == entails_bounded(gamma, psi, sig, 12, sem, ctx),
              std::string(semantics_name(sem)) + ": " + print_formula(psi, *sig));
        }
    for (const auto& g : golden_derived_rules()) {
        SatContext own;
        c(decide_entails(g.assumptions, g.conclusion, g.sig, system_semantics(g.system), own).holds,
          "derived rule not valid: " + g.name);
    }
}

void calculus(Checks& c)
{
    for (const auto& g : golden_derived_rules()) {
        const auto r = check_derivation(g.proof, g.system, g.sig, g.assumptions);
        c(r.ok, g.name + ": " + r.reason);
    }
    FuzzOptions opts;
    opts.trials = 200;
    for (System s : all_systems())
        for (const auto& rep : fuzz_system(s, fuzz_signature(), opts)) {
            c(rep.trials == opts.trials, rep.rule + " ran " + std::to_string(rep.trials) + " trials");
            c(rep.ok(), rep.rule + " in " + system_name(s) + ": " +
                            (rep.violations.empty() ? std::string() : rep.violations.front()));
        }
    for (Semantics sem : {Semantics::causal, Semantics::generalized}) {
        const auto r = recur_exhaustive(fuzz_signature(), 2, sem);
        c(r.ok() && r.chains > 0, std::string("Recur under ") + semantics_name(sem));
    }
}

void synthesis(Checks& c)
{
    const auto sig = micro_a();
    SatContext ctx;
    Rng rng(11011);
    for (int i = 0; i < 20; ++i) {
        const auto kind = i % 2 ? Semantics::causal : Semantics::generalized;
        const auto k = random_downset_class(rng, sig, kind, 1 + i % 3, ctx);
        c(check_closure(k, ClosureMode::downward_equiv, ctx), "generated class not closed");
        c(verify_defines(synthesize_cod(k, ctx), k, ctx), "cod synthesis round trip " + std::to_string(i));
    }
    for (int i = 0; i < 20; ++i) {
        const auto kind = i % 2 ? Semantics::causal : Semantics::generalized;
        const auto k = random_flat_class(rng, sig, kind, ctx);
        c(check_closure(k, ClosureMode::flat, ctx), "generated class not flat");
        c(verify_defines(synthesize_co(k, ctx), k, ctx), "co synthesis round trip " + std::to_string(i));
    }
}

void law_swaps(Checks& c)
{
    const SignaturePtr sigs[2] = {binary({"X", "Y", "W"}), micro_b()};
    SatContext ctxs[2];
    Rng rng(12012);
    for (int i = 0; i < 500; ++i) {
        const auto& sig = sigs[i % 2];
        auto& ctx = ctxs[i % 2];
        const auto f = random_formula(rng, *sig, shape(rotate(i), 3, false));
        const auto t = random_team(rng, sig, 5);
        const auto s = swap_laws(rng, t);
        c(s.rows() == t.rows(), "swap changed the team component");
        c(ctx.satisfies(t, f) == ctx.satisfies(s, f), "law swap: " + print_formula(f, *sig));
    }
}

struct Criterion {
    int id;
    const char* title;
    double limit;
    std::function<void(Checks&)> run;
};

}  // namespace

int main()
{
    const std::vector<Criterion> all{
        {1, "golden interventions", 1, golden_interventions},
        {2, "worked satisfaction judgments", 1, worked_judgments},
        {3, "closure suite", 30, closure_suite},
        {4, "Phi characterization", 60, phi_characterization},
        {5, "Theta/chi/chi_k/Xi characterizations", 60, team_characterizations},
        {6, "normal forms", 60, normal_forms},
        {7, "disjunction property", 30, disjunction_property},
        {8, "collapse", 30, collapse},
        {9, "decision procedure agreement", 120, decision_agreement},
        {10, "calculus", 120, calculus},
        {11, "synthesis round trip", 180, synthesis},
        {12, "invariance under law swaps", 30, law_swaps},
    };
    int failures = 0;
    for (const auto& cr : all) {
        Checks c;
        std::string error;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = error.empty() && c.failed == 0 && secs < cr.limit;
        failures += !ok;
        std::printf("%s %2d %s: %zu checks, %.2f s (limit %.0f s)\n", ok ? "PASS" : "FAIL", cr.id, cr.title, c.run,
                    secs, cr.limit);
        if (!error.empty())
            std::printf("     exception: %s\n", error.c_str());
        if (c.failed)
            std::printf("     %zu failed checks\n", c.failed);
        for (const auto& n : c.notes)
            std::printf("     %s\n", n.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
