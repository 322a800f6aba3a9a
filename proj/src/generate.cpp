#include "ctlab/generate.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "ctlab/error.hpp"

namespace ctlab {

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Formula random_eq(Rng& rng, const Signature& sig)
{
    const int v = static_cast<int>(pick(rng, sig.size()));
    return eq(v, static_cast<int>(pick(rng, static_cast<std::size_t>(sig.range_size(v)))));
}

Formula random_dep(Rng& rng, const Signature& sig, std::size_t max_det)
{
    const int y = static_cast<int>(pick(rng, sig.size()));
    const std::size_t k = pick(rng, std::min(max_det, sig.size()) + 1);
    std::vector<int> vars(sig.size());
    std::iota(vars.begin(), vars.end(), 0);
    std::shuffle(vars.begin(), vars.end(), rng);
    vars.resize(k);
    std::sort(vars.begin(), vars.end());
    return dep(std::move(vars), y);
}

Formula random_rec(Rng& rng, const Signature& sig, const FormulaShape& s, int depth)
{
    const bool d = s.language == Language::COD || s.language == Language::NONE;
    const bool g = s.language == Language::COV || s.language == Language::NONE;
    if (depth <= 0 || coin(rng, 0.25)) {
        if (d && coin(rng, 0.35))
            return random_dep(rng, sig, s.max_determinants);
        return random_eq(rng, sig);
    }
    enum Op { Neg, And, Tensor, Global, Cf };
    std::vector<Op> ops{Neg, And, Tensor};
    if (g)
        ops.push_back(Global);
    if (s.counterfactuals)
        ops.push_back(Cf);
    switch (ops[pick(rng, ops.size())]) {
    case Neg: return neg(random_co(rng, sig, depth - 1, s.counterfactuals));
    case And: return conj(random_rec(rng, sig, s, depth - 1), random_rec(rng, sig, s, depth - 1));
    case Tensor: return tensor(random_rec(rng, sig, s, depth - 1), random_rec(rng, sig, s, depth - 1));
    case Global: return global(random_rec(rng, sig, s, depth - 1), random_rec(rng, sig, s, depth - 1));
    case Cf:
        return cf(random_antecedent(rng, sig, s.max_antecedent, s.inconsistent), random_rec(rng, sig, s, depth - 1));
    }
    return random_eq(rng, sig);
}

}  // namespace

Formula random_formula(Rng& rng, const Signature& sig, const FormulaShape& shape)
{
    if (sig.size() == 0)
        throw InvalidArgument("cannot generate formulas over an empty signature");
    return random_rec(rng, sig, shape, shape.depth);
}

Formula random_co(Rng& rng, const Signature& sig, int depth, bool counterfactuals)
{
    FormulaShape s;
    s.depth = depth;
    s.counterfactuals = counterfactuals;
    return random_formula(rng, sig, s);
}

InterventionSpec random_antecedent(Rng& rng, const Signature& sig, std::size_t max_len, double inconsistent)
{
    std::vector<int> vars(sig.size());
    std::iota(vars.begin(), vars.end(), 0);
    std::shuffle(vars.begin(), vars.end(), rng);
    const std::size_t len = 1 + pick(rng, std::max<std::size_t>(1, std::min(max_len, sig.size())));
    std::vector<Equality> eqs;
    for (std::size_t i = 0; i < len; ++i) {
        const int v = vars[i];
        eqs.push_back({v, static_cast<int>(pick(rng, static_cast<std::size_t>(sig.range_size(v))))});
    }
    if (inconsistent > 0 && coin(rng, inconsistent)) {
        const auto& e = eqs[pick(rng, eqs.size())];
        const int n = sig.range_size(e.var);
        if (n > 1)
            eqs.push_back({e.var, (e.value + 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(n - 1)))) % n});
    }
    std::shuffle(eqs.begin(), eqs.end(), rng);
    return InterventionSpec(std::move(eqs));
}

Assignment random_assignment(Rng& rng, const Signature& sig)
{
    Assignment a;
    for (std::size_t v = 0; v < sig.size(); ++v)
        a.values.push_back(static_cast<int>(pick(rng, static_cast<std::size_t>(sig.range_size(static_cast<int>(v))))));
    return a;
}

FunctionSystem random_law(Rng& rng, const SignaturePtr& sig, double endogenous)
{
    const std::size_t n = sig->size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::optional<Mechanism>> mech(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!coin(rng, endogenous))
            continue;
        const int v = order[i];
        Mechanism m;
        for (std::size_t j = 0; j < i; ++j)
            if (coin(rng, 0.5))
                m.parents.push_back(order[j]);
        std::sort(m.parents.begin(), m.parents.end());
        const std::size_t size = table_size(*sig, m.parents);
        for (std::size_t k = 0; k < size; ++k)
            m.table.push_back(static_cast<int>(pick(rng, static_cast<std::size_t>(sig->range_size(v)))));
        mech[static_cast<std::size_t>(v)] = std::move(m);
    }
    return FunctionSystem(sig, std::move(mech));
}

CausalTeam random_causal_team(Rng& rng, const SignaturePtr& sig, std::size_t max_rows)
{
    if (max_rows == 0)
        return CausalTeam::empty(sig);
    auto law = std::make_shared<const FunctionSystem>(random_law(rng, sig));
    auto rows = compatible_assignments(*law);
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(std::min(rows.size(), 1 + pick(rng, max_rows)));
    return CausalTeam(sig, std::move(rows), std::move(law));
}

GeneralizedCausalTeam random_team(Rng& rng, const SignaturePtr& sig, std::size_t max_members, bool uniform)
{
    std::vector<Member> members;
    if (max_members == 0)
        return GeneralizedCausalTeam(sig);
    const std::size_t k = 1 + pick(rng, max_members);
    const FunctionSystem base = random_law(rng, sig);
    std::set<Member> seen;
    for (std::size_t i = 0; i < k; ++i) {
        LawPtr law;
        if (uniform) {
            // A similar copy: same canonical content, dummy parents possibly added back.
            law = std::make_shared<const FunctionSystem>(coin(rng, 0.5) ? base : canonicalize(base).law);
        } else {
            law = std::make_shared<const FunctionSystem>(random_law(rng, sig));
        }
        auto rows = compatible_assignments(*law);
        Member m{rows[pick(rng, rows.size())], law};
        if (seen.insert(m).second)
            members.push_back(std::move(m));
    }
    return GeneralizedCausalTeam(sig, std::move(members));
}

GeneralizedCausalTeam swap_laws(Rng& rng, const GeneralizedCausalTeam& t)
{
    const auto& sig = t.signature();
    std::vector<Member> out;
    std::set<Member> seen;
    for (const auto& m : t.members()) {
        // Any law is compatible with a row once every variable is exogenous,
        // so retry a few times and fall back to that.
        LawPtr law;
        for (int attempt = 0; attempt < 16 && !law; ++attempt) {
            auto f = random_law(rng, sig);
            if (is_compatible(m.row, f))
                law = std::make_shared<const FunctionSystem>(std::move(f));
        }
        if (!law)
            law = std::make_shared<const FunctionSystem>(FunctionSystem::all_exogenous(sig));
        Member n{m.row, law};
        if (seen.insert(n).second)
            out.push_back(std::move(n));
    }
    return GeneralizedCausalTeam(sig, std::move(out));
}

TeamClass random_downset_class(Rng& rng, const SignaturePtr& sig, Semantics kind, std::size_t generators,
                               SatContext& ctx)
{
    const auto all = enumerate_teams(sig, kind, ctx);
    std::vector<GeneralizedCausalTeam> picked;
    for (std::size_t i = 0; i < std::max<std::size_t>(1, generators); ++i)
        picked.push_back(all[pick(rng, all.size())]);
    return close_under_succeq(make_class(sig, kind, picked, ctx), ctx);
}

TeamClass random_flat_class(Rng& rng, const SignaturePtr& sig, Semantics kind, SatContext& ctx)
{
    const auto& universe = ctx.universe(sig);
    std::set<Member> allowed;
    for (const auto& m : universe)
        if (coin(rng, 0.5))
            allowed.insert(m);
    std::vector<GeneralizedCausalTeam> teams;
    for (const auto& t : enumerate_teams(sig, kind, ctx)) {
        const bool inside = std::all_of(t.members().begin(), t.members().end(),
                                        [&](const Member& m) { return allowed.count(m) > 0; });
        if (inside)
            teams.push_back(t);
    }
    return make_class(sig, kind, teams, ctx);
}

}  // namespace ctlab
