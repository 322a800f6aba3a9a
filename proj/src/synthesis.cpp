#include "ctlab/synthesis.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "ctlab/charform.hpp"
#include "ctlab/error.hpp"

namespace ctlab {

namespace {

using Mask = std::uint64_t;

// Sem_σ/≈ with a lookup from (∼-class, row) to position.
struct Index {
    SignaturePtr sig;
    const std::vector<Member>& universe;
    std::map<std::pair<std::vector<int>, std::vector<int>>, std::size_t> pos;
    std::vector<Mask> classes;

    Index(const SignaturePtr& s, SatContext& ctx) : sig(s), universe(ctx.universe(s))
    {
        if (universe.size() > ctx.limits().universe_cap || universe.size() > 63)
            throw BudgetExceeded("|Sem/≈| = " + std::to_string(universe.size()) + " exceeds the class cap of " +
                                 std::to_string(ctx.limits().universe_cap));
        std::map<std::vector<int>, std::size_t> ids;
        for (std::size_t i = 0; i < universe.size(); ++i) {
            const auto& key = universe[i].law->canonical_key();
            pos[{key, universe[i].row.values}] = i;
            auto [it, fresh] = ids.emplace(key, classes.size());
            if (fresh)
                classes.push_back(0);
            classes[it->second] |= Mask{1} << i;
        }
    }

    std::size_t size() const { return universe.size(); }
    Mask full() const { return (Mask{1} << universe.size()) - 1; }

    Mask mask_of(const GeneralizedCausalTeam& t) const
    {
        if (!same_signature(t.signature(), sig))
            throw SignatureMismatch("team over a different signature");
        Mask m = 0;
        for (const auto& x : t.members()) {
            auto it = pos.find({x.law->canonical_key(), x.row.values});
            if (it == pos.end())
                throw InvalidArgument("member outside Sem_σ");
            m |= Mask{1} << it->second;
        }
        return m;
    }

    GeneralizedCausalTeam team_of(Mask m) const
    {
        std::vector<Member> ms;
        for (std::size_t i = 0; i < universe.size(); ++i)
            if (m >> i & 1u)
                ms.push_back(universe[i]);
        return GeneralizedCausalTeam(sig, std::move(ms));
    }

    bool causal(Mask m) const
    {
        if (m == 0)
            return true;
        for (Mask c : classes)
            if ((m & ~c) == 0)
                return true;
        return false;
    }

    // C_σ up to ≈, in increasing mask order.
    std::vector<Mask> teams(Semantics kind) const
    {
        std::vector<Mask> out;
        if (kind == Semantics::generalized) {
            for (Mask m = 0; m <= full(); ++m)
                out.push_back(m);
            return out;
        }
        out.push_back(0);
        for (Mask c : classes)
            for (Mask m = c; m; m = (m - 1) & c)
                out.push_back(m);
        std::sort(out.begin(), out.end());
        return out;
    }
};

std::set<Mask> masks_of(const TeamClass& k, const Index& idx)
{
    std::set<Mask> out;
    for (const auto& t : k.teams)
        out.insert(idx.mask_of(t));
    return out;
}

TeamClass from_masks(const Index& idx, Semantics kind, const std::set<Mask>& ms)
{
    TeamClass out{idx.sig, kind, {}};
    for (Mask m : ms)
        out.teams.push_back(idx.team_of(m));
    return out;
}

bool downward(const std::set<Mask>& ms)
{
    for (Mask m : ms)
        for (Mask b = m; b; b &= b - 1)
            if (!ms.count(m & ~(b & -b)))
                return false;
    return true;
}

bool flat(const std::set<Mask>& ms, const Index& idx, Semantics kind)
{
    Mask good = 0;
    for (Mask m : ms)
        if (std::popcount(m) == 1)
            good |= m;
    std::set<Mask> expect;
    for (Mask m : idx.teams(kind))
        if ((m & ~good) == 0)
            expect.insert(m);
    return ms == expect;
}

}  // namespace

TeamClass make_class(const SignaturePtr& sig, Semantics kind, const std::vector<GeneralizedCausalTeam>& teams,
                     SatContext& ctx)
{
    Index idx(sig, ctx);
    std::set<Mask> ms;
    for (const auto& t : teams) {
        const Mask m = idx.mask_of(t);
        if (kind == Semantics::causal && !idx.causal(m))
            throw InvalidArgument("a causal class member mixes dissimilar laws");
        ms.insert(m);
    }
    return from_masks(idx, kind, ms);
}

std::vector<GeneralizedCausalTeam> enumerate_teams(const SignaturePtr& sig, Semantics kind, SatContext& ctx)
{
    Index idx(sig, ctx);
    std::vector<GeneralizedCausalTeam> out;
    for (Mask m : idx.teams(kind))
        out.push_back(idx.team_of(m));
    return out;
}

TeamClass class_of(const Formula& phi, const SignaturePtr& sig, Semantics kind, SatContext& ctx)
{
    Index idx(sig, ctx);
    const auto fam = ctx.satisfying_subteams(idx.universe, phi);
    std::set<Mask> ms;
    for (Mask m : idx.teams(kind))
        if (fam.contains(m))
            ms.insert(m);
    return from_masks(idx, kind, ms);
}

TeamClass close_under_succeq(const TeamClass& k, SatContext& ctx)
{
    Index idx(k.sig, ctx);
    std::set<Mask> out;
    for (Mask m : masks_of(k, idx)) {
        if (out.count(m))
            continue;
        for (Mask s = m;; s = (s - 1) & m) {
            out.insert(s);
            if (s == 0)
                break;
        }
    }
    return from_masks(idx, k.kind, out);
}

bool check_closure(const TeamClass& k, ClosureMode mode, SatContext& ctx)
{
    Index idx(k.sig, ctx);
    const auto ms = masks_of(k, idx);
    return mode == ClosureMode::flat ? flat(ms, idx, k.kind) : downward(ms);
}

Formula synthesize_co(const TeamClass& k, SatContext& ctx)
{
    Index idx(k.sig, ctx);
    const auto ms = masks_of(k, idx);
    if (ms.empty())
        throw InvalidArgument("synthesis needs a nonempty class");
    if (!flat(ms, idx, k.kind))
        throw InvalidArgument("the class is not flat");
    Mask t = 0;
    for (Mask m : ms)
        t |= m;
    std::vector<Formula> ds;
    std::size_t nodes = 0;
    for (Mask c : idx.classes) {
        const Mask part = t & c;
        if (!part)
            continue;
        std::vector<Assignment> rows;
        for (std::size_t i = 0; i < idx.size(); ++i)
            if (part >> i & 1u)
                rows.push_back(idx.universe[i].row);
        const auto& law = *idx.universe[static_cast<std::size_t>(std::countr_zero(part))].law;
        Formula d = conj(build_theta(rows, k.sig, ctx.limits()).formula, build_phi(law, ctx.limits()).formula);
        nodes += d.size();
        if (nodes > ctx.limits().nodes)
            throw BudgetExceeded("synthesized formula exceeds the node budget");
        ds.push_back(d);
    }
    return tensor_all(ds);
}

Formula synthesize_cod(const TeamClass& k, SatContext& ctx)
{
    Index idx(k.sig, ctx);
    const auto ms = masks_of(k, idx);
    if (ms.empty())
        throw InvalidArgument("synthesis needs a nonempty class");
    if (!downward(ms))
        throw InvalidArgument("the class is not closed under ≽");
    std::vector<Formula> parts;
    std::size_t nodes = 0;
    for (Mask m : idx.teams(k.kind)) {
        if (ms.count(m))
            continue;
        bool minimal = true;
        for (Mask b = m; b && minimal; b &= b - 1)
            minimal = ms.count(m & ~(b & -b)) > 0;
        if (!minimal)
            continue;
        Formula xi = build_xi(idx.team_of(m), ctx.limits()).formula;
        nodes += xi.size();
        if (nodes > ctx.limits().nodes)
            throw BudgetExceeded("synthesized formula exceeds the node budget");
        parts.push_back(xi);
    }
    return conj_all(parts);
}

std::optional<GeneralizedCausalTeam> definition_mismatch(const Formula& phi, const TeamClass& k, SatContext& ctx)
{
    Index idx(k.sig, ctx);
    const auto ms = masks_of(k, idx);
    const auto fam = ctx.satisfying_subteams(idx.universe, phi);
    for (Mask m : idx.teams(k.kind))
        if (fam.contains(m) != (ms.count(m) > 0))
            return idx.team_of(m);
    return std::nullopt;
}

bool verify_defines(const Formula& phi, const TeamClass& k, SatContext& ctx)
{
    return !definition_mismatch(phi, k, ctx).has_value();
}

}  // namespace ctlab
