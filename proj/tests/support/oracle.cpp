#include "oracle.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

namespace oracle {

using ctlab::Mechanism;
using ctlab::Signature;

int apply(const FunctionSystem& f, int v, const Assignment& s)
{
    const Signature& sig = *f.signature();
    const Mechanism& m = *f.slot(v);
    std::size_t idx = 0;
    for (int p : m.parents)
        idx = idx * static_cast<std::size_t>(sig.range_size(p)) + static_cast<std::size_t>(s[p]);
    return m.table.at(idx);
}

Assignment do_row(const Assignment& s, const FunctionSystem& f, const InterventionSpec& iv)
{
    Assignment out = s;
    std::set<int> forced;
    for (const auto& e : iv.equalities()) {
        out.values[static_cast<std::size_t>(e.var)] = e.value;
        forced.insert(e.var);
    }
    // Acyclic: |Dom| rounds reach the fixpoint.
    for (std::size_t round = 0; round <= f.size(); ++round)
        for (std::size_t v = 0; v < f.size(); ++v) {
            const int vi = static_cast<int>(v);
            if (f.endogenous(vi) && !forced.count(vi))
                out.values[v] = apply(f, vi, out);
        }
    return out;
}

LawPtr do_law(const FunctionSystem& f, const InterventionSpec& iv)
{
    auto mech = f.mechanisms();
    for (const auto& e : iv.equalities())
        mech[static_cast<std::size_t>(e.var)].reset();
    return std::make_shared<const FunctionSystem>(f.signature(), std::move(mech));
}

std::vector<Member> do_team(const std::vector<Member>& t, const InterventionSpec& iv)
{
    std::vector<Member> out;
    for (const auto& m : t) {
        Member n{do_row(m.row, *m.law, iv), do_law(*m.law, iv)};
        if (std::find(out.begin(), out.end(), n) == out.end())
            out.push_back(std::move(n));
    }
    return out;
}

namespace {

std::vector<Member> pick(const std::vector<Member>& t, unsigned mask)
{
    std::vector<Member> out;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (mask >> i & 1u)
            out.push_back(t[i]);
    return out;
}

}  // namespace

bool sat(const std::vector<Member>& t, const Formula& f)
{
    using ctlab::Kind;
    switch (f.kind()) {
    case Kind::Eq:
        return std::all_of(t.begin(), t.end(), [&](const Member& m) { return m.row[f.var()] == f.value(); });
    case Kind::Dep:
        for (const auto& a : t)
            for (const auto& b : t) {
                bool same = true;
                for (int x : f.determinants())
                    same = same && a.row[x] == b.row[x];
                if (same && a.row[f.var()] != b.row[f.var()])
                    return false;
            }
        return true;
    case Kind::Neg:
        return std::all_of(t.begin(), t.end(), [&](const Member& m) { return !sat({m}, f.operand()); });
    case Kind::And: return sat(t, f.lhs()) && sat(t, f.rhs());
    case Kind::Global: return sat(t, f.lhs()) || sat(t, f.rhs());
    case Kind::Tensor: {
        const unsigned full = (1u << t.size()) - 1;
        for (unsigned a = 0; a <= full; ++a)
            for (unsigned b = 0; b <= full; ++b)
                if ((a | b) == full && sat(pick(t, a), f.lhs()) && sat(pick(t, b), f.rhs()))
                    return true;
        return false;
    }
    case Kind::Cf:
        if (!f.antecedent().consistent())
            return true;
        return sat(do_team(t, f.antecedent()), f.operand());
    }
    return false;
}

namespace {

// Every full assignment of the signature.
std::vector<Assignment> all_assignments(const Signature& sig)
{
    std::vector<Assignment> out{Assignment{std::vector<int>(sig.size(), 0)}};
    for (std::size_t v = 0; v < sig.size(); ++v) {
        std::vector<Assignment> next;
        for (const auto& a : out)
            for (int x = 0; x < sig.range_size(static_cast<int>(v)); ++x) {
                Assignment b = a;
                b.values[v] = x;
                next.push_back(b);
            }
        out = std::move(next);
    }
    return out;
}

bool relevant(const FunctionSystem& f, int v) { return f.endogenous(v) && !constant(f, v); }

}  // namespace

bool constant(const FunctionSystem& f, int v)
{
    if (!f.endogenous(v))
        return false;
    const auto all = all_assignments(*f.signature());
    const int first = apply(f, v, all.front());
    return std::all_of(all.begin(), all.end(), [&](const Assignment& s) { return apply(f, v, s) == first; });
}

bool similar(const FunctionSystem& f, const FunctionSystem& g)
{
    const auto all = all_assignments(*f.signature());
    for (std::size_t v = 0; v < f.size(); ++v) {
        const int vi = static_cast<int>(v);
        if (relevant(f, vi) != relevant(g, vi))
            return false;
        if (!relevant(f, vi))
            continue;
        for (const auto& s : all)
            if (apply(f, vi, s) != apply(g, vi, s))
                return false;
    }
    return true;
}

namespace {

std::set<Assignment> rows_like(const std::vector<Member>& t, const FunctionSystem& f)
{
    std::set<Assignment> out;
    for (const auto& m : t)
        if (oracle::similar(*m.law, f))
            out.insert(m.row);
    return out;
}

}  // namespace

bool equivalent(const std::vector<Member>& s, const std::vector<Member>& t)
{
    for (const auto* side : {&s, &t})
        for (const auto& m : *side)
            if (rows_like(s, *m.law) != rows_like(t, *m.law))
                return false;
    return true;
}

bool preceq(const std::vector<Member>& s, const std::vector<Member>& t)
{
    for (unsigned mask = 0; mask < (1u << t.size()); ++mask)
        if (equivalent(s, pick(t, mask)))
            return true;
    return false;
}

std::size_t quotient(const std::vector<Member>& t)
{
    std::vector<Member> reps;
    for (const auto& m : t)
        if (std::none_of(reps.begin(), reps.end(),
                         [&](const Member& r) { return r.row == m.row && oracle::similar(*r.law, *m.law); }))
            reps.push_back(m);
    return reps.size();
}

std::vector<std::vector<Member>> teams_upto(const std::vector<Member>& universe, std::size_t max_size)
{
    std::vector<std::vector<Member>> out{{}};
    // Grow by appending members with a larger index than the last one.
    std::vector<std::pair<std::vector<Member>, std::size_t>> frontier{{{}, 0}};
    for (std::size_t size = 1; size <= max_size; ++size) {
        std::vector<std::pair<std::vector<Member>, std::size_t>> next;
        for (const auto& [team, from] : frontier)
            for (std::size_t i = from; i < universe.size(); ++i) {
                auto t = team;
                t.push_back(universe[i]);
                out.push_back(t);
                next.emplace_back(std::move(t), i + 1);
            }
        frontier = std::move(next);
    }
    return out;
}

std::vector<std::vector<Member>> causal_teams_upto(const std::vector<Member>& universe, std::size_t max_size)
{
    std::vector<std::vector<Member>> out;
    for (auto& t : teams_upto(universe, max_size)) {
        const bool one_law = std::all_of(t.begin(), t.end(), [&](const Member& m) { return *m.law == *t.front().law; });
        if (one_law)
            out.push_back(std::move(t));
    }
    return out;
}

bool entails(const std::vector<Formula>& gamma, const Formula& psi, const std::vector<std::vector<Member>>& teams)
{
    for (const auto& t : teams) {
        const bool premises = std::all_of(gamma.begin(), gamma.end(), [&](const Formula& g) { return sat(t, g); });
        if (premises && !sat(t, psi))
            return false;
    }
    return true;
}

}  // namespace oracle
