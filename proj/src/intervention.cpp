#include "ctlab/intervention.hpp"

#include <algorithm>

#include "ctlab/error.hpp"

namespace ctlab {

bool InterventionSpec::consistent() const
{
    for (std::size_t i = 0; i < eqs_.size(); ++i)
        for (std::size_t j = i + 1; j < eqs_.size(); ++j)
            if (eqs_[i].var == eqs_[j].var && eqs_[i].value != eqs_[j].value)
                return false;
    return true;
}

std::vector<int> InterventionSpec::variables() const
{
    std::vector<int> vs;
    for (const auto& e : eqs_)
        vs.push_back(e.var);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

std::vector<Equality> InterventionSpec::normalized() const
{
    auto out = eqs_;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

void require_consistent(const InterventionSpec& iv)
{
    if (!iv.consistent())
        throw InvalidArgument("intervention with an inconsistent antecedent");
}

void check_spec(const InterventionSpec& iv, const Signature& sig)
{
    for (const auto& e : iv.equalities())
        if (e.var < 0 || static_cast<std::size_t>(e.var) >= sig.size() || e.value < 0 ||
            e.value >= sig.range_size(e.var))
            throw InvalidArgument("intervention outside the signature");
}

}  // namespace

FunctionSystem intervene_law(const FunctionSystem& f, const InterventionSpec& iv)
{
    require_consistent(iv);
    check_spec(iv, *f.signature());
    return restrict_law(f, iv.variables());
}

Assignment intervene_row(const Assignment& s, const FunctionSystem& f, const InterventionSpec& iv)
{
    require_consistent(iv);
    check_spec(iv, *f.signature());
    Assignment out = s;
    std::vector<bool> forced(f.size(), false);
    for (const auto& e : iv.equalities()) {
        out.values[static_cast<std::size_t>(e.var)] = e.value;
        forced[static_cast<std::size_t>(e.var)] = true;
    }
    // The graph of F_{X=x} is a subgraph of G_F, so F's order still works.
    for (int v : f.topological_order())
        if (!forced[static_cast<std::size_t>(v)] && f.endogenous(v))
            out.values[static_cast<std::size_t>(v)] = f.evaluate(v, out.values);
    return out;
}

std::pair<Assignment, FunctionSystem> intervene_assignment(const Assignment& s, const FunctionSystem& f,
                                                           const InterventionSpec& iv)
{
    return {intervene_row(s, f, iv), intervene_law(f, iv)};
}

CausalTeam intervene_causal_team(const CausalTeam& t, const InterventionSpec& iv)
{
    require_consistent(iv);
    if (t.empty())
        return t;
    auto law = std::make_shared<const FunctionSystem>(intervene_law(*t.law(), iv));
    std::vector<Assignment> rows;
    for (const auto& s : t.rows())
        rows.push_back(intervene_row(s, *t.law(), iv));
    return CausalTeam(t.signature(), std::move(rows), std::move(law));
}

GeneralizedCausalTeam intervene_gct(const GeneralizedCausalTeam& t, const InterventionSpec& iv)
{
    require_consistent(iv);
    std::vector<std::pair<LawPtr, LawPtr>> laws;
    std::vector<Member> ms;
    for (const auto& m : t.members()) {
        auto it = std::find_if(laws.begin(), laws.end(), [&](const auto& p) { return p.first == m.law; });
        if (it == laws.end()) {
            laws.emplace_back(m.law, std::make_shared<const FunctionSystem>(intervene_law(*m.law, iv)));
            it = laws.end() - 1;
        }
        ms.push_back(Member{intervene_row(m.row, *m.law, iv), it->second});
    }
    return GeneralizedCausalTeam(t.signature(), std::move(ms));
}

}  // namespace ctlab
