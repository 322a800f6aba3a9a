#include "ctlab/team.hpp"

#include <algorithm>
#include <utility>

#include "ctlab/error.hpp"

namespace ctlab {

namespace {

using EquivKey = std::vector<std::pair<Assignment, const std::vector<int>*>>;

EquivKey equivalence_key(const GeneralizedCausalTeam& t)
{
    EquivKey k;
    k.reserve(t.size());
    for (const auto& m : t.members())
        k.emplace_back(m.row, &m.law->canonical_key());
    auto less = [](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first < b.first;
        return *a.second < *b.second;
    };
    auto eq = [](const auto& a, const auto& b) { return a.first == b.first && *a.second == *b.second; };
    std::sort(k.begin(), k.end(), less);
    k.erase(std::unique(k.begin(), k.end(), eq), k.end());
    return k;
}

bool key_subset(const EquivKey& a, const EquivKey& b)
{
    auto less = [](const auto& x, const auto& y) {
        if (x.first != y.first)
            return x.first < y.first;
        return *x.second < *y.second;
    };
    return std::includes(b.begin(), b.end(), a.begin(), a.end(), less);
}

}  // namespace

CausalTeam CausalTeam::empty(SignaturePtr sig)
{
    CausalTeam t;
    t.sig_ = std::move(sig);
    return t;
}

CausalTeam::CausalTeam(SignaturePtr sig, std::vector<Assignment> rows, LawPtr law)
    : sig_(std::move(sig)), rows_(std::move(rows)), law_(std::move(law))
{
    if (!sig_)
        throw InvalidArgument("causal team without signature");
    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
    if (rows_.empty()) {
        law_.reset();
        return;
    }
    if (!law_)
        throw InvalidArgument("nonempty causal team needs a law");
    require_same_signature(sig_, law_->signature());
    if (!law_->recursive())
        throw InvalidArgument("causal team law is not recursive");
    for (const auto& s : rows_) {
        if (!in_range(*sig_, s))
            throw InvalidArgument("assignment out of range");
        if (!is_compatible(s, *law_))
            throw InvalidArgument("row " + format_assignment(*sig_, s) + " is not compatible with the law");
    }
}

bool CausalTeam::operator==(const CausalTeam& o) const
{
    if (rows_ != o.rows_)
        return false;
    if (rows_.empty())
        return true;
    return law_ == o.law_ || *law_ == *o.law_;
}

GeneralizedCausalTeam::GeneralizedCausalTeam(SignaturePtr sig, std::vector<Member> members)
    : sig_(std::move(sig)), members_(std::move(members))
{
    if (!sig_)
        throw InvalidArgument("generalized causal team without signature");
    for (const auto& m : members_) {
        if (!m.law)
            throw InvalidArgument("member without law");
        require_same_signature(sig_, m.law->signature());
        if (!m.law->recursive())
            throw InvalidArgument("member law is not recursive");
        if (!in_range(*sig_, m.row))
            throw InvalidArgument("assignment out of range");
        if (!is_compatible(m.row, *m.law))
            throw InvalidArgument("member " + format_assignment(*sig_, m.row) + " is not compatible with its law");
    }
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    // Registry: structurally equal laws share one pointer.
    std::vector<LawPtr> reg;
    for (auto& m : members_) {
        auto it = std::find_if(reg.begin(), reg.end(), [&](const LawPtr& p) { return *p == *m.law; });
        if (it == reg.end())
            reg.push_back(m.law);
        else
            m.law = *it;
    }
}

std::vector<Assignment> GeneralizedCausalTeam::rows() const
{
    std::vector<Assignment> out;
    for (const auto& m : members_)
        if (out.empty() || out.back() != m.row)
            out.push_back(m.row);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<LawPtr> GeneralizedCausalTeam::laws() const
{
    std::vector<LawPtr> out;
    for (const auto& m : members_)
        out.push_back(m.law);
    std::sort(out.begin(), out.end(), LawPtrLess{});
    out.erase(std::unique(out.begin(), out.end(), [](const LawPtr& a, const LawPtr& b) { return *a == *b; }),
              out.end());
    return out;
}

GeneralizedCausalTeam to_generalized(const CausalTeam& t)
{
    std::vector<Member> ms;
    for (const auto& s : t.rows())
        ms.push_back(Member{s, t.law()});
    return GeneralizedCausalTeam(t.signature(), std::move(ms));
}

CausalTeam to_causal(const GeneralizedCausalTeam& t)
{
    if (t.empty())
        return CausalTeam::empty(t.signature());
    auto laws = t.laws();
    if (laws.size() != 1)
        throw InvalidArgument("generalized team has more than one law; no causal counterpart");
    return CausalTeam(t.signature(), t.rows(), laws.front());
}

bool team_equivalent(const CausalTeam& s, const CausalTeam& t)
{
    require_same_signature(s.signature(), t.signature());
    if (s.empty() || t.empty())
        return s.empty() && t.empty();
    return similar(*s.law(), *t.law()) && s.rows() == t.rows();
}

bool team_equivalent(const GeneralizedCausalTeam& s, const GeneralizedCausalTeam& t)
{
    require_same_signature(s.signature(), t.signature());
    auto a = equivalence_key(s);
    auto b = equivalence_key(t);
    return a.size() == b.size() && key_subset(a, b);
}

bool preceq(const CausalTeam& s, const CausalTeam& t)
{
    require_same_signature(s.signature(), t.signature());
    if (s.empty())
        return true;
    if (t.empty())
        return false;
    return similar(*s.law(), *t.law()) &&
           std::includes(t.rows().begin(), t.rows().end(), s.rows().begin(), s.rows().end());
}

bool preceq(const GeneralizedCausalTeam& s, const GeneralizedCausalTeam& t)
{
    require_same_signature(s.signature(), t.signature());
    if (s.empty())
        return true;
    // Every member of S needs a member of T with the same assignment and a
    // similar law; then S ≈ R for R the matching members of T.
    for (const auto& m : s.members()) {
        bool found = false;
        for (const auto& n : t.members())
            if (n.row == m.row && n.law->canonical_hash() == m.law->canonical_hash() &&
                n.law->canonical_key() == m.law->canonical_key()) {
                found = true;
                break;
            }
        if (!found)
            return false;
    }
    return true;
}

CausalTeam union_causal_teams(const CausalTeam& s, const CausalTeam& t)
{
    require_same_signature(s.signature(), t.signature());
    if (s.empty())
        return t;
    if (t.empty())
        return s;
    const auto& f = *s.law();
    const auto& g = *t.law();
    if (!similar(f, g))
        throw InvalidArgument("union of causal teams with dissimilar laws");
    const auto& sig = *s.signature();
    std::vector<std::optional<Mechanism>> mech(f.size());
    for (std::size_t v = 0; v < f.size(); ++v) {
        const int vi = static_cast<int>(v);
        if (!f.endogenous(vi) || f.constant(vi))
            continue;
        const auto& mf = f.mechanism(vi);
        const auto& mg = g.mechanism(vi);
        std::vector<int> shared;
        std::set_intersection(mf.parents.begin(), mf.parents.end(), mg.parents.begin(), mg.parents.end(),
                              std::back_inserter(shared));
        // Non-shared parents of F_V are dummies; read them at their first value.
        mech[v] = tabulate(sig, vi, shared, [&](const std::vector<int>& p) {
            std::vector<int> vals(f.size(), 0);
            for (std::size_t j = 0; j < shared.size(); ++j)
                vals[static_cast<std::size_t>(shared[j])] = p[j];
            return f.evaluate(vi, vals);
        });
    }
    auto h = std::make_shared<const FunctionSystem>(s.signature(), std::move(mech));
    std::vector<Assignment> rows = s.rows();
    rows.insert(rows.end(), t.rows().begin(), t.rows().end());
    return CausalTeam(s.signature(), std::move(rows), std::move(h));
}

GeneralizedCausalTeam team_union(const GeneralizedCausalTeam& s, const GeneralizedCausalTeam& t)
{
    require_same_signature(s.signature(), t.signature());
    std::vector<Member> ms = s.members();
    ms.insert(ms.end(), t.members().begin(), t.members().end());
    return GeneralizedCausalTeam(s.signature(), std::move(ms));
}

GeneralizedCausalTeam restrict_to_similar(const GeneralizedCausalTeam& t, const FunctionSystem& f)
{
    require_same_signature(t.signature(), f.signature());
    std::vector<Member> ms;
    for (const auto& m : t.members())
        if (similar(*m.law, f))
            ms.push_back(m);
    return GeneralizedCausalTeam(t.signature(), std::move(ms));
}

std::size_t quotient_cardinality(const GeneralizedCausalTeam& t)
{
    return equivalence_key(t).size();
}

bool is_uniform(const GeneralizedCausalTeam& t)
{
    for (const auto& m : t.members())
        if (!similar(*m.law, *t.members().front().law))
            return false;
    return true;
}

GeneralizedCausalTeam canonical_team(const GeneralizedCausalTeam& t)
{
    std::vector<Member> ms;
    std::vector<LawPtr> cache;
    for (const auto& m : t.members()) {
        auto c = canonicalize(*m.law).law;
        auto it = std::find_if(cache.begin(), cache.end(), [&](const LawPtr& p) { return *p == c; });
        LawPtr p;
        if (it == cache.end()) {
            p = std::make_shared<const FunctionSystem>(std::move(c));
            cache.push_back(p);
        } else {
            p = *it;
        }
        ms.push_back(Member{m.row, p});
    }
    return GeneralizedCausalTeam(t.signature(), std::move(ms));
}

CausalTeam canonical_team(const CausalTeam& t)
{
    if (t.empty())
        return t;
    return CausalTeam(t.signature(), t.rows(), std::make_shared<const FunctionSystem>(canonicalize(*t.law()).law));
}

std::vector<Member> enumerate_sem(const SignaturePtr& sig, std::size_t budget)
{
    std::vector<Member> out;
    for (auto& f : enumerate_function_systems(sig, true, budget)) {
        auto p = std::make_shared<const FunctionSystem>(std::move(f));
        for (auto& s : compatible_assignments(*p))
            out.push_back(Member{std::move(s), p});
    }
    return out;
}

std::vector<Member> enumerate_sem_reduced(const SignaturePtr& sig, std::size_t budget)
{
    std::vector<Member> out;
    for (auto& f : enumerate_similarity_representatives(sig, budget)) {
        auto p = std::make_shared<const FunctionSystem>(std::move(f));
        for (auto& s : compatible_assignments(*p)) {
            out.push_back(Member{std::move(s), p});
            if (out.size() > budget)
                throw BudgetExceeded("Sem_σ/≈ exceeds the budget");
        }
    }
    return out;
}

}  // namespace ctlab
