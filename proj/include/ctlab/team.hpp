#pragma once

#include <compare>
#include <memory>
#include <vector>

#include "ctlab/function_system.hpp"
#include "ctlab/signature.hpp"

namespace ctlab {

struct Member {
    Assignment row;
    LawPtr law;

    bool operator==(const Member& o) const { return row == o.row && (law == o.law || *law == *o.law); }
    std::strong_ordering operator<=>(const Member& o) const
    {
        if (auto c = row <=> o.row; c != 0)
            return c;
        if (law == o.law)
            return std::strong_ordering::equal;
        return *law <=> *o.law;
    }
};

// (T⁻, F). All empty teams are the same value and carry no law.
class CausalTeam {
public:
    static CausalTeam empty(SignaturePtr sig);
    CausalTeam(SignaturePtr sig, std::vector<Assignment> rows, LawPtr law);

    const SignaturePtr& signature() const { return sig_; }
    bool empty() const { return rows_.empty(); }
    std::size_t size() const { return rows_.size(); }
    const std::vector<Assignment>& rows() const { return rows_; }
    // Null for the empty team.
    const LawPtr& law() const { return law_; }

    bool operator==(const CausalTeam& o) const;

private:
    CausalTeam() = default;
    SignaturePtr sig_;
    std::vector<Assignment> rows_;
    LawPtr law_;
};

class GeneralizedCausalTeam {
public:
    explicit GeneralizedCausalTeam(SignaturePtr sig, std::vector<Member> members = {});

    const SignaturePtr& signature() const { return sig_; }
    const std::vector<Member>& members() const { return members_; }
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }

    // T⁻, sorted.
    std::vector<Assignment> rows() const;
    // The registry: distinct laws in sorted order.
    std::vector<LawPtr> laws() const;

    bool operator==(const GeneralizedCausalTeam& o) const { return members_ == o.members_; }

private:
    SignaturePtr sig_;
    std::vector<Member> members_;
};

using GCT = GeneralizedCausalTeam;

GeneralizedCausalTeam to_generalized(const CausalTeam& t);
// Requires at most one law in the registry.
CausalTeam to_causal(const GeneralizedCausalTeam& t);

bool team_equivalent(const CausalTeam& s, const CausalTeam& t);
bool team_equivalent(const GeneralizedCausalTeam& s, const GeneralizedCausalTeam& t);
bool preceq(const CausalTeam& s, const CausalTeam& t);
bool preceq(const GeneralizedCausalTeam& s, const GeneralizedCausalTeam& t);

CausalTeam union_causal_teams(const CausalTeam& s, const CausalTeam& t);
GeneralizedCausalTeam team_union(const GeneralizedCausalTeam& s, const GeneralizedCausalTeam& t);

GeneralizedCausalTeam restrict_to_similar(const GeneralizedCausalTeam& t, const FunctionSystem& f);
std::size_t quotient_cardinality(const GeneralizedCausalTeam& t);
bool is_uniform(const GeneralizedCausalTeam& t);

// Replace every law by its canonical form: a fixed representative of the
// team's ≈-class.
GeneralizedCausalTeam canonical_team(const GeneralizedCausalTeam& t);
CausalTeam canonical_team(const CausalTeam& t);

// Sem_σ: all compatible pairs with recursive laws.
std::vector<Member> enumerate_sem(const SignaturePtr& sig, std::size_t budget = Limits::defaults().nodes);
// Sem_σ/≈: one canonical law per ∼-class, with each compatible assignment.
std::vector<Member> enumerate_sem_reduced(const SignaturePtr& sig, std::size_t budget = Limits::defaults().nodes);

}  // namespace ctlab
