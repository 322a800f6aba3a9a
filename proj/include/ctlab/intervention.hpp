#pragma once

#include <compare>
#include <utility>
#include <vector>

#include "ctlab/function_system.hpp"
#include "ctlab/team.hpp"

namespace ctlab {

struct Equality {
    int var = 0;
    int value = 0;
    auto operator<=>(const Equality&) const = default;
    bool operator==(const Equality&) const = default;
};

// An antecedent X1=x1 ∧ ... ∧ Xn=xn, kept as written.
class InterventionSpec {
public:
    InterventionSpec() = default;
    explicit InterventionSpec(std::vector<Equality> eqs) : eqs_(std::move(eqs)) {}

    const std::vector<Equality>& equalities() const { return eqs_; }
    bool empty() const { return eqs_.empty(); }
    std::size_t size() const { return eqs_.size(); }

    // False iff some variable is given two different values.
    bool consistent() const;
    // Intervened variables, sorted and distinct.
    std::vector<int> variables() const;
    // Sorted, duplicate-free form; equal for specs denoting the same intervention.
    std::vector<Equality> normalized() const;

    auto operator<=>(const InterventionSpec&) const = default;
    bool operator==(const InterventionSpec&) const = default;

private:
    std::vector<Equality> eqs_;
};

FunctionSystem intervene_law(const FunctionSystem& f, const InterventionSpec& iv);

// s^F_{X=x} for a consistent spec.
Assignment intervene_row(const Assignment& s, const FunctionSystem& f, const InterventionSpec& iv);

std::pair<Assignment, FunctionSystem> intervene_assignment(const Assignment& s, const FunctionSystem& f,
                                                           const InterventionSpec& iv);

CausalTeam intervene_causal_team(const CausalTeam& t, const InterventionSpec& iv);
GeneralizedCausalTeam intervene_gct(const GeneralizedCausalTeam& t, const InterventionSpec& iv);

}  // namespace ctlab
