#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ctlab/formula.hpp"
#include "ctlab/semantics.hpp"
#include "ctlab/team.hpp"

namespace ctlab {

// CO formulas whose ∨∨ is equivalent to the formula they came from.
// Deduplicated, in generation order.
using DisjunctSet = std::vector<Formula>;

// R(φ). Throws InvalidArgument on a dependence atom.
DisjunctSet resolutions(const Formula& phi, std::size_t budget = Limits::defaults().nodes);

// φ*: dep(X;Y) with X nonempty becomes ⋁_x (X=x ∧ con(Y)).
Formula star_translate(const Formula& phi, const Signature& sig);
// I(φ): full instantiations of φ*. Throws InvalidArgument on ∨∨.
DisjunctSet instantiations(const Formula& phi, const Signature& sig,
                           std::size_t budget = Limits::defaults().nodes);

// Calls fn on each normal disjunct until it returns false; returns false iff
// stopped early. COV input yields R(φ), COD input I(φ); formulas with both
// connectives are rewritten (dep to con, con to ∨∨ of equalities) when
// allow_mixed is set and rejected otherwise. Throws BudgetExceeded after
// budget disjuncts.
bool for_each_disjunct(const Formula& phi, const Signature& sig, const std::function<bool(const Formula&)>& fn,
                       bool allow_mixed = false, std::size_t budget = Limits::defaults().nodes);
DisjunctSet normal_disjuncts(const Formula& phi, const Signature& sig, bool allow_mixed = false,
                             std::size_t budget = Limits::defaults().nodes);
// Number of disjuncts for_each_disjunct would produce (with repetitions), saturating.
std::uint64_t count_disjuncts(const Formula& phi, const Signature& sig);

// Singleton sweep over Sem_σ/≈; all inputs must be CO.
bool flat_entails(const std::vector<Formula>& gamma, const Formula& beta, const SignaturePtr& sig, SatContext& ctx);

struct EntailResult {
    bool holds = false;
    // On failure: a team satisfying Γ but not ψ (a causal team's T^g under causal semantics).
    std::optional<GeneralizedCausalTeam> counterexample;
    std::uint64_t gamma_disjuncts = 0;  // examined
    std::uint64_t psi_disjuncts = 0;
};

EntailResult decide_entails(const std::vector<Formula>& gamma, const Formula& psi, const SignaturePtr& sig,
                            Semantics sem, SatContext& ctx);
EntailResult decide_valid(const Formula& psi, const SignaturePtr& sig, Semantics sem, SatContext& ctx);

struct DisjunctionReport {
    bool premise = false;  // Δ ⊨ φ ∨∨ ψ
    bool left = false;     // Δ ⊨ φ
    bool right = false;    // Δ ⊨ ψ
    bool holds() const { return !premise || left || right; }
    // "left", "right", "both", or "none".
    std::string surviving() const;
};

// Throws InvalidArgument unless every member of Δ is CO.
DisjunctionReport check_disjunction_property(const std::vector<Formula>& delta, const Formula& phi,
                                             const Formula& psi, const SignaturePtr& sig, Semantics sem,
                                             SatContext& ctx);

// No nonempty causal teams with similar laws satisfy φ and ψ respectively.
bool incompatible(const Formula& phi, const Formula& psi, const SignaturePtr& sig, SatContext& ctx);

}  // namespace ctlab
