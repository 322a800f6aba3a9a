#pragma once

#include <optional>
#include <vector>

#include "ctlab/formula.hpp"
#include "ctlab/semantics.hpp"
#include "ctlab/team.hpp"

namespace ctlab {

// A finite class of teams over one σ, kept up to ≈: members are canonical
// teams over Sem_σ/≈, deduplicated and sorted.
struct TeamClass {
    SignaturePtr sig;
    Semantics kind = Semantics::generalized;
    std::vector<GeneralizedCausalTeam> teams;
};

// Canonicalizes and deduplicates; causal classes reject non-uniform teams.
TeamClass make_class(const SignaturePtr& sig, Semantics kind, const std::vector<GeneralizedCausalTeam>& teams,
                     SatContext& ctx);

// C_σ up to ≈ (all causal teams, or all generalized teams). Throws
// BudgetExceeded when |Sem_σ/≈| exceeds limits().universe_cap.
std::vector<GeneralizedCausalTeam> enumerate_teams(const SignaturePtr& sig, Semantics kind, SatContext& ctx);

// K_φ restricted to C_σ.
TeamClass class_of(const Formula& phi, const SignaturePtr& sig, Semantics kind, SatContext& ctx);

TeamClass close_under_succeq(const TeamClass& k, SatContext& ctx);

enum class ClosureMode { flat, downward_equiv };
bool check_closure(const TeamClass& k, ClosureMode mode, SatContext& ctx);

// ⋁ over the ∼-classes F present in ⋃K of (Θ^{(⋃K)^F⁻} ∧ Φ^F).
// Throws InvalidArgument unless K is nonempty and flat.
Formula synthesize_co(const TeamClass& k, SatContext& ctx);
// ⋀ of Ξ^T over the ≼-minimal teams outside K. Throws InvalidArgument unless
// K is nonempty and closed under ≽.
Formula synthesize_cod(const TeamClass& k, SatContext& ctx);

// A team of C_σ on which membership in K and satisfaction of φ differ.
std::optional<GeneralizedCausalTeam> definition_mismatch(const Formula& phi, const TeamClass& k, SatContext& ctx);
bool verify_defines(const Formula& phi, const TeamClass& k, SatContext& ctx);

}  // namespace ctlab
