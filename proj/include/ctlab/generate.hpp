#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "ctlab/formula.hpp"
#include "ctlab/semantics.hpp"
#include "ctlab/synthesis.hpp"
#include "ctlab/team.hpp"

namespace ctlab {

using Rng = std::mt19937_64;

struct FormulaShape {
    Language language = Language::CO;
    int depth = 3;
    bool counterfactuals = true;
    std::size_t max_antecedent = 2;
    // Chance that an antecedent assigns one variable two values.
    double inconsistent = 0.0;
    // Largest determinant list of a dependence atom.
    std::size_t max_determinants = 1;
};

// Always in the requested language; the root may be any connective.
Formula random_formula(Rng& rng, const Signature& sig, const FormulaShape& shape);
Formula random_co(Rng& rng, const Signature& sig, int depth, bool counterfactuals = true);

// Nonempty, variables distinct unless allow_inconsistent fires.
InterventionSpec random_antecedent(Rng& rng, const Signature& sig, std::size_t max_len, double inconsistent = 0.0);

Assignment random_assignment(Rng& rng, const Signature& sig);

// A recursive law, not canonicalized: dummy parents and constant tables occur.
FunctionSystem random_law(Rng& rng, const SignaturePtr& sig, double endogenous = 0.5);

// Nonempty unless max_rows is 0.
CausalTeam random_causal_team(Rng& rng, const SignaturePtr& sig, std::size_t max_rows);
// Members drawn with independent random laws; uniform=true draws all laws
// similar to one law.
GeneralizedCausalTeam random_team(Rng& rng, const SignaturePtr& sig, std::size_t max_members, bool uniform = false);

// Same T⁻, every law replaced by an unrelated random one.
GeneralizedCausalTeam swap_laws(Rng& rng, const GeneralizedCausalTeam& t);

// ≽-closed: the ≼-downset of a few random teams of C_σ.
TeamClass random_downset_class(Rng& rng, const SignaturePtr& sig, Semantics kind, std::size_t generators,
                               SatContext& ctx);
// Flat: the teams of C_σ whose members all lie in a random set of singletons.
TeamClass random_flat_class(Rng& rng, const SignaturePtr& sig, Semantics kind, SatContext& ctx);

}  // namespace ctlab
