#pragma once

#include <string>
#include <vector>

#include "ctlab/derivation.hpp"

namespace ctlab {

struct GoldenDerivation {
    std::string name;
    System system = System::co_g;
    SignaturePtr sig;
    std::vector<Formula> assumptions;  // Γ
    Formula conclusion;
    Derivation proof;
};

// X, Y, Z with range {0, 1}.
SignaturePtr golden_signature();

// Derived rules of the CO, CO∨∨ and COD systems as checked derivations.
std::vector<GoldenDerivation> golden_derived_rules();

// dep(X;Y) ⊢ ⋁_x (X=x ∧ =(Y)) and back, for a binary X; premise leaves carry
// the given label (empty for an open premise).
Derivation dep_normal_form_forward(int x, int y, const SignaturePtr& sig, const std::string& premise_label);
Derivation dep_normal_form_backward(int x, int y, const SignaturePtr& sig, const std::string& premise_label);

// φ ⊢ φ* and φ* ⊢ φ by repeated positive substitution; dependence atoms
// must have a single binary determinant.
Derivation star_forward(const Formula& phi, const SignaturePtr& sig, System system);
Derivation star_backward(const Formula& phi, const SignaturePtr& sig, System system);

}  // namespace ctlab
