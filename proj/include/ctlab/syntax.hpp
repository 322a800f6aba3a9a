#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ctlab/formula.hpp"

namespace ctlab {

// Concrete grammar, loosest binding first:
//   φ ::= (E) []-> φ | α => φ | φ \\/ φ | φ \/ φ | φ /\ φ | !α
//       | X=v | dep(X1,...,Xn ; Y) | con(Y) | (φ)
// where E is an &-separated list of equalities. Binary connectives associate
// to the left, conditionals to the right. "=>" is desugared on input.
Formula parse_formula(std::string_view text, const Signature& sig);

// Canonical text; parse_formula(print_formula(f)) == f.
std::string print_formula(const Formula& f, const Signature& sig);

// "X=1 & Y=2" (also accepts "," or "/\" as separators).
InterventionSpec parse_intervention(std::string_view text, const Signature& sig);
std::string print_intervention(const InterventionSpec& iv, const Signature& sig);

// One formula per nonblank line; '#' starts a comment.
std::vector<Formula> parse_formula_lines(std::string_view text, const Signature& sig);

}  // namespace ctlab
