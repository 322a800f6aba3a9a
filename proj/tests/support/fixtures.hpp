#pragma once

#include <string>
#include <vector>

#include "ctlab/formula.hpp"
#include "ctlab/function_system.hpp"
#include "ctlab/team.hpp"

namespace fixtures {

using namespace ctlab;

// U, X ∈ {0,1}, Y ∈ {1,2}, Z ∈ {2..6}.
SignaturePtr uxyz();
// X = U, Y = X + 1, Z = 2Y + X + U.
LawPtr uxyz_law();
// The two-row team {(0,0,1,2), (1,1,2,6)} under that law.
CausalTeam uxyz_team();

// X ∈ {1,2}, Y ∈ {1,2,3}, Z ∈ {2..5}.
SignaturePtr xyz_wide();
LawPtr law_f();  // Z = 2X
LawPtr law_g();  // Z = X + Y
// {(s,F), (s,G), (t,G)} with s = (2,2,4), t = (1,3,4).
GeneralizedCausalTeam fg_team();

// Binary variables with the given names.
SignaturePtr binary(const std::vector<std::string>& names);

// Row from value tokens in signature order.
Assignment row(const Signature& sig, const std::vector<std::string>& tokens);
Formula parse(const std::string& text, const SignaturePtr& sig);

std::string source_path(const std::string& relative);

}  // namespace fixtures
