#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ctlab/formula.hpp"
#include "ctlab/limits.hpp"
#include "ctlab/team.hpp"

namespace ctlab {

// A constructed formula plus where it came from.
struct CharFormula {
    Formula formula;
    std::string constructor;
    std::vector<std::pair<std::string, std::string>> params;
};

// Exact node counts (Formula::size()) of what the constructors would build,
// saturating at UINT64_MAX. Every constructor refuses with BudgetExceeded when
// its estimate exceeds limits.nodes.
std::uint64_t estimate_phi(const FunctionSystem& f);
std::uint64_t estimate_theta(const Signature& sig, std::size_t rows);
std::uint64_t estimate_mu(const Signature& sig);
std::uint64_t estimate_chi_k(const Signature& sig, std::size_t k);
std::uint64_t estimate_xi(const GeneralizedCausalTeam& t, const Limits& limits = Limits::defaults());
std::uint64_t estimate_unf(const SignaturePtr& sig, const Limits& limits = Limits::defaults());
std::uint64_t estimate_leadsto(const Signature& sig, int x, int y);
std::uint64_t estimate_direct_cause(const Signature& sig, int x, int y);
std::uint64_t estimate_beta_en(const Signature& sig, int v);

// η_σ(V) for the mechanism of V in F; ξ_σ(V).
Formula build_eta(const FunctionSystem& f, int v);
Formula build_xi_var(const Signature& sig, int v);

CharFormula build_phi(const FunctionSystem& f, const Limits& limits = Limits::defaults());
// Rows are deduplicated and taken in assignment order.
CharFormula build_theta(std::vector<Assignment> rows, const SignaturePtr& sig,
                        const Limits& limits = Limits::defaults());
CharFormula build_mu(const SignaturePtr& sig, const Limits& limits = Limits::defaults());
CharFormula build_chi(const SignaturePtr& sig, const Limits& limits = Limits::defaults());
CharFormula build_chi_k(const SignaturePtr& sig, long long k, const Limits& limits = Limits::defaults());

// Third disjunct over one law per ∼-class.
CharFormula build_xi(const GeneralizedCausalTeam& t, const Limits& limits = Limits::defaults());
CharFormula build_xi(const CausalTeam& t, const Limits& limits = Limits::defaults());
// Third disjunct over every recursive law of the signature.
CharFormula build_xi_unreduced(const GeneralizedCausalTeam& t, const Limits& limits = Limits::defaults());

// ∨∨ of Φ^F over ∼-representatives; the tensor variant uses ∨ instead.
CharFormula build_unf(const SignaturePtr& sig, const Limits& limits = Limits::defaults());
CharFormula build_unf_tensor(const SignaturePtr& sig, const Limits& limits = Limits::defaults());

CharFormula build_leadsto(int x, int y, const SignaturePtr& sig, const Limits& limits = Limits::defaults());
CharFormula build_direct_cause(int x, int y, const SignaturePtr& sig, const Limits& limits = Limits::defaults());
CharFormula build_beta_en(int v, const SignaturePtr& sig, const Limits& limits = Limits::defaults());

}  // namespace ctlab
