#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ctlab/derivation.hpp"
#include "ctlab/function_system.hpp"

namespace ctlab {

// Per-check state shared by the rule callbacks: the signature plus memoized
// formulas that side conditions compare against.
struct RuleContext {
    SignaturePtr sig;
    System system = System::co_g;
    Limits limits;

    RuleContext(SignaturePtr s, System sys, Limits l) : sig(std::move(s)), system(sys), limits(l) {}

    // X ⤳ Y; throws BudgetExceeded or InvalidArgument like the builder.
    const Formula& leadsto(int x, int y);
    // ∼-representatives of F_σ and their Φ^F, in enumeration order.
    const std::vector<FunctionSystem>& representatives();
    const std::vector<Formula>& phis();
    SatContext& sat();

private:
    std::map<std::pair<int, int>, Formula> leadsto_;
    std::optional<std::vector<FunctionSystem>> reps_;
    std::optional<std::vector<Formula>> phis_;
    std::unique_ptr<SatContext> sat_;
};

// Equalities of a conjunction of equalities, in order; nullopt otherwise.
std::optional<std::vector<Equality>> equalities_of(const Formula& f);

}  // namespace ctlab
