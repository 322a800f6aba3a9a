#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ctlab/derivation.hpp"

namespace ctlab {

struct FuzzOptions {
    std::size_t trials = 200;
    std::size_t team_cap = 12;
    std::uint64_t seed = 20240601;
    unsigned jobs = 1;
    int depth = 2;
};

struct FuzzReport {
    std::string rule;
    System system = System::co_g;
    std::size_t trials = 0;     // accepted instances
    std::size_t rejected = 0;   // samples the rule check refused
    std::size_t effective = 0;  // instances whose premises all held
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

// X, Y with range {0, 1}.
SignaturePtr fuzz_signature();

// Samples one-step instances the checker accepts. Premise-only rules: the
// premises must entail the conclusion. Rules with discharge: whenever
// Γ ∪ H_i ⊨ P_i for every premise (H_i alone for closed premises), Γ ⊨ C.
// Entailment is team-bounded by team_cap under the system's semantics.
FuzzReport rule_soundness_fuzz(const std::string& rule, System system, const SignaturePtr& sig,
                               const FuzzOptions& opts = {});
// Same, for a schema outside the registry; instances are sampled by its name.
FuzzReport rule_soundness_fuzz(const RuleSchema& schema, System system, const SignaturePtr& sig,
                               const FuzzOptions& opts = {});
std::vector<FuzzReport> fuzz_system(System system, const SignaturePtr& sig, const FuzzOptions& opts = {});

struct RecurReport {
    std::size_t chains = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Every chain X1 ⤳ … ⤳ Xk with k ≤ max_length + 1 and Xk ≠ X1.
RecurReport recur_exhaustive(const SignaturePtr& sig, std::size_t max_length, Semantics sem,
                             std::size_t team_cap = 12);

}  // namespace ctlab
