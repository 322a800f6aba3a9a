#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctlab/formula.hpp"
#include "ctlab/io.hpp"
#include "ctlab/semantics.hpp"

namespace ctlab {

enum class System { co_g, cov_g, cod_g, cov_c, cod_c };

const char* system_name(System s);  // "co-g", ...
// Throws ParseError on an unknown name.
System parse_system(std::string_view name);
Semantics system_semantics(System s);
bool system_admits(System s, const Formula& f);  // language check
const std::vector<System>& all_systems();

// A natural-deduction tree. Leaves with rule "hyp" are assumptions: labelled
// ones must be discharged below the root, unlabelled ones are open premises.
struct Derivation {
    std::string rule;
    Formula conclusion;
    std::vector<Derivation> premises;
    std::string label;                              // hyp leaves only
    std::vector<std::vector<std::string>> discharge;  // labels closed, per premise
    Json witness = Json::object();                  // side-condition payload
};

inline constexpr const char* kHypothesis = "hyp";

Derivation hyp(const Formula& f, std::string label = {});
Derivation infer(std::string rule, const Formula& conclusion, std::vector<Derivation> premises,
                 std::vector<std::vector<std::string>> discharge = {}, Json witness = Json::object());

struct RuleContext;

// What premise i may discharge, and whether it must be closed afterwards.
struct Discharge {
    std::vector<Formula> allowed;
    bool closed = false;
};

struct RuleSchema {
    std::string name;     // JSON label
    std::string display;  // notation used in the docs
    std::vector<System> systems;
    std::string premises;
    std::string conclusion;
    std::string side;
    bool hypothetical = false;  // discharges assumptions
    // Shape and side conditions of one node; a reason on failure.
    std::function<std::optional<std::string>(const Derivation&, RuleContext&)> check;
    // Called only after check succeeds. Empty for rules without discharge.
    std::function<std::vector<Discharge>(const Derivation&, RuleContext&)> discharges;

    bool in(System s) const;
};

const std::vector<RuleSchema>& rule_registry();
const RuleSchema* find_rule(std::string_view name);
std::vector<const RuleSchema*> rules_of(System s);

struct CheckResult {
    bool ok = false;
    std::string path;    // "root", "root/2/0", ...
    std::string reason;
    std::vector<Formula> open;  // undischarged premises (Γ), deduplicated
};

// Pure apart from memoized side-condition formulas. assumptions, when given,
// must contain every open premise.
CheckResult check_derivation(const Derivation& d, System system, const SignaturePtr& sig,
                             const std::optional<std::vector<Formula>>& assumptions = std::nullopt,
                             const Limits& limits = Limits::defaults());

// {"signature"?, "system"?, "assumptions"?, "proof": node};
// node = {"rule", "formula", "premises"?, "label"?, "discharge"?, "witness"?}.
struct ProofFile {
    SignaturePtr sig;
    std::optional<System> system;
    std::optional<std::vector<Formula>> assumptions;
    Derivation proof;
};

Derivation derivation_from_json(const Json& j, const Signature& sig);
Json derivation_to_json(const Derivation& d, const Signature& sig);
ProofFile proof_from_json(const Json& j, SignaturePtr sig = nullptr);
Json proof_to_json(const ProofFile& p, bool embed_signature = true);

// Replacement at a positive occurrence: from a derivation of φ and a derivation of
// θ' whose only open assumptions are hyp leaves of θ labelled theta_label,
// a derivation of φ(θ'/[θ,k]). Throws InvalidArgument when the occurrence is
// missing or under a negation.
Derivation substitute_positive(const Derivation& d_phi, const Formula& theta, std::size_t k,
                               const Derivation& d_theta, const std::string& theta_label, System system);

}  // namespace ctlab
