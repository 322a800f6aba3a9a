#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctlab/limits.hpp"
#include "ctlab/signature.hpp"

namespace ctlab {

// One structural equation. The table is dense over parent tuples, first parent
// most significant.
struct Mechanism {
    std::vector<int> parents;
    std::vector<int> table;

    auto operator<=>(const Mechanism&) const = default;
    bool operator==(const Mechanism&) const = default;
};

class FunctionSystem {
public:
    // Rejects cyclic graphs unless allow_cyclic is set.
    FunctionSystem(SignaturePtr sig, std::vector<std::optional<Mechanism>> mechanisms,
                   bool allow_cyclic = false);

    static FunctionSystem all_exogenous(SignaturePtr sig);

    const SignaturePtr& signature() const { return sig_; }
    std::size_t size() const { return mech_.size(); }

    bool endogenous(int v) const { return mech_[static_cast<std::size_t>(v)].has_value(); }
    const std::optional<Mechanism>& slot(int v) const { return mech_[static_cast<std::size_t>(v)]; }
    const Mechanism& mechanism(int v) const;
    const std::vector<std::optional<Mechanism>>& mechanisms() const { return mech_; }
    std::vector<int> endogenous_variables() const;

    bool recursive() const { return recursive_; }
    // Parents before children; only defined for recursive systems.
    const std::vector<int>& topological_order() const;

    // F_V applied to the parent values found in a full value vector.
    int evaluate(int v, const std::vector<int>& values) const;

    // Cn(F) membership: endogenous with a constant table.
    bool constant(int v) const;

    // Key of the ∼-class: En∖Cn with dummy-free parents and pruned tables.
    const std::vector<int>& canonical_key() const { return canon_; }
    std::size_t canonical_hash() const { return canon_hash_; }
    bool canonical() const { return is_canonical_; }

    std::size_t hash() const { return hash_; }

    bool operator==(const FunctionSystem& o) const { return hash_ == o.hash_ && mech_ == o.mech_; }
    std::strong_ordering operator<=>(const FunctionSystem& o) const { return mech_ <=> o.mech_; }

private:
    SignaturePtr sig_;
    std::vector<std::optional<Mechanism>> mech_;
    std::vector<int> topo_;
    bool recursive_ = true;
    std::size_t hash_ = 0;
    std::vector<int> canon_;
    std::size_t canon_hash_ = 0;
    bool is_canonical_ = false;
};

using LawPtr = std::shared_ptr<const FunctionSystem>;

struct LawPtrLess {
    bool operator()(const LawPtr& a, const LawPtr& b) const { return *a < *b; }
};

// Dense table index of a parent-value tuple.
std::size_t table_index(const Signature& sig, const std::vector<int>& parents,
                        const std::vector<int>& parent_values);
std::size_t table_size(const Signature& sig, const std::vector<int>& parents);

// Build a mechanism by evaluating fn on every parent-value tuple (value indices).
Mechanism tabulate(const Signature& sig, int v, std::vector<int> parents,
                   const std::function<int(const std::vector<int>&)>& fn);

bool is_compatible(const Assignment& s, const FunctionSystem& f);

// Assignments compatible with a recursive system: free on Ex(F), propagated on En(F).
std::vector<Assignment> compatible_assignments(const FunctionSystem& f);

std::vector<int> dummy_parents(const FunctionSystem& f, int v);

struct CanonicalLaw {
    FunctionSystem law;
    bool operator==(const CanonicalLaw& o) const { return law == o.law; }
};

CanonicalLaw canonicalize(const FunctionSystem& f);
bool similar(const FunctionSystem& f, const FunctionSystem& g);

// F restricted to En(F) minus the given variables.
FunctionSystem restrict_law(const FunctionSystem& f, const std::vector<int>& removed);

// Every system over σ, optionally only the acyclic ones. Throws BudgetExceeded
// when the count would exceed the budget.
std::vector<FunctionSystem> enumerate_function_systems(const SignaturePtr& sig, bool recursive_only,
                                                       std::size_t budget = Limits::defaults().nodes);

// One canonical representative per ∼-class of recursive systems.
std::vector<FunctionSystem> enumerate_similarity_representatives(
    const SignaturePtr& sig, std::size_t budget = Limits::defaults().nodes);

std::string format_law(const FunctionSystem& f);

}  // namespace ctlab
