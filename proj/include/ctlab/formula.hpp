#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ctlab/intervention.hpp"

namespace ctlab {

enum class Kind : std::uint8_t { Eq, Neg, And, Tensor, Global, Dep, Cf };

// CO ⊆ COD ∩ COV; NONE when both dependence atoms and ∨∨ occur.
enum class Language : std::uint8_t { CO, COD, COV, NONE };

const char* language_name(Language l);

struct FormulaNode;

// Immutable, shareable formula handle with structural equality.
class Formula {
public:
    Formula() = default;

    bool valid() const { return node_ != nullptr; }
    Kind kind() const;
    int var() const;    // Eq variable, Dep target
    int value() const;  // Eq value
    const std::vector<int>& determinants() const;   // Dep
    const InterventionSpec& antecedent() const;     // Cf
    const Formula& operand() const;                 // Neg, Cf body
    const Formula& lhs() const;
    const Formula& rhs() const;

    Language language() const;
    bool has_dep() const;
    bool has_global() const;
    bool has_cf() const;
    bool is_co() const { return !has_dep() && !has_global(); }

    std::size_t hash() const;
    // Tree size (shared subtrees counted per occurrence), saturating.
    std::size_t size() const;

    bool operator==(const Formula& o) const;
    bool operator!=(const Formula& o) const { return !(*this == o); }

    const FormulaNode* node() const { return node_.get(); }

private:
    friend struct FormulaFactory;
    explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const FormulaNode> node_;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

struct FormulaNode {
    Kind kind = Kind::Eq;
    int var = -1;
    int value = -1;
    std::vector<int> determinants;
    InterventionSpec antecedent;
    Formula a;
    Formula b;
    std::size_t hash = 0;
    std::size_t size = 1;
    bool dep = false;
    bool global = false;
    bool cf = false;
};

Formula eq(int var, int value);
// Throws InvalidArgument unless the operand is CO.
Formula neg(const Formula& a);
Formula conj(const Formula& a, const Formula& b);
Formula tensor(const Formula& a, const Formula& b);
Formula global(const Formula& a, const Formula& b);
Formula dep(std::vector<int> determinants, int target);
Formula con(int target);
Formula cf(InterventionSpec antecedent, const Formula& body);

// α ⊃ φ := ¬α ∨ φ.
Formula desugar_selective(const Formula& antecedent, const Formula& body);

// ⊥ := X=x ∧ ¬(X=x) on the first variable and value; ⊤ := ¬⊥.
Formula bottom();
Formula top();
// Any X=x ∧ ¬(X=x).
bool is_bottom(const Formula& f);

// Left-nested folds. Empty conjunction is ⊤, empty disjunctions are ⊥.
Formula conj_all(const std::vector<Formula>& fs);
Formula tensor_all(const std::vector<Formula>& fs);
Formula global_all(const std::vector<Formula>& fs);

// X1=x1 ∧ ... ∧ Xn=xn as a formula; the antecedent must be nonempty.
Formula equalities_formula(const std::vector<Equality>& eqs);

// Operands of a maximal chain of the given binary connective.
std::vector<Formula> flatten(const Formula& f, Kind k);

Language classify(const Formula& f);

std::size_t count_occurrences(const Formula& f, const Formula& theta);
// φ(ψ/[θ,k]): replace the k-th (1-based, pre-order) occurrence of θ.
Formula replace_occurrence(const Formula& f, const Formula& theta, std::size_t k, const Formula& psi);

// Checks variables and values against a signature.
void validate(const Formula& f, const Signature& sig);

}  // namespace ctlab
