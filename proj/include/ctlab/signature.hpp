#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ctlab {

// Variables and value tokens are interned: a variable is its position in the
// signature, a value is its position in the variable's range.
class Signature {
public:
    struct Variable {
        std::string name;
        std::vector<std::string> range;
    };

    explicit Signature(std::vector<Variable> vars);

    std::size_t size() const { return vars_.size(); }
    const Variable& variable(int v) const { return vars_.at(static_cast<std::size_t>(v)); }
    const std::vector<Variable>& variables() const { return vars_; }
    const std::string& name(int v) const { return variable(v).name; }
    int range_size(int v) const { return static_cast<int>(variable(v).range.size()); }
    const std::string& value_name(int v, int value) const
    {
        return variable(v).range.at(static_cast<std::size_t>(value));
    }

    std::optional<int> find(std::string_view name) const;
    std::optional<int> find_value(int v, std::string_view token) const;

    // Throw ParseError on unknown names/tokens.
    int index_of(std::string_view name) const;
    int value_index(int v, std::string_view token) const;

    // |A_σ|, saturating at UINT64_MAX.
    std::uint64_t assignment_count() const;

    bool operator==(const Signature& o) const;

private:
    std::vector<Variable> vars_;
    std::unordered_map<std::string, int> index_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

SignaturePtr make_signature(std::vector<Signature::Variable> vars);

// Same object or structurally equal.
bool same_signature(const SignaturePtr& a, const SignaturePtr& b);
void require_same_signature(const SignaturePtr& a, const SignaturePtr& b);

struct Assignment {
    std::vector<int> values;

    int operator[](int v) const { return values[static_cast<std::size_t>(v)]; }
    auto operator<=>(const Assignment&) const = default;
    bool operator==(const Assignment&) const = default;
};

struct AssignmentHash {
    std::size_t operator()(const Assignment& a) const noexcept;
};

// All assignments, first variable most significant.
std::vector<Assignment> enumerate_assignments(const Signature& sig);

// Dense index of an assignment in enumerate_assignments order.
std::uint64_t assignment_code(const Signature& sig, const Assignment& s);

bool in_range(const Signature& sig, const Assignment& s);

std::string format_assignment(const Signature& sig, const Assignment& s);

inline std::size_t hash_combine(std::size_t seed, std::size_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace ctlab
