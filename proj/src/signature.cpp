#include "ctlab/signature.hpp"

#include <limits>
#include <sstream>
#include <unordered_set>

#include "ctlab/error.hpp"

namespace ctlab {

Signature::Signature(std::vector<Variable> vars) : vars_(std::move(vars))
{
    if (vars_.empty())
        throw InvalidArgument("signature needs at least one variable");
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto& v = vars_[i];
        if (v.name.empty())
            throw InvalidArgument("empty variable name");
        if (v.range.empty())
            throw InvalidArgument("variable " + v.name + " has an empty range");
        std::unordered_set<std::string> seen;
        for (const auto& tok : v.range)
            if (!seen.insert(tok).second)
                throw InvalidArgument("duplicate value '" + tok + "' in range of " + v.name);
        if (!index_.emplace(v.name, static_cast<int>(i)).second)
            throw InvalidArgument("duplicate variable " + v.name);
    }
}

std::optional<int> Signature::find(std::string_view name) const
{
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<int> Signature::find_value(int v, std::string_view token) const
{
    const auto& r = variable(v).range;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] == token)
            return static_cast<int>(i);
    return std::nullopt;
}

int Signature::index_of(std::string_view name) const
{
    if (auto v = find(name))
        return *v;
    throw ParseError("unknown variable '" + std::string(name) + "'");
}

int Signature::value_index(int v, std::string_view token) const
{
    if (auto x = find_value(v, token))
        return *x;
    throw ParseError("value '" + std::string(token) + "' is not in the range of " + name(v));
}

std::uint64_t Signature::assignment_count() const
{
    std::uint64_t n = 1;
    for (const auto& v : vars_) {
        auto r = static_cast<std::uint64_t>(v.range.size());
        if (n > std::numeric_limits<std::uint64_t>::max() / r)
            return std::numeric_limits<std::uint64_t>::max();
        n *= r;
    }
    return n;
}

bool Signature::operator==(const Signature& o) const
{
    if (vars_.size() != o.vars_.size())
        return false;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name != o.vars_[i].name || vars_[i].range != o.vars_[i].range)
            return false;
    return true;
}

SignaturePtr make_signature(std::vector<Signature::Variable> vars)
{
    return std::make_shared<const Signature>(std::move(vars));
}

bool same_signature(const SignaturePtr& a, const SignaturePtr& b)
{
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return *a == *b;
}

void require_same_signature(const SignaturePtr& a, const SignaturePtr& b)
{
    if (!same_signature(a, b))
        throw SignatureMismatch("objects are over different signatures");
}

std::size_t AssignmentHash::operator()(const Assignment& a) const noexcept
{
    std::size_t h = a.values.size();
    for (int v : a.values)
        h = hash_combine(h, static_cast<std::size_t>(v));
    return h;
}

std::vector<Assignment> enumerate_assignments(const Signature& sig)
{
    std::vector<Assignment> out;
    const int n = static_cast<int>(sig.size());
    Assignment cur{std::vector<int>(static_cast<std::size_t>(n), 0)};
    for (;;) {
        out.push_back(cur);
        int i = n - 1;
        while (i >= 0) {
            auto& slot = cur.values[static_cast<std::size_t>(i)];
            if (++slot < sig.range_size(i))
                break;
            slot = 0;
            --i;
        }
        if (i < 0)
            break;
    }
    return out;
}

std::uint64_t assignment_code(const Signature& sig, const Assignment& s)
{
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < sig.size(); ++i)
        code = code * static_cast<std::uint64_t>(sig.range_size(static_cast<int>(i))) +
               static_cast<std::uint64_t>(s.values[i]);
    return code;
}

bool in_range(const Signature& sig, const Assignment& s)
{
    if (s.values.size() != sig.size())
        return false;
    for (std::size_t i = 0; i < sig.size(); ++i)
        if (s.values[i] < 0 || s.values[i] >= sig.range_size(static_cast<int>(i)))
            return false;
    return true;
}

std::string format_assignment(const Signature& sig, const Assignment& s)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (i)
            os << ", ";
        os << sig.name(static_cast<int>(i)) << '=' << sig.value_name(static_cast<int>(i), s.values[i]);
    }
    os << ')';
    return os.str();
}

}  // namespace ctlab
