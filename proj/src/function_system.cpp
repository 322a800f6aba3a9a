#include "ctlab/function_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ctlab/error.hpp"

namespace ctlab {

namespace {

std::vector<std::size_t> strides(const Signature& sig, const std::vector<int>& parents)
{
    std::vector<std::size_t> st(parents.size(), 1);
    for (std::size_t j = parents.size(); j-- > 1;)
        st[j - 1] = st[j] * static_cast<std::size_t>(sig.range_size(parents[j]));
    return st;
}

bool parent_is_dummy(const Signature& sig, const Mechanism& m, std::size_t j)
{
    const auto r = static_cast<std::size_t>(sig.range_size(m.parents[j]));
    if (r < 2)
        return true;
    const std::size_t stride = strides(sig, m.parents)[j];
    for (std::size_t idx = 0; idx < m.table.size(); ++idx) {
        if ((idx / stride) % r != 0)
            continue;
        for (std::size_t d = 1; d < r; ++d)
            if (m.table[idx + d * stride] != m.table[idx])
                return false;
    }
    return true;
}

bool table_constant(const Mechanism& m)
{
    return std::all_of(m.table.begin(), m.table.end(), [&](int x) { return x == m.table.front(); });
}

// Drop the parents at the marked positions; their value is irrelevant so the
// table is read with those digits at zero.
Mechanism prune(const Signature& sig, const Mechanism& m, const std::vector<bool>& drop)
{
    Mechanism out;
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < m.parents.size(); ++j)
        if (!drop[j]) {
            keep.push_back(j);
            out.parents.push_back(m.parents[j]);
        }
    const auto old_st = strides(sig, m.parents);
    const std::size_t n = table_size(sig, out.parents);
    out.table.resize(n);
    std::vector<int> digits(keep.size(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t old = 0;
        for (std::size_t i = 0; i < keep.size(); ++i)
            old += static_cast<std::size_t>(digits[i]) * old_st[keep[i]];
        out.table[k] = m.table[old];
        for (std::size_t i = keep.size(); i-- > 0;) {
            if (++digits[i] < sig.range_size(out.parents[i]))
                break;
            digits[i] = 0;
        }
    }
    return out;
}

std::optional<Mechanism> canonical_mechanism(const Signature& sig, const Mechanism& m)
{
    if (table_constant(m))
        return std::nullopt;
    std::vector<bool> drop(m.parents.size());
    for (std::size_t j = 0; j < m.parents.size(); ++j)
        drop[j] = parent_is_dummy(sig, m, j);
    return prune(sig, m, drop);
}

bool acyclic(std::size_t n, const std::vector<std::optional<Mechanism>>& mech, std::vector<int>* order)
{
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> children(n);
    for (std::size_t v = 0; v < n; ++v)
        if (mech[v])
            for (int p : mech[v]->parents) {
                children[static_cast<std::size_t>(p)].push_back(static_cast<int>(v));
                ++indeg[v];
            }
    std::vector<int> out;
    out.reserve(n);
    // Smallest ready variable first keeps the order deterministic.
    std::vector<int> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0)
            ready.push_back(static_cast<int>(v));
    while (!ready.empty()) {
        auto it = std::min_element(ready.begin(), ready.end());
        int v = *it;
        ready.erase(it);
        out.push_back(v);
        for (int c : children[static_cast<std::size_t>(v)])
            if (--indeg[static_cast<std::size_t>(c)] == 0)
                ready.push_back(c);
    }
    if (out.size() != n)
        return false;
    if (order)
        *order = std::move(out);
    return true;
}

std::size_t hash_ints(std::size_t seed, const std::vector<int>& xs)
{
    for (int x : xs)
        seed = hash_combine(seed, static_cast<std::size_t>(x + 1));
    return seed;
}

long double table_count(const Signature& sig, int v, const std::vector<int>& parents)
{
    return std::pow(static_cast<long double>(sig.range_size(v)),
                    static_cast<long double>(table_size(sig, parents)));
}

std::vector<int> parents_from_mask(int v, std::size_t n, unsigned mask)
{
    std::vector<int> ps;
    for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1U)
            if (static_cast<int>(i) != v)
                ps.push_back(static_cast<int>(i));
    return ps;
}

// Calls fn on every table of Ran(V)^{Ran(PA)}, in mixed-radix order.
template <class Fn>
void for_each_table(const Signature& sig, int v, const std::vector<int>& parents, Fn&& fn)
{
    const std::size_t n = table_size(sig, parents);
    const int r = sig.range_size(v);
    std::vector<int> t(n, 0);
    for (;;) {
        fn(t);
        std::size_t i = n;
        while (i-- > 0) {
            if (++t[i] < r)
                break;
            t[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1))
            break;
    }
}

std::vector<FunctionSystem> product(const SignaturePtr& sig,
                                    const std::vector<std::vector<std::optional<Mechanism>>>& options,
                                    bool recursive_only)
{
    std::vector<FunctionSystem> out;
    const std::size_t n = options.size();
    std::vector<std::size_t> pick(n, 0);
    std::vector<std::optional<Mechanism>> cur(n);
    for (;;) {
        for (std::size_t i = 0; i < n; ++i)
            cur[i] = options[i][pick[i]];
        if (!recursive_only || acyclic(n, cur, nullptr))
            out.emplace_back(sig, cur, true);
        std::size_t i = n;
        while (i-- > 0) {
            if (++pick[i] < options[i].size())
                break;
            pick[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1))
            break;
    }
    return out;
}

void check_budget(const std::vector<std::vector<std::optional<Mechanism>>>& options, std::size_t budget)
{
    long double total = 1;
    for (const auto& o : options)
        total *= static_cast<long double>(o.size());
    if (total > static_cast<long double>(budget))
        throw BudgetExceeded("function-system enumeration would produce more than " + std::to_string(budget) +
                             " systems");
}

long double option_count(const Signature& sig, int v)
{
    const std::size_t n = sig.size();
    long double c = 1;
    for (unsigned mask = 0; mask < (1U << n); ++mask) {
        if ((mask >> v) & 1U)
            continue;
        c += table_count(sig, v, parents_from_mask(v, n, mask));
    }
    return c;
}

}  // namespace

std::size_t table_size(const Signature& sig, const std::vector<int>& parents)
{
    std::size_t n = 1;
    for (int p : parents)
        n *= static_cast<std::size_t>(sig.range_size(p));
    return n;
}

std::size_t table_index(const Signature& sig, const std::vector<int>& parents,
                        const std::vector<int>& parent_values)
{
    std::size_t idx = 0;
    for (std::size_t j = 0; j < parents.size(); ++j)
        idx = idx * static_cast<std::size_t>(sig.range_size(parents[j])) +
              static_cast<std::size_t>(parent_values[j]);
    return idx;
}

Mechanism tabulate(const Signature& sig, int v, std::vector<int> parents,
                   const std::function<int(const std::vector<int>&)>& fn)
{
    std::sort(parents.begin(), parents.end());
    Mechanism m;
    m.parents = parents;
    const std::size_t n = table_size(sig, parents);
    m.table.resize(n);
    std::vector<int> digits(parents.size(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        int out = fn(digits);
        if (out < 0 || out >= sig.range_size(v))
            throw InvalidArgument("tabulated value out of range for " + sig.name(v));
        m.table[k] = out;
        for (std::size_t i = parents.size(); i-- > 0;) {
            if (++digits[i] < sig.range_size(parents[i]))
                break;
            digits[i] = 0;
        }
    }
    return m;
}

FunctionSystem::FunctionSystem(SignaturePtr sig, std::vector<std::optional<Mechanism>> mechanisms,
                               bool allow_cyclic)
    : sig_(std::move(sig)), mech_(std::move(mechanisms))
{
    if (!sig_)
        throw InvalidArgument("function system without signature");
    const std::size_t n = sig_->size();
    if (mech_.size() != n)
        throw InvalidArgument("function system must have one slot per variable");
    for (std::size_t v = 0; v < n; ++v) {
        if (!mech_[v])
            continue;
        const auto& m = *mech_[v];
        for (std::size_t j = 0; j < m.parents.size(); ++j) {
            int p = m.parents[j];
            if (p < 0 || static_cast<std::size_t>(p) >= n)
                throw InvalidArgument("parent index out of range");
            if (static_cast<std::size_t>(p) == v)
                throw InvalidArgument("variable " + sig_->name(static_cast<int>(v)) + " is its own parent");
            if (j > 0 && m.parents[j - 1] >= p)
                throw InvalidArgument("parents must be distinct and in signature order");
        }
        if (m.table.size() != table_size(*sig_, m.parents))
            throw InvalidArgument("table of " + sig_->name(static_cast<int>(v)) +
                                  " does not cover every parent tuple exactly once");
        for (int x : m.table)
            if (x < 0 || x >= sig_->range_size(static_cast<int>(v)))
                throw InvalidArgument("table value out of range for " + sig_->name(static_cast<int>(v)));
    }
    recursive_ = acyclic(n, mech_, &topo_);
    if (!recursive_ && !allow_cyclic)
        throw InvalidArgument("function system is not recursive");

    hash_ = n;
    canon_hash_ = n;
    is_canonical_ = true;
    for (std::size_t v = 0; v < n; ++v) {
        if (!mech_[v]) {
            hash_ = hash_combine(hash_, 0);
            canon_.push_back(-1);
            continue;
        }
        const auto& m = *mech_[v];
        hash_ = hash_combine(hash_, m.parents.size() + 1);
        hash_ = hash_ints(hash_ints(hash_, m.parents), m.table);
        auto c = canonical_mechanism(*sig_, m);
        if (!c) {
            canon_.push_back(-1);
            is_canonical_ = false;
            continue;
        }
        if (c->parents != m.parents)
            is_canonical_ = false;
        canon_.push_back(static_cast<int>(c->parents.size()));
        canon_.insert(canon_.end(), c->parents.begin(), c->parents.end());
        canon_.insert(canon_.end(), c->table.begin(), c->table.end());
    }
    canon_hash_ = hash_ints(canon_hash_, canon_);
}

FunctionSystem FunctionSystem::all_exogenous(SignaturePtr sig)
{
    const std::size_t n = sig->size();
    return FunctionSystem(std::move(sig), std::vector<std::optional<Mechanism>>(n));
}

const Mechanism& FunctionSystem::mechanism(int v) const
{
    const auto& m = slot(v);
    if (!m)
        throw InvalidArgument("variable " + sig_->name(v) + " is exogenous");
    return *m;
}

std::vector<int> FunctionSystem::endogenous_variables() const
{
    std::vector<int> out;
    for (std::size_t v = 0; v < mech_.size(); ++v)
        if (mech_[v])
            out.push_back(static_cast<int>(v));
    return out;
}

const std::vector<int>& FunctionSystem::topological_order() const
{
    if (!recursive_)
        throw InvalidArgument("topological order requested for a cyclic system");
    return topo_;
}

int FunctionSystem::evaluate(int v, const std::vector<int>& values) const
{
    const auto& m = mechanism(v);
    std::size_t idx = 0;
    for (int p : m.parents)
        idx = idx * static_cast<std::size_t>(sig_->range_size(p)) +
              static_cast<std::size_t>(values[static_cast<std::size_t>(p)]);
    return m.table[idx];
}

bool FunctionSystem::constant(int v) const
{
    const auto& m = slot(v);
    return m && table_constant(*m);
}

bool is_compatible(const Assignment& s, const FunctionSystem& f)
{
    if (s.values.size() != f.size())
        throw SignatureMismatch("assignment and function system have different signatures");
    for (std::size_t v = 0; v < f.size(); ++v)
        if (f.endogenous(static_cast<int>(v)) && f.evaluate(static_cast<int>(v), s.values) != s.values[v])
            return false;
    return true;
}

std::vector<Assignment> compatible_assignments(const FunctionSystem& f)
{
    const auto& sig = *f.signature();
    const auto& order = f.topological_order();
    std::vector<int> exo;
    for (std::size_t v = 0; v < f.size(); ++v)
        if (!f.endogenous(static_cast<int>(v)))
            exo.push_back(static_cast<int>(v));
    std::vector<Assignment> out;
    Assignment cur{std::vector<int>(f.size(), 0)};
    for (;;) {
        for (int v : order)
            if (f.endogenous(v))
                cur.values[static_cast<std::size_t>(v)] = f.evaluate(v, cur.values);
        out.push_back(cur);
        std::size_t i = exo.size();
        while (i-- > 0) {
            auto& slot = cur.values[static_cast<std::size_t>(exo[i])];
            if (++slot < sig.range_size(exo[i]))
                break;
            slot = 0;
        }
        if (i == static_cast<std::size_t>(-1))
            break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> dummy_parents(const FunctionSystem& f, int v)
{
    const auto& m = f.mechanism(v);
    std::vector<int> out;
    for (std::size_t j = 0; j < m.parents.size(); ++j)
        if (parent_is_dummy(*f.signature(), m, j))
            out.push_back(m.parents[j]);
    return out;
}

CanonicalLaw canonicalize(const FunctionSystem& f)
{
    std::vector<std::optional<Mechanism>> mech(f.size());
    for (std::size_t v = 0; v < f.size(); ++v)
        if (const auto& m = f.slot(static_cast<int>(v)))
            mech[v] = canonical_mechanism(*f.signature(), *m);
    return CanonicalLaw{FunctionSystem(f.signature(), std::move(mech), !f.recursive())};
}

bool similar(const FunctionSystem& f, const FunctionSystem& g)
{
    require_same_signature(f.signature(), g.signature());
    return f.canonical_hash() == g.canonical_hash() && f.canonical_key() == g.canonical_key();
}

FunctionSystem restrict_law(const FunctionSystem& f, const std::vector<int>& removed)
{
    auto mech = f.mechanisms();
    for (int v : removed)
        mech[static_cast<std::size_t>(v)].reset();
    return FunctionSystem(f.signature(), std::move(mech), !f.recursive());
}

std::vector<FunctionSystem> enumerate_function_systems(const SignaturePtr& sig, bool recursive_only,
                                                       std::size_t budget)
{
    const std::size_t n = sig->size();
    if (n > 16)
        throw BudgetExceeded("too many variables to enumerate function systems");
    long double total = 1;
    for (std::size_t v = 0; v < n; ++v)
        total *= option_count(*sig, static_cast<int>(v));
    if (total > static_cast<long double>(budget))
        throw BudgetExceeded("function-system enumeration would produce more than " + std::to_string(budget) +
                             " systems");
    std::vector<std::vector<std::optional<Mechanism>>> options(n);
    for (std::size_t v = 0; v < n; ++v) {
        const int vi = static_cast<int>(v);
        options[v].push_back(std::nullopt);
        for (unsigned mask = 0; mask < (1U << n); ++mask) {
            if ((mask >> v) & 1U)
                continue;
            auto ps = parents_from_mask(vi, n, mask);
            for_each_table(*sig, vi, ps, [&](const std::vector<int>& t) { options[v].push_back(Mechanism{ps, t}); });
        }
    }
    check_budget(options, budget);
    return product(sig, options, recursive_only);
}

std::vector<FunctionSystem> enumerate_similarity_representatives(const SignaturePtr& sig, std::size_t budget)
{
    const std::size_t n = sig->size();
    if (n > 16)
        throw BudgetExceeded("too many variables to enumerate function systems");
    long double total = 1;
    for (std::size_t v = 0; v < n; ++v)
        total *= option_count(*sig, static_cast<int>(v));
    // The raw count bounds the work of filtering tables below.
    if (total > static_cast<long double>(budget) * 64)
        throw BudgetExceeded("similarity-class enumeration exceeds the budget");
    std::vector<std::vector<std::optional<Mechanism>>> options(n);
    for (std::size_t v = 0; v < n; ++v) {
        const int vi = static_cast<int>(v);
        options[v].push_back(std::nullopt);
        for (unsigned mask = 1; mask < (1U << n); ++mask) {
            if ((mask >> v) & 1U)
                continue;
            auto ps = parents_from_mask(vi, n, mask);
            for_each_table(*sig, vi, ps, [&](const std::vector<int>& t) {
                Mechanism m{ps, t};
                if (table_constant(m))
                    return;
                for (std::size_t j = 0; j < ps.size(); ++j)
                    if (parent_is_dummy(*sig, m, j))
                        return;
                options[v].push_back(std::move(m));
            });
        }
    }
    check_budget(options, budget);
    return product(sig, options, true);
}

std::string format_law(const FunctionSystem& f)
{
    const auto& sig = *f.signature();
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (std::size_t v = 0; v < f.size(); ++v) {
        const auto& m = f.slot(static_cast<int>(v));
        if (!m)
            continue;
        if (!first)
            os << "; ";
        first = false;
        os << sig.name(static_cast<int>(v)) << '(';
        for (std::size_t j = 0; j < m->parents.size(); ++j)
            os << (j ? "," : "") << sig.name(m->parents[j]);
        os << ")=[";
        for (std::size_t k = 0; k < m->table.size(); ++k)
            os << (k ? "," : "") << sig.value_name(static_cast<int>(v), m->table[k]);
        os << ']';
    }
    os << '}';
    return os.str();
}

}  // namespace ctlab
