#include "ctlab/decision.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include "ctlab/error.hpp"

namespace ctlab {

namespace {

using Sink = std::function<bool(const Formula&)>;

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t add(std::uint64_t a, std::uint64_t b) { return a > kMax - b ? kMax : a + b; }
std::uint64_t mul(std::uint64_t a, std::uint64_t b)
{
    if (a == 0 || b == 0)
        return 0;
    return a > kMax / b ? kMax : a * b;
}

Formula rebuild(Kind k, const Formula& a, const Formula& b)
{
    return k == Kind::And ? conj(a, b) : tensor(a, b);
}

Formula star_dep(const Formula& f, const Signature& sig)
{
    const auto& xs = f.determinants();
    std::vector<Formula> ds;
    std::vector<int> tuple(xs.size(), 0);
    while (true) {
        std::vector<Equality> eqs;
        for (std::size_t i = 0; i < xs.size(); ++i)
            eqs.push_back(Equality{xs[i], tuple[i]});
        ds.push_back(conj(equalities_formula(eqs), con(f.var())));
        std::size_t i = xs.size();
        while (i > 0) {
            --i;
            if (++tuple[i] < sig.range_size(xs[i]))
                break;
            tuple[i] = 0;
            if (i == 0)
                return tensor_all(ds);
        }
    }
}

// Continuation-passing enumeration, so products are never materialized.
bool generate(const Formula& f, const Signature* sig, const Sink& k)
{
    if (f.is_co())
        return k(f);
    switch (f.kind()) {
    case Kind::And:
    case Kind::Tensor:
        return generate(f.lhs(), sig, [&](const Formula& a) {
            return generate(f.rhs(), sig, [&](const Formula& b) { return k(rebuild(f.kind(), a, b)); });
        });
    case Kind::Global:
        return generate(f.lhs(), sig, k) && generate(f.rhs(), sig, k);
    case Kind::Cf:
        return generate(f.operand(), sig, [&](const Formula& a) { return k(cf(f.antecedent(), a)); });
    case Kind::Dep:
        if (!f.determinants().empty())
            return generate(star_dep(f, *sig), sig, k);
        for (int y = 0; y < sig->range_size(f.var()); ++y)
            if (!k(eq(f.var(), y)))
                return false;
        return true;
    default:
        return k(f);
    }
}

void check_language(const Formula& f, bool allow_mixed)
{
    if (!allow_mixed && classify(f) == Language::NONE)
        throw InvalidArgument("formula mixes dependence atoms and global disjunction");
}

bool run(const Formula& phi, const Signature* sig, const Sink& fn, std::size_t budget)
{
    std::size_t n = 0;
    return generate(phi, sig, [&](const Formula& d) {
        if (++n > budget)
            throw BudgetExceeded("more than " + std::to_string(budget) + " normal disjuncts");
        return fn(d);
    });
}

DisjunctSet collect(const Formula& phi, const Signature* sig, std::size_t budget)
{
    DisjunctSet out;
    std::unordered_set<Formula, FormulaHash> seen;
    run(
        phi, sig,
        [&](const Formula& d) {
            if (seen.insert(d).second)
                out.push_back(d);
            return true;
        },
        budget);
    return out;
}

// Dynamic bitset over the members of Sem_σ/≈.
struct Bits {
    std::vector<std::uint64_t> w;
    explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
    void set(std::size_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
    bool none() const
    {
        for (auto x : w)
            if (x)
                return false;
        return true;
    }
    bool subset_of(const Bits& o) const
    {
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] & ~o.w[i])
                return false;
        return true;
    }
    Bits operator&(const Bits& o) const
    {
        Bits r = *this;
        for (std::size_t i = 0; i < w.size(); ++i)
            r.w[i] &= o.w[i];
        return r;
    }
    bool operator<(const Bits& o) const { return w < o.w; }
};

struct Sweep {
    const SignaturePtr& sig;
    SatContext& ctx;
    const std::vector<Member>& universe;
    std::vector<Bits> classes;  // one mask per ∼-class

    Sweep(const SignaturePtr& s, SatContext& c) : sig(s), ctx(c), universe(c.universe(s))
    {
        std::map<std::vector<int>, std::size_t> ids;
        for (std::size_t i = 0; i < universe.size(); ++i) {
            auto [it, fresh] = ids.emplace(universe[i].law->canonical_key(), classes.size());
            if (fresh)
                classes.emplace_back(universe.size());
            classes[it->second].set(i);
        }
    }

    Bits mask(const Formula& f)
    {
        const auto flags = ctx.singletons(universe, f);
        Bits b(universe.size());
        for (std::size_t i = 0; i < flags.size(); ++i)
            if (flags[i])
                b.set(i);
        return b;
    }

    GeneralizedCausalTeam team(const Bits& m) const
    {
        std::vector<Member> ms;
        for (std::size_t i = 0; i < universe.size(); ++i)
            if (m.test(i))
                ms.push_back(universe[i]);
        return GeneralizedCausalTeam(sig, std::move(ms));
    }

    // Maximal singleton masks among the normal disjuncts of each formula.
    std::vector<Bits> cover(const std::vector<Formula>& fs, std::uint64_t& count)
    {
        std::set<Bits> masks;
        for (const auto& f : fs)
            for_each_disjunct(
                f, *sig,
                [&](const Formula& d) {
                    ++count;
                    masks.insert(mask(d));
                    return true;
                },
                ctx.allow_mixed(), ctx.limits().nodes);
        std::vector<Bits> all(masks.begin(), masks.end());
        std::vector<Bits> out;
        for (std::size_t i = 0; i < all.size(); ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < all.size() && !dominated; ++j)
                dominated = j != i && all[i].subset_of(all[j]);
            if (!dominated)
                out.push_back(all[i]);
        }
        return out;
    }

    static bool covered(const Bits& m, const std::vector<Bits>& cover)
    {
        if (m.none())
            return true;
        for (const auto& b : cover)
            if (m.subset_of(b))
                return true;
        return false;
    }

    EntailResult entails(const std::vector<Formula>& gamma, const std::vector<Formula>& psis, Semantics sem)
    {
        EntailResult r;
        const auto cov = cover(psis, r.psi_disjuncts);
        const Formula g = gamma.empty() ? top() : conj_all(gamma);
        r.holds = true;
        for_each_disjunct(
            g, *sig,
            [&](const Formula& d) {
                ++r.gamma_disjuncts;
                const Bits m = mask(d);
                if (sem == Semantics::generalized) {
                    if (!covered(m, cov)) {
                        r.holds = false;
                        r.counterexample = team(m);
                    }
                } else {
                    for (const auto& c : classes) {
                        const Bits mc = m & c;
                        if (!covered(mc, cov)) {
                            r.holds = false;
                            r.counterexample = team(mc);
                            break;
                        }
                    }
                }
                return r.holds;
            },
            ctx.allow_mixed(), ctx.limits().nodes);
        return r;
    }
};

}  // namespace

DisjunctSet resolutions(const Formula& phi, std::size_t budget)
{
    if (phi.has_dep())
        throw InvalidArgument("resolutions are defined for formulas without dependence atoms");
    // Without dependence atoms the signature is never consulted.
    return collect(phi, nullptr, budget);
}

Formula star_translate(const Formula& phi, const Signature& sig)
{
    if (!phi.has_dep())
        return phi;
    switch (phi.kind()) {
    case Kind::And:
    case Kind::Tensor:
        return rebuild(phi.kind(), star_translate(phi.lhs(), sig), star_translate(phi.rhs(), sig));
    case Kind::Global: return global(star_translate(phi.lhs(), sig), star_translate(phi.rhs(), sig));
    case Kind::Cf: return cf(phi.antecedent(), star_translate(phi.operand(), sig));
    case Kind::Dep: return phi.determinants().empty() ? phi : star_dep(phi, sig);
    default: return phi;
    }
}

DisjunctSet instantiations(const Formula& phi, const Signature& sig, std::size_t budget)
{
    if (phi.has_global())
        throw InvalidArgument("instantiations are defined for formulas without global disjunction");
    return collect(phi, &sig, budget);
}

bool for_each_disjunct(const Formula& phi, const Signature& sig, const std::function<bool(const Formula&)>& fn,
                       bool allow_mixed, std::size_t budget)
{
    check_language(phi, allow_mixed);
    return run(phi, &sig, fn, budget);
}

DisjunctSet normal_disjuncts(const Formula& phi, const Signature& sig, bool allow_mixed, std::size_t budget)
{
    check_language(phi, allow_mixed);
    return collect(phi, &sig, budget);
}

std::uint64_t count_disjuncts(const Formula& phi, const Signature& sig)
{
    if (phi.is_co())
        return 1;
    switch (phi.kind()) {
    case Kind::And:
    case Kind::Tensor: return mul(count_disjuncts(phi.lhs(), sig), count_disjuncts(phi.rhs(), sig));
    case Kind::Global: return add(count_disjuncts(phi.lhs(), sig), count_disjuncts(phi.rhs(), sig));
    case Kind::Cf: return count_disjuncts(phi.operand(), sig);
    case Kind::Dep: {
        std::uint64_t xs = 1;
        for (int x : phi.determinants())
            xs = mul(xs, static_cast<std::uint64_t>(sig.range_size(x)));
        std::uint64_t out = 1;
        for (std::uint64_t i = 0; i < xs && out != kMax; ++i)
            out = mul(out, static_cast<std::uint64_t>(sig.range_size(phi.var())));
        return out;
    }
    default: return 1;
    }
}

bool flat_entails(const std::vector<Formula>& gamma, const Formula& beta, const SignaturePtr& sig, SatContext& ctx)
{
    for (const auto& g : gamma)
        if (!g.is_co())
            throw InvalidArgument("flat entailment needs CO premises");
    if (!beta.is_co())
        throw InvalidArgument("flat entailment needs a CO conclusion");
    Sweep s(sig, ctx);
    return s.mask(gamma.empty() ? top() : conj_all(gamma)).subset_of(s.mask(beta));
}

EntailResult decide_entails(const std::vector<Formula>& gamma, const Formula& psi, const SignaturePtr& sig,
                            Semantics sem, SatContext& ctx)
{
    for (const auto& g : gamma)
        check_language(g, ctx.allow_mixed());
    check_language(psi, ctx.allow_mixed());
    Sweep s(sig, ctx);
    return s.entails(gamma, {psi}, sem);
}

EntailResult decide_valid(const Formula& psi, const SignaturePtr& sig, Semantics sem, SatContext& ctx)
{
    return decide_entails({}, psi, sig, sem, ctx);
}

std::string DisjunctionReport::surviving() const
{
    if (left && right)
        return "both";
    if (left)
        return "left";
    if (right)
        return "right";
    return "none";
}

DisjunctionReport check_disjunction_property(const std::vector<Formula>& delta, const Formula& phi,
                                             const Formula& psi, const SignaturePtr& sig, Semantics sem,
                                             SatContext& ctx)
{
    for (const auto& d : delta)
        if (!d.is_co())
            throw InvalidArgument("the disjunction property concerns CO premises");
    Sweep s(sig, ctx);
    DisjunctionReport r;
    r.premise = s.entails(delta, {phi, psi}, sem).holds;
    r.left = s.entails(delta, {phi}, sem).holds;
    r.right = s.entails(delta, {psi}, sem).holds;
    return r;
}

bool incompatible(const Formula& phi, const Formula& psi, const SignaturePtr& sig, SatContext& ctx)
{
    Sweep s(sig, ctx);
    const Bits a = s.mask(phi);
    const Bits b = s.mask(psi);
    for (const auto& c : s.classes)
        if (!(a & c).none() && !(b & c).none())
            return false;
    return true;
}

}  // namespace ctlab
