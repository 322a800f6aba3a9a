#include "ctlab/charform.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "ctlab/error.hpp"

namespace ctlab {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t add(std::uint64_t a, std::uint64_t b) { return a > kMax - b ? kMax : a + b; }
std::uint64_t mul(std::uint64_t a, std::uint64_t b)
{
    if (a == 0 || b == 0)
        return 0;
    return a > kMax / b ? kMax : a * b;
}

// Node count of a left-nested fold of n parts whose sizes sum to total; the
// empty conjunction is ⊤ (5 nodes), the empty disjunction ⊥ (4 nodes).
std::uint64_t fold_size(std::uint64_t n, std::uint64_t total, bool conjunction)
{
    if (n == 0)
        return conjunction ? 5 : 4;
    return add(total, n - 1);
}

std::uint64_t range_product(const Signature& sig, const std::vector<int>& vars)
{
    std::uint64_t n = 1;
    for (int v : vars)
        n = mul(n, static_cast<std::uint64_t>(sig.range_size(v)));
    return n;
}

std::vector<int> others(const Signature& sig, std::initializer_list<int> skip)
{
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(sig.size()); ++v)
        if (std::find(skip.begin(), skip.end(), v) == skip.end())
            out.push_back(v);
    return out;
}

// Calls fn with every value tuple of vars, first variable most significant.
template <class Fn>
void for_each_tuple(const Signature& sig, const std::vector<int>& vars, Fn&& fn)
{
    std::vector<int> tuple(vars.size(), 0);
    while (true) {
        fn(tuple);
        std::size_t i = vars.size();
        while (i > 0) {
            --i;
            if (++tuple[i] < sig.range_size(vars[i]))
                break;
            tuple[i] = 0;
            if (i == 0)
                return;
        }
        if (vars.empty())
            return;
    }
}

// Antecedent assigning vars the tuple plus extra equalities, in signature order.
InterventionSpec spec_of(const std::vector<int>& vars, const std::vector<int>& tuple,
                         std::vector<Equality> extra = {})
{
    std::vector<Equality> eqs = std::move(extra);
    for (std::size_t i = 0; i < vars.size(); ++i)
        eqs.push_back(Equality{vars[i], tuple[i]});
    std::sort(eqs.begin(), eqs.end());
    return InterventionSpec(std::move(eqs));
}

Formula description(const Assignment& s)
{
    std::vector<Formula> eqs;
    for (std::size_t v = 0; v < s.values.size(); ++v)
        eqs.push_back(eq(static_cast<int>(v), s.values[v]));
    return conj_all(eqs);
}

void check_budget(std::uint64_t estimate, const Limits& limits, const char* what)
{
    if (estimate > limits.nodes)
        throw BudgetExceeded(std::string(what) + " would have " + std::to_string(estimate) +
                             " nodes, over the budget of " + std::to_string(limits.nodes));
}

void check_var(const Signature& sig, int v)
{
    if (v < 0 || v >= static_cast<int>(sig.size()))
        throw InvalidArgument("variable index out of range");
}

bool uses_eta(const FunctionSystem& f, int v) { return f.endogenous(v) && !f.constant(v); }

std::uint64_t eta_size(const Signature& sig, int v)
{
    const std::uint64_t n = range_product(sig, others(sig, {v}));
    return fold_size(n, mul(n, 2), true);
}

std::uint64_t xi_var_size(const Signature& sig, int v)
{
    const std::uint64_t n = mul(range_product(sig, others(sig, {v})), static_cast<std::uint64_t>(sig.range_size(v)));
    return fold_size(n, mul(n, 5), true);
}

std::uint64_t description_size(const Signature& sig) { return 2 * sig.size() - 1; }

CharFormula finish(Formula f, std::string ctor, std::vector<std::pair<std::string, std::string>> params)
{
    return CharFormula{std::move(f), std::move(ctor), std::move(params)};
}

struct XiPlan {
    std::size_t k = 0;
    std::vector<Assignment> rows;
    std::vector<Assignment> complement;
    std::vector<std::pair<Assignment, const FunctionSystem*>> disjuncts;
    std::vector<FunctionSystem> laws;
};

XiPlan plan_xi(const GeneralizedCausalTeam& t, bool reduced, const Limits& limits)
{
    if (t.empty())
        throw InvalidArgument("the characteristic formula of non-inclusion needs a nonempty team");
    const auto& sig = t.signature();
    XiPlan p;
    p.k = quotient_cardinality(t) - 1;
    p.rows = t.rows();
    p.rows.erase(std::unique(p.rows.begin(), p.rows.end()), p.rows.end());
    for (auto& s : enumerate_assignments(*sig))
        if (!std::binary_search(p.rows.begin(), p.rows.end(), s))
            p.complement.push_back(std::move(s));
    p.laws = reduced ? enumerate_similarity_representatives(sig, limits.nodes)
                     : enumerate_function_systems(sig, true, limits.nodes);
    for (const auto& s : p.rows) {
        for (const auto& f : p.laws) {
            bool covered = false;
            for (const auto& m : t.members())
                if (m.row == s && similar(*m.law, f)) {
                    covered = true;
                    break;
                }
            if (!covered)
                p.disjuncts.emplace_back(s, &f);
        }
    }
    return p;
}

std::uint64_t xi_size(const XiPlan& p, const Signature& sig)
{
    std::uint64_t third = 0;
    std::map<const FunctionSystem*, std::uint64_t> phi;
    for (const auto& [s, f] : p.disjuncts) {
        auto it = phi.find(f);
        if (it == phi.end())
            it = phi.emplace(f, estimate_phi(*f)).first;
        third = add(third, add(1 + description_size(sig), it->second));
    }
    third = fold_size(p.disjuncts.size(), third, false);
    const std::uint64_t theta = estimate_theta(sig, p.complement.size());
    return add(add(add(estimate_chi_k(sig, p.k), theta), third), 2);
}

CharFormula build_xi_impl(const GeneralizedCausalTeam& t, bool reduced, const Limits& limits)
{
    const auto& sig = t.signature();
    XiPlan p = plan_xi(t, reduced, limits);
    check_budget(xi_size(p, *sig), limits, "Xi");
    std::map<const FunctionSystem*, Formula> phi;
    std::vector<Formula> third;
    for (const auto& [s, f] : p.disjuncts) {
        auto it = phi.find(f);
        if (it == phi.end())
            it = phi.emplace(f, build_phi(*f, limits).formula).first;
        third.push_back(conj(description(s), it->second));
    }
    Formula out = tensor_all({build_chi_k(sig, static_cast<long long>(p.k), limits).formula,
                              build_theta(p.complement, sig, limits).formula, tensor_all(third)});
    return finish(out, reduced ? "xi" : "xi_unreduced",
                  {{"k", std::to_string(p.k)},
                   {"rows", std::to_string(p.rows.size())},
                   {"laws", std::to_string(p.laws.size())},
                   {"disjuncts", std::to_string(p.disjuncts.size())}});
}

std::uint64_t unf_size(const std::vector<FunctionSystem>& reps)
{
    std::uint64_t total = 0;
    for (const auto& f : reps)
        total = add(total, estimate_phi(f));
    return fold_size(reps.size(), total, false);
}

std::uint64_t value_pairs(const Signature& sig, int v)
{
    const auto r = static_cast<std::uint64_t>(sig.range_size(v));
    return r * (r - 1);
}

}  // namespace

std::uint64_t estimate_phi(const FunctionSystem& f)
{
    const auto& sig = *f.signature();
    std::uint64_t total = 0;
    for (int v = 0; v < static_cast<int>(sig.size()); ++v)
        total = add(total, uses_eta(f, v) ? eta_size(sig, v) : xi_var_size(sig, v));
    return fold_size(sig.size(), total, true);
}

std::uint64_t estimate_theta(const Signature& sig, std::size_t rows)
{
    return fold_size(rows, mul(rows, description_size(sig)), false);
}

std::uint64_t estimate_mu(const Signature& sig)
{
    std::uint64_t total = 0;
    for (int v = 0; v < static_cast<int>(sig.size()); ++v) {
        const std::uint64_t n = range_product(sig, others(sig, {v}));
        total = add(total, fold_size(n, mul(n, 2), true));
    }
    return fold_size(sig.size(), total, true);
}

std::uint64_t estimate_chi_k(const Signature& sig, std::size_t k)
{
    const std::uint64_t chi = add(1 + fold_size(sig.size(), sig.size(), true), estimate_mu(sig));
    return fold_size(k, mul(k, chi), false);
}

std::uint64_t estimate_xi(const GeneralizedCausalTeam& t, const Limits& limits)
{
    return xi_size(plan_xi(t, true, limits), *t.signature());
}

std::uint64_t estimate_unf(const SignaturePtr& sig, const Limits& limits)
{
    return unf_size(enumerate_similarity_representatives(sig, limits.nodes));
}

std::uint64_t estimate_leadsto(const Signature& sig, int x, int y)
{
    check_var(sig, x);
    check_var(sig, y);
    const auto rest = others(sig, {x, y});
    const std::uint64_t pairs = mul(value_pairs(sig, x), value_pairs(sig, y));
    std::uint64_t clauses = 0;
    std::uint64_t total = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
        std::vector<int> z;
        for (std::size_t i = 0; i < rest.size(); ++i)
            if (mask >> i & 1u)
                z.push_back(rest[i]);
        const std::uint64_t n = mul(range_product(sig, z), pairs);
        clauses = add(clauses, n);
        total = add(total, mul(n, z.empty() ? 5 : 6));
    }
    return fold_size(clauses, total, false);
}

std::uint64_t estimate_direct_cause(const Signature& sig, int x, int y)
{
    check_var(sig, x);
    check_var(sig, y);
    const std::uint64_t n =
        mul(range_product(sig, others(sig, {x, y})), mul(value_pairs(sig, x), value_pairs(sig, y)));
    return fold_size(n, mul(n, 5), false);
}

std::uint64_t estimate_beta_en(const Signature& sig, int v)
{
    check_var(sig, v);
    std::uint64_t total = 0;
    for (int x : others(sig, {v}))
        total = add(total, estimate_direct_cause(sig, x, v));
    return fold_size(sig.size() - 1, total, false);
}

Formula build_eta(const FunctionSystem& f, int v)
{
    const auto& sig = *f.signature();
    check_var(sig, v);
    if (!f.endogenous(v))
        throw InvalidArgument(sig.name(v) + " is exogenous in the given law");
    const auto w = others(sig, {v});
    std::vector<Formula> clauses;
    std::vector<int> values(sig.size(), 0);
    for_each_tuple(sig, w, [&](const std::vector<int>& tuple) {
        for (std::size_t i = 0; i < w.size(); ++i)
            values[static_cast<std::size_t>(w[i])] = tuple[i];
        clauses.push_back(cf(spec_of(w, tuple), eq(v, f.evaluate(v, values))));
    });
    return conj_all(clauses);
}

Formula build_xi_var(const Signature& sig, int v)
{
    check_var(sig, v);
    const auto w = others(sig, {v});
    std::vector<Formula> clauses;
    for (int x = 0; x < sig.range_size(v); ++x)
        for_each_tuple(sig, w, [&](const std::vector<int>& tuple) {
            clauses.push_back(desugar_selective(eq(v, x), cf(spec_of(w, tuple), eq(v, x))));
        });
    return conj_all(clauses);
}

CharFormula build_phi(const FunctionSystem& f, const Limits& limits)
{
    if (!f.recursive())
        throw InvalidArgument("characteristic formulas are defined for recursive laws only");
    const auto& sig = *f.signature();
    check_budget(estimate_phi(f), limits, "Phi");
    std::vector<Formula> parts;
    for (int v = 0; v < static_cast<int>(sig.size()); ++v)
        parts.push_back(uses_eta(f, v) ? build_eta(f, v) : build_xi_var(sig, v));
    return finish(conj_all(parts), "phi", {{"law", format_law(f)}});
}

CharFormula build_theta(std::vector<Assignment> rows, const SignaturePtr& sig, const Limits& limits)
{
    for (const auto& s : rows)
        if (s.values.size() != sig->size() || !in_range(*sig, s))
            throw InvalidArgument("row outside the signature");
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    check_budget(estimate_theta(*sig, rows.size()), limits, "Theta");
    std::vector<Formula> ds;
    for (const auto& s : rows)
        ds.push_back(description(s));
    return finish(tensor_all(ds), "theta", {{"rows", std::to_string(rows.size())}});
}

CharFormula build_mu(const SignaturePtr& sig, const Limits& limits)
{
    check_budget(estimate_mu(*sig), limits, "mu");
    std::vector<Formula> parts;
    for (int v = 0; v < static_cast<int>(sig->size()); ++v) {
        const auto w = others(*sig, {v});
        std::vector<Formula> clauses;
        for_each_tuple(*sig, w, [&](const std::vector<int>& tuple) { clauses.push_back(cf(spec_of(w, tuple), con(v))); });
        parts.push_back(conj_all(clauses));
    }
    return finish(conj_all(parts), "mu", {});
}

CharFormula build_chi(const SignaturePtr& sig, const Limits& limits)
{
    Formula mu = build_mu(sig, limits).formula;
    std::vector<Formula> cons;
    for (int v = 0; v < static_cast<int>(sig->size()); ++v)
        cons.push_back(con(v));
    return finish(conj(mu, conj_all(cons)), "chi", {});
}

CharFormula build_chi_k(const SignaturePtr& sig, long long k, const Limits& limits)
{
    if (k < 0)
        throw InvalidArgument("chi_k needs k >= 0");
    check_budget(estimate_chi_k(*sig, static_cast<std::size_t>(k)), limits, "chi_k");
    Formula f = k == 0 ? bottom() : build_chi(sig, limits).formula;
    return finish(tensor_all(std::vector<Formula>(static_cast<std::size_t>(k), f)), "chi_k",
                  {{"k", std::to_string(k)}});
}

CharFormula build_xi(const GeneralizedCausalTeam& t, const Limits& limits)
{
    return build_xi_impl(t, true, limits);
}

CharFormula build_xi(const CausalTeam& t, const Limits& limits)
{
    return build_xi_impl(to_generalized(t), true, limits);
}

CharFormula build_xi_unreduced(const GeneralizedCausalTeam& t, const Limits& limits)
{
    return build_xi_impl(t, false, limits);
}

CharFormula build_unf(const SignaturePtr& sig, const Limits& limits)
{
    const auto reps = enumerate_similarity_representatives(sig, limits.nodes);
    check_budget(unf_size(reps), limits, "Unf");
    std::vector<Formula> ds;
    for (const auto& f : reps)
        ds.push_back(build_phi(f, limits).formula);
    return finish(global_all(ds), "unf", {{"classes", std::to_string(reps.size())}});
}

CharFormula build_unf_tensor(const SignaturePtr& sig, const Limits& limits)
{
    const auto reps = enumerate_similarity_representatives(sig, limits.nodes);
    check_budget(unf_size(reps), limits, "Unf");
    std::vector<Formula> ds;
    for (const auto& f : reps)
        ds.push_back(build_phi(f, limits).formula);
    return finish(tensor_all(ds), "unf_tensor", {{"classes", std::to_string(reps.size())}});
}

CharFormula build_leadsto(int x, int y, const SignaturePtr& sig, const Limits& limits)
{
    check_var(*sig, x);
    check_var(*sig, y);
    if (x == y)
        throw InvalidArgument("causal influence needs two distinct variables");
    check_budget(estimate_leadsto(*sig, x, y), limits, "leadsto");
    const auto rest = others(*sig, {x, y});
    std::vector<Formula> ds;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
        std::vector<int> z;
        for (std::size_t i = 0; i < rest.size(); ++i)
            if (mask >> i & 1u)
                z.push_back(rest[i]);
        for_each_tuple(*sig, z, [&](const std::vector<int>& tuple) {
            for (int a = 0; a < sig->range_size(x); ++a)
                for (int b = 0; b < sig->range_size(x); ++b)
                    for (int c = 0; c < sig->range_size(y); ++c)
                        for (int d = 0; d < sig->range_size(y); ++d) {
                            if (a == b || c == d)
                                continue;
                            Formula body = conj(cf(InterventionSpec({{x, a}}), eq(y, c)),
                                                cf(InterventionSpec({{x, b}}), eq(y, d)));
                            ds.push_back(z.empty() ? body : cf(spec_of(z, tuple), body));
                        }
        });
    }
    return finish(tensor_all(ds), "leadsto", {{"X", sig->name(x)}, {"Y", sig->name(y)}});
}

namespace {

std::vector<Formula> direct_cause_disjuncts(int x, int y, const Signature& sig)
{
    const auto w = others(sig, {x, y});
    std::vector<Formula> ds;
    for_each_tuple(sig, w, [&](const std::vector<int>& tuple) {
        for (int a = 0; a < sig.range_size(x); ++a)
            for (int b = 0; b < sig.range_size(x); ++b)
                for (int c = 0; c < sig.range_size(y); ++c)
                    for (int d = 0; d < sig.range_size(y); ++d) {
                        if (a == b || c == d)
                            continue;
                        ds.push_back(conj(cf(spec_of(w, tuple, {{x, a}}), eq(y, c)),
                                          cf(spec_of(w, tuple, {{x, b}}), eq(y, d))));
                    }
    });
    return ds;
}

}  // namespace

CharFormula build_direct_cause(int x, int y, const SignaturePtr& sig, const Limits& limits)
{
    check_var(*sig, x);
    check_var(*sig, y);
    if (x == y)
        throw InvalidArgument("direct cause needs two distinct variables");
    check_budget(estimate_direct_cause(*sig, x, y), limits, "direct cause");
    return finish(tensor_all(direct_cause_disjuncts(x, y, *sig)), "direct_cause",
                  {{"X", sig->name(x)}, {"Y", sig->name(y)}});
}

CharFormula build_beta_en(int v, const SignaturePtr& sig, const Limits& limits)
{
    check_var(*sig, v);
    check_budget(estimate_beta_en(*sig, v), limits, "beta_En");
    std::vector<Formula> ds;
    for (int x : others(*sig, {v}))
        ds.push_back(tensor_all(direct_cause_disjuncts(x, v, *sig)));
    return finish(tensor_all(ds), "beta_en", {{"V", sig->name(v)}});
}

}  // namespace ctlab
