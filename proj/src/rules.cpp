#include <algorithm>
#include <set>

#include "ctlab/charform.hpp"
#include "ctlab/error.hpp"
#include "ctlab/syntax.hpp"
#include "rule_context.hpp"

namespace ctlab {

const Formula& RuleContext::leadsto(int x, int y)
{
    auto it = leadsto_.find({x, y});
    if (it == leadsto_.end())
        it = leadsto_.emplace(std::pair{x, y}, build_leadsto(x, y, sig, limits).formula).first;
    return it->second;
}

const std::vector<FunctionSystem>& RuleContext::representatives()
{
    if (!reps_)
        reps_ = enumerate_similarity_representatives(sig, limits.nodes);
    return *reps_;
}

const std::vector<Formula>& RuleContext::phis()
{
    if (!phis_) {
        std::vector<Formula> out;
        for (const auto& f : representatives())
            out.push_back(build_phi(f, limits).formula);
        phis_ = std::move(out);
    }
    return *phis_;
}

SatContext& RuleContext::sat()
{
    if (!sat_)
        sat_ = std::make_unique<SatContext>(limits);
    return *sat_;
}

std::optional<std::vector<Equality>> equalities_of(const Formula& f)
{
    std::vector<Equality> out;
    for (const auto& p : flatten(f, Kind::And)) {
        if (p.kind() != Kind::Eq)
            return std::nullopt;
        out.push_back(Equality{p.var(), p.value()});
    }
    return out;
}

bool RuleSchema::in(System s) const { return std::find(systems.begin(), systems.end(), s) != systems.end(); }

namespace {

using Check = std::optional<std::string>;
const Check ok = std::nullopt;

Check fail(std::string why) { return why; }

Check arity(const Derivation& d, std::size_t n)
{
    if (d.premises.size() != n)
        return "expects " + std::to_string(n) + " premise(s), got " + std::to_string(d.premises.size());
    return ok;
}

const Formula& P(const Derivation& d, std::size_t i) { return d.premises[i].conclusion; }

bool is(const Formula& f, Kind k) { return f.kind() == k; }

bool same_antecedent_eqs(const Formula& f, const InterventionSpec& a)
{
    auto e = equalities_of(f);
    return e && *e == a.equalities();
}

std::vector<Equality> without_vars(const std::vector<Equality>& eqs, const std::vector<int>& vars)
{
    std::vector<Equality> out;
    for (const auto& e : eqs)
        if (!std::binary_search(vars.begin(), vars.end(), e.var))
            out.push_back(e);
    return out;
}

std::vector<Equality> normalized(std::vector<Equality> eqs) { return InterventionSpec(std::move(eqs)).normalized(); }

int witness_var(const Derivation& d, const Signature& sig, const char* key)
{
    if (!d.witness.contains(key))
        throw ParseError(std::string("witness needs \"") + key + "\"");
    const auto& w = d.witness[key];
    if (!w.is_string())
        throw ParseError(std::string("witness \"") + key + "\" must be a variable name");
    return sig.index_of(w.get<std::string>());
}

// ----- CO --------------------------------------------------------------------

Check val_def(const Derivation& d, RuleContext& rc)
{
    if (auto e = arity(d, 0))
        return e;
    const auto ds = flatten(d.conclusion, Kind::Tensor);
    if (!is(ds[0], Kind::Eq))
        return fail("conclusion is not a disjunction of equalities");
    const int x = ds[0].var();
    std::vector<int> seen;
    for (const auto& f : ds) {
        if (!is(f, Kind::Eq) || f.var() != x)
            return fail("disjuncts must be equalities on one variable");
        seen.push_back(f.value());
    }
    std::sort(seen.begin(), seen.end());
    std::vector<int> all(static_cast<std::size_t>(rc.sig->range_size(x)));
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = static_cast<int>(i);
    if (seen != all)
        return fail("disjuncts must list every value of " + rc.sig->name(x) + " exactly once");
    return ok;
}

Check val_unq(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& p = P(d, 0);
    const auto& c = d.conclusion;
    if (!is(p, Kind::Eq) || !is(c, Kind::Neg) || !is(c.operand(), Kind::Eq))
        return fail("expects X=x above X≠x'");
    if (c.operand().var() != p.var())
        return fail("variables differ");
    if (c.operand().value() == p.value())
        return fail("side condition x≠x' fails");
    return ok;
}

Check and_i(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 2))
        return e;
    if (d.conclusion != conj(P(d, 0), P(d, 1)))
        return fail("conclusion is not the conjunction of the premises");
    return ok;
}

Check and_e(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& p = P(d, 0);
    if (!is(p, Kind::And))
        return fail("premise is not a conjunction");
    if (d.conclusion != p.lhs() && d.conclusion != p.rhs())
        return fail("conclusion is not a conjunct of the premise");
    return ok;
}

Check or_i(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& c = d.conclusion;
    if (!is(c, Kind::Tensor) || (c.lhs() != P(d, 0) && c.rhs() != P(d, 0)))
        return fail("conclusion is not a ∨ with the premise as a disjunct");
    return ok;
}

Check or_e(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 3))
        return e;
    if (!is(P(d, 0), Kind::Tensor))
        return fail("major premise is not a ∨");
    if (P(d, 1) != d.conclusion || P(d, 2) != d.conclusion)
        return fail("minor premises must both be the conclusion");
    if (!d.conclusion.is_co())
        return fail("α must be a CO formula");
    return ok;
}

std::vector<Discharge> or_e_dis(const Derivation& d, RuleContext&)
{
    return {{}, {{P(d, 0).lhs()}, false}, {{P(d, 0).rhs()}, false}};
}

Check neg_i(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    if (!is(d.conclusion, Kind::Neg))
        return fail("conclusion is not a negation");
    if (!is_bottom(P(d, 0)))
        return fail("premise is not ⊥");
    return ok;
}

std::vector<Discharge> neg_i_dis(const Derivation& d, RuleContext&) { return {{{d.conclusion.operand()}, false}}; }

Check neg_e(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 2))
        return e;
    const auto& n = P(d, 1);
    if (!is(n, Kind::Neg) || n.operand() != P(d, 0))
        return fail("second premise is not the negation of the first");
    return ok;
}

Check raa(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    if (!is_bottom(P(d, 0)))
        return fail("premise is not ⊥");
    if (!d.conclusion.is_co())
        return fail("α must be a CO formula");
    return ok;
}

std::vector<Discharge> raa_dis(const Derivation& d, RuleContext&) { return {{{neg(d.conclusion)}, false}}; }

Check cf_eff(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 0))
        return e;
    const auto& c = d.conclusion;
    if (!is(c, Kind::Cf) || !is(c.operand(), Kind::Eq))
        return fail("expects (X=x ∧ Y=y) □→ Y=y");
    const auto& eqs = c.antecedent().equalities();
    const Equality y{c.operand().var(), c.operand().value()};
    if (std::find(eqs.begin(), eqs.end(), y) == eqs.end())
        return fail("consequent is not among the antecedent's equalities");
    return ok;
}

Check cf_i(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 2))
        return e;
    const auto& c = d.conclusion;
    if (!is(c, Kind::Cf))
        return fail("conclusion is not a counterfactual");
    if (!same_antecedent_eqs(P(d, 0), c.antecedent()))
        return fail("first premise is not the antecedent's conjunction of equalities");
    if (P(d, 1) != c.operand())
        return fail("second premise is not the consequent");
    if (c.operand().has_cf())
        return fail("θ must be □→-free");
    return ok;
}

Check ex_falso(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 0))
        return e;
    if (!is(d.conclusion, Kind::Cf))
        return fail("conclusion is not a counterfactual");
    if (d.conclusion.antecedent().consistent())
        return fail("antecedent must contain X=x and X=x' with x≠x'");
    return ok;
}

Check cf_bot_e(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& p = P(d, 0);
    if (!is(p, Kind::Cf) || !is_bottom(p.operand()))
        return fail("premise is not X=x □→ ⊥");
    if (!p.antecedent().consistent())
        return fail("antecedent must be consistent");
    return ok;
}

Check rpl_a(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 3))
        return e;
    const auto& p = P(d, 0);
    const auto& c = d.conclusion;
    if (!is(p, Kind::Cf) || !is(c, Kind::Cf))
        return fail("expects counterfactuals");
    if (p.operand() != c.operand())
        return fail("consequents differ");
    if (!same_antecedent_eqs(P(d, 1), c.antecedent()))
        return fail("D1 must end in the new antecedent");
    if (!same_antecedent_eqs(P(d, 2), p.antecedent()))
        return fail("D2 must end in the old antecedent");
    return ok;
}

std::vector<Discharge> rpl_a_dis(const Derivation& d, RuleContext&)
{
    const auto a = equalities_formula(P(d, 0).antecedent().equalities());
    const auto b = equalities_formula(d.conclusion.antecedent().equalities());
    return {{}, {{a}, true}, {{b}, true}};
}

Check rpl_c(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 2))
        return e;
    const auto& p = P(d, 0);
    const auto& c = d.conclusion;
    if (!is(p, Kind::Cf) || !is(c, Kind::Cf))
        return fail("expects counterfactuals");
    if (p.antecedent() != c.antecedent())
        return fail("antecedents differ");
    if (P(d, 1) != c.operand())
        return fail("D must end in the new consequent");
    return ok;
}

std::vector<Discharge> rpl_c_dis(const Derivation& d, RuleContext&) { return {{}, {{P(d, 0).operand()}, true}}; }

Check cf_and_i(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 2))
        return e;
    const auto& a = P(d, 0);
    const auto& b = P(d, 1);
    if (!is(a, Kind::Cf) || !is(b, Kind::Cf) || a.antecedent() != b.antecedent())
        return fail("premises must be counterfactuals with one antecedent");
    if (d.conclusion != cf(a.antecedent(), conj(a.operand(), b.operand())))
        return fail("conclusion is not X=x □→ (φ ∧ ψ)");
    return ok;
}

Check neg_cf_e(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& p = P(d, 0);
    if (!is(p, Kind::Neg) || !is(p.operand(), Kind::Cf))
        return fail("premise is not ¬(X=x □→ α)");
    const auto& inner = p.operand();
    if (d.conclusion != cf(inner.antecedent(), neg(inner.operand())))
        return fail("conclusion is not X=x □→ ¬α");
    return ok;
}

Check cf_extr(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& p = P(d, 0);
    if (!is(p, Kind::Cf) || !is(p.operand(), Kind::Cf))
        return fail("premise is not X=x □→ (Y=y □→ φ)");
    if (!p.antecedent().consistent())
        return fail("outer antecedent must be consistent");
    const auto& inner = p.operand();
    const auto& c = d.conclusion;
    if (!is(c, Kind::Cf) || c.operand() != inner.operand())
        return fail("conclusion must keep the inner consequent");
    auto expect = without_vars(p.antecedent().equalities(), inner.antecedent().variables());
    for (const auto& e : inner.antecedent().equalities())
        expect.push_back(e);
    if (normalized(expect) != c.antecedent().normalized())
        return fail("antecedent is not X'=x' ∧ Y=y");
    return ok;
}

Check cf_exp(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& p = P(d, 0);
    const auto& c = d.conclusion;
    if (!is(p, Kind::Cf) || !is(c, Kind::Cf) || !is(c.operand(), Kind::Cf))
        return fail("expects (X=x ∧ Y=y) □→ φ above X=x □→ (Y=y □→ φ)");
    const auto& inner = c.operand();
    if (inner.operand() != p.operand())
        return fail("consequents differ");
    const auto xs = c.antecedent().variables();
    const auto ys = inner.antecedent().variables();
    std::vector<int> both;
    std::set_intersection(xs.begin(), xs.end(), ys.begin(), ys.end(), std::back_inserter(both));
    if (!both.empty())
        return fail("X and Y must be disjoint");
    auto joined = c.antecedent().equalities();
    for (const auto& e : inner.antecedent().equalities())
        joined.push_back(e);
    if (normalized(joined) != p.antecedent().normalized())
        return fail("antecedents do not split the premise's antecedent");
    return ok;
}

// Chain X1..Xk from the witness or by matching each premise against X ⤳ Y.
Check recur(const Derivation& d, RuleContext& rc)
{
    if (d.premises.empty())
        return fail("expects at least one premise");
    const auto& sig = *rc.sig;
    const int n = static_cast<int>(sig.size());
    std::vector<int> chain;
    if (d.witness.contains("chain")) {
        for (const auto& v : d.witness["chain"])
            chain.push_back(sig.index_of(v.get<std::string>()));
        if (chain.size() != d.premises.size() + 1)
            return fail("chain length must be the number of premises plus one");
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            if (chain[i] == chain[i + 1])
                return fail("consecutive chain variables must differ");
            if (P(d, i) != rc.leadsto(chain[i], chain[i + 1]))
                return fail("premise " + std::to_string(i) + " is not " + sig.name(chain[i]) + " ⤳ " +
                            sig.name(chain[i + 1]));
        }
    } else {
        for (std::size_t i = 0; i < d.premises.size(); ++i) {
            bool found = false;
            for (int x = 0; x < n && !found; ++x)
                for (int y = 0; y < n && !found; ++y) {
                    if (x == y || (i > 0 && x != chain.back()))
                        continue;
                    if (P(d, i) == rc.leadsto(x, y)) {
                        if (i == 0)
                            chain.push_back(x);
                        chain.push_back(y);
                        found = true;
                    }
                }
            if (!found)
                return fail("premise " + std::to_string(i) + " does not continue a ⤳ chain");
        }
    }
    if (chain.back() == chain.front())
        return fail("X_k and X_1 must differ");
    if (d.conclusion != neg(rc.leadsto(chain.back(), chain.front())))
        return fail("conclusion is not ¬(X_k ⤳ X_1)");
    return ok;
}

// ----- tensor disjunction ------------------------------------------------------

Check or_com(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& p = P(d, 0);
    if (!is(p, Kind::Tensor) || d.conclusion != tensor(p.rhs(), p.lhs()))
        return fail("expects φ ∨ ψ above ψ ∨ φ");
    return ok;
}

Check or_ass(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& p = P(d, 0);
    if (!is(p, Kind::Tensor) || !is(p.lhs(), Kind::Tensor))
        return fail("premise is not (φ ∨ ψ) ∨ χ");
    if (d.conclusion != tensor(p.lhs().lhs(), tensor(p.lhs().rhs(), p.rhs())))
        return fail("conclusion is not φ ∨ (ψ ∨ χ)");
    return ok;
}

Check or_rpl(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 2))
        return e;
    const auto& p = P(d, 0);
    const auto& c = d.conclusion;
    if (!is(p, Kind::Tensor) || !is(c, Kind::Tensor))
        return fail("expects ∨ formulas");
    if (c.rhs() != p.rhs())
        return fail("right disjunct must be kept");
    if (P(d, 1) != c.lhs())
        return fail("subderivation must end in the new left disjunct");
    return ok;
}

std::vector<Discharge> or_rpl_dis(const Derivation& d, RuleContext&) { return {{}, {{P(d, 0).lhs()}, false}}; }

Check cf_or_dst(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& p = P(d, 0);
    const auto& c = d.conclusion;
    if (is(p, Kind::Cf) && is(p.operand(), Kind::Tensor)) {
        const auto& a = p.antecedent();
        if (c == tensor(cf(a, p.operand().lhs()), cf(a, p.operand().rhs())))
            return ok;
    }
    if (is(c, Kind::Cf) && is(c.operand(), Kind::Tensor)) {
        const auto& a = c.antecedent();
        if (p == tensor(cf(a, c.operand().lhs()), cf(a, c.operand().rhs())))
            return ok;
    }
    return fail("expects X=x □→ (φ ∨ ψ) and (X=x □→ φ) ∨ (X=x □→ ψ), in either direction");
}

// ----- global disjunction ------------------------------------------------------

Check gor_i(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& c = d.conclusion;
    if (!is(c, Kind::Global) || (c.lhs() != P(d, 0) && c.rhs() != P(d, 0)))
        return fail("conclusion is not a ∨∨ with the premise as a disjunct");
    return ok;
}

Check gor_e(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 3))
        return e;
    if (!is(P(d, 0), Kind::Global))
        return fail("major premise is not a ∨∨");
    if (P(d, 1) != d.conclusion || P(d, 2) != d.conclusion)
        return fail("minor premises must both be the conclusion");
    return ok;
}

std::vector<Discharge> gor_e_dis(const Derivation& d, RuleContext&)
{
    return {{}, {{P(d, 0).lhs()}, false}, {{P(d, 0).rhs()}, false}};
}

Check or_gor_dst(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& p = P(d, 0);
    if (!is(p, Kind::Tensor) || !is(p.rhs(), Kind::Global))
        return fail("premise is not φ ∨ (ψ ∨∨ χ)");
    const auto& phi = p.lhs();
    if (d.conclusion != global(tensor(phi, p.rhs().lhs()), tensor(phi, p.rhs().rhs())))
        return fail("conclusion is not (φ ∨ ψ) ∨∨ (φ ∨ χ)");
    return ok;
}

Check cf_gor_dst(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    const auto& p = P(d, 0);
    if (!is(p, Kind::Cf) || !is(p.operand(), Kind::Global))
        return fail("premise is not X=x □→ (ψ ∨∨ χ)");
    const auto& a = p.antecedent();
    if (d.conclusion != global(cf(a, p.operand().lhs()), cf(a, p.operand().rhs())))
        return fail("conclusion is not (X=x □→ ψ) ∨∨ (X=x □→ χ)");
    return ok;
}

// ----- dependence --------------------------------------------------------------

Check con_i(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    if (!is(P(d, 0), Kind::Eq) || d.conclusion != con(P(d, 0).var()))
        return fail("expects X=x above =(X)");
    return ok;
}

Check dep_e(const Derivation& d, RuleContext&)
{
    if (d.premises.empty() || !is(P(d, 0), Kind::Dep))
        return fail("first premise must be a dependence atom");
    const auto& xs = P(d, 0).determinants();
    if (auto e = arity(d, xs.size() + 1))
        return e;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (P(d, i + 1) != con(xs[i]))
            return fail("premise " + std::to_string(i + 1) + " must be the constancy atom of determinant " +
                        std::to_string(i + 1));
    if (d.conclusion != con(P(d, 0).var()))
        return fail("conclusion is not the constancy atom of the target");
    return ok;
}

Check dep_i(const Derivation& d, RuleContext&)
{
    if (auto e = arity(d, 1))
        return e;
    if (!is(d.conclusion, Kind::Dep))
        return fail("conclusion is not a dependence atom");
    if (P(d, 0) != con(d.conclusion.var()))
        return fail("premise is not the constancy atom of the target");
    return ok;
}

std::vector<Discharge> dep_i_dis(const Derivation& d, RuleContext&)
{
    Discharge h;
    for (int x : d.conclusion.determinants())
        h.allowed.push_back(con(x));
    return {h};
}

struct ConEPlan {
    int var = 0;
    std::size_t k = 1;
    std::vector<int> values;
};

ConEPlan con_e_plan(const Derivation& d, const Signature& sig)
{
    ConEPlan p;
    p.var = witness_var(d, sig, "var");
    if (d.witness.contains("occurrence"))
        p.k = d.witness["occurrence"].get<std::size_t>();
    if (d.witness.contains("values")) {
        for (const auto& v : d.witness["values"])
            p.values.push_back(sig.value_index(p.var, v.get<std::string>()));
    } else {
        for (int x = 0; x < sig.range_size(p.var); ++x)
            p.values.push_back(x);
    }
    return p;
}

Check con_e(const Derivation& d, RuleContext& rc)
{
    const auto plan = con_e_plan(d, *rc.sig);
    if (auto e = arity(d, plan.values.size() + 1))
        return e;
    auto sorted = plan.values;
    std::sort(sorted.begin(), sorted.end());
    bool exact = sorted.size() == static_cast<std::size_t>(rc.sig->range_size(plan.var));
    for (std::size_t i = 0; exact && i < sorted.size(); ++i)
        exact = sorted[i] == static_cast<int>(i);
    if (!exact)
        return fail("instances must cover Ran(" + rc.sig->name(plan.var) + ") exactly once");
    const auto n = count_occurrences(P(d, 0), con(plan.var));
    if (plan.k < 1 || plan.k > n)
        return fail("occurrence " + std::to_string(plan.k) + " of =(" + rc.sig->name(plan.var) + ") not found");
    for (std::size_t i = 1; i < d.premises.size(); ++i)
        if (P(d, i) != d.conclusion)
            return fail("every instance must derive the conclusion");
    return ok;
}

std::vector<Discharge> con_e_dis(const Derivation& d, RuleContext& rc)
{
    const auto plan = con_e_plan(d, *rc.sig);
    std::vector<Discharge> out{{}};
    for (int x : plan.values)
        out.push_back({{replace_occurrence(P(d, 0), con(plan.var), plan.k, eq(plan.var, x))}, false});
    return out;
}

// ----- causal-team rules --------------------------------------------------------

// Premise i discharges Φ^F_i; the witness may list the laws in any order.
std::vector<std::size_t> fun_e_order(const Derivation& d, RuleContext& rc)
{
    const auto& reps = rc.representatives();
    std::vector<std::size_t> order;
    if (!d.witness.contains("laws")) {
        for (std::size_t i = 0; i < reps.size(); ++i)
            order.push_back(i);
        return order;
    }
    for (const auto& l : d.witness["laws"]) {
        const auto law = law_from_json(l, rc.sig);
        std::size_t found = reps.size();
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (similar(law, reps[i]))
                found = i;
        if (found == reps.size())
            throw InvalidArgument("witness law is not recursive");
        order.push_back(found);
    }
    return order;
}

Check fun_e(const Derivation& d, RuleContext& rc)
{
    const auto n = rc.representatives().size();
    if (auto e = arity(d, n))
        return fail(*e + " (one per ∼-class of F_σ)");
    auto order = fun_e_order(d, rc);
    std::sort(order.begin(), order.end());
    if (order.size() != n || std::adjacent_find(order.begin(), order.end()) != order.end())
        return fail("instances must cover every ∼-class of F_σ exactly once");
    for (std::size_t i = 0; i < n; ++i)
        if (P(d, i) != d.conclusion)
            return fail("every instance must derive the conclusion");
    return ok;
}

std::vector<Discharge> fun_e_dis(const Derivation& d, RuleContext& rc)
{
    std::vector<Discharge> out;
    for (auto i : fun_e_order(d, rc))
        out.push_back({{rc.phis()[i]}, false});
    return out;
}

Check unf_gor(const Derivation& d, RuleContext& rc)
{
    if (auto e = arity(d, 0))
        return e;
    const auto& phis = rc.phis();
    std::vector<bool> hit(phis.size(), false);
    for (const auto& part : flatten(d.conclusion, Kind::Global)) {
        auto it = std::find(phis.begin(), phis.end(), part);
        if (it == phis.end())
            return fail("disjunct is not Φ^F for a recursive F");
        hit[static_cast<std::size_t>(it - phis.begin())] = true;
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end())
        return fail("some ∼-class of F_σ has no Φ^F disjunct");
    return ok;
}

bool xi_matches(const GeneralizedCausalTeam& t, const Formula& f, const Limits& limits)
{
    return build_xi(t, limits).formula == f || build_xi_unreduced(t, limits).formula == f;
}

Check unf_d(const Derivation& d, RuleContext& rc)
{
    if (auto e = arity(d, 0))
        return e;
    if (d.witness.contains("team")) {
        const auto t = team_from_json(d.witness["team"], rc.sig).team;
        if (t.size() != 2)
            return fail("witness team must have two members");
        if (similar(*t.members()[0].law, *t.members()[1].law))
            return fail("side condition F≁G fails");
        if (!xi_matches(t, d.conclusion, rc.limits))
            return fail("conclusion is not Ξ of the witness team");
        return ok;
    }
    const auto& uni = rc.sat().universe(rc.sig);
    for (std::size_t i = 0; i < uni.size(); ++i)
        for (std::size_t j = i + 1; j < uni.size(); ++j) {
            if (similar(*uni[i].law, *uni[j].law))
                continue;
            if (build_xi(GeneralizedCausalTeam(rc.sig, {uni[i], uni[j]}), rc.limits).formula == d.conclusion)
                return ok;
        }
    return fail("conclusion is not Ξ^{(s,F),(t,G)} for any F≁G");
}

const std::vector<System> kAll{System::co_g, System::cov_g, System::cod_g, System::cov_c, System::cod_c};
const std::vector<System> kOr{System::cov_g, System::cod_g, System::cov_c, System::cod_c};
const std::vector<System> kGor{System::cov_g, System::cov_c};
const std::vector<System> kDep{System::cod_g, System::cod_c};
const std::vector<System> kCausal{System::cov_c, System::cod_c};

std::vector<RuleSchema> make_registry()
{
    std::vector<RuleSchema> r;
    auto add = [&](std::string name, std::string display, const std::vector<System>& sys, std::string prem,
                   std::string concl, std::string side, decltype(RuleSchema::check) check,
                   decltype(RuleSchema::discharges) dis = nullptr) {
        RuleSchema s;
        s.name = std::move(name);
        s.display = std::move(display);
        s.systems = sys;
        s.premises = std::move(prem);
        s.conclusion = std::move(concl);
        s.side = std::move(side);
        s.check = std::move(check);
        s.hypothetical = dis != nullptr;
        s.discharges = std::move(dis);
        r.push_back(std::move(s));
    };
    add("ValDef", "ValDef", kAll, "", "⋁_{x∈Ran(X)} X=x", "every value once", val_def);
    add("ValUnq", "ValUnq", kAll, "X=x", "X≠x'", "x≠x'", val_unq);
    add("and-I", "∧I", kAll, "φ; ψ", "φ ∧ ψ", "", and_i);
    add("and-E", "∧E", kAll, "φ ∧ ψ", "φ (or ψ)", "", and_e);
    add("or-I", "∨I", kAll, "φ", "φ ∨ ψ (or ψ ∨ φ)", "", or_i);
    add("or-E", "∨E", kAll, "φ ∨ ψ; [φ]…α; [ψ]…α", "α", "α is CO", or_e, or_e_dis);
    add("neg-I", "¬I", kAll, "[α]…⊥", "¬α", "α is CO", neg_i, neg_i_dis);
    add("neg-E", "¬E", kAll, "α; ¬α", "φ", "α is CO", neg_e);
    add("RAA", "RAA", kAll, "[¬α]…⊥", "α", "α is CO", raa, raa_dis);
    add("boxright-Eff", "□→Eff", kAll, "", "(X=x ∧ Y=y) □→ Y=y", "", cf_eff);
    add("boxright-I", "□→I", kAll, "X=x; θ", "X=x □→ θ", "θ is □→-free", cf_i);
    add("ex-falso-boxright", "ex falso□→", kAll, "", "(Y=y ∧ X=x ∧ X=x') □→ φ", "x≠x'", ex_falso);
    add("boxright-bot-E", "□→⊥E", kAll, "X=x □→ ⊥", "φ", "X=x consistent", cf_bot_e);
    add("boxright-Rpl_A", "□→Rpl_A", kAll, "X=x □→ φ; [X=x]…Y=y; [Y=y]…X=x", "Y=y □→ φ",
        "subderivations closed", rpl_a, rpl_a_dis);
    add("boxright-Rpl_C", "□→Rpl_C", kAll, "X=x □→ φ; [φ]…ψ", "X=x □→ ψ", "subderivation closed", rpl_c,
        rpl_c_dis);
    add("boxright-and-I", "□→∧I", kAll, "X=x □→ φ; X=x □→ ψ", "X=x □→ (φ ∧ ψ)", "", cf_and_i);
    add("neg-boxright-E", "¬□→E", kAll, "¬(X=x □→ α)", "X=x □→ ¬α", "α is CO", neg_cf_e);
    add("boxright-Extr", "□→Extr", kAll, "X=x □→ (Y=y □→ φ)", "(X'=x' ∧ Y=y) □→ φ",
        "X=x consistent; X' = X∖Y", cf_extr);
    add("boxright-Exp", "□→Exp", kAll, "(X=x ∧ Y=y) □→ φ", "X=x □→ (Y=y □→ φ)", "X∩Y=∅", cf_exp);
    add("Recur", "Recur", kAll, "X1 ⤳ X2; …; X(k-1) ⤳ Xk", "¬(Xk ⤳ X1)", "k > 1", recur);
    add("or-Com", "∨Com", kOr, "φ ∨ ψ", "ψ ∨ φ", "", or_com);
    add("or-Ass", "∨Ass", kOr, "(φ ∨ ψ) ∨ χ", "φ ∨ (ψ ∨ χ)", "", or_ass);
    add("or-Rpl", "∨Rpl", kOr, "φ ∨ ψ; [φ]…χ", "χ ∨ ψ", "", or_rpl, or_rpl_dis);
    add("boxright-or-Dst", "□→∨Dst", kOr, "X=x □→ (φ ∨ ψ)", "(X=x □→ φ) ∨ (X=x □→ ψ)", "both directions",
        cf_or_dst);
    add("gor-I", "∨∨I", kGor, "φ", "φ ∨∨ ψ (or ψ ∨∨ φ)", "", gor_i);
    add("gor-E", "∨∨E", kGor, "φ ∨∨ ψ; [φ]…χ; [ψ]…χ", "χ", "", gor_e, gor_e_dis);
    add("or-gor-Dst", "∨∨∨Dst", kGor, "φ ∨ (ψ ∨∨ χ)", "(φ ∨ ψ) ∨∨ (φ ∨ χ)", "", or_gor_dst);
    add("boxright-gor-Dst", "□→∨∨Dst", kGor, "X=x □→ (ψ ∨∨ χ)", "(X=x □→ ψ) ∨∨ (X=x □→ χ)", "", cf_gor_dst);
    add("ConI", "ConI", kDep, "X=x", "=(X)", "", con_i);
    add("ConE", "ConE", kDep, "φ; ∀x∈Ran(X) [φ(X=x/[=(X),k])]…ψ", "ψ", "one instance per value", con_e,
        con_e_dis);
    add("DepE", "DepE", kDep, "=(X1..Xn;Y); =(X1) … =(Xn)", "=(Y)", "", dep_e);
    add("DepI", "DepI", kDep, "[=(X1)] … [=(Xn)]…=(Y)", "=(X1..Xn;Y)", "", dep_i, dep_i_dis);
    add("FunE", "FunE", kCausal, "∀F∈F_σ [Φ^F]…ψ", "ψ", "one instance per ∼-class", fun_e, fun_e_dis);
    add("Unf_gor", "Unf∨∨", {System::cov_c}, "", "∨∨_{F∈F_σ} Φ^F", "", unf_gor);
    add("Unf_D", "Unf_D", {System::cod_c}, "", "Ξ^{(s,F),(t,G)}", "F≁G", unf_d);
    return r;
}

}  // namespace

const std::vector<RuleSchema>& rule_registry()
{
    static const std::vector<RuleSchema> r = make_registry();
    return r;
}

const RuleSchema* find_rule(std::string_view name)
{
    for (const auto& s : rule_registry())
        if (s.name == name)
            return &s;
    return nullptr;
}

std::vector<const RuleSchema*> rules_of(System s)
{
    std::vector<const RuleSchema*> out;
    for (const auto& r : rule_registry())
        if (r.in(s))
            out.push_back(&r);
    return out;
}

}  // namespace ctlab
