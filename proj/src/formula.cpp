#include "ctlab/formula.hpp"

#include <limits>

#include "ctlab/error.hpp"

namespace ctlab {

const char* language_name(Language l)
{
    switch (l) {
    case Language::CO: return "CO";
    case Language::COD: return "COD";
    case Language::COV: return "COV";
    case Language::NONE: return "NONE";
    }
    return "?";
}

struct FormulaFactory {
    static Formula make(FormulaNode n)
    {
        std::size_t h = static_cast<std::size_t>(n.kind) * 1000003u + 17;
        h = hash_combine(h, static_cast<std::size_t>(n.var + 2));
        h = hash_combine(h, static_cast<std::size_t>(n.value + 2));
        for (int d : n.determinants)
            h = hash_combine(h, static_cast<std::size_t>(d + 7));
        h = hash_combine(h, n.determinants.size());
        for (const auto& e : n.antecedent.equalities()) {
            h = hash_combine(h, static_cast<std::size_t>(e.var + 11));
            h = hash_combine(h, static_cast<std::size_t>(e.value + 13));
        }
        h = hash_combine(h, n.antecedent.size());
        constexpr std::size_t cap = std::numeric_limits<std::size_t>::max() / 4;
        n.size = 1;
        for (const Formula* c : {&n.a, &n.b}) {
            if (!c->valid())
                continue;
            h = hash_combine(h, c->hash());
            n.size = std::min(cap, n.size + c->size());
            n.dep = n.dep || c->has_dep();
            n.global = n.global || c->has_global();
            n.cf = n.cf || c->has_cf();
        }
        n.hash = h;
        if (n.kind == Kind::Dep)
            n.dep = true;
        if (n.kind == Kind::Global)
            n.global = true;
        if (n.kind == Kind::Cf)
            n.cf = true;
        return Formula(std::make_shared<const FormulaNode>(std::move(n)));
    }
};

Kind Formula::kind() const { return node_->kind; }
int Formula::var() const { return node_->var; }
int Formula::value() const { return node_->value; }
const std::vector<int>& Formula::determinants() const { return node_->determinants; }
const InterventionSpec& Formula::antecedent() const { return node_->antecedent; }
const Formula& Formula::operand() const { return node_->a; }
const Formula& Formula::lhs() const { return node_->a; }
const Formula& Formula::rhs() const { return node_->b; }
bool Formula::has_dep() const { return node_->dep; }
bool Formula::has_global() const { return node_->global; }
bool Formula::has_cf() const { return node_->cf; }
std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }
std::size_t Formula::size() const { return node_ ? node_->size : 0; }

Language Formula::language() const
{
    if (node_->dep && node_->global)
        return Language::NONE;
    if (node_->dep)
        return Language::COD;
    if (node_->global)
        return Language::COV;
    return Language::CO;
}

bool Formula::operator==(const Formula& o) const
{
    if (node_ == o.node_)
        return true;
    if (!node_ || !o.node_)
        return false;
    const auto& x = *node_;
    const auto& y = *o.node_;
    if (x.hash != y.hash || x.kind != y.kind || x.size != y.size || x.var != y.var || x.value != y.value ||
        x.determinants != y.determinants || x.antecedent != y.antecedent)
        return false;
    return x.a == y.a && x.b == y.b;
}

Formula eq(int var, int value)
{
    FormulaNode n;
    n.kind = Kind::Eq;
    n.var = var;
    n.value = value;
    return FormulaFactory::make(std::move(n));
}

Formula neg(const Formula& a)
{
    if (!a.is_co())
        throw InvalidArgument("negation applies only to CO formulas");
    FormulaNode n;
    n.kind = Kind::Neg;
    n.a = a;
    return FormulaFactory::make(std::move(n));
}

namespace {

Formula binary(Kind k, const Formula& a, const Formula& b)
{
    if (!a.valid() || !b.valid())
        throw InvalidArgument("binary connective with a missing operand");
    FormulaNode n;
    n.kind = k;
    n.a = a;
    n.b = b;
    return FormulaFactory::make(std::move(n));
}

Formula fold(Kind k, const std::vector<Formula>& fs)
{
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i)
        acc = binary(k, acc, fs[i]);
    return acc;
}

}  // namespace

Formula conj(const Formula& a, const Formula& b) { return binary(Kind::And, a, b); }
Formula tensor(const Formula& a, const Formula& b) { return binary(Kind::Tensor, a, b); }
Formula global(const Formula& a, const Formula& b) { return binary(Kind::Global, a, b); }

Formula dep(std::vector<int> determinants, int target)
{
    FormulaNode n;
    n.kind = Kind::Dep;
    n.var = target;
    n.determinants = std::move(determinants);
    return FormulaFactory::make(std::move(n));
}

Formula con(int target) { return dep({}, target); }

Formula cf(InterventionSpec antecedent, const Formula& body)
{
    if (!body.valid())
        throw InvalidArgument("counterfactual without consequent");
    FormulaNode n;
    n.kind = Kind::Cf;
    n.antecedent = std::move(antecedent);
    n.a = body;
    return FormulaFactory::make(std::move(n));
}

Formula desugar_selective(const Formula& antecedent, const Formula& body)
{
    if (!antecedent.is_co())
        throw InvalidArgument("selective implication needs a CO antecedent");
    return tensor(neg(antecedent), body);
}

Formula bottom()
{
    static const Formula b = conj(eq(0, 0), neg(eq(0, 0)));
    return b;
}

Formula top()
{
    static const Formula t = neg(bottom());
    return t;
}

bool is_bottom(const Formula& f)
{
    return f.kind() == Kind::And && f.lhs().kind() == Kind::Eq && f.rhs().kind() == Kind::Neg &&
           f.rhs().operand() == f.lhs();
}

Formula conj_all(const std::vector<Formula>& fs) { return fs.empty() ? top() : fold(Kind::And, fs); }
Formula tensor_all(const std::vector<Formula>& fs) { return fs.empty() ? bottom() : fold(Kind::Tensor, fs); }
Formula global_all(const std::vector<Formula>& fs) { return fs.empty() ? bottom() : fold(Kind::Global, fs); }

Formula equalities_formula(const std::vector<Equality>& eqs)
{
    if (eqs.empty())
        throw InvalidArgument("empty conjunction of equalities");
    std::vector<Formula> fs;
    for (const auto& e : eqs)
        fs.push_back(eq(e.var, e.value));
    return fold(Kind::And, fs);
}

std::vector<Formula> flatten(const Formula& f, Kind k)
{
    std::vector<Formula> out;
    std::vector<Formula> stack{f};
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (g.kind() == k) {
            stack.push_back(g.rhs());
            stack.push_back(g.lhs());
        } else {
            out.push_back(g);
        }
    }
    return out;
}

Language classify(const Formula& f) { return f.language(); }

namespace {

void count_rec(const Formula& f, const Formula& theta, std::size_t& n)
{
    if (f == theta) {
        ++n;
        return;
    }
    if (f.lhs().valid())
        count_rec(f.lhs(), theta, n);
    if (f.rhs().valid())
        count_rec(f.rhs(), theta, n);
}

Formula rebuild(const Formula& f, const Formula& a, const Formula& b)
{
    switch (f.kind()) {
    case Kind::Neg: return neg(a);
    case Kind::Cf: return cf(f.antecedent(), a);
    case Kind::And: return conj(a, b);
    case Kind::Tensor: return tensor(a, b);
    case Kind::Global: return global(a, b);
    default: return f;
    }
}

Formula replace_rec(const Formula& f, const Formula& theta, std::size_t k, const Formula& psi, std::size_t& seen)
{
    if (f == theta) {
        ++seen;
        return seen == k ? psi : f;
    }
    if (!f.lhs().valid())
        return f;
    Formula a = replace_rec(f.lhs(), theta, k, psi, seen);
    Formula b = f.rhs().valid() ? replace_rec(f.rhs(), theta, k, psi, seen) : Formula();
    if (a.node() == f.lhs().node() && b.node() == f.rhs().node())
        return f;
    return rebuild(f, a, b);
}

void validate_rec(const Formula& f, const Signature& sig)
{
    auto check_var = [&](int v) {
        if (v < 0 || static_cast<std::size_t>(v) >= sig.size())
            throw InvalidArgument("formula mentions a variable outside the signature");
    };
    auto check_val = [&](int v, int x) {
        check_var(v);
        if (x < 0 || x >= sig.range_size(v))
            throw InvalidArgument("formula value out of range for " + sig.name(v));
    };
    switch (f.kind()) {
    case Kind::Eq: check_val(f.var(), f.value()); return;
    case Kind::Dep:
        check_var(f.var());
        for (int d : f.determinants())
            check_var(d);
        return;
    case Kind::Cf:
        for (const auto& e : f.antecedent().equalities())
            check_val(e.var, e.value);
        validate_rec(f.operand(), sig);
        return;
    case Kind::Neg: validate_rec(f.operand(), sig); return;
    default:
        validate_rec(f.lhs(), sig);
        validate_rec(f.rhs(), sig);
    }
}

}  // namespace

std::size_t count_occurrences(const Formula& f, const Formula& theta)
{
    std::size_t n = 0;
    count_rec(f, theta, n);
    return n;
}

Formula replace_occurrence(const Formula& f, const Formula& theta, std::size_t k, const Formula& psi)
{
    if (k == 0 || count_occurrences(f, theta) < k)
        throw InvalidArgument("occurrence index exceeds the number of occurrences");
    std::size_t seen = 0;
    return replace_rec(f, theta, k, psi, seen);
}

void validate(const Formula& f, const Signature& sig) { validate_rec(f, sig); }

}  // namespace ctlab
