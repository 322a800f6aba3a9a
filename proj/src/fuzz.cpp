#include "ctlab/fuzz.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <map>
#include <numeric>
#include <thread>

#include "ctlab/charform.hpp"
#include "ctlab/error.hpp"
#include "ctlab/generate.hpp"
#include "ctlab/io.hpp"
#include "ctlab/syntax.hpp"
#include "rule_context.hpp"

namespace ctlab {

namespace {

struct Instance {
    Derivation node;
    std::vector<Formula> context;  // Γ beyond the non-discharging premises
};

class Sampler {
public:
    Sampler(Rng& rng, RuleContext& rc, int depth) : rng_(rng), rc_(rc), sig_(*rc.sig)
    {
        shape_.depth = depth;
        shape_.max_antecedent = 2;
        shape_.inconsistent = 0.15;
        switch (rc.system) {
        case System::co_g: shape_.language = Language::CO; break;
        case System::cov_g:
        case System::cov_c: shape_.language = Language::COV; break;
        case System::cod_g:
        case System::cod_c: shape_.language = Language::COD; break;
        }
    }

    std::optional<Instance> sample(const std::string& rule);

private:
    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    Formula f() { return random_formula(rng_, sig_, shape_); }
    Formula a() { return random_co(rng_, sig_, shape_.depth); }
    Formula cf_free()
    {
        auto s = shape_;
        s.counterfactuals = false;
        return random_formula(rng_, sig_, s);
    }
    InterventionSpec ant(double inconsistent = 0.15)
    {
        return random_antecedent(rng_, sig_, shape_.max_antecedent, inconsistent);
    }
    bool global_ok() const { return shape_.language == Language::COV; }

    // A likely consequence of φ, in the system's language.
    Formula weaken(const Formula& phi)
    {
        switch (pick(5)) {
        case 0: return phi;
        case 1: return tensor(phi, f());
        case 2: return tensor(f(), phi);
        case 3:
            if (phi.kind() == Kind::And)
                return coin() ? phi.lhs() : phi.rhs();
            return global_ok() ? global(phi, f()) : tensor(phi, f());
        default: return f();
        }
    }

    Formula bracket(std::vector<Formula> parts, Formula (*join)(const Formula&, const Formula&))
    {
        while (parts.size() > 1) {
            const std::size_t i = pick(parts.size() - 1);
            parts[i] = join(parts[i], parts[i + 1]);
            parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        }
        return parts[0];
    }

    static Instance node(const std::string& rule, const Formula& c, const std::vector<Formula>& ps,
                         std::vector<Formula> context = {}, Json witness = Json::object())
    {
        std::vector<Derivation> leaves;
        for (const auto& p : ps)
            leaves.push_back(hyp(p));
        return {infer(rule, c, std::move(leaves), {}, std::move(witness)), std::move(context)};
    }

    Rng& rng_;
    RuleContext& rc_;
    const Signature& sig_;
    FormulaShape shape_;
    std::map<std::pair<std::size_t, std::size_t>, Formula> xi_;
};

std::optional<Instance> Sampler::sample(const std::string& r)
{
    const int nv = static_cast<int>(sig_.size());
    auto var = [&] { return static_cast<int>(pick(static_cast<std::size_t>(nv))); };
    auto val = [&](int v) { return static_cast<int>(pick(static_cast<std::size_t>(sig_.range_size(v)))); };

    if (r == "ValDef") {
        const int v = var();
        std::vector<Formula> ds;
        for (int x = 0; x < sig_.range_size(v); ++x)
            ds.push_back(eq(v, x));
        std::shuffle(ds.begin(), ds.end(), rng_);
        return node(r, bracket(ds, tensor), {});
    }
    if (r == "ValUnq") {
        const int v = var();
        if (sig_.range_size(v) < 2)
            return std::nullopt;
        const int x = val(v);
        const int y = (x + 1 + static_cast<int>(pick(static_cast<std::size_t>(sig_.range_size(v) - 1)))) %
                      sig_.range_size(v);
        return node(r, neg(eq(v, y)), {eq(v, x)});
    }
    if (r == "and-I") {
        const auto p = f(), q = f();
        return node(r, conj(p, q), {p, q});
    }
    if (r == "and-E") {
        const auto p = f(), q = f();
        return node(r, coin() ? p : q, {conj(p, q)});
    }
    if (r == "or-I") {
        const auto p = f(), q = f();
        return node(r, coin() ? tensor(p, q) : tensor(q, p), {p});
    }
    if (r == "or-E") {
        const bool co = coin(0.6);
        const auto p = co ? a() : f(), q = co ? a() : f();
        const Formula alpha = co ? (coin() ? tensor(p, q) : tensor(tensor(q, a()), p)) : a();
        return node(r, alpha, {tensor(p, q), alpha, alpha});
    }
    if (r == "neg-I") {
        const auto g = a();
        const Formula alpha = coin(0.6) ? conj(neg(g), a()) : a();
        return node(r, neg(alpha), {bottom()}, {g});
    }
    if (r == "neg-E") {
        const auto alpha = a();
        return node(r, f(), {alpha, neg(alpha)});
    }
    if (r == "RAA") {
        const auto g = a();
        const Formula alpha = std::array<Formula, 3>{g, tensor(g, a()), a()}[pick(3)];
        return node(r, alpha, {bottom()}, {g});
    }
    if (r == "boxright-Eff") {
        const auto A = ant();
        const auto& e = A.equalities()[pick(A.size())];
        return node(r, cf(A, eq(e.var, e.value)), {});
    }
    if (r == "boxright-I") {
        const auto A = ant();
        const auto theta = cf_free();
        return node(r, cf(A, theta), {equalities_formula(A.equalities()), theta});
    }
    if (r == "ex-falso-boxright")
        return node(r, cf(ant(1.0), f()), {});
    if (r == "boxright-bot-E")
        return node(r, f(), {cf(ant(), bottom())});
    if (r == "boxright-Rpl_A") {
        const auto A = ant();
        InterventionSpec B = A;
        if (coin(0.6)) {
            auto eqs = A.equalities();
            if (coin(0.3))
                eqs.push_back(eqs[pick(eqs.size())]);
            std::shuffle(eqs.begin(), eqs.end(), rng_);
            B = InterventionSpec(std::move(eqs));
        } else {
            B = ant();
        }
        const auto phi = f();
        return node(r, cf(B, phi),
                    {cf(A, phi), equalities_formula(B.equalities()), equalities_formula(A.equalities())});
    }
    if (r == "boxright-Rpl_C") {
        const auto A = ant();
        const auto phi = f();
        const auto psi = weaken(phi);
        return node(r, cf(A, psi), {cf(A, phi), psi});
    }
    if (r == "boxright-and-I") {
        const auto A = ant();
        const auto p = f(), q = f();
        return node(r, cf(A, conj(p, q)), {cf(A, p), cf(A, q)});
    }
    if (r == "neg-boxright-E") {
        const auto A = ant();
        const auto alpha = a();
        return node(r, cf(A, neg(alpha)), {neg(cf(A, alpha))});
    }
    if (r == "boxright-Extr") {
        const auto A = ant(), B = ant();
        const auto phi = f();
        std::vector<Equality> c;
        const auto bv = B.variables();
        for (const auto& e : A.equalities())
            if (!std::binary_search(bv.begin(), bv.end(), e.var))
                c.push_back(e);
        for (const auto& e : B.equalities())
            c.push_back(e);
        std::shuffle(c.begin(), c.end(), rng_);
        return node(r, cf(InterventionSpec(c), phi), {cf(A, cf(B, phi))});
    }
    if (r == "boxright-Exp") {
        auto eqs = random_antecedent(rng_, sig_, sig_.size() + 1, 0.15).equalities();
        if (eqs.size() < 2)
            return std::nullopt;
        std::shuffle(eqs.begin(), eqs.end(), rng_);
        const std::size_t cut = 1 + pick(eqs.size() - 1);
        const InterventionSpec X({eqs.begin(), eqs.begin() + static_cast<std::ptrdiff_t>(cut)});
        const InterventionSpec Y({eqs.begin() + static_cast<std::ptrdiff_t>(cut), eqs.end()});
        const auto phi = f();
        return node(r, cf(X, cf(Y, phi)), {cf(InterventionSpec(eqs), phi)});
    }
    if (r == "Recur") {
        if (nv < 2)
            return std::nullopt;
        const std::size_t len = 1 + pick(static_cast<std::size_t>(nv));
        std::vector<int> chain{var()};
        while (chain.size() < len + 1) {
            int y = var();
            if (y != chain.back())
                chain.push_back(y);
        }
        std::vector<Formula> ps;
        Json names = Json::array();
        for (std::size_t i = 0; i + 1 < chain.size(); ++i)
            ps.push_back(rc_.leadsto(chain[i], chain[i + 1]));
        for (int v : chain)
            names.push_back(sig_.name(v));
        if (chain.back() == chain.front())
            return std::nullopt;
        return node(r, neg(rc_.leadsto(chain.back(), chain.front())), ps, {}, Json{{"chain", names}});
    }
    if (r == "or-Com") {
        const auto p = f(), q = f();
        return node(r, tensor(q, p), {tensor(p, q)});
    }
    if (r == "or-Ass") {
        const auto p = f(), q = f(), s = f();
        return node(r, tensor(p, tensor(q, s)), {tensor(tensor(p, q), s)});
    }
    if (r == "or-Rpl") {
        const auto p = f(), q = f();
        const auto chi = weaken(p);
        return node(r, tensor(chi, q), {tensor(p, q), chi});
    }
    if (r == "boxright-or-Dst") {
        const auto A = ant();
        const auto p = f(), q = f();
        const auto joined = cf(A, tensor(p, q));
        const auto split = tensor(cf(A, p), cf(A, q));
        return coin() ? node(r, split, {joined}) : node(r, joined, {split});
    }
    if (r == "gor-I") {
        const auto p = f(), q = f();
        return node(r, coin() ? global(p, q) : global(q, p), {p});
    }
    if (r == "gor-E") {
        const auto p = f(), q = f();
        const Formula chi = std::array<Formula, 4>{global(q, p), global(weaken(p), weaken(q)), tensor(p, q), f()}[pick(4)];
        return node(r, chi, {global(p, q), chi, chi});
    }
    if (r == "or-gor-Dst") {
        const auto p = f(), q = f(), s = f();
        return node(r, global(tensor(p, q), tensor(p, s)), {tensor(p, global(q, s))});
    }
    if (r == "boxright-gor-Dst") {
        const auto A = ant();
        const auto q = f(), s = f();
        return node(r, global(cf(A, q), cf(A, s)), {cf(A, global(q, s))});
    }
    if (r == "ConI") {
        const int v = var();
        return node(r, con(v), {eq(v, val(v))});
    }
    if (r == "ConE") {
        const int v = var();
        Formula phi = con(v);
        for (int i = 0; i < 1 + static_cast<int>(pick(2)); ++i) {
            switch (pick(3)) {
            case 0: phi = coin() ? conj(phi, f()) : conj(f(), phi); break;
            case 1: phi = coin() ? tensor(phi, f()) : tensor(f(), phi); break;
            default: phi = cf(ant(), phi); break;
            }
        }
        const std::size_t k = 1 + pick(count_occurrences(phi, con(v)));
        std::vector<int> values(static_cast<std::size_t>(sig_.range_size(v)));
        std::iota(values.begin(), values.end(), 0);
        std::shuffle(values.begin(), values.end(), rng_);
        Json names = Json::array();
        for (int x : values)
            names.push_back(sig_.value_name(v, x));
        const Formula psi = weaken(phi);
        std::vector<Formula> ps{phi};
        ps.insert(ps.end(), values.size(), psi);
        return node(r, psi, ps, {},
                    Json{{"var", sig_.name(v)}, {"occurrence", k}, {"values", names}});
    }
    if (r == "DepE") {
        auto d = random_formula(rng_, sig_, [&] {
            auto s = shape_;
            s.depth = 0;
            s.max_determinants = 2;
            return s;
        }());
        if (d.kind() != Kind::Dep)
            d = dep({var()}, var());
        std::vector<Formula> ps{d};
        for (int x : d.determinants())
            ps.push_back(con(x));
        return node(r, con(d.var()), ps);
    }
    if (r == "DepI") {
        const int y = var();
        std::vector<int> xs;
        for (int v = 0; v < nv; ++v)
            if (coin())
                xs.push_back(v);
        std::vector<int> sub;
        for (int x : xs)
            if (coin(0.7))
                sub.push_back(x);
        const Formula g = std::array<Formula, 3>{dep(sub, y), con(y), f()}[pick(3)];
        return node(r, dep(xs, y), {con(y)}, {g});
    }
    if (r == "FunE") {
        const auto psi = f();
        const Formula g = coin() ? conj(psi, f()) : f();
        return node(r, psi, std::vector<Formula>(rc_.phis().size(), psi), {g});
    }
    if (r == "Unf_gor") {
        auto phis = rc_.phis();
        std::shuffle(phis.begin(), phis.end(), rng_);
        if (coin(0.3))
            phis.push_back(phis[pick(phis.size())]);
        return node(r, bracket(phis, global), {});
    }
    if (r == "Unf_D") {
        const auto& uni = rc_.sat().universe(rc_.sig);
        const std::size_t i = pick(uni.size()), j = pick(uni.size());
        if (i == j || similar(*uni[i].law, *uni[j].law))
            return std::nullopt;
        const GeneralizedCausalTeam t(rc_.sig, {uni[i], uni[j]});
        auto it = xi_.find({i, j});
        if (it == xi_.end())
            it = xi_.emplace(std::make_pair(i, j), build_xi(t, rc_.limits).formula).first;
        return node(r, it->second, {}, {}, Json{{"team", team_to_json(t)}});
    }
    throw InvalidArgument("no sampler for rule " + r);
}

std::string describe(const Instance& in, const std::vector<Formula>& gamma, const Signature& sig)
{
    std::string s = in.node.rule + ":";
    for (const auto& p : in.node.premises)
        s += " [" + print_formula(p.conclusion, sig) + "]";
    s += " / " + print_formula(in.node.conclusion, sig) + " | Γ =";
    for (const auto& g : gamma)
        s += " {" + print_formula(g, sig) + "}";
    return s;
}

struct TrialResult {
    bool accepted = false;
    bool effective = false;
    std::optional<std::string> violation;
};

TrialResult run_trial(const RuleSchema& schema, Sampler& sampler, RuleContext& rc, const FuzzOptions& opts)
{
    TrialResult out;
    std::optional<Instance> in;
    try {
        in = sampler.sample(schema.name);
        if (!in || schema.check(in->node, rc))
            return out;
    } catch (const BudgetExceeded&) {
        throw;
    } catch (const Error&) {
        return out;
    }
    out.accepted = true;
    const auto sem = system_semantics(rc.system);
    auto& ctx = rc.sat();
    const auto& node = in->node;
    std::vector<Discharge> dis(node.premises.size());
    if (schema.discharges)
        dis = schema.discharges(node, rc);

    std::vector<Formula> gamma = in->context;
    for (std::size_t i = 0; i < node.premises.size(); ++i)
        if (dis[i].allowed.empty() && !dis[i].closed)
            gamma.push_back(node.premises[i].conclusion);

    for (std::size_t i = 0; i < node.premises.size(); ++i) {
        if (dis[i].allowed.empty() && !dis[i].closed)
            continue;
        std::vector<Formula> ctx_i = dis[i].closed ? std::vector<Formula>{} : gamma;
        ctx_i.insert(ctx_i.end(), dis[i].allowed.begin(), dis[i].allowed.end());
        if (!entails_bounded(ctx_i, node.premises[i].conclusion, rc.sig, opts.team_cap, sem, ctx))
            return out;
    }
    out.effective = true;
    if (!entails_bounded(gamma, node.conclusion, rc.sig, opts.team_cap, sem, ctx))
        out.violation = describe(*in, gamma, *rc.sig);
    return out;
}

std::uint64_t trial_seed(std::uint64_t seed, const std::string& rule, System system, std::size_t i)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(std::hash<std::string>{}(rule)),
                      static_cast<std::uint32_t>(system), static_cast<std::uint32_t>(i)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (std::uint64_t{out[0]} << 32) | out[1];
}

}  // namespace

SignaturePtr fuzz_signature() { return make_signature({{"X", {"0", "1"}}, {"Y", {"0", "1"}}}); }

FuzzReport rule_soundness_fuzz(const std::string& rule, System system, const SignaturePtr& sig,
                               const FuzzOptions& opts)
{
    const RuleSchema* schema = find_rule(rule);
    if (!schema)
        throw InvalidArgument("unknown rule " + rule);
    return rule_soundness_fuzz(*schema, system, sig, opts);
}

FuzzReport rule_soundness_fuzz(const RuleSchema& schema_ref, System system, const SignaturePtr& sig,
                               const FuzzOptions& opts)
{
    const RuleSchema* schema = &schema_ref;
    const std::string& rule = schema->name;
    if (!schema->in(system))
        throw InvalidArgument("rule " + rule + " is not part of " + system_name(system));

    FuzzReport report;
    report.rule = rule;
    report.system = system;
    // Rejected samples are retried; the cap keeps rules with rare valid
    // shapes from spinning.
    const std::size_t attempts = opts.trials * 20;
    const unsigned jobs = std::max(1u, opts.jobs);

    struct Slot {
        TrialResult r;
    };
    std::vector<Slot> slots(attempts);
    std::atomic<std::size_t> accepted{0};

    auto worker = [&](unsigned w) {
        RuleContext rc(sig, system, Limits::defaults());
        Rng rng;
        Sampler sampler(rng, rc, opts.depth);
        for (std::size_t i = w; i < attempts; i += jobs) {
            if (accepted.load() >= opts.trials)
                break;
            rng.seed(trial_seed(opts.seed, rule, system, i));
            slots[i].r = run_trial(*schema, sampler, rc, opts);
            if (slots[i].r.accepted)
                ++accepted;
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back(worker, w);
        for (auto& t : pool)
            t.join();
    }
    // Count in attempt order so the report does not depend on scheduling.
    for (const auto& s : slots) {
        if (report.trials >= opts.trials)
            break;
        if (!s.r.accepted) {
            ++report.rejected;
            continue;
        }
        ++report.trials;
        if (s.r.effective)
            ++report.effective;
        if (s.r.violation)
            report.violations.push_back(*s.r.violation);
    }
    return report;
}

std::vector<FuzzReport> fuzz_system(System system, const SignaturePtr& sig, const FuzzOptions& opts)
{
    std::vector<FuzzReport> out;
    for (const auto* r : rules_of(system))
        out.push_back(rule_soundness_fuzz(r->name, system, sig, opts));
    return out;
}

RecurReport recur_exhaustive(const SignaturePtr& sig, std::size_t max_length, Semantics sem, std::size_t team_cap)
{
    RecurReport report;
    const int n = static_cast<int>(sig->size());
    SatContext ctx;
    std::map<std::pair<int, int>, Formula> memo;
    auto lt = [&](int x, int y) -> const Formula& {
        auto it = memo.find({x, y});
        if (it == memo.end())
            it = memo.emplace(std::make_pair(x, y), build_leadsto(x, y, sig).formula).first;
        return it->second;
    };
    std::vector<int> chain;
    std::function<void()> extend = [&] {
        if (chain.size() >= 2 && chain.back() != chain.front()) {
            std::vector<Formula> ps;
            for (std::size_t i = 0; i + 1 < chain.size(); ++i)
                ps.push_back(lt(chain[i], chain[i + 1]));
            ++report.chains;
            if (!entails_bounded(ps, neg(lt(chain.back(), chain.front())), sig, team_cap, sem, ctx)) {
                std::string s;
                for (int v : chain)
                    s += (s.empty() ? "" : " ~> ") + sig->name(v);
                report.violations.push_back(s);
            }
        }
        if (chain.size() > max_length)
            return;
        for (int v = 0; v < n; ++v) {
            if (!chain.empty() && chain.back() == v)
                continue;
            chain.push_back(v);
            extend();
            chain.pop_back();
        }
    };
    extend();
    return report;
}

}  // namespace ctlab
