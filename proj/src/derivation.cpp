#include "ctlab/derivation.hpp"

#include <algorithm>

#include "ctlab/error.hpp"
#include "ctlab/syntax.hpp"
#include "rule_context.hpp"

namespace ctlab {

const char* system_name(System s)
{
    switch (s) {
    case System::co_g: return "co-g";
    case System::cov_g: return "cov-g";
    case System::cod_g: return "cod-g";
    case System::cov_c: return "cov-c";
    case System::cod_c: return "cod-c";
    }
    return "?";
}

System parse_system(std::string_view name)
{
    for (System s : all_systems())
        if (name == system_name(s))
            return s;
    throw ParseError("unknown proof system '" + std::string(name) + "' (co-g, cov-g, cod-g, cov-c, cod-c)");
}

Semantics system_semantics(System s)
{
    return s == System::cov_c || s == System::cod_c ? Semantics::causal : Semantics::generalized;
}

bool system_admits(System s, const Formula& f)
{
    switch (s) {
    case System::co_g: return f.is_co();
    case System::cov_g:
    case System::cov_c: return !f.has_dep();
    case System::cod_g:
    case System::cod_c: return !f.has_global();
    }
    return false;
}

const std::vector<System>& all_systems()
{
    static const std::vector<System> all{System::co_g, System::cov_g, System::cod_g, System::cov_c, System::cod_c};
    return all;
}

Derivation hyp(const Formula& f, std::string label)
{
    Derivation d;
    d.rule = kHypothesis;
    d.conclusion = f;
    d.label = std::move(label);
    return d;
}

Derivation infer(std::string rule, const Formula& conclusion, std::vector<Derivation> premises,
                 std::vector<std::vector<std::string>> discharge, Json witness)
{
    Derivation d;
    d.rule = std::move(rule);
    d.conclusion = conclusion;
    d.premises = std::move(premises);
    d.discharge = std::move(discharge);
    d.witness = std::move(witness);
    return d;
}

namespace {

struct Failure {
    std::string path;
    std::string reason;
};

struct Open {
    std::string label;
    Formula f;
};

bool matches(const Formula& leaf, const std::vector<Formula>& allowed)
{
    const auto le = equalities_of(leaf);
    for (const auto& a : allowed) {
        if (a == leaf)
            return true;
        if (le) {
            auto ae = equalities_of(a);
            if (ae && *ae == *le)
                return true;
        }
    }
    return false;
}

struct Walker {
    RuleContext rc;

    std::string show(const Formula& f) const { return print_formula(f, *rc.sig); }

    std::vector<Open> walk(const Derivation& d, const std::string& path)
    {
        if (!d.conclusion.valid())
            throw Failure{path, "node has no formula"};
        try {
            validate(d.conclusion, *rc.sig);
        } catch (const Error& e) {
            throw Failure{path, e.what()};
        }
        if (!system_admits(rc.system, d.conclusion))
            throw Failure{path, "formula " + show(d.conclusion) + " is outside the language of " +
                                    system_name(rc.system)};
        if (d.rule == kHypothesis) {
            if (!d.premises.empty())
                throw Failure{path, "an assumption has no premises"};
            return {Open{d.label, d.conclusion}};
        }
        const RuleSchema* rule = find_rule(d.rule);
        if (!rule)
            throw Failure{path, "unknown rule '" + d.rule + "'"};
        if (!rule->in(rc.system))
            throw Failure{path, "rule " + d.rule + " is not part of " + system_name(rc.system)};

        std::vector<std::vector<Open>> below;
        for (std::size_t i = 0; i < d.premises.size(); ++i)
            below.push_back(walk(d.premises[i], path + "/" + std::to_string(i)));

        std::vector<Discharge> dis;
        try {
            if (auto why = rule->check(d, rc))
                throw Failure{path, d.rule + ": " + *why};
            if (rule->discharges)
                dis = rule->discharges(d, rc);
        } catch (const Error& e) {
            throw Failure{path, d.rule + ": " + e.what()};
        } catch (const Json::exception& e) {
            throw Failure{path, d.rule + ": bad witness: " + e.what()};
        }
        dis.resize(d.premises.size());
        if (d.discharge.size() > d.premises.size())
            throw Failure{path, "more discharge lists than premises"};

        std::vector<Open> out;
        for (std::size_t i = 0; i < below.size(); ++i) {
            const std::vector<std::string> none;
            const auto& labels = i < d.discharge.size() ? d.discharge[i] : none;
            if (!labels.empty() && dis[i].allowed.empty())
                throw Failure{path, d.rule + ": premise " + std::to_string(i) + " discharges no assumptions"};
            std::vector<Open> rest;
            for (auto& o : below[i]) {
                const bool closes = !o.label.empty() && std::find(labels.begin(), labels.end(), o.label) != labels.end();
                if (!closes) {
                    rest.push_back(std::move(o));
                    continue;
                }
                if (!matches(o.f, dis[i].allowed))
                    throw Failure{path, d.rule + ": assumption '" + o.label + "' is " + show(o.f) +
                                            ", which premise " + std::to_string(i) + " cannot discharge"};
            }
            if (dis[i].closed && !rest.empty())
                throw Failure{path, d.rule + ": subderivation " + std::to_string(i) +
                                        " must have no undischarged assumptions (" + show(rest.front().f) + ")"};
            for (auto& o : rest)
                out.push_back(std::move(o));
        }
        return out;
    }
};

}  // namespace

CheckResult check_derivation(const Derivation& d, System system, const SignaturePtr& sig,
                             const std::optional<std::vector<Formula>>& assumptions, const Limits& limits)
{
    CheckResult r;
    Walker w{RuleContext(sig, system, limits)};
    try {
        const auto open = w.walk(d, "root");
        for (const auto& o : open) {
            if (!o.label.empty())
                throw Failure{"root", "assumption '" + o.label + "' (" + w.show(o.f) + ") is never discharged"};
            if (std::find(r.open.begin(), r.open.end(), o.f) == r.open.end())
                r.open.push_back(o.f);
        }
        if (assumptions)
            for (const auto& f : r.open)
                if (std::find(assumptions->begin(), assumptions->end(), f) == assumptions->end())
                    throw Failure{"root", "open premise " + w.show(f) + " is not among the declared assumptions"};
        r.ok = true;
    } catch (const Failure& f) {
        r.path = f.path;
        r.reason = f.reason;
        r.open.clear();
    }
    return r;
}

// ----- JSON ---------------------------------------------------------------------

Derivation derivation_from_json(const Json& j, const Signature& sig)
{
    if (!j.is_object())
        throw ParseError("derivation node must be an object");
    Derivation d;
    if (!j.contains("rule") || !j["rule"].is_string())
        throw ParseError("derivation node needs a \"rule\" string");
    d.rule = j["rule"].get<std::string>();
    if (!j.contains("formula") || !j["formula"].is_string())
        throw ParseError("derivation node needs a \"formula\" string");
    d.conclusion = parse_formula(j["formula"].get<std::string>(), sig);
    if (j.contains("label"))
        d.label = j["label"].get<std::string>();
    if (j.contains("premises"))
        for (const auto& p : j["premises"])
            d.premises.push_back(derivation_from_json(p, sig));
    if (j.contains("discharge")) {
        for (const auto& e : j["discharge"]) {
            std::vector<std::string> labels;
            if (e.is_string())
                labels.push_back(e.get<std::string>());
            else if (e.is_array())
                for (const auto& l : e)
                    labels.push_back(l.get<std::string>());
            else if (!e.is_null())
                throw ParseError("discharge entries are null, a label, or a list of labels");
            d.discharge.push_back(std::move(labels));
        }
    }
    if (j.contains("witness"))
        d.witness = j["witness"];
    return d;
}

Json derivation_to_json(const Derivation& d, const Signature& sig)
{
    Json j = Json::object();
    j["rule"] = d.rule;
    j["formula"] = print_formula(d.conclusion, sig);
    if (!d.label.empty())
        j["label"] = d.label;
    if (!d.premises.empty()) {
        Json ps = Json::array();
        for (const auto& p : d.premises)
            ps.push_back(derivation_to_json(p, sig));
        j["premises"] = std::move(ps);
    }
    bool any = false;
    for (const auto& l : d.discharge)
        any = any || !l.empty();
    if (any) {
        Json dj = Json::array();
        for (const auto& l : d.discharge) {
            if (l.empty())
                dj.push_back(nullptr);
            else if (l.size() == 1)
                dj.push_back(l.front());
            else
                dj.push_back(l);
        }
        j["discharge"] = std::move(dj);
    }
    if (!d.witness.empty())
        j["witness"] = d.witness;
    return j;
}

ProofFile proof_from_json(const Json& j, SignaturePtr sig)
{
    if (!j.is_object())
        throw ParseError("proof file must be an object");
    ProofFile p;
    if (!sig) {
        if (!j.contains("signature"))
            throw ParseError("proof file has no \"signature\"");
        sig = signature_from_json(j["signature"]);
    }
    p.sig = sig;
    if (j.contains("system"))
        p.system = parse_system(j["system"].get<std::string>());
    if (j.contains("assumptions")) {
        std::vector<Formula> gs;
        for (const auto& a : j["assumptions"])
            gs.push_back(parse_formula(a.get<std::string>(), *sig));
        p.assumptions = std::move(gs);
    }
    if (!j.contains("proof"))
        throw ParseError("proof file has no \"proof\"");
    p.proof = derivation_from_json(j["proof"], *sig);
    return p;
}

Json proof_to_json(const ProofFile& p, bool embed_signature)
{
    Json j = Json::object();
    if (embed_signature)
        j["signature"] = signature_to_json(*p.sig);
    if (p.system)
        j["system"] = system_name(*p.system);
    if (p.assumptions) {
        Json a = Json::array();
        for (const auto& f : *p.assumptions)
            a.push_back(print_formula(f, *p.sig));
        j["assumptions"] = std::move(a);
    }
    j["proof"] = derivation_to_json(p.proof, *p.sig);
    return j;
}

// ----- positive substitution ------------------------------------------------------

namespace {

struct Substituter {
    const Formula& theta;
    const Derivation& d_theta;
    const std::string& theta_label;
    System system;
    int fresh = 0;

    std::string label() { return "~m" + std::to_string(++fresh); }

    // d_theta with its own labels renamed apart and θ leaves replaced by d.
    Derivation graft(const Derivation& t, const Derivation& d, const std::string& tag) const
    {
        if (t.rule == kHypothesis) {
            if (t.label == theta_label)
                return d;
            if (t.label.empty())
                throw InvalidArgument("the derivation of θ' has an open premise besides θ");
            return hyp(t.conclusion, tag + t.label);
        }
        Derivation out = t;
        for (auto& p : out.premises)
            p = graft(p, d, tag);
        for (auto& ls : out.discharge)
            for (auto& l : ls)
                l = tag + l;
        return out;
    }

    Derivation run(const Derivation& d, std::size_t k)
    {
        const Formula& phi = d.conclusion;
        if (phi == theta) {
            if (k != 1)
                throw InvalidArgument("occurrence not found");
            return graft(d_theta, d, label() + ".");
        }
        switch (phi.kind()) {
        case Kind::And: {
            const auto cl = count_occurrences(phi.lhs(), theta);
            Derivation l = infer("and-E", phi.lhs(), {d});
            Derivation r = infer("and-E", phi.rhs(), {d});
            if (k <= cl)
                l = run(l, k);
            else
                r = run(r, k - cl);
            const Formula c = conj(l.conclusion, r.conclusion);
            return infer("and-I", c, {std::move(l), std::move(r)});
        }
        case Kind::Tensor: {
            const auto cl = count_occurrences(phi.lhs(), theta);
            const bool left = k <= cl;
            if (system == System::co_g) {
                const auto u = label();
                const auto v = label();
                Derivation a = hyp(phi.lhs(), u);
                Derivation b = hyp(phi.rhs(), v);
                if (left)
                    a = run(a, k);
                else
                    b = run(b, k - cl);
                const Formula c = tensor(a.conclusion, b.conclusion);
                Derivation da = infer("or-I", c, {std::move(a)});
                Derivation db = infer("or-I", c, {std::move(b)});
                return infer("or-E", c, {d, std::move(da), std::move(db)}, {{}, {u}, {v}});
            }
            if (left) {
                const auto u = label();
                Derivation a = run(hyp(phi.lhs(), u), k);
                const Formula c = tensor(a.conclusion, phi.rhs());
                return infer("or-Rpl", c, {d, std::move(a)}, {{}, {u}});
            }
            const auto u = label();
            Derivation swapped = infer("or-Com", tensor(phi.rhs(), phi.lhs()), {d});
            Derivation b = run(hyp(phi.rhs(), u), k - cl);
            const Formula mid = tensor(b.conclusion, phi.lhs());
            Derivation rpl = infer("or-Rpl", mid, {std::move(swapped), std::move(b)}, {{}, {u}});
            return infer("or-Com", tensor(phi.lhs(), mid.lhs()), {std::move(rpl)});
        }
        case Kind::Global: {
            const auto cl = count_occurrences(phi.lhs(), theta);
            const auto u = label();
            const auto v = label();
            Derivation a = hyp(phi.lhs(), u);
            Derivation b = hyp(phi.rhs(), v);
            if (k <= cl)
                a = run(a, k);
            else
                b = run(b, k - cl);
            const Formula c = global(a.conclusion, b.conclusion);
            Derivation da = infer("gor-I", c, {std::move(a)});
            Derivation db = infer("gor-I", c, {std::move(b)});
            return infer("gor-E", c, {d, std::move(da), std::move(db)}, {{}, {u}, {v}});
        }
        case Kind::Cf: {
            const auto u = label();
            Derivation body = run(hyp(phi.operand(), u), k);
            const Formula c = cf(phi.antecedent(), body.conclusion);
            return infer("boxright-Rpl_C", c, {d, std::move(body)}, {{}, {u}});
        }
        case Kind::Neg: throw InvalidArgument("the occurrence lies under a negation");
        default: throw InvalidArgument("occurrence not found");
        }
    }
};

}  // namespace

Derivation substitute_positive(const Derivation& d_phi, const Formula& theta, std::size_t k,
                               const Derivation& d_theta, const std::string& theta_label, System system)
{
    if (k < 1 || k > count_occurrences(d_phi.conclusion, theta))
        throw InvalidArgument("occurrence " + std::to_string(k) + " not found");
    Substituter s{theta, d_theta, theta_label, system};
    return s.run(d_phi, k);
}

}  // namespace ctlab
