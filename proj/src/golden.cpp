#include "ctlab/golden.hpp"

#include "ctlab/decision.hpp"
#include "ctlab/error.hpp"

namespace ctlab {

namespace {

InterventionSpec iv(std::vector<Equality> eqs) { return InterventionSpec(std::move(eqs)); }

Derivation and_e(const Formula& part, Derivation d) { return infer("and-E", part, {std::move(d)}); }

// φ ∧ (ψ ∨ χ) ⊢ (φ ∧ ψ) ∨ (φ ∧ χ) by ∨Rpl and ∨Com.
Derivation and_or_dst(const Derivation& d, const std::string& tag)
{
    const Formula& top = d.conclusion;
    const Formula phi = top.lhs();
    const Formula psi = top.rhs().lhs();
    const Formula chi = top.rhs().rhs();
    const std::string la = tag + "l";
    const std::string lb = tag + "r";
    Derivation e = and_e(top.rhs(), d);
    Derivation left = infer("and-I", conj(phi, psi), {and_e(phi, d), hyp(psi, la)});
    Derivation r1 = infer("or-Rpl", tensor(conj(phi, psi), chi), {std::move(e), std::move(left)}, {{}, {la}});
    Derivation r2 = infer("or-Com", tensor(chi, conj(phi, psi)), {std::move(r1)});
    Derivation right = infer("and-I", conj(phi, chi), {and_e(phi, d), hyp(chi, lb)});
    Derivation r3 =
        infer("or-Rpl", tensor(conj(phi, chi), conj(phi, psi)), {std::move(r2), std::move(right)}, {{}, {lb}});
    return infer("or-Com", tensor(conj(phi, psi), conj(phi, chi)), {std::move(r3)});
}

// X=x □→ (φ ∨ ψ) ⊢ (X=x □→ φ) ∨ (X=x □→ ψ) inside CO, by reductio.
Derivation cf_or_split(const Derivation& d, const std::string& tag)
{
    const auto& a = d.conclusion.antecedent();
    const Formula phi = d.conclusion.operand().lhs();
    const Formula psi = d.conclusion.operand().rhs();
    const Formula goal = tensor(cf(a, phi), cf(a, psi));
    const Formula bot = bottom();
    const std::string r = tag + "r";

    auto refute = [&](const Formula& side, const std::string& l) {
        Derivation widened = infer("or-I", goal, {hyp(cf(a, side), l)});
        Derivation clash = infer("neg-E", bot, {std::move(widened), hyp(neg(goal), r)});
        Derivation no = infer("neg-I", neg(cf(a, side)), {std::move(clash)}, {{l}});
        return infer("neg-boxright-E", cf(a, neg(side)), {std::move(no)});
    };
    Derivation both = infer("boxright-and-I", cf(a, conj(neg(phi), neg(psi))),
                            {refute(phi, tag + "a"), refute(psi, tag + "b")});
    const Formula body = conj(tensor(phi, psi), conj(neg(phi), neg(psi)));
    Derivation joint = infer("boxright-and-I", cf(a, body), {d, std::move(both)});

    const std::string w = tag + "w";
    const Formula negs = conj(neg(phi), neg(psi));
    Derivation not_phi = and_e(neg(phi), and_e(negs, hyp(body, w)));
    Derivation not_psi = and_e(neg(psi), and_e(negs, hyp(body, w)));
    Derivation case_phi = infer("neg-E", bot, {hyp(phi, tag + "p"), std::move(not_phi)});
    Derivation case_psi = infer("neg-E", bot, {hyp(psi, tag + "q"), std::move(not_psi)});
    Derivation contra = infer("or-E", bot, {and_e(tensor(phi, psi), hyp(body, w)), std::move(case_phi), std::move(case_psi)},
                              {{}, {tag + "p"}, {tag + "q"}});
    Derivation cf_bot = infer("boxright-Rpl_C", cf(a, bot), {std::move(joint), std::move(contra)}, {{}, {w}});
    Derivation falsum = infer("boxright-bot-E", bot, {std::move(cf_bot)});
    return infer("RAA", goal, {std::move(falsum)}, {{r}});
}

GoldenDerivation make(std::string name, System sys, const SignaturePtr& sig, std::vector<Formula> gamma,
                      Derivation proof)
{
    GoldenDerivation g;
    g.name = std::move(name);
    g.system = sys;
    g.sig = sig;
    g.assumptions = std::move(gamma);
    g.conclusion = proof.conclusion;
    g.proof = std::move(proof);
    return g;
}

std::optional<Formula> first_dep(const Formula& f)
{
    switch (f.kind()) {
    case Kind::Dep:
        if (!f.determinants().empty())
            return f;
        return std::nullopt;
    case Kind::And:
    case Kind::Tensor:
    case Kind::Global:
        if (auto l = first_dep(f.lhs()))
            return l;
        return first_dep(f.rhs());
    case Kind::Cf: return first_dep(f.operand());
    default: return std::nullopt;
    }
}

void collect_deps(const Formula& f, std::vector<Formula>& out)
{
    switch (f.kind()) {
    case Kind::Dep:
        if (!f.determinants().empty())
            out.push_back(f);
        return;
    case Kind::And:
    case Kind::Tensor:
    case Kind::Global:
        collect_deps(f.lhs(), out);
        collect_deps(f.rhs(), out);
        return;
    case Kind::Cf: collect_deps(f.operand(), out); return;
    default: return;
    }
}

void require_simple(const Formula& d, const Signature& sig)
{
    if (d.determinants().size() != 1 || sig.range_size(d.determinants()[0]) != 2)
        throw InvalidArgument("dependence atoms must have a single binary determinant");
}

}  // namespace

SignaturePtr golden_signature()
{
    return make_signature({{"X", {"0", "1"}}, {"Y", {"0", "1"}}, {"Z", {"0", "1"}}});
}

Derivation dep_normal_form_forward(int x, int y, const SignaturePtr& sig, const std::string& premise_label)
{
    require_simple(dep({x}, y), *sig);
    const Formula d = dep({x}, y);
    const Derivation p = hyp(d, premise_label);
    const Formula vals = tensor(eq(x, 0), eq(x, 1));
    Derivation start = infer("and-I", conj(d, vals), {p, infer("ValDef", vals, {})});
    Derivation split = and_or_dst(start, "~d.");

    auto fix = [&](int v, const std::string& l) {
        const Formula h = conj(d, eq(x, v));
        Derivation cx = infer("ConI", con(x), {and_e(eq(x, v), hyp(h, l))});
        Derivation cy = infer("DepE", con(y), {and_e(d, hyp(h, l)), std::move(cx)});
        return infer("and-I", conj(eq(x, v), con(y)), {and_e(eq(x, v), hyp(h, l)), std::move(cy)});
    };
    const Formula n0 = conj(eq(x, 0), con(y));
    const Formula n1 = conj(eq(x, 1), con(y));
    Derivation r1 = infer("or-Rpl", tensor(n0, conj(d, eq(x, 1))), {std::move(split), fix(0, "~d.a")}, {{}, {"~d.a"}});
    Derivation r2 = infer("or-Com", tensor(conj(d, eq(x, 1)), n0), {std::move(r1)});
    Derivation r3 = infer("or-Rpl", tensor(n1, n0), {std::move(r2), fix(1, "~d.b")}, {{}, {"~d.b"}});
    return infer("or-Com", tensor(n0, n1), {std::move(r3)});
}

Derivation dep_normal_form_backward(int x, int y, const SignaturePtr& sig, const std::string& premise_label)
{
    require_simple(dep({x}, y), *sig);
    const Formula q = star_translate(dep({x}, y), *sig);
    const int ny = sig->range_size(y);
    const Json wy = Json{{"var", sig->name(y)}, {"occurrence", 1}};

    // From X=v and the instantiated normal form, =(Y) via the CO disjunct.
    auto settle = [&](int v, const Formula& q2, const std::string& g, const std::string& ev) {
        const auto parts = flatten(q2, Kind::Tensor);
        const Formula& mine = parts[static_cast<std::size_t>(v)];
        const Formula& other = parts[static_cast<std::size_t>(1 - v)];
        const std::string lm = g + "m";
        const std::string lo = g + "o";
        Derivation no = infer("ValUnq", neg(eq(x, 1 - v)), {hyp(eq(x, v), ev)});
        Derivation clash = infer("neg-E", mine, {and_e(eq(x, 1 - v), hyp(other, lo)), std::move(no)});
        std::vector<Derivation> cases(2);
        cases[static_cast<std::size_t>(v)] = hyp(mine, lm);
        cases[static_cast<std::size_t>(1 - v)] = std::move(clash);
        std::vector<std::vector<std::string>> dis{{}, {}, {}};
        dis[static_cast<std::size_t>(v) + 1] = {lm};
        dis[static_cast<std::size_t>(1 - v) + 1] = {lo};
        Derivation pick =
            infer("or-E", mine, {hyp(q2, g), std::move(cases[0]), std::move(cases[1])}, std::move(dis));
        Derivation yv = and_e(mine.rhs(), std::move(pick));
        return infer("ConI", con(y), {std::move(yv)});
    };

    std::vector<Derivation> per_x{hyp(con(x), "~n.c")};
    std::vector<std::vector<std::string>> dis_x{{}};
    for (int v = 0; v < 2; ++v) {
        const std::string ev = "~n.e" + std::to_string(v);
        std::vector<Derivation> outer{hyp(q, premise_label)};
        std::vector<std::vector<std::string>> dis_o{{}};
        for (int a = 0; a < ny; ++a) {
            const Formula q1 = replace_occurrence(q, con(y), 1, eq(y, a));
            const std::string f = ev + ".f" + std::to_string(a);
            std::vector<Derivation> inner{hyp(q1, f)};
            std::vector<std::vector<std::string>> dis_i{{}};
            for (int b = 0; b < ny; ++b) {
                const Formula q2 = replace_occurrence(q1, con(y), 1, eq(y, b));
                const std::string g = f + ".g" + std::to_string(b);
                inner.push_back(settle(v, q2, g, ev));
                dis_i.push_back({g});
            }
            outer.push_back(infer("ConE", con(y), std::move(inner), std::move(dis_i), wy));
            dis_o.push_back({f});
        }
        per_x.push_back(infer("ConE", con(y), std::move(outer), std::move(dis_o), wy));
        dis_x.push_back({ev});
    }
    Derivation cy = infer("ConE", con(y), std::move(per_x), std::move(dis_x), Json{{"var", sig->name(x)}});
    return infer("DepI", dep({x}, y), {std::move(cy)}, {{"~n.c"}});
}

Derivation star_forward(const Formula& phi, const SignaturePtr& sig, System system)
{
    Derivation cur = hyp(phi);
    while (auto d = first_dep(cur.conclusion)) {
        require_simple(*d, *sig);
        const auto dt = dep_normal_form_forward(d->determinants()[0], d->var(), sig, "~theta");
        cur = substitute_positive(cur, *d, 1, dt, "~theta", system);
    }
    return cur;
}

Derivation star_backward(const Formula& phi, const SignaturePtr& sig, System system)
{
    std::vector<Formula> deps;
    collect_deps(phi, deps);
    Derivation cur = hyp(star_translate(phi, *sig));
    for (const auto& d : deps) {
        require_simple(d, *sig);
        const Formula nf = star_translate(d, *sig);
        const auto dt = dep_normal_form_backward(d.determinants()[0], d.var(), sig, "~theta");
        cur = substitute_positive(cur, nf, 1, dt, "~theta", system);
    }
    return cur;
}

std::vector<GoldenDerivation> golden_derived_rules()
{
    const auto sig = golden_signature();
    const int X = 0, Y = 1, Z = 2;
    const auto A = iv({{X, 1}});
    std::vector<GoldenDerivation> out;

    // Composition: X=x □→ W=w, X=x □→ θ ⊢ (X=x ∧ W=w) □→ θ.
    {
        const Formula theta = tensor(eq(Z, 1), neg(eq(X, 0)));
        const Formula p1 = cf(A, eq(Y, 0));
        const Formula p2 = cf(A, theta);
        Derivation s1 = infer("boxright-and-I", cf(A, conj(eq(Y, 0), theta)), {hyp(p1), hyp(p2)});
        const Formula u = conj(eq(Y, 0), theta);
        Derivation inner =
            infer("boxright-I", cf(iv({{Y, 0}}), theta), {and_e(eq(Y, 0), hyp(u, "u")), and_e(theta, hyp(u, "u"))});
        Derivation s2 =
            infer("boxright-Rpl_C", cf(A, cf(iv({{Y, 0}}), theta)), {std::move(s1), std::move(inner)}, {{}, {"u"}});
        Derivation s3 = infer("boxright-Extr", cf(iv({{X, 1}, {Y, 0}}), theta), {std::move(s2)});
        out.push_back(make("composition", System::co_g, sig, {p1, p2}, std::move(s3)));
    }
    // Weak modus ponens: α, ¬α ∨ β ⊢ β.
    {
        const Formula alpha = eq(X, 1);
        const Formula beta = tensor(eq(Y, 0), cf(iv({{Y, 1}}), eq(Z, 1)));
        const Formula maj = tensor(neg(alpha), beta);
        Derivation left = infer("neg-E", beta, {hyp(alpha), hyp(neg(alpha), "u")});
        Derivation d = infer("or-E", beta, {hyp(maj), std::move(left), hyp(beta, "v")}, {{}, {"u"}, {"v"}});
        out.push_back(make("weak-modus-ponens", System::co_g, sig, {alpha, maj}, std::move(d)));
    }
    // Uniqueness: X=x □→ Y=y ⊢ X=x □→ Y≠y'.
    {
        const Formula p = cf(A, eq(Y, 0));
        Derivation inner = infer("ValUnq", neg(eq(Y, 1)), {hyp(eq(Y, 0), "u")});
        Derivation d = infer("boxright-Rpl_C", cf(A, neg(eq(Y, 1))), {hyp(p), std::move(inner)}, {{}, {"u"}});
        out.push_back(make("uniqueness", System::co_g, sig, {p}, std::move(d)));
    }
    // Extraction of conjuncts.
    {
        const Formula body = conj(eq(Y, 0), cf(iv({{Z, 1}}), eq(Y, 1)));
        const Formula p = cf(A, body);
        Derivation d =
            infer("boxright-Rpl_C", cf(A, eq(Y, 0)), {hyp(p), and_e(eq(Y, 0), hyp(body, "u"))}, {{}, {"u"}});
        out.push_back(make("extraction-of-conjuncts", System::co_g, sig, {p}, std::move(d)));
    }
    // X=x □→ ¬α ⊢ ¬(X=x □→ α) for consistent X=x.
    {
        const Formula alpha = conj(eq(Y, 1), eq(Z, 0));
        const Formula p = cf(A, neg(alpha));
        const Formula both = conj(neg(alpha), alpha);
        Derivation s1 = infer("boxright-and-I", cf(A, both), {hyp(p), hyp(cf(A, alpha), "u")});
        Derivation clash = infer("neg-E", bottom(), {and_e(alpha, hyp(both, "w")), and_e(neg(alpha), hyp(both, "w"))});
        Derivation s2 = infer("boxright-Rpl_C", cf(A, bottom()), {std::move(s1), std::move(clash)}, {{}, {"w"}});
        Derivation s3 = infer("boxright-bot-E", bottom(), {std::move(s2)});
        Derivation d = infer("neg-I", neg(cf(A, alpha)), {std::move(s3)}, {{"u"}});
        out.push_back(make("negated-consequent", System::co_g, sig, {p}, std::move(d)));
    }
    // □→ over ∨, both directions, inside CO.
    {
        const Formula phi = eq(Y, 1);
        const Formula psi = cf(iv({{Y, 0}}), eq(Z, 0));
        const Formula p = cf(A, tensor(phi, psi));
        out.push_back(make("cf-or-split", System::co_g, sig, {p}, cf_or_split(hyp(p), "")));

        const Formula q = tensor(cf(A, phi), cf(A, psi));
        const Formula goal = cf(A, tensor(phi, psi));
        Derivation l = infer("boxright-Rpl_C", goal,
                             {hyp(cf(A, phi), "a"), infer("or-I", tensor(phi, psi), {hyp(phi, "p")})}, {{}, {"p"}});
        Derivation r = infer("boxright-Rpl_C", goal,
                             {hyp(cf(A, psi), "b"), infer("or-I", tensor(phi, psi), {hyp(psi, "q")})}, {{}, {"q"}});
        Derivation d = infer("or-E", goal, {hyp(q), std::move(l), std::move(r)}, {{}, {"a"}, {"b"}});
        out.push_back(make("cf-or-join", System::co_g, sig, {q}, std::move(d)));
    }
    // Definiteness: ⊢ ⋁_y (X=x □→ Y=y).
    {
        const Formula vals = tensor(eq(Y, 0), eq(Y, 1));
        Derivation eff = infer("boxright-Eff", cf(A, eq(X, 1)), {});
        Derivation s = infer("boxright-Rpl_C", cf(A, vals), {std::move(eff), infer("ValDef", vals, {})});
        out.push_back(make("definiteness", System::co_g, sig, {}, cf_or_split(s, "")));
    }

    // ∨∨ clauses.
    const Formula phi = eq(X, 1);
    const Formula psi = cf(iv({{X, 0}}), eq(Y, 1));
    const Formula chi = tensor(eq(Z, 0), eq(Y, 0));
    {
        const Formula p = global(phi, psi);
        Derivation d = infer("gor-E", global(psi, phi),
                             {hyp(p), infer("gor-I", global(psi, phi), {hyp(phi, "a")}),
                              infer("gor-I", global(psi, phi), {hyp(psi, "b")})},
                             {{}, {"a"}, {"b"}});
        out.push_back(make("gor-commutativity", System::cov_g, sig, {p}, std::move(d)));
    }
    {
        const Formula p = global(global(phi, psi), chi);
        const Formula goal = global(phi, global(psi, chi));
        auto lift = [&](const Formula& f, const std::string& l) {
            return infer("gor-I", goal, {infer("gor-I", global(psi, chi), {hyp(f, l)})});
        };
        Derivation inner = infer("gor-E", goal,
                                 {hyp(global(phi, psi), "a"), infer("gor-I", goal, {hyp(phi, "b")}), lift(psi, "c")},
                                 {{}, {"b"}, {"c"}});
        Derivation d = infer("gor-E", goal, {hyp(p), std::move(inner), lift(chi, "d")}, {{}, {"a"}, {"d"}});
        out.push_back(make("gor-associativity", System::cov_g, sig, {p}, std::move(d)));
    }
    {
        const Formula p = conj(phi, global(psi, chi));
        const Formula goal = global(conj(phi, psi), conj(phi, chi));
        auto side = [&](const Formula& f, const std::string& l) {
            return infer("gor-I", goal, {infer("and-I", conj(phi, f), {and_e(phi, hyp(p)), hyp(f, l)})});
        };
        Derivation d = infer("gor-E", goal, {and_e(global(psi, chi), hyp(p)), side(psi, "a"), side(chi, "b")},
                             {{}, {"a"}, {"b"}});
        out.push_back(make("and-gor-split", System::cov_g, sig, {p}, std::move(d)));

        const Formula q = goal;
        auto back = [&](const Formula& f, const std::string& l) {
            const Formula h = conj(phi, f);
            return infer("and-I", p, {and_e(phi, hyp(h, l)), infer("gor-I", global(psi, chi), {and_e(f, hyp(h, l))})});
        };
        Derivation e = infer("gor-E", p, {hyp(q), back(psi, "a"), back(chi, "b")}, {{}, {"a"}, {"b"}});
        out.push_back(make("and-gor-join", System::cov_g, sig, {q}, std::move(e)));
    }
    {
        const Formula p = conj(phi, tensor(psi, chi));
        out.push_back(make("and-or-split", System::cov_g, sig, {p}, and_or_dst(hyp(p), "")));
    }
    {
        const Formula q = global(tensor(phi, psi), tensor(phi, chi));
        const Formula goal = tensor(phi, global(psi, chi));
        auto back = [&](const Formula& f, const std::string& l, const std::string& m) {
            Derivation swapped = infer("or-Com", tensor(f, phi), {hyp(tensor(phi, f), l)});
            Derivation lifted = infer("gor-I", global(psi, chi), {hyp(f, m)});
            Derivation rpl = infer("or-Rpl", tensor(global(psi, chi), phi), {std::move(swapped), std::move(lifted)},
                                   {{}, {m}});
            return infer("or-Com", goal, {std::move(rpl)});
        };
        Derivation d = infer("gor-E", goal, {hyp(q), back(psi, "a", "c"), back(chi, "b", "d")}, {{}, {"a"}, {"b"}});
        out.push_back(make("or-gor-join", System::cov_g, sig, {q}, std::move(d)));
    }
    {
        const Formula q = global(cf(A, psi), cf(A, chi));
        const Formula goal = cf(A, global(psi, chi));
        auto back = [&](const Formula& f, const std::string& l, const std::string& m) {
            return infer("boxright-Rpl_C", goal, {hyp(cf(A, f), l), infer("gor-I", global(psi, chi), {hyp(f, m)})},
                         {{}, {m}});
        };
        Derivation d = infer("gor-E", goal, {hyp(q), back(psi, "a", "c"), back(chi, "b", "d")}, {{}, {"a"}, {"b"}});
        out.push_back(make("cf-gor-join", System::cov_g, sig, {q}, std::move(d)));
    }

    // Dependence atoms.
    {
        const Formula p = dep({X}, Y);
        out.push_back(make("dep-normal-form", System::cod_g, sig, {p}, dep_normal_form_forward(X, Y, sig, "")));
        const Formula q = star_translate(p, *sig);
        out.push_back(make("dep-normal-form-converse", System::cod_g, sig, {q},
                           dep_normal_form_backward(X, Y, sig, "")));
    }
    {
        const Formula p = conj(dep({Z}, Y), eq(X, 0));
        Derivation d = infer("DepE", con(Y), {and_e(dep({Z}, Y), hyp(p)), infer("ConI", con(Z), {hyp(eq(Z, 1))})});
        out.push_back(make("dep-with-value", System::cod_g, sig, {p, eq(Z, 1)}, std::move(d)));
    }
    {
        const Formula phi_m = tensor(cf(iv({{Z, 1}}), conj(dep({X}, Y), eq(X, 0))), eq(Z, 0));
        const auto dt = dep_normal_form_forward(X, Y, sig, "t");
        Derivation d = substitute_positive(hyp(phi_m), dep({X}, Y), 1, dt, "t", System::cod_g);
        out.push_back(make("monotone-substitution", System::cod_g, sig, {phi_m}, std::move(d)));

        const Formula phi_s = conj(dep({X}, Y), tensor(cf(iv({{X, 1}}), dep({Z}, Y)), con(Z)));
        out.push_back(make("star-normal-form", System::cod_g, sig, {phi_s}, star_forward(phi_s, sig, System::cod_g)));
        out.push_back(make("star-normal-form-converse", System::cod_g, sig, {star_translate(phi_s, *sig)},
                           star_backward(phi_s, sig, System::cod_g)));
    }
    // ∨∨ normal form of a formula with a counterfactual, through positive substitution.
    {
        const Formula f = cf(A, global(eq(Y, 0), eq(Y, 1)));
        const Formula split = global(cf(A, eq(Y, 0)), cf(A, eq(Y, 1)));
        Derivation d = infer("boxright-gor-Dst", split, {hyp(f)});
        out.push_back(make("cf-gor-split", System::cov_g, sig, {f}, std::move(d)));
    }
    return out;
}

}  // namespace ctlab
