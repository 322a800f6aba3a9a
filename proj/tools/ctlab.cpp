// ctlab: command-line front end.
//
// Exit codes: 0 ok/true, 1 false/rejected, 2 file or parse error, 3 budget exceeded.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctlab/charform.hpp"
#include "ctlab/decision.hpp"
#include "ctlab/derivation.hpp"
#include "ctlab/error.hpp"
#include "ctlab/fuzz.hpp"
#include "ctlab/golden.hpp"
#include "ctlab/intervention.hpp"
#include "ctlab/io.hpp"
#include "ctlab/semantics.hpp"
#include "ctlab/synthesis.hpp"
#include "ctlab/syntax.hpp"

using namespace ctlab;

namespace {

enum Exit { kOk = 0, kFalse = 1, kInput = 2, kBudget = 3 };

struct RunConfig {
    std::string sig_path;
    std::vector<std::string> team_paths;
    std::string formula;
    std::string formula_file;
    std::string semantics;
    std::string format = "human";
    std::uint64_t seed = 20240601;
    unsigned jobs = 1;
    std::size_t team_cap = 0;
    std::size_t budget_nodes = 0;
    std::size_t trials = 200;

    bool machine() const { return format == "machine"; }

    Limits limits() const
    {
        Limits l = Limits::defaults();
        if (budget_nodes)
            l.nodes = budget_nodes;
        if (team_cap)
            l.team_cap = team_cap;
        return l;
    }
};

// Line-oriented output: "key=value" in machine mode, "key: value" otherwise.
class Out {
public:
    explicit Out(const RunConfig& c) : machine_(c.machine()) {}
    void kv(const std::string& k, const std::string& v) const
    {
        std::cout << k << (machine_ ? "=" : ": ") << v << "\n";
    }
    void text(const std::string& s) const
    {
        if (!machine_)
            std::cout << s << "\n";
    }
    bool machine() const { return machine_; }

private:
    bool machine_;
};

Semantics parse_semantics(const std::string& s)
{
    if (s == "c" || s == "causal")
        return Semantics::causal;
    if (s == "g" || s == "generalized")
        return Semantics::generalized;
    throw ParseError("semantics must be c or g, got '" + s + "'");
}

SignaturePtr load_sig(const RunConfig& c)
{
    if (c.sig_path.empty())
        return nullptr;
    return signature_from_json(load_json_file(c.sig_path));
}

LoadedTeam load_team(const std::string& path, const SignaturePtr& sig)
{
    return team_from_json(load_json_file(path), sig);
}

// The signature from --sig, else the first team's embedded signature.
SignaturePtr need_sig(const RunConfig& c)
{
    if (auto s = load_sig(c))
        return s;
    if (!c.team_paths.empty())
        return load_team(c.team_paths.front(), nullptr).sig;
    throw ParseError("a signature is required (--sig or a team file with an embedded signature)");
}

std::vector<Formula> read_formulas(const std::string& text, const std::string& file, const Signature& sig)
{
    std::vector<Formula> out;
    if (!text.empty())
        out.push_back(parse_formula(text, sig));
    if (!file.empty())
        for (auto& f : parse_formula_lines(read_text_file(file), sig))
            out.push_back(std::move(f));
    return out;
}

int var_index(const Signature& sig, const std::string& name) { return sig.index_of(name); }

const char* yes_no(bool b) { return b ? "true" : "false"; }

std::string compact(const Json& j) { return j.dump(); }

// ----- subcommands ---------------------------------------------------------------

int cmd_check(const RunConfig& c)
{
    const Out out(c);
    SignaturePtr sig = load_sig(c);
    std::optional<LoadedTeam> team;
    if (!c.team_paths.empty()) {
        team = load_team(c.team_paths.front(), sig);
        sig = team->sig;
    }
    if (!sig)
        throw ParseError("check needs --team or --sig");
    const auto formulas = read_formulas(c.formula, c.formula_file, *sig);
    if (formulas.empty())
        throw ParseError("check needs --formula or --formula-file");

    Semantics sem = team ? team->kind : Semantics::generalized;
    if (!c.semantics.empty())
        sem = parse_semantics(c.semantics);
    if (team && sem == Semantics::causal && team->kind != Semantics::causal)
        throw ParseError("causal semantics needs a causal team");

    SatContext ctx(c.limits());
    const GeneralizedCausalTeam t = team ? team->team : GeneralizedCausalTeam(sig);
    bool all = true;
    for (const auto& f : formulas) {
        validate(f, *sig);
        const bool v =
            team && sem == Semantics::causal ? ctx.satisfies(causal_from_loaded(*team), f) : ctx.satisfies(t, f);
        all = all && v;
        if (out.machine()) {
            out.kv("formula", print_formula(f, *sig));
            out.kv("satisfied", yes_no(v));
        } else {
            std::cout << (v ? "satisfied: " : "not satisfied: ") << print_formula(f, *sig) << "\n";
        }
    }
    return all ? kOk : kFalse;
}

int cmd_intervene(const RunConfig& c, const std::string& spec, const std::string& output)
{
    if (c.team_paths.empty())
        throw ParseError("intervene needs --team");
    const auto lt = load_team(c.team_paths.front(), load_sig(c));
    const auto iv = parse_intervention(spec, *lt.sig);
    Json j;
    if (lt.kind == Semantics::causal)
        j = team_to_json(intervene_causal_team(causal_from_loaded(lt), iv), true);
    else
        j = team_to_json(intervene_gct(lt.team, iv), Semantics::generalized, true);
    if (output.empty())
        std::cout << dump_json(j);
    else
        write_text_file(output, dump_json(j));
    return kOk;
}

int cmd_entail(const RunConfig& c, const std::vector<std::string>& gamma, const std::string& gamma_file,
               const std::string& phi)
{
    const Out out(c);
    const auto sig = need_sig(c);
    std::vector<Formula> g;
    for (const auto& s : gamma)
        g.push_back(parse_formula(s, *sig));
    if (!gamma_file.empty())
        for (auto& f : parse_formula_lines(read_text_file(gamma_file), *sig))
            g.push_back(std::move(f));
    const auto psi = parse_formula(phi, *sig);
    const Semantics sem = parse_semantics(c.semantics.empty() ? "g" : c.semantics);
    SatContext ctx(c.limits());
    const auto r = decide_entails(g, psi, sig, sem, ctx);
    out.kv("semantics", semantics_name(sem));
    out.kv("entails", yes_no(r.holds));
    out.kv("gamma_disjuncts", std::to_string(r.gamma_disjuncts));
    out.kv("psi_disjuncts", std::to_string(r.psi_disjuncts));
    if (r.counterexample) {
        const Json j = sem == Semantics::causal ? team_to_json(*r.counterexample, Semantics::causal)
                                                : team_to_json(*r.counterexample);
        if (out.machine())
            out.kv("counterexample", compact(j));
        else
            std::cout << "counterexample:\n" << dump_json(j);
    }
    return r.holds ? kOk : kFalse;
}

struct EmitArgs {
    std::string which;
    std::string from, to, var;
    std::string law_path;
    long long k = -1;
    bool tensor = false;
    bool unreduced = false;
};

int cmd_emit(const RunConfig& c, const EmitArgs& a)
{
    const Out out(c);
    const auto limits = c.limits();
    std::optional<LoadedTeam> team;
    SignaturePtr sig = load_sig(c);
    if (!c.team_paths.empty()) {
        team = load_team(c.team_paths.front(), sig);
        sig = team->sig;
    }
    if (!sig)
        throw ParseError("emit needs --sig or --team");
    auto need_team = [&]() -> const LoadedTeam& {
        if (!team)
            throw ParseError("emit " + a.which + " needs --team");
        return *team;
    };

    CharFormula cf;
    if (a.which == "phi") {
        std::optional<FunctionSystem> law;
        if (!a.law_path.empty()) {
            law = law_from_json(load_json_file(a.law_path), sig);
        } else {
            const auto& t = need_team();
            const auto laws = t.team.laws();
            if (laws.size() != 1)
                throw ParseError("emit phi needs --law or a team with exactly one law");
            law = *laws.front();
        }
        cf = build_phi(*law, limits);
    } else if (a.which == "theta") {
        cf = build_theta(need_team().team.rows(), sig, limits);
    } else if (a.which == "chi") {
        cf = a.k >= 0 ? build_chi_k(sig, a.k, limits) : build_chi(sig, limits);
    } else if (a.which == "xi") {
        cf = a.unreduced ? build_xi_unreduced(need_team().team, limits) : build_xi(need_team().team, limits);
    } else if (a.which == "unf") {
        cf = a.tensor ? build_unf_tensor(sig, limits) : build_unf(sig, limits);
    } else if (a.which == "leadsto" || a.which == "dc") {
        if (a.from.empty() || a.to.empty())
            throw ParseError("emit " + a.which + " needs --from and --to");
        const int x = var_index(*sig, a.from), y = var_index(*sig, a.to);
        cf = a.which == "leadsto" ? build_leadsto(x, y, sig, limits) : build_direct_cause(x, y, sig, limits);
    } else if (a.which == "beta_en") {
        if (a.var.empty())
            throw ParseError("emit beta_en needs --var");
        cf = build_beta_en(var_index(*sig, a.var), sig, limits);
    } else {
        throw ParseError("unknown formula kind '" + a.which + "'");
    }
    if (out.machine()) {
        out.kv("constructor", cf.constructor);
        for (const auto& [k, v] : cf.params)
            out.kv("param." + k, v);
        out.kv("size", std::to_string(cf.formula.size()));
        out.kv("formula", print_formula(cf.formula, *sig));
    } else {
        std::cout << print_formula(cf.formula, *sig) << "\n";
    }
    return kOk;
}

int cmd_synthesize(const RunConfig& c, const std::string& class_path, const std::string& target)
{
    const Out out(c);
    const auto lc = class_from_json(load_json_file(class_path), load_sig(c));
    SatContext ctx(c.limits());
    const auto k = make_class(lc.sig, lc.kind, lc.teams, ctx);
    Formula f;
    if (target == "co")
        f = synthesize_co(k, ctx);
    else if (target == "cod")
        f = synthesize_cod(k, ctx);
    else
        throw ParseError("target must be co or cod");
    if (out.machine()) {
        out.kv("target", target);
        out.kv("size", std::to_string(f.size()));
        out.kv("formula", print_formula(f, *lc.sig));
    } else {
        std::cout << print_formula(f, *lc.sig) << "\n";
    }
    return kOk;
}

int cmd_verify(const RunConfig& c, const std::string& class_path)
{
    const Out out(c);
    const auto lc = class_from_json(load_json_file(class_path), load_sig(c));
    const auto fs = read_formulas(c.formula, c.formula_file, *lc.sig);
    if (fs.size() != 1)
        throw ParseError("verify needs exactly one formula");
    SatContext ctx(c.limits());
    const auto k = make_class(lc.sig, lc.kind, lc.teams, ctx);
    const auto mismatch = definition_mismatch(fs.front(), k, ctx);
    out.kv("defines", yes_no(!mismatch));
    if (mismatch) {
        const Json j = team_to_json(*mismatch, lc.kind);
        if (out.machine())
            out.kv("mismatch", compact(j));
        else
            std::cout << "mismatch:\n" << dump_json(j);
    }
    return mismatch ? kFalse : kOk;
}

int cmd_proof_check(const RunConfig& c, const std::string& file, const std::string& system)
{
    const Out out(c);
    const auto pf = proof_from_json(load_json_file(file), load_sig(c));
    std::optional<System> sys = pf.system;
    if (!system.empty())
        sys = parse_system(system);
    if (!sys)
        throw ParseError("no system given (--system or \"system\" in the proof file)");
    const auto r = check_derivation(pf.proof, *sys, pf.sig, pf.assumptions, c.limits());
    out.kv("system", system_name(*sys));
    out.kv("valid", yes_no(r.ok));
    if (r.ok) {
        out.kv("conclusion", print_formula(pf.proof.conclusion, *pf.sig));
        for (const auto& f : r.open)
            out.kv("open", print_formula(f, *pf.sig));
    } else {
        out.kv("path", r.path);
        out.kv("reason", r.reason);
    }
    return r.ok ? kOk : kFalse;
}

int cmd_proof_rules(const RunConfig& c, const std::string& system)
{
    const Out out(c);
    std::optional<System> only;
    if (!system.empty())
        only = parse_system(system);
    for (const auto& r : rule_registry()) {
        if (only && !r.in(*only))
            continue;
        std::string systems;
        for (auto s : r.systems)
            systems += (systems.empty() ? "" : ",") + std::string(system_name(s));
        if (out.machine()) {
            std::cout << "rule=" << r.name << " display=" << r.display << " systems=" << systems << "\n";
        } else {
            std::cout << r.name << "  (" << r.display << ")  " << (r.premises.empty() ? "-" : r.premises) << "  ⊢  "
                      << r.conclusion;
            if (!r.side.empty())
                std::cout << "  [" << r.side << "]";
            std::cout << "  {" << systems << "}\n";
        }
    }
    return kOk;
}

int cmd_proof_golden(const RunConfig& c, const std::string& dir)
{
    const Out out(c);
    std::filesystem::create_directories(dir);
    for (const auto& g : golden_derived_rules()) {
        ProofFile pf{g.sig, g.system, g.assumptions, g.proof};
        const auto path = (std::filesystem::path(dir) / (g.name + ".json")).string();
        write_text_file(path, dump_json(proof_to_json(pf, true)));
        out.kv("wrote", path);
    }
    return kOk;
}

int cmd_fuzz(const RunConfig& c, const std::string& rule, const std::string& system)
{
    const Out out(c);
    const auto sig = c.sig_path.empty() ? fuzz_signature() : load_sig(c);
    const RuleSchema* schema = find_rule(rule);
    if (!schema)
        throw ParseError("unknown rule '" + rule + "'");
    std::vector<System> systems;
    if (!system.empty())
        systems.push_back(parse_system(system));
    else
        systems = schema->systems;
    FuzzOptions o;
    o.trials = c.trials;
    o.seed = c.seed;
    o.jobs = c.jobs;
    o.team_cap = c.team_cap ? c.team_cap : o.team_cap;
    bool clean = true;
    for (auto s : systems) {
        const auto r = rule_soundness_fuzz(rule, s, sig, o);
        clean = clean && r.ok();
        if (out.machine()) {
            std::cout << "rule=" << r.rule << " system=" << system_name(s) << " trials=" << r.trials
                      << " effective=" << r.effective << " rejected=" << r.rejected
                      << " violations=" << r.violations.size() << "\n";
        } else {
            std::cout << r.rule << " in " << system_name(s) << ": " << r.trials << " instances, " << r.effective
                      << " effective, " << r.violations.size() << " violations\n";
        }
        for (const auto& v : r.violations)
            out.kv("violation", v);
    }
    return clean ? kOk : kFalse;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Causal team logics: satisfaction, entailment, characteristic formulas, proofs"};
    app.require_subcommand(1);
    RunConfig cfg;

    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"human", "machine"}));
    app.add_flag_callback("--machine", [&] { cfg.format = "machine"; }, "Same as --format machine");
    app.add_option("--seed", cfg.seed, "Seed for all randomness");
    app.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--team-cap", cfg.team_cap, "Largest team split by subset enumeration")
        ->check(CLI::PositiveNumber);
    app.add_option("--budget-nodes", cfg.budget_nodes, "Node budget (overrides CTLAB_BUDGET_NODES)")
        ->check(CLI::PositiveNumber);

    auto add_sig = [&](CLI::App* s) { s->add_option("--sig", cfg.sig_path, "Signature file"); };
    auto add_team = [&](CLI::App* s) { s->add_option("--team", cfg.team_paths, "Team file"); };
    auto add_formula = [&](CLI::App* s) {
        s->add_option("--formula", cfg.formula, "Formula text");
        s->add_option("--formula-file", cfg.formula_file, "Formula file, one per line");
    };
    auto add_sem = [&](CLI::App* s) {
        s->add_option("--semantics", cfg.semantics, "c (causal) or g (generalized)");
    };

    auto* check = app.add_subcommand("check", "Does the team satisfy the formula");
    add_sig(check);
    add_team(check);
    add_formula(check);
    add_sem(check);

    std::string do_spec, output;
    auto* intervene = app.add_subcommand("intervene", "Apply do(X=x) to a team");
    add_sig(intervene);
    add_team(intervene);
    intervene->add_option("--do", do_spec, "Antecedent, e.g. \"X=1 & Y=0\"")->required();
    intervene->add_option("-o,--output", output, "Write the team here instead of stdout");

    std::vector<std::string> gamma;
    std::string gamma_file, phi;
    auto* entail = app.add_subcommand("entail", "Decide Γ ⊨ φ");
    add_sig(entail);
    add_team(entail);
    add_sem(entail);
    entail->add_option("--gamma", gamma, "Premise (repeatable)");
    entail->add_option("--gamma-file", gamma_file, "Premises, one per line");
    entail->add_option("--phi", phi, "Conclusion")->required();

    EmitArgs ea;
    auto* emit = app.add_subcommand("emit", "Print a characteristic formula");
    emit->add_option("which", ea.which, "phi|theta|chi|xi|unf|leadsto|dc|beta_en")
        ->required()
        ->check(CLI::IsMember({"phi", "theta", "chi", "xi", "unf", "leadsto", "dc", "beta_en"}));
    add_sig(emit);
    add_team(emit);
    emit->add_option("--law", ea.law_path, "Laws file for phi");
    emit->add_option("--from", ea.from, "Cause variable");
    emit->add_option("--to", ea.to, "Effect variable");
    emit->add_option("--var", ea.var, "Variable for beta_en");
    emit->add_option("--k", ea.k, "Bound for chi_k");
    emit->add_flag("--tensor", ea.tensor, "unf with ∨ instead of ∨∨");
    emit->add_flag("--unreduced", ea.unreduced, "xi over every law instead of one per class");

    std::string class_path, target;
    auto* synth = app.add_subcommand("synthesize", "Formula defining a class of teams");
    add_sig(synth);
    synth->add_option("--class", class_path, "Class file")->required();
    synth->add_option("--target", target, "co or cod")->required()->check(CLI::IsMember({"co", "cod"}));

    auto* verify = app.add_subcommand("verify", "Does the formula define the class");
    add_sig(verify);
    add_formula(verify);
    verify->add_option("--class", class_path, "Class file")->required();

    std::string proof_file, system, golden_dir;
    auto* proof = app.add_subcommand("proof", "Natural deduction derivations");
    proof->require_subcommand(1);
    auto* pcheck = proof->add_subcommand("check", "Check a derivation file");
    pcheck->add_option("file", proof_file, "Derivation JSON")->required();
    pcheck->add_option("--system", system, "co-g|cov-g|cod-g|cov-c|cod-c");
    add_sig(pcheck);
    auto* prules = proof->add_subcommand("rules", "List rule names");
    prules->add_option("--system", system, "Only rules of this system");
    auto* pgolden = proof->add_subcommand("golden", "Write the derived-rule fixtures as JSON");
    pgolden->add_option("dir", golden_dir, "Output directory")->required();

    std::string rule;
    auto* fuzz = app.add_subcommand("fuzz-rule", "Soundness fuzzing of one rule");
    fuzz->add_option("--rule", rule, "Rule name")->required();
    add_sig(fuzz);
    fuzz->add_option("--system", system, "Only this system");
    fuzz->add_option("--trials", cfg.trials, "Accepted instances per system")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    try {
        if (*check)
            return cmd_check(cfg);
        if (*intervene)
            return cmd_intervene(cfg, do_spec, output);
        if (*entail)
            return cmd_entail(cfg, gamma, gamma_file, phi);
        if (*emit)
            return cmd_emit(cfg, ea);
        if (*synth)
            return cmd_synthesize(cfg, class_path, target);
        if (*verify)
            return cmd_verify(cfg, class_path);
        if (*pcheck)
            return cmd_proof_check(cfg, proof_file, system);
        if (*prules)
            return cmd_proof_rules(cfg, system);
        if (*pgolden)
            return cmd_proof_golden(cfg, golden_dir);
        if (*fuzz)
            return cmd_fuzz(cfg, rule, system);
    } catch (const BudgetExceeded& e) {
        std::cerr << "ctlab: budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const Error& e) {
        std::cerr << "ctlab: " << e.what() << "\n";
        return kInput;
    } catch (const Json::exception& e) {
        std::cerr << "ctlab: malformed JSON: " << e.what() << "\n";
        return kInput;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "ctlab: " << e.what() << "\n";
        return kInput;
    }
    return kInput;
}
