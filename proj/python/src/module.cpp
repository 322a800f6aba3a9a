#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ctlab/charform.hpp"
#include "ctlab/decision.hpp"
#include "ctlab/derivation.hpp"
#include "ctlab/error.hpp"
#include "ctlab/fuzz.hpp"
#include "ctlab/intervention.hpp"
#include "ctlab/io.hpp"
#include "ctlab/syntax.hpp"

namespace py = pybind11;
using namespace ctlab;

namespace {

// pybind11 holders cannot point to const, so signatures travel in a box.
struct PySig {
    SignaturePtr ptr;
    const Signature& operator*() const { return *ptr; }
    const Signature* operator->() const { return ptr.get(); }
    operator const SignaturePtr&() const { return ptr; }
};

// Teams cross the boundary with their signature and kind attached.
struct PyTeam {
    SignaturePtr sig;
    Semantics kind = Semantics::generalized;
    GeneralizedCausalTeam team;

    std::string to_json() const
    {
        if (kind == Semantics::causal)
            return dump_json(team_to_json(to_causal(team), true));
        return dump_json(team_to_json(team, kind, true));
    }
};

PyTeam from_loaded(LoadedTeam lt) { return {lt.sig, lt.kind, std::move(lt.team)}; }

Semantics semantics_of(const std::string& s)
{
    if (s == "c" || s == "causal")
        return Semantics::causal;
    if (s == "g" || s == "generalized")
        return Semantics::generalized;
    throw InvalidArgument("unknown semantics '" + s + "' (use c or g)");
}

std::vector<Formula> parse_all(const std::vector<std::string>& texts, const Signature& sig)
{
    std::vector<Formula> out;
    for (const auto& t : texts)
        out.push_back(parse_formula(t, sig));
    return out;
}

}  // namespace

PYBIND11_MODULE(_ctlab, m)
{
    m.doc() = "Causal team semantics: satisfaction, interventions, entailment and proof checking";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<SignatureMismatch>(m, "SignatureMismatch", base);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base);

    py::class_<PySig>(m, "Signature")
        .def_static(
            "from_json", [](const std::string& text) { return PySig{signature_from_json(parse_json(text))}; },
            py::arg("text"))
        .def("to_json", [](const PySig& s) { return dump_json(signature_to_json(*s)); })
        .def("__len__", [](const PySig& s) { return s->size(); });

    m.def(
        "make_signature",
        [](const std::vector<std::pair<std::string, std::vector<std::string>>>& vars) {
            std::vector<Signature::Variable> vs;
            for (const auto& [name, range] : vars)
                vs.push_back({name, range});
            return PySig{make_signature(std::move(vs))};
        },
        py::arg("variables"), "Signature from [(name, [values...]), ...].");

    py::class_<PyTeam>(m, "Team")
        .def_static(
            "from_json",
            [](const std::string& text, const std::optional<PySig>& sig) {
                return from_loaded(team_from_json(parse_json(text), sig ? sig->ptr : nullptr));
            },
            py::arg("text"), py::arg("sig") = py::none())
        .def_static(
            "load", [](const std::string& path) { return from_loaded(team_from_json(load_json_file(path))); },
            py::arg("path"))
        .def("to_json", &PyTeam::to_json)
        .def_property_readonly("signature", [](const PyTeam& t) { return PySig{t.sig}; })
        .def_property_readonly("kind", [](const PyTeam& t) { return t.kind == Semantics::causal ? "causal" : "generalized"; })
        .def("__len__", [](const PyTeam& t) { return t.team.size(); })
        .def(
            "satisfies",
            [](const PyTeam& t, const std::string& formula) {
                SatContext ctx;
                return ctx.satisfies(t.team, parse_formula(formula, *t.sig));
            },
            py::arg("formula"))
        .def(
            "intervene",
            [](const PyTeam& t, const std::string& spec) {
                const auto iv = parse_intervention(spec, *t.sig);
                if (t.kind == Semantics::causal)
                    return PyTeam{t.sig, t.kind, to_generalized(intervene_causal_team(to_causal(t.team), iv))};
                return PyTeam{t.sig, t.kind, intervene_gct(t.team, iv)};
            },
            py::arg("spec"));

    m.def(
        "normalize_formula",
        [](const std::string& text, const PySig& sig) { return print_formula(parse_formula(text, *sig), *sig); },
        py::arg("text"), py::arg("sig"), "Parse and print back in canonical form.");
    m.def(
        "classify",
        [](const std::string& text, const PySig& sig) {
            return std::string(language_name(classify(parse_formula(text, *sig))));
        },
        py::arg("text"), py::arg("sig"));

    m.def(
        "entails",
        [](const std::vector<std::string>& gamma, const std::string& phi, const PySig& sig,
           const std::string& semantics) -> py::tuple {
            SatContext ctx;
            const auto sem = semantics_of(semantics);
            const auto r = decide_entails(parse_all(gamma, *sig), parse_formula(phi, *sig), sig.ptr, sem, ctx);
            py::object cx = py::none();
            if (r.counterexample)
                cx = py::cast(PyTeam{sig.ptr, sem, *r.counterexample});
            return py::make_tuple(r.holds, cx);
        },
        py::arg("gamma"), py::arg("phi"), py::arg("sig"), py::arg("semantics") = "g",
        "Decide gamma |= phi; returns (holds, counterexample team or None).");

    m.def(
        "uniformity", [](const PySig& sig) { return print_formula(build_unf(sig.ptr).formula, *sig); },
        py::arg("sig"));
    m.def(
        "chi_k",
        [](const PySig& sig, long long k) { return print_formula(build_chi_k(sig.ptr, k).formula, *sig); },
        py::arg("sig"), py::arg("k"));
    m.def(
        "xi", [](const PyTeam& t) { return print_formula(build_xi(t.team).formula, *t.sig); }, py::arg("team"));
    m.def(
        "leadsto",
        [](const std::string& x, const std::string& y, const PySig& sig) {
            return print_formula(build_leadsto(sig->index_of(x), sig->index_of(y), sig.ptr).formula, *sig);
        },
        py::arg("cause"), py::arg("effect"), py::arg("sig"));

    m.def(
        "rule_names",
        [](const std::string& system) {
            std::vector<std::string> out;
            if (system.empty()) {
                for (const auto& r : rule_registry())
                    out.push_back(r.name);
            } else {
                for (const auto* r : rules_of(parse_system(system)))
                    out.push_back(r->name);
            }
            return out;
        },
        py::arg("system") = "");
    m.def(
        "check_proof",
        [](const std::string& text, const std::string& system) {
            const auto pf = proof_from_json(parse_json(text));
            std::optional<System> s = system.empty() ? pf.system : std::optional<System>(parse_system(system));
            if (!s)
                throw InvalidArgument("the proof names no system; pass one");
            const auto r = check_derivation(pf.proof, *s, pf.sig, pf.assumptions);
            py::dict d;
            d["ok"] = r.ok;
            d["path"] = r.path;
            d["reason"] = r.reason;
            return d;
        },
        py::arg("text"), py::arg("system") = "");
    m.def(
        "fuzz_rule",
        [](const std::string& rule, const std::string& system, std::size_t trials, std::uint64_t seed) {
            FuzzOptions opts;
            opts.trials = trials;
            opts.seed = seed;
            const auto r = rule_soundness_fuzz(rule, parse_system(system), fuzz_signature(), opts);
            py::dict d;
            d["trials"] = r.trials;
            d["effective"] = r.effective;
            d["violations"] = r.violations;
            return d;
        },
        py::arg("rule"), py::arg("system"), py::arg("trials") = 200, py::arg("seed") = FuzzOptions{}.seed);
}
