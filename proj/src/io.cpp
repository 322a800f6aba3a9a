#include "ctlab/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "ctlab/error.hpp"

namespace ctlab {

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParseError("cannot write " + path);
    out << text;
}

Json parse_json(const std::string& text, const std::string& origin)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

Json load_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

namespace {

const Json& member(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing \"") + key + "\"");
    return j.at(key);
}

std::string text(const Json& j, const char* what)
{
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_number_integer())
        return std::to_string(j.get<long long>());
    throw ParseError(std::string("expected a string for ") + what);
}

int value_of(const Signature& sig, int v, const Json& j) { return sig.value_index(v, text(j, "value")); }

Semantics kind_from(const Json& j)
{
    if (!j.contains("kind"))
        return Semantics::generalized;
    const auto k = text(j.at("kind"), "kind");
    if (k == "causal")
        return Semantics::causal;
    if (k == "generalized")
        return Semantics::generalized;
    throw ParseError("unknown team kind \"" + k + "\"");
}

}  // namespace

Json signature_to_json(const Signature& sig)
{
    Json vars = Json::array();
    for (const auto& v : sig.variables())
        vars.push_back(Json{{"name", v.name}, {"range", v.range}});
    return Json{{"variables", vars}};
}

SignaturePtr signature_from_json(const Json& j)
{
    const Json& vars = member(j, "variables");
    if (!vars.is_array())
        throw ParseError("\"variables\" must be an array");
    std::vector<Signature::Variable> out;
    for (const auto& v : vars) {
        Signature::Variable var;
        var.name = text(member(v, "name"), "variable name");
        const Json& r = member(v, "range");
        if (!r.is_array())
            throw ParseError("range of " + var.name + " must be an array");
        for (const auto& x : r)
            var.range.push_back(text(x, "range value"));
        out.push_back(std::move(var));
    }
    try {
        return make_signature(std::move(out));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

Json law_to_json(const FunctionSystem& f)
{
    const auto& sig = *f.signature();
    Json laws = Json::array();
    for (std::size_t v = 0; v < f.size(); ++v) {
        const auto& m = f.slot(static_cast<int>(v));
        if (!m)
            continue;
        Json parents = Json::array();
        for (int p : m->parents)
            parents.push_back(sig.name(p));
        Json table = Json::array();
        std::vector<int> tuple(m->parents.size(), 0);
        for (std::size_t k = 0; k < m->table.size(); ++k) {
            Json entry = Json::array();
            for (std::size_t i = 0; i < tuple.size(); ++i)
                entry.push_back(sig.value_name(m->parents[i], tuple[i]));
            entry.push_back(sig.value_name(static_cast<int>(v), m->table[k]));
            table.push_back(entry);
            for (std::size_t i = tuple.size(); i-- > 0;) {
                if (++tuple[i] < sig.range_size(m->parents[i]))
                    break;
                tuple[i] = 0;
            }
        }
        laws.push_back(Json{{"var", sig.name(static_cast<int>(v))}, {"parents", parents}, {"table", table}});
    }
    return laws;
}

FunctionSystem law_from_json(const Json& laws, const SignaturePtr& sig)
{
    if (!laws.is_array())
        throw ParseError("\"laws\" must be an array");
    std::vector<std::optional<Mechanism>> mech(sig->size());
    for (const auto& l : laws) {
        const int v = sig->index_of(text(member(l, "var"), "var"));
        if (mech[static_cast<std::size_t>(v)])
            throw ParseError("two laws for " + sig->name(v));
        Mechanism m;
        for (const auto& p : member(l, "parents"))
            m.parents.push_back(sig->index_of(text(p, "parent")));
        std::sort(m.parents.begin(), m.parents.end());
        const std::size_t size = table_size(*sig, m.parents);
        m.table.assign(size, -1);
        for (const auto& e : member(l, "table")) {
            if (!e.is_array() || e.size() != m.parents.size() + 1)
                throw ParseError("table entry of " + sig->name(v) + " must list every parent value and the value");
            std::vector<int> pv;
            // Entries name parents in the order given in "parents"; map to signature order.
            std::vector<int> given;
            for (const auto& p : member(l, "parents"))
                given.push_back(sig->index_of(text(p, "parent")));
            std::vector<int> by_var(sig->size(), -1);
            for (std::size_t i = 0; i < given.size(); ++i)
                by_var[static_cast<std::size_t>(given[i])] = value_of(*sig, given[i], e[i]);
            for (int p : m.parents)
                pv.push_back(by_var[static_cast<std::size_t>(p)]);
            const std::size_t k = table_index(*sig, m.parents, pv);
            const int out = value_of(*sig, v, e[m.parents.size()]);
            if (m.table[k] != -1 && m.table[k] != out)
                throw ParseError("conflicting table entries for " + sig->name(v));
            m.table[k] = out;
        }
        for (int x : m.table)
            if (x < 0)
                throw ParseError("table of " + sig->name(v) + " does not cover every parent tuple");
        mech[static_cast<std::size_t>(v)] = std::move(m);
    }
    try {
        return FunctionSystem(sig, std::move(mech));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

Json team_to_json(const GeneralizedCausalTeam& t, Semantics kind, bool embed_signature)
{
    const auto& sig = *t.signature();
    Json out;
    out["kind"] = kind == Semantics::causal ? "causal" : "generalized";
    if (embed_signature)
        out["signature"] = signature_to_json(sig);
    Json fns = Json::array();
    const auto laws = t.laws();
    for (std::size_t i = 0; i < laws.size(); ++i)
        fns.push_back(Json{{"id", "F" + std::to_string(i + 1)}, {"laws", law_to_json(*laws[i])}});
    out["functions"] = fns;
    Json rows = Json::array();
    for (const auto& m : t.members()) {
        Json values = Json::object();
        for (std::size_t v = 0; v < sig.size(); ++v)
            values[sig.name(static_cast<int>(v))] = sig.value_name(static_cast<int>(v), m.row[static_cast<int>(v)]);
        std::size_t id = 0;
        while (!(*laws[id] == *m.law))
            ++id;
        rows.push_back(Json{{"values", values}, {"function", "F" + std::to_string(id + 1)}});
    }
    out["rows"] = rows;
    return out;
}

Json team_to_json(const CausalTeam& t, bool embed_signature)
{
    return team_to_json(to_generalized(t), Semantics::causal, embed_signature);
}

LoadedTeam team_from_json(const Json& j, SignaturePtr sig)
{
    if (!j.is_object())
        throw ParseError("a team must be a JSON object");
    if (j.contains("signature")) {
        auto embedded = signature_from_json(j.at("signature"));
        if (!sig)
            sig = embedded;
        else if (!(*sig == *embedded))
            throw SignatureMismatch("embedded signature differs from the given one");
    }
    if (!sig)
        throw ParseError("team file has no signature; pass one explicitly");
    LoadedTeam out{sig, kind_from(j), GeneralizedCausalTeam(sig)};
    std::map<std::string, LawPtr> fns;
    if (j.contains("functions")) {
        for (const auto& f : j.at("functions")) {
            auto id = text(member(f, "id"), "function id");
            if (fns.count(id))
                throw ParseError("duplicate function id " + id);
            fns[id] = std::make_shared<const FunctionSystem>(law_from_json(member(f, "laws"), sig));
        }
    }
    if (out.kind == Semantics::causal && fns.size() > 1)
        throw ParseError("a causal team has exactly one function");
    std::vector<Member> ms;
    for (const auto& r : member(j, "rows")) {
        const Json& values = member(r, "values");
        Assignment s;
        s.values.assign(sig->size(), -1);
        for (auto it = values.begin(); it != values.end(); ++it) {
            const int v = sig->index_of(it.key());
            s.values[static_cast<std::size_t>(v)] = value_of(*sig, v, it.value());
        }
        for (std::size_t v = 0; v < sig->size(); ++v)
            if (s.values[v] < 0)
                throw ParseError("row does not assign " + sig->name(static_cast<int>(v)));
        LawPtr law;
        if (r.contains("function")) {
            auto id = text(r.at("function"), "function id");
            auto it = fns.find(id);
            if (it == fns.end())
                throw ParseError("unknown function id " + id);
            law = it->second;
        } else if (fns.size() == 1) {
            law = fns.begin()->second;
        } else {
            throw ParseError("row without a function id");
        }
        if (!is_compatible(s, *law))
            throw ParseError("row " + format_assignment(*sig, s) + " is not compatible with its function");
        ms.push_back(Member{std::move(s), law});
    }
    out.team = GeneralizedCausalTeam(sig, std::move(ms));
    return out;
}

CausalTeam causal_from_loaded(const LoadedTeam& t)
{
    try {
        return to_causal(t.team);
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

Json class_to_json(const std::vector<GeneralizedCausalTeam>& teams, Semantics kind, const SignaturePtr& sig,
                   bool embed_signature)
{
    Json out;
    out["kind"] = kind == Semantics::causal ? "causal" : "generalized";
    if (embed_signature)
        out["signature"] = signature_to_json(*sig);
    Json ts = Json::array();
    for (const auto& t : teams) {
        Json tj = team_to_json(t, kind, false);
        tj.erase("kind");
        ts.push_back(tj);
    }
    out["teams"] = ts;
    return out;
}

LoadedClass class_from_json(const Json& j, SignaturePtr sig)
{
    if (j.contains("signature")) {
        auto embedded = signature_from_json(j.at("signature"));
        if (!sig)
            sig = embedded;
        else if (!(*sig == *embedded))
            throw SignatureMismatch("embedded signature differs from the given one");
    }
    if (!sig)
        throw ParseError("class file has no signature; pass one explicitly");
    LoadedClass out{sig, kind_from(j), {}};
    for (const auto& t : member(j, "teams")) {
        Json tj = t;
        tj["kind"] = out.kind == Semantics::causal ? "causal" : "generalized";
        out.teams.push_back(team_from_json(tj, sig).team);
    }
    return out;
}

}  // namespace ctlab
