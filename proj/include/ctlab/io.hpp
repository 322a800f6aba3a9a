#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "ctlab/semantics.hpp"
#include "ctlab/team.hpp"

namespace ctlab {

using Json = nlohmann::ordered_json;

// File helpers; failures raise ParseError naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json parse_json(const std::string& text, const std::string& origin = "<input>");
Json load_json_file(const std::string& path);
// Two-space indentation, trailing newline.
std::string dump_json(const Json& j);

// {"variables":[{"name":"X","range":["0","1"]}]}
Json signature_to_json(const Signature& sig);
SignaturePtr signature_from_json(const Json& j);

struct LoadedTeam {
    SignaturePtr sig;
    Semantics kind = Semantics::generalized;
    GeneralizedCausalTeam team;
};

// Teams carry "kind", "functions" (ids F1, F2, ... in registry order, laws in
// variable order, table entries [parent values..., value]) and "rows". A
// "signature" member is written when embed_signature is set and is used when
// sig is null on input.
Json team_to_json(const GeneralizedCausalTeam& t, Semantics kind = Semantics::generalized,
                  bool embed_signature = false);
Json team_to_json(const CausalTeam& t, bool embed_signature = false);
LoadedTeam team_from_json(const Json& j, SignaturePtr sig = nullptr);
CausalTeam causal_from_loaded(const LoadedTeam& t);

Json law_to_json(const FunctionSystem& f);
FunctionSystem law_from_json(const Json& laws, const SignaturePtr& sig);

// {"kind":..., "signature"?:..., "teams":[team, ...]}; teams inherit the kind.
struct LoadedClass {
    SignaturePtr sig;
    Semantics kind = Semantics::generalized;
    std::vector<GeneralizedCausalTeam> teams;
};
Json class_to_json(const std::vector<GeneralizedCausalTeam>& teams, Semantics kind, const SignaturePtr& sig,
                   bool embed_signature = true);
LoadedClass class_from_json(const Json& j, SignaturePtr sig = nullptr);

}  // namespace ctlab
