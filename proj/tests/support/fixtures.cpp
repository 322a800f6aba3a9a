#include "fixtures.hpp"

#include <memory>

#include "ctlab/syntax.hpp"

namespace fixtures {

namespace {

// Value token ↔ number for ranges of consecutive integers.
int number(const Signature& sig, int v, int index) { return std::stoi(sig.value_name(v, index)); }
int index_of(const Signature& sig, int v, int number) { return sig.value_index(v, std::to_string(number)); }

Mechanism arithmetic(const Signature& sig, int v, std::vector<int> parents,
                     int (*fn)(const std::vector<int>&))
{
    const auto ps = parents;
    return tabulate(sig, v, std::move(parents), [&](const std::vector<int>& idx) {
        std::vector<int> nums;
        for (std::size_t i = 0; i < idx.size(); ++i)
            nums.push_back(number(sig, ps[i], idx[i]));
        return index_of(sig, v, fn(nums));
    });
}

}  // namespace

SignaturePtr uxyz()
{
    static const auto sig = make_signature({{"U", {"0", "1"}},
                                            {"X", {"0", "1"}},
                                            {"Y", {"1", "2"}},
                                            {"Z", {"2", "3", "4", "5", "6"}}});
    return sig;
}

LawPtr uxyz_law()
{
    const auto sig = uxyz();
    std::vector<std::optional<Mechanism>> m(4);
    m[1] = arithmetic(*sig, 1, {0}, [](const std::vector<int>& p) { return p[0]; });
    m[2] = arithmetic(*sig, 2, {1}, [](const std::vector<int>& p) { return p[0] + 1; });
    // Parents in signature order: U, X, Y.
    m[3] = arithmetic(*sig, 3, {0, 1, 2}, [](const std::vector<int>& p) { return 2 * p[2] + p[1] + p[0]; });
    return std::make_shared<const FunctionSystem>(sig, std::move(m));
}

CausalTeam uxyz_team()
{
    const auto sig = uxyz();
    return CausalTeam(sig, {row(*sig, {"0", "0", "1", "2"}), row(*sig, {"1", "1", "2", "6"})}, uxyz_law());
}

SignaturePtr xyz_wide()
{
    static const auto sig = make_signature({{"X", {"1", "2"}}, {"Y", {"1", "2", "3"}}, {"Z", {"2", "3", "4", "5"}}});
    return sig;
}

LawPtr law_f()
{
    const auto sig = xyz_wide();
    std::vector<std::optional<Mechanism>> m(3);
    m[2] = arithmetic(*sig, 2, {0}, [](const std::vector<int>& p) { return 2 * p[0]; });
    return std::make_shared<const FunctionSystem>(sig, std::move(m));
}

LawPtr law_g()
{
    const auto sig = xyz_wide();
    std::vector<std::optional<Mechanism>> m(3);
    m[2] = arithmetic(*sig, 2, {0, 1}, [](const std::vector<int>& p) { return p[0] + p[1]; });
    return std::make_shared<const FunctionSystem>(sig, std::move(m));
}

GeneralizedCausalTeam fg_team()
{
    const auto sig = xyz_wide();
    const auto s = row(*sig, {"2", "2", "4"});
    const auto t = row(*sig, {"1", "3", "4"});
    return GeneralizedCausalTeam(sig, {{s, law_f()}, {s, law_g()}, {t, law_g()}});
}

SignaturePtr binary(const std::vector<std::string>& names)
{
    std::vector<Signature::Variable> vars;
    for (const auto& n : names)
        vars.push_back({n, {"0", "1"}});
    return make_signature(std::move(vars));
}

Assignment row(const Signature& sig, const std::vector<std::string>& tokens)
{
    Assignment a;
    for (std::size_t v = 0; v < tokens.size(); ++v)
        a.values.push_back(sig.value_index(static_cast<int>(v), tokens[v]));
    return a;
}

Formula parse(const std::string& text, const SignaturePtr& sig) { return parse_formula(text, *sig); }

std::string source_path(const std::string& relative) { return std::string(CTLAB_SOURCE_DIR) + "/" + relative; }

}  // namespace fixtures
