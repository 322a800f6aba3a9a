#include "ctlab/syntax.hpp"

#include <cctype>
#include <sstream>

#include "ctlab/error.hpp"

namespace ctlab {

namespace {

enum class Tok { Word, LParen, RParen, Comma, Semi, Equals, Bang, And, Tensor, Global, Arrow, Implies, Amp, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

bool word_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'' || c == '+' ||
           c == '-';
}

std::vector<Token> lex(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t at = i;
        if (starts("[]->")) {
            out.push_back({Tok::Arrow, "[]->", at});
            i += 4;
        } else if (starts("=>")) {
            out.push_back({Tok::Implies, "=>", at});
            i += 2;
        } else if (starts("\\\\/")) {
            out.push_back({Tok::Global, "\\\\/", at});
            i += 3;
        } else if (starts("\\/")) {
            out.push_back({Tok::Tensor, "\\/", at});
            i += 2;
        } else if (starts("/\\")) {
            out.push_back({Tok::And, "/\\", at});
            i += 2;
        } else if (c == '(') {
            out.push_back({Tok::LParen, "(", at});
            ++i;
        } else if (c == ')') {
            out.push_back({Tok::RParen, ")", at});
            ++i;
        } else if (c == ',') {
            out.push_back({Tok::Comma, ",", at});
            ++i;
        } else if (c == ';') {
            out.push_back({Tok::Semi, ";", at});
            ++i;
        } else if (c == '=') {
            out.push_back({Tok::Equals, "=", at});
            ++i;
        } else if (c == '!') {
            out.push_back({Tok::Bang, "!", at});
            ++i;
        } else if (c == '&') {
            out.push_back({Tok::Amp, "&", at});
            ++i;
        } else if (word_char(c)) {
            while (i < s.size() && word_char(s[i]) && !starts("=>"))
                ++i;
            out.push_back({Tok::Word, std::string(s.substr(at, i - at)), at});
        } else {
            throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(at));
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    Parser(std::string_view text, const Signature& sig) : toks_(lex(text)), sig_(sig) {}

    Formula formula()
    {
        Formula f = cond();
        expect(Tok::End, "end of input");
        return f;
    }

    InterventionSpec spec_only()
    {
        std::vector<Equality> eqs;
        if (peek().kind == Tok::End)
            return InterventionSpec();
        eqs.push_back(equality());
        while (peek().kind == Tok::Amp || peek().kind == Tok::Comma || peek().kind == Tok::And) {
            next();
            eqs.push_back(equality());
        }
        expect(Tok::End, "end of input");
        return InterventionSpec(std::move(eqs));
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_++]; }

    [[noreturn]] void fail(const std::string& what) const
    {
        const auto& t = peek();
        throw ParseError("expected " + what + " at offset " + std::to_string(t.pos) +
                         (t.kind == Tok::End ? " (end of input)" : " near '" + t.text + "'"));
    }

    void expect(Tok k, const char* what)
    {
        if (peek().kind != k)
            fail(what);
        next();
    }

    int variable()
    {
        if (peek().kind != Tok::Word)
            fail("variable name");
        const auto& t = next();
        if (auto v = sig_.find(t.text))
            return *v;
        throw ParseError("unknown variable '" + t.text + "' at offset " + std::to_string(t.pos));
    }

    Equality equality()
    {
        int v = variable();
        expect(Tok::Equals, "'='");
        if (peek().kind != Tok::Word)
            fail("value");
        const auto& t = next();
        auto x = sig_.find_value(v, t.text);
        if (!x)
            throw ParseError("value '" + t.text + "' is not in the range of " + sig_.name(v) + " (offset " +
                             std::to_string(t.pos) + ")");
        return Equality{v, *x};
    }

    // Tries "(E) []->" or "E []->" with E an &-list; restores on failure.
    bool try_antecedent(InterventionSpec& out)
    {
        const std::size_t save = pos_;
        try {
            bool paren = false;
            if (peek().kind == Tok::LParen) {
                paren = true;
                next();
            }
            std::vector<Equality> eqs;
            if (!(paren && peek().kind == Tok::RParen)) {
                eqs.push_back(equality());
                while (peek().kind == Tok::Amp) {
                    next();
                    eqs.push_back(equality());
                }
            }
            if (paren) {
                if (peek().kind != Tok::RParen)
                    throw ParseError("");
                next();
            }
            if (peek().kind != Tok::Arrow)
                throw ParseError("");
            next();
            out = InterventionSpec(std::move(eqs));
            return true;
        } catch (const ParseError&) {
            pos_ = save;
            return false;
        }
    }

    Formula cond()
    {
        InterventionSpec iv;
        if (try_antecedent(iv))
            return cf(std::move(iv), cond());
        const std::size_t start = peek().pos;
        Formula lhs = gdisj();
        if (peek().kind == Tok::Arrow) {
            // A parenthesized /\-chain of equalities is also accepted as antecedent.
            std::vector<Equality> eqs;
            for (const auto& c : flatten(lhs, Kind::And)) {
                if (c.kind() != Kind::Eq)
                    throw ParseError("counterfactual antecedent at offset " + std::to_string(start) +
                                     " must be a conjunction of equalities");
                eqs.push_back(Equality{c.var(), c.value()});
            }
            next();
            return cf(InterventionSpec(std::move(eqs)), cond());
        }
        if (peek().kind == Tok::Implies) {
            if (!lhs.is_co())
                throw ParseError("antecedent of '=>' at offset " + std::to_string(start) + " must be a CO formula");
            next();
            return desugar_selective(lhs, cond());
        }
        return lhs;
    }

    Formula gdisj()
    {
        Formula f = tdisj();
        while (peek().kind == Tok::Global) {
            next();
            f = global(f, tdisj());
        }
        return f;
    }

    Formula tdisj()
    {
        Formula f = conjunction();
        while (peek().kind == Tok::Tensor) {
            next();
            f = tensor(f, conjunction());
        }
        return f;
    }

    Formula conjunction()
    {
        Formula f = unary();
        while (peek().kind == Tok::And) {
            next();
            f = conj(f, unary());
        }
        return f;
    }

    Formula unary()
    {
        if (peek().kind == Tok::Bang) {
            const std::size_t at = next().pos;
            Formula body = unary();
            if (!body.is_co())
                throw ParseError("negation at offset " + std::to_string(at) +
                                 " applies to a formula with a dependence atom or global disjunction");
            return neg(body);
        }
        return primary();
    }

    Formula primary()
    {
        const auto& t = peek();
        if (t.kind == Tok::LParen) {
            next();
            Formula f = cond();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (t.kind == Tok::Word && (t.text == "dep" || t.text == "con") && peek(1).kind == Tok::LParen &&
            !sig_.find(t.text)) {
            return atom_call();
        }
        if (t.kind == Tok::Word && (t.text == "dep" || t.text == "con") && peek(1).kind == Tok::LParen) {
            // A variable literally named dep/con still cannot be followed by '('.
            return atom_call();
        }
        if (t.kind == Tok::Word) {
            Equality e = equality();
            return eq(e.var, e.value);
        }
        fail("formula");
    }

    Formula atom_call()
    {
        const std::string name = next().text;
        expect(Tok::LParen, "'('");
        if (name == "con") {
            int y = variable();
            expect(Tok::RParen, "')'");
            return con(y);
        }
        std::vector<int> xs;
        if (peek().kind != Tok::Semi) {
            xs.push_back(variable());
            while (peek().kind == Tok::Comma) {
                next();
                xs.push_back(variable());
            }
        }
        expect(Tok::Semi, "';'");
        int y = variable();
        expect(Tok::RParen, "')'");
        return dep(std::move(xs), y);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const Signature& sig_;
};

int precedence(const Formula& f)
{
    switch (f.kind()) {
    case Kind::Cf: return 0;
    case Kind::Global: return 1;
    case Kind::Tensor: return 2;
    case Kind::And: return 3;
    default: return 4;
    }
}

void emit(std::ostringstream& os, const Formula& f, const Signature& sig, int ctx)
{
    const int p = precedence(f);
    const bool paren = p < ctx;
    if (paren)
        os << '(';
    switch (f.kind()) {
    case Kind::Eq: os << sig.name(f.var()) << '=' << sig.value_name(f.var(), f.value()); break;
    case Kind::Dep:
        if (f.determinants().empty()) {
            os << "con(" << sig.name(f.var()) << ')';
        } else {
            os << "dep(";
            for (std::size_t i = 0; i < f.determinants().size(); ++i)
                os << (i ? "," : "") << sig.name(f.determinants()[i]);
            os << ';' << sig.name(f.var()) << ')';
        }
        break;
    case Kind::Neg:
        os << '!';
        emit(os, f.operand(), sig, 4);
        break;
    case Kind::And:
    case Kind::Tensor:
    case Kind::Global: {
        const char* op = f.kind() == Kind::And ? " /\\ " : f.kind() == Kind::Tensor ? " \\/ " : " \\\\/ ";
        emit(os, f.lhs(), sig, p);
        os << op;
        emit(os, f.rhs(), sig, p + 1);
        break;
    }
    case Kind::Cf:
        os << '(' << print_intervention(f.antecedent(), sig) << ") []-> ";
        emit(os, f.operand(), sig, 0);
        break;
    }
    if (paren)
        os << ')';
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig)
{
    return Parser(text, sig).formula();
}

std::string print_formula(const Formula& f, const Signature& sig)
{
    std::ostringstream os;
    emit(os, f, sig, 0);
    return os.str();
}

InterventionSpec parse_intervention(std::string_view text, const Signature& sig)
{
    return Parser(text, sig).spec_only();
}

std::string print_intervention(const InterventionSpec& iv, const Signature& sig)
{
    std::string out;
    for (std::size_t i = 0; i < iv.size(); ++i) {
        const auto& e = iv.equalities()[i];
        if (i)
            out += " & ";
        out += sig.name(e.var) + "=" + sig.value_name(e.var, e.value);
    }
    return out;
}

std::vector<Formula> parse_formula_lines(std::string_view text, const Signature& sig)
{
    std::vector<Formula> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        if (auto h = line.find('#'); h != std::string_view::npos)
            line = line.substr(0, h);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c)))
                blank = false;
        if (!blank) {
            try {
                out.push_back(parse_formula(line, sig));
            } catch (const ParseError& e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        start = end + 1;
    }
    return out;
}

}  // namespace ctlab
