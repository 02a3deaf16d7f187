// Expression and problem-file parsing, plus the inverse formatter.
//
// Expression grammar (explicit '*', no implicit products):
//   expr   := ['-'] term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ['^' natural]
//   atom   := rational | variable | '(' expr ')'
//   rational := natural ['/' natural]
//
// Problem files are line oriented: '#' starts a comment, blank lines are
// skipped, and the remaining lines are "vars:", "f:", "X:" (one expression
// per component, comma separated) and optionally "c:".
#pragma once

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gsvindex/errors.hpp"
#include "gsvindex/polynomial.hpp"

namespace gsv {

struct ProblemSpec {
    std::vector<std::string> vars;
    Polynomial f;
    PolyVector X;
    std::optional<Polynomial> c_hint;

    int n() const { return static_cast<int>(vars.size()); }
};

namespace detail {

enum class Tok { End, Int, Ident, Plus, Minus, Star, Caret, Slash, LParen, RParen };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    Lexer(const std::string& src, int line, int col0) : src_(src), line_(line), col0_(col0) {
        advance();
    }

    const Token& peek() const { return cur_; }

    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        cur_.line = line_;
        cur_.col = col0_ + static_cast<int>(pos_) + 1;
        if (pos_ >= src_.size()) {
            cur_ = {Tok::End, "", line_, cur_.col};
            return;
        }
        char ch = src_[pos_];
        auto one = [&](Tok k) {
            cur_.kind = k;
            cur_.text = std::string(1, ch);
            ++pos_;
        };
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            cur_.kind = Tok::Int;
            cur_.text = src_.substr(start, pos_ - start);
        } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            cur_.kind = Tok::Ident;
            cur_.text = src_.substr(start, pos_ - start);
        } else {
            switch (ch) {
            case '+': one(Tok::Plus); break;
            case '-': one(Tok::Minus); break;
            case '*': one(Tok::Star); break;
            case '^': one(Tok::Caret); break;
            case '/': one(Tok::Slash); break;
            case '(': one(Tok::LParen); break;
            case ')': one(Tok::RParen); break;
            default:
                throw SyntaxError(std::string("unexpected character '") + ch + "'",
                                  line_, cur_.col);
            }
        }
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token cur_;
    int line_;
    int col0_;
};

class ExprParser {
public:
    ExprParser(const std::string& src, const std::vector<std::string>& vars,
               int line, int col0)
        : lex_(src, line, col0), vars_(vars) {}

    Polynomial parse() {
        Polynomial p = expr();
        const Token& t = lex_.peek();
        if (t.kind != Tok::End)
            throw SyntaxError("unexpected '" + t.text + "'", t.line, t.col);
        return p;
    }

private:
    int nvars() const { return static_cast<int>(vars_.size()); }

    Polynomial expr() {
        bool neg = false;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            neg = true;
        }
        Polynomial p = term();
        if (neg) p = -p;
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            Tok op = lex_.take().kind;
            Polynomial q = term();
            if (op == Tok::Plus) p += q; else p -= q;
        }
        return p;
    }

    Polynomial term() {
        Polynomial p = factor();
        while (lex_.peek().kind == Tok::Star) {
            lex_.take();
            p = p * factor();
        }
        return p;
    }

    Polynomial factor() {
        Polynomial p = atom();
        if (lex_.peek().kind == Tok::Caret) {
            Token caret = lex_.take();
            Token e = lex_.take();
            if (e.kind != Tok::Int)
                throw SyntaxError("exponent must be a natural number", caret.line, e.col);
            unsigned long k = std::stoul(e.text);
            if (k >= kMaxExponent)
                throw DegreeOverflowError("exponent " + e.text + " exceeds limit");
            p = p.pow(static_cast<unsigned>(k));
        }
        return p;
    }

    Polynomial atom() {
        Token t = lex_.take();
        switch (t.kind) {
        case Tok::Int: {
            Integer num(t.text);
            if (lex_.peek().kind == Tok::Slash) {
                lex_.take();
                Token d = lex_.take();
                if (d.kind != Tok::Int)
                    throw SyntaxError("expected integer denominator", d.line, d.col);
                Integer den(d.text);
                if (den == 0)
                    throw SyntaxError("zero denominator", d.line, d.col);
                return Polynomial::constant(nvars(), make_rational(num, den));
            }
            return Polynomial::constant(nvars(), Rational(num));
        }
        case Tok::Minus:
            return -factor();
        case Tok::Ident: {
            for (int i = 0; i < nvars(); ++i)
                if (vars_[i] == t.text) return Polynomial::variable(nvars(), i);
            throw UnknownVariableError(t.text, t.line, t.col);
        }
        case Tok::LParen: {
            Polynomial p = expr();
            Token r = lex_.take();
            if (r.kind != Tok::RParen)
                throw SyntaxError("expected ')'", r.line, r.col);
            return p;
        }
        default:
            throw SyntaxError("unexpected '" + (t.kind == Tok::End ? "end of input" : t.text) + "'",
                              t.line, t.col);
        }
    }

    Lexer lex_;
    const std::vector<std::string>& vars_;
};

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
    return true;
}

} // namespace detail

inline Polynomial parse_polynomial(const std::string& src,
                                   const std::vector<std::string>& vars,
                                   int line = 1, int col0 = 0) {
    return detail::ExprParser(src, vars, line, col0).parse();
}

inline std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& vars) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        Rational a = c;
        if (first) {
            if (a < 0) { out << "-"; a = -a; }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars[i];
            if (m[i] > 1) mono += "^" + std::to_string(m[i]);
        }
        if (mono.empty()) {
            out << rational_to_string(a);
        } else if (a == 1) {
            out << mono;
        } else {
            out << rational_to_string(a) << "*" << mono;
        }
    }
    return out.str();
}

inline std::string format_polynomial(const Polynomial& p, const ProblemSpec& spec) {
    return format_polynomial(p, spec.vars);
}

inline ProblemSpec parse_problem(const std::string& text) {
    struct Line { std::string key, value; int number; int col0; };
    std::vector<Line> lines;
    {
        std::istringstream in(text);
        std::string raw;
        int number = 0;
        while (std::getline(in, raw)) {
            ++number;
            std::string s = raw.substr(0, raw.find('#'));
            std::size_t a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) continue;
            std::size_t colon = s.find(':');
            if (colon == std::string::npos || colon < a)
                throw SyntaxError("expected 'key: value'", number, static_cast<int>(a) + 1);
            std::string key = s.substr(a, colon - a);
            std::size_t ke = key.find_last_not_of(" \t");
            key = key.substr(0, ke + 1);
            lines.push_back({key, s.substr(colon + 1), number, static_cast<int>(colon) + 1});
        }
    }

    auto find_unique = [&](const std::string& key) -> const Line* {
        const Line* found = nullptr;
        for (const auto& l : lines) {
            if (l.key != key) continue;
            if (found)
                throw SyntaxError("duplicate '" + key + "' line", l.number, 1);
            found = &l;
        }
        return found;
    };
    for (const auto& l : lines)
        if (l.key != "vars" && l.key != "f" && l.key != "X" && l.key != "c")
            throw SyntaxError("unknown key '" + l.key + "'", l.number, 1);

    const Line* vline = find_unique("vars");
    if (!vline) throw SyntaxError("missing 'vars' line", 0, 0);
    ProblemSpec spec;
    {
        std::istringstream in(vline->value);
        std::string name;
        while (in >> name) {
            if (!detail::valid_identifier(name))
                throw SyntaxError("invalid variable name '" + name + "'", vline->number, 1);
            for (const auto& v : spec.vars)
                if (v == name)
                    throw SyntaxError("duplicate variable '" + name + "'", vline->number, 1);
            spec.vars.push_back(name);
        }
        if (spec.vars.empty())
            throw SyntaxError("empty variable list", vline->number, 1);
    }

    const Line* fline = find_unique("f");
    if (!fline) throw SyntaxError("missing 'f' line", 0, 0);
    spec.f = parse_polynomial(fline->value, spec.vars, fline->number, fline->col0);
    if (spec.f.is_zero())
        throw NotAGermError("f must be a nonzero germ");
    if (spec.f.constant_term() != 0)
        throw NotAGermError("f does not vanish at the origin");

    const Line* xline = find_unique("X");
    if (!xline) throw SyntaxError("missing 'X' line", 0, 0);
    {
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : xline->value) {
            if (ch == ',') { parts.push_back(cur); cur.clear(); }
            else cur += ch;
        }
        parts.push_back(cur);
        if (static_cast<int>(parts.size()) != spec.n())
            throw ArityMismatchError("X has " + std::to_string(parts.size()) +
                                     " components, expected " + std::to_string(spec.n()));
        int col0 = xline->col0;
        for (const auto& part : parts) {
            Polynomial xi = parse_polynomial(part, spec.vars, xline->number, col0);
            if (xi.constant_term() != 0)
                throw NotAGermError("X does not vanish at the origin");
            spec.X.push_back(std::move(xi));
            col0 += static_cast<int>(part.size()) + 1;
        }
    }

    if (const Line* cline = find_unique("c")) {
        Polynomial c = parse_polynomial(cline->value, spec.vars, cline->number, cline->col0);
        if (apply_vector_field(spec.X, spec.f) != c * spec.f)
            throw TangencyMismatchError("declared c does not satisfy X(f) = c*f");
        spec.c_hint = std::move(c);
    }
    return spec;
}

} // namespace gsv
