// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "oral/error.hpp"
#include "oral/io.hpp"
#include "oral/semantics.hpp"

namespace oral::io {

namespace {

enum class Tok { End, Ident, String, LParen, RParen, Semi, LBrace, RBrace, Comma, Dot, Eq, ElemOf, Ni, Supseteq };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    bool quoted = false;
    std::size_t line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src)
        : src_(src)
    { }

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.line = line_;
            t.col = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            auto single = [&](Tok k) {
                t.kind = k;
                t.text = std::string(1, c);
                advance(1);
            };
            switch (c) {
            case '(': single(Tok::LParen); break;
            case ')': single(Tok::RParen); break;
            case ';': single(Tok::Semi); break;
            case '{': single(Tok::LBrace); break;
            case '}': single(Tok::RBrace); break;
            case ',': single(Tok::Comma); break;
            case '.': single(Tok::Dot); break;
            case '=': single(Tok::Eq); break;
            case '"': lex_string(t); break;
            default:
                if (starts_with("∈")) {
                    t.kind = Tok::ElemOf;
                    t.text = "in";
                    advance(3);
                } else if (starts_with("∋")) {
                    t.kind = Tok::Ni;
                    t.text = "contains";
                    advance(3);
                } else if (starts_with("⊇")) {
                    t.kind = Tok::Supseteq;
                    t.text = "supseteq";
                    advance(3);
                } else if (ident_char(c)) {
                    t.kind = Tok::Ident;
                    while (pos_ < src_.size() && ident_char(src_[pos_])) {
                        t.text += src_[pos_];
                        advance(1);
                    }
                } else {
                    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
                }
            }
            out.push_back(std::move(t));
        }
    }

private:
    static bool ident_char(char c)
    {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    }

    bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    void advance(std::size_t n)
    {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_space()
    {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance(1);
            } else {
                return;
            }
        }
    }

    void lex_string(Token& t)
    {
        t.kind = Tok::String;
        t.quoted = true;
        advance(1);
        for (;;) {
            if (pos_ >= src_.size() || src_[pos_] == '\n') throw ParseError("unterminated string", t.line, t.col);
            const char c = src_[pos_];
            if (c == '"') {
                advance(1);
                return;
            }
            if (c == '\\') {
                advance(1);
                if (pos_ >= src_.size()) throw ParseError("unterminated string", t.line, t.col);
            }
            t.text += src_[pos_];
            advance(1);
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks)
        : toks_(std::move(toks))
    { }

    std::vector<Rule> rules()
    {
        std::vector<Rule> out;
        while (peek().kind != Tok::End) out.push_back(rule());
        return out;
    }

    Rule single()
    {
        Rule r = rule();
        if (peek().kind != Tok::End) error("trailing input after rule");
        return r;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    Token next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

    [[noreturn]] void error(const std::string& msg) const
    {
        const auto& t = peek();
        const auto got = t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'";
        throw ParseError(msg + " (found " + got + ")", t.line, t.col);
    }

    bool is_keyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

    void expect(Tok k, const char* what)
    {
        if (peek().kind != k) error(std::string("expected ") + what);
        next();
    }

    void expect_keyword(std::string_view kw)
    {
        if (!is_keyword(kw)) error("expected '" + std::string(kw) + "'");
        next();
    }

    std::string ident(const char* what)
    {
        if (peek().kind != Tok::Ident) error(std::string("expected ") + what);
        return next().text;
    }

    Rule rule()
    {
        Rule r;
        expect_keyword("rule");
        expect(Tok::LParen, "'('");
        r.subject_type = ident("subject type");
        expect(Tok::Semi, "';'");
        r.subject_condition = condition("subject");
        expect(Tok::Semi, "';'");
        r.resource_type = ident("resource type");
        expect(Tok::Semi, "';'");
        r.resource_condition = condition("resource");
        expect(Tok::Semi, "';'");
        r.constraint = constraint();
        expect(Tok::Semi, "';'");
        expect(Tok::LBrace, "'{'");
        if (peek().kind != Tok::RBrace) {
            r.actions.push_back(action());
            while (peek().kind == Tok::Comma) {
                next();
                r.actions.push_back(action());
            }
        }
        expect(Tok::RBrace, "'}'");
        expect(Tok::RParen, "')'");
        return r;
    }

    std::string action()
    {
        if (peek().kind == Tok::Ident || peek().kind == Tok::String) return next().text;
        error("expected action name");
    }

    Path path(std::string_view anchor)
    {
        expect_keyword(anchor);
        Path p;
        while (peek().kind == Tok::Dot) {
            next();
            p.push_back(ident("field name"));
        }
        return p;
    }

    Constant constant()
    {
        if (peek().kind == Tok::String) return next().text;
        if (peek().kind != Tok::Ident) error("expected a constant");
        auto t = next();
        if (t.text == "true") return true;
        if (t.text == "false") return false;
        return t.text;
    }

    template <typename F>
    void conjunction(F&& atom)
    {
        if (is_keyword("true")) {
            next();
            return;
        }
        atom();
        while (is_keyword("and")) {
            next();
            atom();
        }
    }

    Condition condition(std::string_view anchor)
    {
        Condition out;
        conjunction([&] {
            AtomicCondition c;
            c.path = path(anchor);
            if (c.path.empty()) error("condition path must name at least one field");
            if (peek().kind == Tok::Eq) {
                next();
                c.values.push_back(constant());
            } else if (is_keyword("in") || peek().kind == Tok::ElemOf) {
                next();
                expect(Tok::LBrace, "'{'");
                if (peek().kind != Tok::RBrace) {
                    c.values.push_back(constant());
                    while (peek().kind == Tok::Comma) {
                        next();
                        c.values.push_back(constant());
                    }
                }
                expect(Tok::RBrace, "'}'");
            } else if (is_keyword("contains") || peek().kind == Tok::Ni) {
                next();
                c.op = ConditionOp::Contains;
                c.values.push_back(constant());
            } else {
                error("expected '=', 'in' or 'contains'");
            }
            canonicalize(c);
            out.push_back(std::move(c));
        });
        return out;
    }

    Constraint constraint()
    {
        Constraint out;
        conjunction([&] {
            AtomicConstraint c;
            c.subject_path = path("subject");
            if (peek().kind == Tok::Eq) c.op = ConstraintOp::Equal;
            else if (is_keyword("in") || peek().kind == Tok::ElemOf) c.op = ConstraintOp::In;
            else if (is_keyword("contains") || peek().kind == Tok::Ni) c.op = ConstraintOp::Contains;
            else if (is_keyword("supseteq") || peek().kind == Tok::Supseteq) c.op = ConstraintOp::Supseteq;
            else error("expected '=', 'in', 'contains' or 'supseteq'");
            next();
            c.resource_path = path("resource");
            out.push_back(std::move(c));
        });
        return out;
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

} // namespace

std::vector<Rule> parse_rules(std::string_view text)
{
    return Parser(Lexer(text).run()).rules();
}

Rule parse_rule(std::string_view text)
{
    return Parser(Lexer(text).run()).single();
}

std::string rules_to_text(std::vector<Rule> rules)
{
    std::vector<std::string> lines;
    lines.reserve(rules.size());
    for (auto& r : rules) lines.push_back(to_string(canonical(std::move(r))));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

void check_rules(const ClassModel& cm, const std::vector<Rule>& rules)
{
    for (std::size_t i = 0; i < rules.size(); ++i) {
        auto wf = check_well_formed(cm, rules[i]);
        if (!wf) throw ModelError("rule " + std::to_string(i + 1) + " (" + to_string(rules[i]) + "): " + wf.message);
    }
}

} // namespace oral::io
