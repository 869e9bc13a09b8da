#pragma once

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "infgen/formula.hpp"
#include "infgen/signature.hpp"

namespace infgen {

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"),
          position(pos) {}
};

namespace detail {

enum class Tok {
    Ident,   // identifiers and element names, e.g. x0, a, 12
    Sym,     // declared symbolic relation name, e.g. <
    Param,   // #name
    LParen, RParen, Dot, Comma,
    Amp, Pipe, Bang, Arrow, Iff, Eq,
    End
};

struct Token {
    Tok kind;
    std::string text;
    size_t pos;
};

inline bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Single-pass lexer. Symbolic relation names from the signature are matched
// longest-first so a declared "<=" wins over "<"; the reserved "<->" and "->"
// win over shorter declared prefixes of the same spelling.
class Lexer {
public:
    Lexer(const std::string& text, const Signature& sig) : text_(text) {
        for (const auto& r : sig.relations)
            if (!r.name.empty() && !ident_char(r.name[0])) symbolic_.push_back(r.name);
        std::sort(symbolic_.begin(), symbolic_.end(),
                  [](const std::string& a, const std::string& b) {
                      return a.size() > b.size();
                  });
        tokenize();
    }

    std::vector<Token> tokens;

private:
    void tokenize() {
        size_t i = 0;
        const size_t n = text_.size();
        while (i < n) {
            char c = text_[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            if (c == '#') {
                size_t j = i + 1;
                while (j < n && ident_char(text_[j])) ++j;
                if (j == i + 1) throw ParseError("expected element name after '#'", i);
                tokens.push_back({Tok::Param, text_.substr(i + 1, j - i - 1), i});
                i = j;
                continue;
            }
            if (ident_char(c)) {
                size_t j = i;
                while (j < n && ident_char(text_[j])) ++j;
                tokens.push_back({Tok::Ident, text_.substr(i, j - i), i});
                i = j;
                continue;
            }
            if (match(i, "<->")) { tokens.push_back({Tok::Iff, "<->", i}); i += 3; continue; }
            if (match(i, "->")) { tokens.push_back({Tok::Arrow, "->", i}); i += 2; continue; }
            bool sym = false;
            for (const auto& s : symbolic_) {
                if (s.size() >= 3 || !match(i, s)) continue;
                tokens.push_back({Tok::Sym, s, i});
                i += s.size();
                sym = true;
                break;
            }
            if (sym) continue;
            switch (c) {
                case '(': tokens.push_back({Tok::LParen, "(", i}); break;
                case ')': tokens.push_back({Tok::RParen, ")", i}); break;
                case '.': tokens.push_back({Tok::Dot, ".", i}); break;
                case ',': tokens.push_back({Tok::Comma, ",", i}); break;
                case '&': tokens.push_back({Tok::Amp, "&", i}); break;
                case '|': tokens.push_back({Tok::Pipe, "|", i}); break;
                case '!': tokens.push_back({Tok::Bang, "!", i}); break;
                case '=': tokens.push_back({Tok::Eq, "=", i}); break;
                default: {
                    // longer declared symbolic names (>= 3 chars) get one more chance
                    for (const auto& s : symbolic_) {
                        if (!match(i, s)) continue;
                        tokens.push_back({Tok::Sym, s, i});
                        i += s.size();
                        sym = true;
                        break;
                    }
                    if (sym) continue;
                    throw ParseError(std::string("unexpected character '") + c + "'", i);
                }
            }
            ++i;
        }
        tokens.push_back({Tok::End, "", n});
    }

    bool match(size_t i, const std::string& s) const {
        return text_.compare(i, s.size(), s) == 0;
    }

    const std::string& text_;
    std::vector<std::string> symbolic_;
};

// Recursive descent over:  iff > imp > or > and > unary, with quantifier
// bodies taking maximal scope ("E x. a & b" binds a & b). Abbreviations are
// expanded on the way out, so the returned AST only contains the six kinds.
class Parser {
public:
    Parser(const std::string& text, const Signature& sig)
        : sig_(sig), lexer_(text, sig), pos_(0) {}

    FormulaPtr parse() {
        FormulaPtr f = parse_iff();
        expect(Tok::End, "unexpected trailing input");
        return f;
    }

private:
    const Token& peek() const { return lexer_.tokens[pos_]; }
    Token take() { return lexer_.tokens[pos_++]; }

    void expect(Tok k, const char* msg) {
        if (peek().kind != k) throw ParseError(msg, peek().pos);
        ++pos_;
    }

    FormulaPtr parse_iff() {
        FormulaPtr l = parse_imp();
        while (peek().kind == Tok::Iff) {
            take();
            FormulaPtr r = parse_imp();
            // l <-> r  ==>  (!l | r) & (!r | l)
            l = mk_and(mk_or(mk_not(l), r), mk_or(mk_not(r), l));
        }
        return l;
    }

    FormulaPtr parse_imp() {
        FormulaPtr l = parse_or();
        if (peek().kind == Tok::Arrow) {
            take();
            FormulaPtr r = parse_imp(); // right associative
            return mk_or(mk_not(l), r);
        }
        return l;
    }

    FormulaPtr parse_or() {
        FormulaPtr l = parse_and();
        while (peek().kind == Tok::Pipe) {
            take();
            l = mk_or(l, parse_and());
        }
        return l;
    }

    FormulaPtr parse_and() {
        FormulaPtr l = parse_unary();
        while (peek().kind == Tok::Amp) {
            take();
            l = mk_and(l, parse_unary());
        }
        return l;
    }

    FormulaPtr parse_unary() {
        const Token& t = peek();
        if (t.kind == Tok::Bang) {
            take();
            return mk_not(parse_unary());
        }
        if (t.kind == Tok::Ident && (t.text == "E" || t.text == "A")) {
            // quantifier only if followed by "<var> ."
            if (lexer_.tokens[pos_ + 1].kind == Tok::Ident &&
                lexer_.tokens[pos_ + 2].kind == Tok::Dot) {
                bool universal = t.text == "A";
                take();
                Token v = take();
                check_var_name(v);
                take(); // dot
                FormulaPtr body = parse_iff(); // maximal scope
                if (universal) return mk_not(mk_exists(v.text, mk_not(body)));
                return mk_exists(v.text, body);
            }
        }
        if (t.kind == Tok::LParen) {
            take();
            FormulaPtr f = parse_iff();
            expect(Tok::RParen, "expected ')'");
            return f;
        }
        return parse_atom();
    }

    FormulaPtr parse_atom() {
        const Token& t = peek();
        // prefix application R(t1, ..., tn)
        if (t.kind == Tok::Ident && sig_.relation_index(t.text) >= 0 &&
            lexer_.tokens[pos_ + 1].kind == Tok::LParen) {
            Token r = take();
            int rel = sig_.relation_index(r.text);
            take(); // (
            std::vector<Term> terms;
            if (peek().kind != Tok::RParen) {
                terms.push_back(parse_term());
                while (peek().kind == Tok::Comma) {
                    take();
                    terms.push_back(parse_term());
                }
            }
            expect(Tok::RParen, "expected ')'");
            int arity = sig_.relations[static_cast<size_t>(rel)].arity;
            if (static_cast<int>(terms.size()) != arity)
                throw ParseError("relation '" + r.text + "' expects " +
                                     std::to_string(arity) + " arguments, got " +
                                     std::to_string(terms.size()),
                                 r.pos);
            return mk_atom(rel, std::move(terms));
        }
        // infix: term (= | binrel) term
        Term a = parse_term();
        const Token& op = peek();
        if (op.kind == Tok::Eq) {
            take();
            Term b = parse_term();
            return mk_equal(std::move(a), std::move(b));
        }
        if (op.kind == Tok::Sym || op.kind == Tok::Ident) {
            int rel = sig_.relation_index(op.text);
            if (rel >= 0) {
                if (sig_.relations[static_cast<size_t>(rel)].arity != 2)
                    throw ParseError("relation '" + op.text + "' is not binary", op.pos);
                take();
                Term b = parse_term();
                return mk_atom(rel, {std::move(a), std::move(b)});
            }
        }
        throw ParseError("expected '=' or a declared binary relation", op.pos);
    }

    Term parse_term() {
        const Token& t = peek();
        if (t.kind == Tok::Param) {
            take();
            return param(t.text);
        }
        if (t.kind == Tok::Ident) {
            if (sig_.relation_index(t.text) >= 0)
                throw ParseError("relation name '" + t.text + "' used as a term", t.pos);
            take();
            if (sig_.constant_index(t.text) >= 0) return cnst(t.text);
            return var(t.text);
        }
        throw ParseError("expected a term", t.pos);
    }

    void check_var_name(const Token& v) {
        if (sig_.relation_index(v.text) >= 0 || sig_.constant_index(v.text) >= 0)
            throw ParseError("'" + v.text + "' is a declared symbol, not a variable",
                             v.pos);
        if (v.text == "E" || v.text == "A")
            throw ParseError("'" + v.text + "' is a reserved quantifier name", v.pos);
    }

    const Signature& sig_;
    Lexer lexer_;
    size_t pos_;
};

} // namespace detail

inline FormulaPtr parse_formula(const std::string& text, const Signature& sig) {
    return detail::Parser(text, sig).parse();
}

} // namespace infgen
