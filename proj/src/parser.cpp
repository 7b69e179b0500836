#include <cctype>

#include "lexer.h"

namespace indep {
namespace detail {

namespace {

bool ident_start(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

} // namespace

bool is_keyword(const std::string &s) {
    return s == "true" || s == "false" || s == "not" || s == "exists" || s == "forall" || s == "indep" || s == "dep";
}

const char *describe(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Param: return "parameter variable";
    case Tok::String: return "string";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::Slash: return "'/'";
    case Tok::Eq: return "'='";
    case Tok::Neq: return "'!='";
    case Tok::Tilde: return "'~'";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::DArrow: return "'<->'";
    case Tok::TensorOr: return "'\\/'";
    case Tok::Wedge: return "'/\\'";
    case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(const std::string &src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    auto push = [&](Tok k, std::size_t at, std::size_t len) { out.push_back({k, src.substr(at, len), at}); i = at + len; };
    while (i < n) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        std::size_t start = i;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < n && (ident_char(src[j]) ||
                             (src[j] == '-' && j + 1 < n && std::isalpha(static_cast<unsigned char>(src[j + 1])))))
                ++j;
            push(Tok::Ident, start, j - start);
            continue;
        }
        if (c == '$') {
            std::size_t j = i + 1;
            if (j >= n || !ident_start(src[j])) throw ParseError("'$' must be followed by a parameter name", i);
            while (j < n && ident_char(src[j])) ++j;
            out.push_back({Tok::Param, src.substr(i + 1, j - i - 1), start});
            i = j;
            continue;
        }
        if (c == '"') {
            std::string text;
            std::size_t j = i + 1;
            for (;;) {
                if (j >= n) throw ParseError("unterminated string", start);
                if (src[j] == '"') break;
                if (src[j] == '\\' && j + 1 < n && src[j + 1] == '"') {
                    text += '"';
                    j += 2;
                    continue;
                }
                text += src[j++];
            }
            out.push_back({Tok::String, text, start});
            i = j + 1;
            continue;
        }
        auto two = src.compare(i, 2, "->") == 0;
        if (src.compare(i, 3, "<->") == 0) { push(Tok::DArrow, i, 3); continue; }
        if (two) { push(Tok::Arrow, i, 2); continue; }
        if (src.compare(i, 2, "!=") == 0) { push(Tok::Neq, i, 2); continue; }
        if (src.compare(i, 2, "\\/") == 0) { push(Tok::TensorOr, i, 2); continue; }
        if (src.compare(i, 2, "/\\") == 0) { push(Tok::Wedge, i, 2); continue; }
        switch (c) {
        case '(': push(Tok::LParen, i, 1); continue;
        case ')': push(Tok::RParen, i, 1); continue;
        case '{': push(Tok::LBrace, i, 1); continue;
        case '}': push(Tok::RBrace, i, 1); continue;
        case '[': push(Tok::LBracket, i, 1); continue;
        case ']': push(Tok::RBracket, i, 1); continue;
        case ',': push(Tok::Comma, i, 1); continue;
        case ';': push(Tok::Semi, i, 1); continue;
        case ':': push(Tok::Colon, i, 1); continue;
        case '.': push(Tok::Dot, i, 1); continue;
        case '/': push(Tok::Slash, i, 1); continue;
        case '=': push(Tok::Eq, i, 1); continue;
        case '~': push(Tok::Tilde, i, 1); continue;
        case '&': push(Tok::Amp, i, 1); continue;
        case '|': push(Tok::Bar, i, 1); continue;
        default: throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
    }
    out.push_back({Tok::End, "", n});
    return out;
}

Token TokenStream::expect(Tok k, const char *context) {
    if (!at(k)) fail(std::string("expected ") + describe(k) + " " + context + ", found " + describe(peek().kind) +
                     (peek().text.empty() ? "" : " '" + peek().text + "'"));
    return next();
}

std::string TokenStream::expect_ident(const char *context) { return expect(Tok::Ident, context).text; }

void TokenStream::expect_word(const char *word) {
    if (!at_ident(word)) fail(std::string("expected '") + word + "'");
    next();
}

// ------------------------------------------------------------------ terms

Term FormulaParser::term() {
    const Token &t = ts_.peek();
    if (t.kind == Tok::Param) return Term::param_var(ts_.next().text);
    if (t.kind != Tok::Ident) ts_.fail(std::string("expected a term, found ") + describe(t.kind));
    if (is_keyword(t.text)) ts_.fail("keyword '" + t.text + "' cannot be used as a term");
    Token id = ts_.next();
    if (ts_.at(Tok::LParen)) {
        if (sig_.has_relation(id.text)) throw ParseError("relation '" + id.text + "' used as a term", id.offset);
        if (!sig_.has_function(id.text)) throw ParseError("undeclared function symbol '" + id.text + "'", id.offset);
        ts_.next();
        TermTuple args = term_list_until(Tok::RParen);
        ts_.expect(Tok::RParen, "closing argument list");
        int arity = sig_.functions.at(id.text);
        if (static_cast<int>(args.size()) != arity)
            throw ParseError("function '" + id.text + "' expects " + std::to_string(arity) + " arguments, got " +
                                 std::to_string(args.size()),
                             id.offset);
        return Term::app(id.text, std::move(args));
    }
    if (sig_.has_constant(id.text)) return Term::constant(id.text);
    if (sig_.has_function(id.text)) throw ParseError("function '" + id.text + "' used without arguments", id.offset);
    if (sig_.has_relation(id.text)) throw ParseError("relation '" + id.text + "' used as a term", id.offset);
    if (std::isdigit(static_cast<unsigned char>(id.text[0])))
        throw ParseError("undeclared constant '" + id.text + "'", id.offset);
    return Term::team_var(id.text);
}

TermTuple FormulaParser::term_list_until(Tok stop) {
    TermTuple out;
    if (ts_.at(stop)) return out;
    out.push_back(term());
    while (ts_.accept(Tok::Comma)) out.push_back(term());
    return out;
}

void FormulaParser::check_relation(const std::string &name, std::size_t arity, std::size_t offset) const {
    int expected = sig_.relations.at(name);
    if (static_cast<std::size_t>(expected) != arity)
        throw ParseError("relation '" + name + "' expects " + std::to_string(expected) + " arguments, got " +
                             std::to_string(arity),
                         offset);
}

std::string FormulaParser::binder() {
    const Token &t = ts_.peek();
    if (t.kind == Tok::Param) ts_.fail("bound parameter variable '$" + t.text + "'");
    if (t.kind != Tok::Ident || is_keyword(t.text)) ts_.fail("expected a variable after quantifier");
    if (sig_.declares(t.text) || std::isdigit(static_cast<unsigned char>(t.text[0])))
        ts_.fail("cannot quantify over symbol '" + t.text + "'");
    std::string v = ts_.next().text;
    ts_.expect(Tok::Dot, "after quantified variable");
    return v;
}

// --------------------------------------------------------- first order

FoFormula FormulaParser::fo() { return fo_iff(); }

FoFormula FormulaParser::fo_iff() {
    FoFormula lhs = fo_implies();
    while (ts_.accept(Tok::DArrow)) lhs = fo::iff(std::move(lhs), fo_implies());
    return lhs;
}

FoFormula FormulaParser::fo_implies() {
    FoFormula lhs = fo_or();
    if (ts_.accept(Tok::Arrow)) return fo::implies(std::move(lhs), fo_implies());
    return lhs;
}

FoFormula FormulaParser::fo_or() {
    FoFormula lhs = fo_and();
    while (ts_.accept(Tok::Bar)) lhs = fo::disj(std::move(lhs), fo_and());
    return lhs;
}

FoFormula FormulaParser::fo_and() {
    FoFormula lhs = fo_unary();
    while (ts_.accept(Tok::Amp)) lhs = fo::conj(std::move(lhs), fo_unary());
    return lhs;
}

FoFormula FormulaParser::fo_unary() {
    if (ts_.accept_ident("not")) return fo::neg(fo_unary());
    if (ts_.accept_ident("exists")) {
        std::string v = binder();
        return fo::exists(v, fo());
    }
    if (ts_.accept_ident("forall")) {
        std::string v = binder();
        return fo::forall(v, fo());
    }
    if (ts_.at(Tok::Tilde) || ts_.at(Tok::TensorOr) || ts_.at(Tok::Wedge))
        ts_.fail("independence-logic connective in a first-order formula");
    if (ts_.accept(Tok::LParen)) {
        FoFormula f = fo();
        ts_.expect(Tok::RParen, "closing parenthesis");
        return f;
    }
    return fo_atom();
}

FoFormula FormulaParser::fo_atom() {
    if (ts_.accept_ident("true")) return fo::top();
    if (ts_.accept_ident("false")) return fo::bottom();
    if (ts_.at_ident("indep") || ts_.at_ident("dep")) ts_.fail("dependency atoms are not first-order");
    const Token &t = ts_.peek();
    if (t.kind == Tok::Ident && ts_.peek(1).kind == Tok::LParen && !sig_.has_function(t.text)) {
        if (!sig_.has_relation(t.text)) ts_.fail("undeclared relation symbol '" + t.text + "'");
        Token id = ts_.next();
        ts_.next();
        TermTuple args = term_list_until(Tok::RParen);
        ts_.expect(Tok::RParen, "closing argument list");
        check_relation(id.text, args.size(), id.offset);
        return fo::rel(id.text, std::move(args));
    }
    Term lhs = term();
    if (ts_.at(Tok::Neq)) ts_.fail("'!=' is not part of the first-order syntax; write not (s = t)");
    ts_.expect(Tok::Eq, "in equality atom");
    Term rhs = term();
    return fo::eq(std::move(lhs), std::move(rhs));
}

// ---------------------------------------------------------- independence

IlFormula FormulaParser::il() { return il_or(); }

IlFormula FormulaParser::il_or() {
    IlFormula lhs = il_and();
    while (ts_.accept(Tok::TensorOr)) lhs = il::tensor_or(std::move(lhs), il_and());
    return lhs;
}

IlFormula FormulaParser::il_and() {
    IlFormula lhs = il_unary();
    while (ts_.accept(Tok::Wedge)) lhs = il::conj(std::move(lhs), il_unary());
    return lhs;
}

IlFormula FormulaParser::il_unary() {
    if (ts_.at(Tok::Tilde)) {
        std::size_t off = ts_.next().offset;
        IlFormula inner = il_unary();
        if (inner.kind != IlFormula::Kind::Literal || !inner.positive)
            throw ParseError("negation applied to a compound formula", off);
        inner.positive = false;
        return inner;
    }
    if (ts_.at_ident("not") || ts_.at(Tok::Amp) || ts_.at(Tok::Bar) || ts_.at(Tok::Arrow) || ts_.at(Tok::DArrow))
        ts_.fail("first-order connective in an independence-logic formula");
    if (ts_.accept_ident("exists")) {
        std::string v = binder();
        return il::exists(v, il());
    }
    if (ts_.accept_ident("forall")) {
        std::string v = binder();
        return il::forall(v, il());
    }
    if (ts_.at_ident("indep")) {
        std::size_t off = ts_.next().offset;
        ts_.expect(Tok::LParen, "after 'indep'");
        TermTuple t1 = term_list_until(Tok::Semi);
        ts_.expect(Tok::Semi, "between independence tuples");
        TermTuple t2 = term_list_until(Tok::Semi);
        ts_.expect(Tok::Semi, "between independence tuples");
        TermTuple t3 = term_list_until(Tok::RParen);
        ts_.expect(Tok::RParen, "closing 'indep'");
        if (t2.empty() || t3.empty())
            warnings.push_back("independence atom at offset " + std::to_string(off) + " has an empty second or third tuple");
        return il::indep(std::move(t1), std::move(t2), std::move(t3));
    }
    if (ts_.at_ident("dep")) {
        std::size_t off = ts_.next().offset;
        ts_.expect(Tok::LParen, "after 'dep'");
        TermTuple ts = term_list_until(Tok::RParen);
        ts_.expect(Tok::RParen, "closing 'dep'");
        if (ts.empty()) throw ParseError("dep() requires at least one term", off);
        return il::dep(std::move(ts));
    }
    if (ts_.accept(Tok::LParen)) {
        IlFormula f = il();
        ts_.expect(Tok::RParen, "closing parenthesis");
        return f;
    }
    if (ts_.at_ident("true") || ts_.at_ident("false")) ts_.fail("'true'/'false' are not independence-logic atoms");
    const Token &t = ts_.peek();
    if (t.kind == Tok::Ident && ts_.peek(1).kind == Tok::LParen && !sig_.has_function(t.text)) {
        if (!sig_.has_relation(t.text)) ts_.fail("undeclared relation symbol '" + t.text + "'");
        Token id = ts_.next();
        ts_.next();
        TermTuple args = term_list_until(Tok::RParen);
        ts_.expect(Tok::RParen, "closing argument list");
        check_relation(id.text, args.size(), id.offset);
        return il::literal(true, fo::rel(id.text, std::move(args)));
    }
    Term lhs = term();
    bool positive = true;
    if (ts_.accept(Tok::Neq)) {
        positive = false;
    } else {
        ts_.expect(Tok::Eq, "in equality literal");
    }
    Term rhs = term();
    return il::literal(positive, fo::eq(std::move(lhs), std::move(rhs)));
}

} // namespace detail

FoFormula parse_fo(const std::string &text, const Signature &sig) {
    detail::TokenStream ts(detail::tokenize(text));
    detail::FormulaParser p(ts, sig);
    FoFormula f = p.fo();
    if (!ts.at(detail::Tok::End)) ts.fail("trailing input after formula");
    return f;
}

IlFormula parse_il(const std::string &text, const Signature &sig, std::vector<std::string> *warnings) {
    detail::TokenStream ts(detail::tokenize(text));
    detail::FormulaParser p(ts, sig);
    IlFormula f = p.il();
    if (!ts.at(detail::Tok::End)) ts.fail("trailing input after formula");
    auto fv = free_vars(f);
    if (!fv.params.empty())
        throw ParseError("parameter variable '$" + *fv.params.begin() + "' in an independence-logic formula", 0);
    if (warnings) warnings->insert(warnings->end(), p.warnings.begin(), p.warnings.end());
    return f;
}

Term parse_term(const std::string &text, const Signature &sig) {
    detail::TokenStream ts(detail::tokenize(text));
    detail::FormulaParser p(ts, sig);
    Term t = p.term();
    if (!ts.at(detail::Tok::End)) ts.fail("trailing input after term");
    return t;
}

TermTuple parse_term_tuple(const std::string &text, const Signature &sig) {
    detail::TokenStream ts(detail::tokenize(text));
    detail::FormulaParser p(ts, sig);
    TermTuple out = p.term_list_until(detail::Tok::End);
    if (!ts.at(detail::Tok::End)) ts.fail("trailing input after term list");
    return out;
}

} // namespace indep
