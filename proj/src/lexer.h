#pragma once

// Shared tokenizer for the formula grammars and the line-oriented file
// formats. Internal to the library.

#include <cstddef>
#include <string>
#include <vector>

#include "indep/syntax.h"

namespace indep::detail {

enum class Tok {
    Ident,   // x, R, PS-lit, 0, a1'
    Param,   // $p   (text holds the name without '$')
    String,  // "..." (text holds the unescaped contents)
    LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Comma, Semi, Colon, Dot, Slash,
    Eq, Neq, Tilde, Amp, Bar, Arrow, DArrow, TensorOr, Wedge,
    End
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

std::vector<Token> tokenize(const std::string &src);
const char *describe(Tok t);

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token &peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_ident(const char *word) const { return peek().kind == Tok::Ident && peek().text == word; }
    Token next() {
        Token t = peek();
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool accept(Tok k) {
        if (!at(k)) return false;
        next();
        return true;
    }
    bool accept_ident(const char *word) {
        if (!at_ident(word)) return false;
        next();
        return true;
    }
    Token expect(Tok k, const char *context);
    std::string expect_ident(const char *context);
    void expect_word(const char *word);
    [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, peek().offset); }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

/// Recursive-descent parser over a token stream. The same instance can
/// parse several formulas in sequence (used by the theta block parser).
class FormulaParser {
public:
    FormulaParser(TokenStream &ts, const Signature &sig) : ts_(ts), sig_(sig) {}

    FoFormula fo();
    IlFormula il();
    Term term();
    TermTuple term_list_until(Tok stop); // terms separated by ',' up to (not including) stop

    std::vector<std::string> warnings;

private:
    FoFormula fo_iff();
    FoFormula fo_implies();
    FoFormula fo_or();
    FoFormula fo_and();
    FoFormula fo_unary();
    FoFormula fo_atom();
    IlFormula il_or();
    IlFormula il_and();
    IlFormula il_unary();
    std::string binder();
    void check_relation(const std::string &name, std::size_t arity, std::size_t offset) const;

    TokenStream &ts_;
    const Signature &sig_;
};

bool is_keyword(const std::string &s);

} // namespace indep::detail
