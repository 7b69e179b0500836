#include "indep/model_io.h"

#include <fstream>
#include <sstream>

#include "lexer.h"

namespace indep {

using detail::Tok;
using detail::TokenStream;

namespace {

int parse_arity(TokenStream &ts) {
    ts.expect(Tok::Slash, "before arity");
    const auto tok = ts.expect(Tok::Ident, "as arity");
    try {
        std::size_t used = 0;
        int a = std::stoi(tok.text, &used);
        if (used != tok.text.size() || a < 0) throw std::invalid_argument("bad");
        return a;
    } catch (const std::exception &) {
        throw ParseError("invalid arity '" + tok.text + "'", tok.offset);
    }
}

Element element(TokenStream &ts, const Structure &m) {
    const auto tok = ts.expect(Tok::Ident, "as domain element");
    if (!m.has_element(tok.text)) throw ParseError("unknown domain element '" + tok.text + "'", tok.offset);
    return m.element(tok.text);
}

// `(e1, ..., ek)` or, when `bare_single` holds, a lone element.
Row tuple(TokenStream &ts, const Structure &m, bool bare_single) {
    Row r;
    if (!ts.accept(Tok::LParen)) {
        if (!bare_single) ts.fail("expected '(' to start a tuple");
        r.push_back(element(ts, m));
        return r;
    }
    if (ts.accept(Tok::RParen)) return r;
    do r.push_back(element(ts, m));
    while (ts.accept(Tok::Comma));
    ts.expect(Tok::RParen, "to close a tuple");
    return r;
}

Structure structure_block(TokenStream &ts) {
    ts.expect_word("model");
    std::string name = ts.expect_ident("as model name");
    ts.expect(Tok::LBrace, "after model name");
    ts.expect_word("domain");
    ts.expect(Tok::Eq, "after 'domain'");
    ts.expect(Tok::LBrace, "to open the domain");
    std::vector<std::string> elems;
    if (!ts.at(Tok::RBrace)) {
        do elems.push_back(ts.expect_ident("as domain element"));
        while (ts.accept(Tok::Comma));
    }
    const auto close = ts.expect(Tok::RBrace, "to close the domain");
    if (elems.empty()) throw ParseError("structure domain must be nonempty", close.offset);
    Structure m(elems);
    m.name = name;
    std::set<std::string> seen;
    while (!ts.accept(Tok::RBrace)) {
        const auto at = ts.peek().offset;
        if (ts.accept_ident("rel")) {
            std::string r = ts.expect_ident("as relation name");
            if (!seen.insert(r).second) throw ParseError("symbol '" + r + "' declared twice", at);
            int arity = parse_arity(ts);
            m.declare_relation(r, arity);
            ts.expect(Tok::Eq, "after relation header");
            ts.expect(Tok::LBrace, "to open the relation");
            if (!ts.at(Tok::RBrace)) {
                do {
                    auto off = ts.peek().offset;
                    Row row = tuple(ts, m, arity == 1);
                    if (static_cast<int>(row.size()) != arity)
                        throw ParseError("tuple of wrong arity for relation '" + r + "'", off);
                    m.add_tuple(r, row);
                } while (ts.accept(Tok::Comma));
            }
            ts.expect(Tok::RBrace, "to close the relation");
        } else if (ts.accept_ident("fun")) {
            std::string f = ts.expect_ident("as function name");
            if (!seen.insert(f).second) throw ParseError("symbol '" + f + "' declared twice", at);
            int arity = parse_arity(ts);
            m.declare_function(f, arity);
            ts.expect(Tok::Eq, "after function header");
            ts.expect(Tok::LBrace, "to open the function table");
            std::set<Row> defined;
            if (!ts.at(Tok::RBrace)) {
                do {
                    auto off = ts.peek().offset;
                    Row row = tuple(ts, m, arity == 1);
                    if (static_cast<int>(row.size()) != arity)
                        throw ParseError("argument tuple of wrong arity for function '" + f + "'", off);
                    ts.expect(Tok::Arrow, "in function entry");
                    Element v = element(ts, m);
                    if (!defined.insert(row).second) throw ParseError("function '" + f + "' defined twice on a tuple", off);
                    m.set_value(f, row, v);
                } while (ts.accept(Tok::Comma));
            }
            const auto end = ts.expect(Tok::RBrace, "to close the function table");
            if (defined.size() != m.function_table(f)->values.size())
                throw ParseError("function '" + f + "' is not total", end.offset);
        } else if (ts.accept_ident("const")) {
            std::string c = ts.expect_ident("as constant name");
            if (!seen.insert(c).second) throw ParseError("symbol '" + c + "' declared twice", at);
            ts.expect(Tok::Eq, "after constant name");
            m.set_constant(c, element(ts, m));
        } else {
            ts.fail("expected 'rel', 'fun', 'const' or '}'");
        }
    }
    return m;
}

} // namespace

std::vector<Structure> parse_structures(const std::string &text) {
    TokenStream ts(detail::tokenize(text));
    std::vector<Structure> out;
    while (!ts.at(Tok::End)) out.push_back(structure_block(ts));
    return out;
}

Structure parse_structure(const std::string &text) {
    auto all = parse_structures(text);
    if (all.size() != 1) throw Error("expected exactly one model block, found " + std::to_string(all.size()));
    return std::move(all.front());
}

std::vector<NamedTeam> parse_teams(const std::string &text, const Structure &m) {
    TokenStream ts(detail::tokenize(text));
    std::vector<NamedTeam> out;
    while (!ts.at(Tok::End)) {
        ts.expect_word("team");
        NamedTeam nt;
        nt.name = ts.expect_ident("as team name");
        ts.expect_word("over");
        ts.expect(Tok::LParen, "to open the variable list");
        std::vector<std::string> vars;
        std::set<std::string> seen;
        if (!ts.at(Tok::RParen)) {
            do {
                auto off = ts.peek().offset;
                auto v = ts.expect_ident("as team variable");
                if (detail::is_keyword(v)) throw ParseError("keyword used as a variable", off);
                if (!seen.insert(v).second) throw ParseError("duplicate team variable '" + v + "'", off);
                vars.push_back(v);
            } while (ts.accept(Tok::Comma));
        }
        ts.expect(Tok::RParen, "to close the variable list");
        ts.expect(Tok::LBrace, "to open the team");
        std::vector<Row> rows;
        while (!ts.accept(Tok::RBrace)) {
            auto off = ts.peek().offset;
            Row r = tuple(ts, m, false);
            if (r.size() != vars.size()) throw ParseError("team row has the wrong number of values", off);
            rows.push_back(std::move(r));
            ts.accept(Tok::Comma);
        }
        nt.team = Team(vars, rows);
        out.push_back(std::move(nt));
    }
    return out;
}

Team parse_team(const std::string &text, const Structure &m) {
    auto all = parse_teams(text, m);
    if (all.size() != 1) throw Error("expected exactly one team block, found " + std::to_string(all.size()));
    return std::move(all.front().team);
}

std::string format_structure(const Structure &m) { return describe(m); }

std::string format_team(const Team &x, const Structure &m, const std::string &name) {
    std::string s = describe(x, m);
    return "team " + name + s.substr(std::string("team X").size());
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace indep
