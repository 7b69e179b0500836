#include "indep/proof_io.h"

#include "lexer.h"

namespace indep {

namespace {

using detail::Tok;
using detail::TokenStream;

int parse_count(TokenStream &ts, const char *what) {
    const auto t = ts.expect(Tok::Ident, what);
    try {
        std::size_t used = 0;
        const int v = std::stoi(t.text, &used);
        if (used == t.text.size() && v >= 0) return v;
    } catch (const std::exception &) {
    }
    throw ParseError(std::string("expected a number ") + what + ", got '" + t.text + "'", t.offset);
}

Signature signature_block(TokenStream &ts) {
    Signature sig;
    ts.expect_word("sig");
    ts.expect(Tok::LBrace, "after 'sig'");
    while (!ts.accept(Tok::RBrace)) {
        const auto at = ts.peek().offset;
        const std::string kind = ts.expect_ident("as 'rel', 'fun' or 'const'");
        if (kind != "rel" && kind != "fun" && kind != "const")
            throw ParseError("expected 'rel', 'fun' or 'const', got '" + kind + "'", at);
        do {
            const auto off = ts.peek().offset;
            const std::string name = ts.expect_ident("as a symbol name");
            try {
                if (kind == "const") {
                    sig.add_constant(name);
                } else {
                    ts.expect(Tok::Slash, "before arity");
                    const int arity = parse_count(ts, "as arity");
                    if (kind == "rel") sig.add_relation(name, arity);
                    else sig.add_function(name, arity);
                }
            } catch (const ParseError &) {
                throw;
            } catch (const Error &e) {
                throw ParseError(e.what(), off);
            }
        } while (ts.accept(Tok::Comma));
        if (!ts.accept(Tok::Semi) && !ts.at(Tok::RBrace)) ts.fail("expected ';' or '}' in the signature");
    }
    return sig;
}

// Formula strings are parsed separately; errors are reported at the
// string's offset in the file.
template <class F> auto in_string(const detail::Token &t, const char *what, F &&parse) {
    try {
        return parse(t.text);
    } catch (const ParseError &e) {
        throw ParseError(std::string(what) + ": " + e.what(), t.offset);
    } catch (const Error &e) {
        throw ParseError(std::string(what) + ": " + e.what(), t.offset);
    }
}

std::vector<detail::Token> string_list(TokenStream &ts) {
    std::vector<detail::Token> out;
    ts.expect(Tok::LBracket, "to open a list");
    if (ts.accept(Tok::RBracket)) return out;
    do out.push_back(ts.expect(Tok::String, "in a formula list"));
    while (ts.accept(Tok::Comma));
    ts.expect(Tok::RBracket, "to close a list");
    return out;
}

std::vector<std::string> ident_list(TokenStream &ts) {
    std::vector<std::string> out;
    ts.expect(Tok::LBracket, "to open a list");
    if (ts.accept(Tok::RBracket)) return out;
    do out.push_back(ts.expect_ident("in a symbol list"));
    while (ts.accept(Tok::Comma));
    ts.expect(Tok::RBracket, "to close a list");
    return out;
}

struct SequentFields {
    std::optional<detail::Token> gamma, phi;
    std::optional<std::vector<detail::Token>> ctx;
};

// Reads a `key=value` field into `f` when the key is a sequent field.
bool sequent_field(TokenStream &ts, const std::string &key, SequentFields &f) {
    if (key == "gamma") {
        f.gamma = ts.expect(Tok::String, "after gamma=");
    } else if (key == "phi") {
        f.phi = ts.expect(Tok::String, "after phi=");
    } else if (key == "ctx") {
        f.ctx = string_list(ts);
    } else {
        return false;
    }
    return true;
}

Sequent build_sequent(const SequentFields &f, const Signature &sig, std::size_t at) {
    if (!f.gamma || !f.phi || !f.ctx) throw ParseError("a sequent needs gamma=, phi= and ctx=", at);
    Sequent s;
    s.gamma = in_string(*f.gamma, "gamma", [&](const std::string &x) { return parse_fo(x, sig); });
    s.phi = in_string(*f.phi, "phi", [&](const std::string &x) { return parse_il(x, sig); });
    for (const auto &t : *f.ctx) s.context.insert(in_string(t, "ctx", [&](const std::string &x) { return parse_fo(x, sig); }));
    return s;
}

std::string quote(const std::string &s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string format_context(const std::set<FoFormula> &ctx) {
    std::string out = "[";
    bool first = true;
    for (const auto &f : ctx) {
        out += (first ? "" : ", ") + quote(to_string(f));
        first = false;
    }
    return out + "]";
}

} // namespace

Signature parse_signature(const std::string &text) {
    TokenStream ts(detail::tokenize(text));
    Signature sig = signature_block(ts);
    if (!ts.at(Tok::End)) ts.fail("unexpected input after the signature");
    return sig;
}

std::string format_signature(const Signature &sig) {
    std::vector<std::string> parts;
    auto list = [&](const char *kind, const std::map<std::string, int> &m) {
        if (m.empty()) return;
        std::string s = kind;
        bool first = true;
        for (const auto &[n, a] : m) {
            s += (first ? " " : ", ") + n + "/" + std::to_string(a);
            first = false;
        }
        parts.push_back(s);
    };
    list("rel", sig.relations);
    list("fun", sig.functions);
    if (!sig.constants.empty()) {
        std::string s = "const";
        bool first = true;
        for (const auto &c : sig.constants) {
            s += (first ? " " : ", ") + c;
            first = false;
        }
        parts.push_back(s);
    }
    std::string out = "sig {";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : " ") + parts[i];
    return out + (parts.empty() ? "}" : " }");
}

Proof parse_proof(const std::string &text) {
    TokenStream ts(detail::tokenize(text));
    Proof p;
    ts.expect_word("proof");
    p.name = ts.expect_ident("as proof name");
    ts.expect(Tok::LBrace, "after the proof name");
    p.signature = signature_block(ts);
    if (ts.at_ident("theta")) {
        const std::size_t begin = ts.peek().offset;
        ts.next();
        ts.expect(Tok::LBrace, "after 'theta'");
        int depth = 1;
        while (depth > 0) {
            if (ts.at(Tok::End)) ts.fail("unterminated theta block");
            const auto t = ts.next();
            if (t.kind == Tok::LBrace) ++depth;
            if (t.kind == Tok::RBrace) --depth;
            if (depth == 0) {
                try {
                    p.theta = parse_theta(text.substr(begin, t.offset + 1 - begin), p.signature);
                } catch (const ParseError &e) {
                    throw ParseError(std::string("theta: ") + e.what(), begin + e.offset());
                }
            }
        }
    }
    while (!ts.accept(Tok::RBrace)) {
        const auto at = ts.peek().offset;
        const int number = parse_count(ts, "as step number");
        if (number != static_cast<int>(p.steps.size()) + 1)
            throw ParseError("expected step " + std::to_string(p.steps.size() + 1) + ", got " + std::to_string(number), at);
        ts.expect(Tok::Colon, "after the step number");
        const auto tag_tok = ts.expect(Tok::Ident, "as rule tag");
        const auto tag = parse_rule_tag(tag_tok.text);
        if (!tag) throw ParseError("unknown rule tag '" + tag_tok.text + "'", tag_tok.offset);
        ProofStep step;
        step.rule = *tag;
        if (ts.accept_ident("from")) {
            ts.expect(Tok::LBracket, "after 'from'");
            if (!ts.at(Tok::RBracket)) {
                do {
                    const auto off = ts.peek().offset;
                    const int k = parse_count(ts, "as premise index");
                    if (k < 1) throw ParseError("premise indices start at 1", off);
                    step.premises.push_back(static_cast<std::size_t>(k - 1));
                } while (ts.accept(Tok::Comma));
            }
            ts.expect(Tok::RBracket, "after the premise list");
        }
        SequentFields f;
        while (ts.at(Tok::Ident) && ts.peek(1).kind == Tok::Eq) {
            const auto key_tok = ts.next();
            ts.next();
            const std::string &key = key_tok.text;
            if (sequent_field(ts, key, f)) continue;
            if (key == "var") {
                step.params.var = ts.expect_ident("after var=");
            } else if (key == "param") {
                step.params.param = ts.at(Tok::Param) ? ts.next().text : ts.expect_ident("after param=");
            } else if (key == "theta") {
                const auto off = ts.peek().offset;
                const int k = parse_count(ts, "after theta=");
                if (k < 1) throw ParseError("theta sentence indices start at 1", off);
                step.params.theta = static_cast<std::size_t>(k - 1);
            } else if (key == "rels") {
                step.params.symbols = ident_list(ts);
            } else {
                throw ParseError("unknown step field '" + key + "'", key_tok.offset);
            }
        }
        step.sequent = build_sequent(f, p.signature, at);
        p.steps.push_back(std::move(step));
    }
    if (!ts.at(Tok::End)) ts.fail("unexpected input after the proof");
    return p;
}

std::string format_proof(const Proof &p) {
    std::string out = "proof " + p.name + " {\n  " + format_signature(p.signature) + "\n";
    if (!p.theta.sentences.empty()) {
        out += "  theta {\n";
        for (std::size_t i = 0; i < p.theta.sentences.size(); ++i)
            out += "    " + to_string(p.theta.sentences[i]) + (i + 1 < p.theta.sentences.size() ? " ;\n" : "\n");
        out += "  }\n";
    }
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const auto &s = p.steps[i];
        out += "  " + std::to_string(i + 1) + ": " + to_string(s.rule);
        if (!s.premises.empty()) {
            out += " from [";
            for (std::size_t k = 0; k < s.premises.size(); ++k)
                out += (k ? ", " : "") + std::to_string(s.premises[k] + 1);
            out += "]";
        }
        if (s.rule == RuleTag::Depar) out += " param=$" + s.params.param;
        if (s.rule == RuleTag::Theta) {
            out += " theta=" + std::to_string(s.params.theta + 1) + " rels=[";
            for (std::size_t k = 0; k < s.params.symbols.size(); ++k) out += (k ? ", " : "") + s.params.symbols[k];
            out += "]";
        }
        out += "\n     gamma=" + quote(to_string(s.sequent.gamma)) + " phi=" + quote(to_string(s.sequent.phi)) +
               "\n     ctx=" + format_context(s.sequent.context) + "\n";
    }
    return out + "}\n";
}

NamedSequent parse_sequent(const std::string &text) {
    TokenStream ts(detail::tokenize(text));
    NamedSequent out;
    ts.expect_word("sequent");
    out.name = ts.expect_ident("as sequent name");
    const auto at = ts.expect(Tok::LBrace, "after the sequent name").offset;
    out.signature = signature_block(ts);
    SequentFields f;
    while (!ts.accept(Tok::RBrace)) {
        const auto key = ts.expect(Tok::Ident, "as a field name");
        ts.expect(Tok::Eq, "after the field name");
        if (!sequent_field(ts, key.text, f)) throw ParseError("unknown sequent field '" + key.text + "'", key.offset);
    }
    if (!ts.at(Tok::End)) ts.fail("unexpected input after the sequent");
    out.sequent = build_sequent(f, out.signature, at);
    return out;
}

std::string format_sequent(const NamedSequent &s) {
    return "sequent " + s.name + " {\n  " + format_signature(s.signature) + "\n  ctx=" +
           format_context(s.sequent.context) + "\n  gamma=" + quote(to_string(s.sequent.gamma)) +
           "\n  phi=" + quote(to_string(s.sequent.phi)) + "\n}\n";
}

} // namespace indep
