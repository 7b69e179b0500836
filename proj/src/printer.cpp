#include "indep/syntax.h"

namespace indep {

std::string to_string(const Term &t) {
    switch (t.kind) {
    case Term::Kind::TeamVar:
    case Term::Kind::Const: return t.name;
    case Term::Kind::ParamVar: return "$" + t.name;
    case Term::Kind::App: return t.name + "(" + to_string(t.args) + ")";
    }
    return "?";
}

std::string to_string(const TermTuple &ts) {
    std::string out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out += ", ";
        out += to_string(ts[i]);
    }
    return out;
}

namespace {

// A quantifier (possibly under negations) swallows everything to its right,
// so such a left operand needs its own parentheses.
bool ends_open(const FoFormula &f) {
    if (f.is_quantifier()) return true;
    if (f.kind == FoFormula::Kind::Not) return ends_open(f.subs[0]);
    return false;
}

std::string atom_string(const FoFormula &f, bool positive) {
    if (f.kind == FoFormula::Kind::Eq)
        return to_string(f.terms[0]) + (positive ? " = " : " != ") + to_string(f.terms[1]);
    return std::string(positive ? "" : "~") + f.name + "(" + to_string(f.terms) + ")";
}

const char *fo_op(FoFormula::Kind k) {
    switch (k) {
    case FoFormula::Kind::And: return " & ";
    case FoFormula::Kind::Or: return " | ";
    case FoFormula::Kind::Implies: return " -> ";
    case FoFormula::Kind::Iff: return " <-> ";
    default: return " ? ";
    }
}

} // namespace

std::string to_string(const FoFormula &f) {
    using K = FoFormula::Kind;
    switch (f.kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Rel: return f.name + "(" + to_string(f.terms) + ")";
    case K::Eq: return to_string(f.terms[0]) + " = " + to_string(f.terms[1]);
    case K::Not: {
        const auto &s = f.subs[0];
        if (s.kind == K::Eq) return "not (" + to_string(s) + ")";
        return "not " + to_string(s);
    }
    case K::Exists: return "exists " + f.name + ". " + to_string(f.subs[0]);
    case K::Forall: return "forall " + f.name + ". " + to_string(f.subs[0]);
    default: {
        std::string lhs = to_string(f.subs[0]);
        if (ends_open(f.subs[0])) lhs = "(" + lhs + ")";
        return "(" + lhs + fo_op(f.kind) + to_string(f.subs[1]) + ")";
    }
    }
}

std::string to_string(const IlFormula &f) {
    using K = IlFormula::Kind;
    switch (f.kind) {
    case K::Literal: return atom_string(f.atom, f.positive);
    case K::Indep: {
        auto part = [](const TermTuple &ts) { return to_string(ts); };
        std::string a = part(f.tuples[0]), b = part(f.tuples[1]), c = part(f.tuples[2]);
        return "indep(" + a + (a.empty() ? "; " : " ; ") + b + " ; " + c + ")";
    }
    case K::Dep: return "dep(" + to_string(f.tuples[0]) + ")";
    case K::Exists: return "exists " + f.var + ". " + to_string(f.subs[0]);
    case K::Forall: return "forall " + f.var + ". " + to_string(f.subs[0]);
    case K::Or:
    case K::And: {
        std::string lhs = to_string(f.subs[0]);
        const auto &l = f.subs[0];
        if (l.kind == K::Exists || l.kind == K::Forall) lhs = "(" + lhs + ")";
        return "(" + lhs + (f.kind == K::Or ? " \\/ " : " /\\ ") + to_string(f.subs[1]) + ")";
    }
    }
    return "?";
}

} // namespace indep
