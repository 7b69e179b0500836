#include "indep/syntax.h"

#include <algorithm>

namespace indep {

namespace {

template <class T> std::strong_ordering compare_seq(const std::vector<T> &a, const std::vector<T> &b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (auto c = a[i] <=> b[i]; c != 0) return c;
    return a.size() <=> b.size();
}

} // namespace

std::strong_ordering Term::operator<=>(const Term &o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = name <=> o.name; c != 0) return c;
    return compare_seq(args, o.args);
}

std::strong_ordering FoFormula::operator<=>(const FoFormula &o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = name <=> o.name; c != 0) return c;
    if (auto c = compare_seq(terms, o.terms); c != 0) return c;
    return compare_seq(subs, o.subs);
}

std::strong_ordering IlFormula::operator<=>(const IlFormula &o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = positive <=> o.positive; c != 0) return c;
    if (auto c = atom <=> o.atom; c != 0) return c;
    for (std::size_t i = 0; i < tuples.size(); ++i)
        if (auto c = compare_seq(tuples[i], o.tuples[i]); c != 0) return c;
    if (auto c = var <=> o.var; c != 0) return c;
    return compare_seq(subs, o.subs);
}

namespace fo {

FoFormula top() { return {FoFormula::Kind::True, {}, {}, {}}; }
FoFormula bottom() { return {FoFormula::Kind::False, {}, {}, {}}; }
FoFormula rel(std::string name, std::vector<Term> args) {
    return {FoFormula::Kind::Rel, std::move(name), std::move(args), {}};
}
FoFormula eq(Term lhs, Term rhs) { return {FoFormula::Kind::Eq, {}, {std::move(lhs), std::move(rhs)}, {}}; }
FoFormula neg(FoFormula f) { return {FoFormula::Kind::Not, {}, {}, {std::move(f)}}; }
FoFormula conj(FoFormula a, FoFormula b) { return {FoFormula::Kind::And, {}, {}, {std::move(a), std::move(b)}}; }
FoFormula disj(FoFormula a, FoFormula b) { return {FoFormula::Kind::Or, {}, {}, {std::move(a), std::move(b)}}; }
FoFormula implies(FoFormula a, FoFormula b) {
    return {FoFormula::Kind::Implies, {}, {}, {std::move(a), std::move(b)}};
}
FoFormula iff(FoFormula a, FoFormula b) { return {FoFormula::Kind::Iff, {}, {}, {std::move(a), std::move(b)}}; }
FoFormula exists(std::string var, FoFormula body) {
    return {FoFormula::Kind::Exists, std::move(var), {}, {std::move(body)}};
}
FoFormula forall(std::string var, FoFormula body) {
    return {FoFormula::Kind::Forall, std::move(var), {}, {std::move(body)}};
}

FoFormula conj_all(const std::vector<FoFormula> &fs) {
    if (fs.empty()) return top();
    FoFormula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(std::move(acc), fs[i]);
    return acc;
}

FoFormula disj_all(const std::vector<FoFormula> &fs) {
    if (fs.empty()) return bottom();
    FoFormula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(std::move(acc), fs[i]);
    return acc;
}

FoFormula forall_all(const std::vector<std::string> &vars, FoFormula body) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = forall(*it, std::move(body));
    return body;
}

FoFormula exists_all(const std::vector<std::string> &vars, FoFormula body) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(*it, std::move(body));
    return body;
}

std::vector<FoFormula> tuple_equalities(const TermTuple &a, const TermTuple &b) {
    if (a.size() != b.size()) throw Error("tuple_equalities: tuples of different length");
    std::vector<FoFormula> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(eq(a[i], b[i]));
    return out;
}

} // namespace fo

namespace il {

IlFormula literal(bool positive, FoFormula atom) {
    if (!atom.is_atom()) throw Error("literal: not an atom");
    IlFormula f;
    f.kind = IlFormula::Kind::Literal;
    f.positive = positive;
    f.atom = std::move(atom);
    return f;
}

IlFormula indep(TermTuple t1, TermTuple t2, TermTuple t3) {
    IlFormula f;
    f.kind = IlFormula::Kind::Indep;
    f.tuples = {std::move(t1), std::move(t2), std::move(t3)};
    return f;
}

IlFormula dep(TermTuple terms) {
    IlFormula f;
    f.kind = IlFormula::Kind::Dep;
    f.tuples[0] = std::move(terms);
    return f;
}

namespace {
IlFormula binary(IlFormula::Kind k, IlFormula a, IlFormula b) {
    IlFormula f;
    f.kind = k;
    f.subs = {std::move(a), std::move(b)};
    return f;
}
IlFormula quantifier(IlFormula::Kind k, std::string var, IlFormula body) {
    IlFormula f;
    f.kind = k;
    f.var = std::move(var);
    f.subs = {std::move(body)};
    return f;
}
} // namespace

IlFormula tensor_or(IlFormula a, IlFormula b) { return binary(IlFormula::Kind::Or, std::move(a), std::move(b)); }
IlFormula conj(IlFormula a, IlFormula b) { return binary(IlFormula::Kind::And, std::move(a), std::move(b)); }
IlFormula exists(std::string var, IlFormula body) {
    return quantifier(IlFormula::Kind::Exists, std::move(var), std::move(body));
}
IlFormula forall(std::string var, IlFormula body) {
    return quantifier(IlFormula::Kind::Forall, std::move(var), std::move(body));
}

} // namespace il

// -------------------------------------------------------------- signature

void Signature::add_relation(const std::string &name, int arity) {
    if (has_function(name) || has_constant(name)) throw Error("symbol '" + name + "' declared twice with different roles");
    auto [it, fresh] = relations.emplace(name, arity);
    if (!fresh && it->second != arity) throw Error("relation '" + name + "' used with arities " + std::to_string(it->second) + " and " + std::to_string(arity));
}

void Signature::add_function(const std::string &name, int arity) {
    if (has_relation(name) || has_constant(name)) throw Error("symbol '" + name + "' declared twice with different roles");
    auto [it, fresh] = functions.emplace(name, arity);
    if (!fresh && it->second != arity) throw Error("function '" + name + "' used with arities " + std::to_string(it->second) + " and " + std::to_string(arity));
}

void Signature::add_constant(const std::string &name) {
    if (has_relation(name) || has_function(name)) throw Error("symbol '" + name + "' declared twice with different roles");
    constants.insert(name);
}

void Signature::merge(const Signature &other) {
    for (const auto &[n, a] : other.relations) add_relation(n, a);
    for (const auto &[n, a] : other.functions) add_function(n, a);
    for (const auto &c : other.constants) add_constant(c);
}

namespace {

void collect_term_signature(const Term &t, Signature &sig) {
    if (t.kind == Term::Kind::Const) sig.add_constant(t.name);
    if (t.kind == Term::Kind::App) {
        sig.add_function(t.name, static_cast<int>(t.args.size()));
        for (const auto &a : t.args) collect_term_signature(a, sig);
    }
}

} // namespace

void collect_signature(const FoFormula &f, Signature &sig) {
    if (f.kind == FoFormula::Kind::Rel) sig.add_relation(f.name, static_cast<int>(f.terms.size()));
    for (const auto &t : f.terms) collect_term_signature(t, sig);
    for (const auto &s : f.subs) collect_signature(s, sig);
}

void collect_signature(const IlFormula &f, Signature &sig) {
    if (f.kind == IlFormula::Kind::Literal) collect_signature(f.atom, sig);
    for (const auto &tuple : f.tuples)
        for (const auto &t : tuple) collect_term_signature(t, sig);
    for (const auto &s : f.subs) collect_signature(s, sig);
}

Signature signature_of(const FoFormula &f) {
    Signature sig;
    collect_signature(f, sig);
    return sig;
}

Signature signature_of(const IlFormula &f) {
    Signature sig;
    collect_signature(f, sig);
    return sig;
}

// ---------------------------------------------------------- free variables

namespace {

void add_term_vars(const Term &t, FreeVars &out) {
    switch (t.kind) {
    case Term::Kind::TeamVar: out.team.insert(t.name); break;
    case Term::Kind::ParamVar: out.params.insert(t.name); break;
    case Term::Kind::Const: break;
    case Term::Kind::App:
        for (const auto &a : t.args) add_term_vars(a, out);
        break;
    }
}

} // namespace

FreeVars free_vars(const Term &t) {
    FreeVars out;
    add_term_vars(t, out);
    return out;
}

FreeVars free_vars(const TermTuple &ts) {
    FreeVars out;
    for (const auto &t : ts) add_term_vars(t, out);
    return out;
}

FreeVars free_vars(const FoFormula &f) {
    FreeVars out;
    for (const auto &t : f.terms) add_term_vars(t, out);
    if (f.is_quantifier()) {
        out = free_vars(f.subs[0]);
        out.team.erase(f.name);
        return out;
    }
    for (const auto &s : f.subs) {
        FreeVars sub = free_vars(s);
        out.team.insert(sub.team.begin(), sub.team.end());
        out.params.insert(sub.params.begin(), sub.params.end());
    }
    return out;
}

FreeVars free_vars(const IlFormula &f) {
    using K = IlFormula::Kind;
    FreeVars out;
    switch (f.kind) {
    case K::Literal: return free_vars(f.atom);
    case K::Indep:
    case K::Dep:
        for (const auto &tuple : f.tuples)
            for (const auto &t : tuple) add_term_vars(t, out);
        return out;
    case K::Or:
    case K::And:
        for (const auto &s : f.subs) {
            FreeVars sub = free_vars(s);
            out.team.insert(sub.team.begin(), sub.team.end());
            out.params.insert(sub.params.begin(), sub.params.end());
        }
        return out;
    case K::Exists:
    case K::Forall:
        out = free_vars(f.subs[0]);
        out.team.erase(f.var);
        return out;
    }
    return out;
}

std::set<std::string> free_team_vars(const FoFormula &f) { return free_vars(f).team; }
std::set<std::string> free_team_vars(const IlFormula &f) { return free_vars(f).team; }

std::set<std::string> all_team_vars(const TermTuple &ts) { return free_vars(ts).team; }

std::set<std::string> all_team_vars(const FoFormula &f) {
    std::set<std::string> out = free_vars(f.terms).team;
    if (f.is_quantifier()) out.insert(f.name);
    for (const auto &s : f.subs) {
        auto sub = all_team_vars(s);
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

std::set<std::string> all_team_vars(const IlFormula &f) {
    std::set<std::string> out;
    if (f.kind == IlFormula::Kind::Literal) out = all_team_vars(f.atom);
    for (const auto &tuple : f.tuples) {
        auto vs = all_team_vars(tuple);
        out.insert(vs.begin(), vs.end());
    }
    if (f.kind == IlFormula::Kind::Exists || f.kind == IlFormula::Kind::Forall) out.insert(f.var);
    for (const auto &s : f.subs) {
        auto sub = all_team_vars(s);
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

std::set<std::string> bound_vars(const IlFormula &f) {
    std::set<std::string> out;
    if (f.kind == IlFormula::Kind::Exists || f.kind == IlFormula::Kind::Forall) out.insert(f.var);
    for (const auto &s : f.subs) {
        auto sub = bound_vars(s);
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

// --------------------------------------------------------------- renaming

Term rename_team_vars(const Term &t, const VarRenaming &m) {
    switch (t.kind) {
    case Term::Kind::TeamVar: {
        auto it = m.find(t.name);
        return it == m.end() ? t : Term::team_var(it->second);
    }
    case Term::Kind::App: {
        Term out = t;
        for (auto &a : out.args) a = rename_team_vars(a, m);
        return out;
    }
    default: return t;
    }
}

TermTuple rename_team_vars(const TermTuple &ts, const VarRenaming &m) {
    std::set<std::string> images;
    for (const auto &v : all_team_vars(ts)) {
        auto it = m.find(v);
        if (!images.insert(it == m.end() ? v : it->second).second)
            throw Error("rename_team_vars: mapping is not injective on the free variables");
    }
    TermTuple out;
    out.reserve(ts.size());
    for (const auto &t : ts) out.push_back(rename_team_vars(t, m));
    return out;
}

namespace {

FoFormula rename_rec(const FoFormula &f, const VarRenaming &m) {
    if (m.empty()) return f;
    FoFormula out = f;
    for (auto &t : out.terms) t = rename_team_vars(t, m);
    if (f.is_quantifier()) {
        VarRenaming inner = m;
        inner.erase(f.name);
        auto body_free = free_team_vars(f.subs[0]);
        for (const auto &[from, to] : inner)
            if (to == f.name && body_free.count(from))
                throw Error("rename_team_vars: '" + from + "' -> '" + to + "' would be captured by a quantifier");
        out.subs[0] = rename_rec(f.subs[0], inner);
        return out;
    }
    for (auto &s : out.subs) s = rename_rec(s, m);
    return out;
}

} // namespace

FoFormula rename_team_vars(const FoFormula &f, const VarRenaming &m) {
    std::set<std::string> images;
    for (const auto &v : free_team_vars(f)) {
        auto it = m.find(v);
        if (!images.insert(it == m.end() ? v : it->second).second)
            throw Error("rename_team_vars: mapping is not injective on the free variables");
    }
    return rename_rec(f, m);
}

namespace {

Term param_to_var_term(const Term &t, const std::string &param, const std::string &var) {
    if (t.kind == Term::Kind::ParamVar && t.name == param) return Term::team_var(var);
    if (t.kind != Term::Kind::App) return t;
    Term out = t;
    for (auto &a : out.args) a = param_to_var_term(a, param, var);
    return out;
}

} // namespace

FoFormula param_to_team_var(const FoFormula &f, const std::string &param, const std::string &var) {
    FoFormula out = f;
    for (auto &t : out.terms) t = param_to_var_term(t, param, var);
    for (auto &s : out.subs) s = param_to_team_var(s, param, var);
    return out;
}

FoFormula rename_relations(const FoFormula &f, const std::map<std::string, std::string> &m) {
    FoFormula out = f;
    if (f.kind == FoFormula::Kind::Rel) {
        auto it = m.find(f.name);
        if (it != m.end()) out.name = it->second;
    }
    for (auto &s : out.subs) s = rename_relations(s, m);
    return out;
}

bool mentions_relation(const FoFormula &f, const std::string &rel) {
    if (f.kind == FoFormula::Kind::Rel && f.name == rel) return true;
    return std::any_of(f.subs.begin(), f.subs.end(), [&](const FoFormula &s) { return mentions_relation(s, rel); });
}

bool mentions_relation(const IlFormula &f, const std::string &rel) {
    if (f.kind == IlFormula::Kind::Literal) return mentions_relation(f.atom, rel);
    return std::any_of(f.subs.begin(), f.subs.end(), [&](const IlFormula &s) { return mentions_relation(s, rel); });
}

// ------------------------------------------------------------- dependence

IlFormula desugar_dep(const IlFormula &f) {
    if (f.kind == IlFormula::Kind::Dep) {
        const auto &ts = f.tuples[0];
        if (ts.empty()) throw Error("dep() requires at least one term");
        TermTuple cond(ts.begin(), ts.end() - 1);
        return il::indep(std::move(cond), {ts.back()}, {ts.back()});
    }
    IlFormula out = f;
    for (auto &s : out.subs) s = desugar_dep(s);
    return out;
}

bool contains_dep(const IlFormula &f) {
    if (f.kind == IlFormula::Kind::Dep) return true;
    return std::any_of(f.subs.begin(), f.subs.end(), [](const IlFormula &s) { return contains_dep(s); });
}

bool contains_dependency_atom(const IlFormula &f) {
    if (f.kind == IlFormula::Kind::Dep || f.kind == IlFormula::Kind::Indep) return true;
    return std::any_of(f.subs.begin(), f.subs.end(), [](const IlFormula &s) { return contains_dependency_atom(s); });
}

std::size_t formula_size(const FoFormula &f) {
    std::size_t n = 1;
    for (const auto &s : f.subs) n += formula_size(s);
    return n;
}

std::size_t formula_size(const IlFormula &f) {
    std::size_t n = 1;
    for (const auto &s : f.subs) n += formula_size(s);
    return n;
}

FoFormula to_fo(const IlFormula &f) {
    using K = IlFormula::Kind;
    switch (f.kind) {
    case K::Literal: return f.positive ? f.atom : fo::neg(f.atom);
    case K::Indep:
    case K::Dep: throw Error("to_fo: formula contains a dependency or independence atom");
    case K::Or: return fo::disj(to_fo(f.subs[0]), to_fo(f.subs[1]));
    case K::And: return fo::conj(to_fo(f.subs[0]), to_fo(f.subs[1]));
    case K::Exists: return fo::exists(f.var, to_fo(f.subs[0]));
    case K::Forall: return fo::forall(f.var, to_fo(f.subs[0]));
    }
    throw Error("to_fo: unreachable");
}

IlFormula fo_to_il(const FoFormula &f) {
    using K = FoFormula::Kind;
    switch (f.kind) {
    case K::Rel:
    case K::Eq: return il::literal(true, f);
    case K::Not:
        if (!f.subs[0].is_atom()) throw Error("fo_to_il: negation above a compound formula");
        return il::literal(false, f.subs[0]);
    case K::And: return il::conj(fo_to_il(f.subs[0]), fo_to_il(f.subs[1]));
    case K::Or: return il::tensor_or(fo_to_il(f.subs[0]), fo_to_il(f.subs[1]));
    case K::Exists: return il::exists(f.name, fo_to_il(f.subs[0]));
    case K::Forall: return il::forall(f.name, fo_to_il(f.subs[0]));
    default: throw Error("fo_to_il: connective outside the NNF fragment");
    }
}

std::string fresh_variant(const std::string &base, const std::string &suffix, const std::set<std::string> &taken) {
    std::string sep = "_";
    for (;;) {
        std::string candidate = base + sep + suffix;
        if (!taken.count(candidate)) return candidate;
        sep += "_";
    }
}

} // namespace indep
