#include "indep/prover.h"

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>
#include <queue>
#include <tuple>

namespace indep {

const char *to_string(ProverVerdict::Kind k) {
    switch (k) {
    case ProverVerdict::Kind::Proved: return "proved";
    case ProverVerdict::Kind::Refuted: return "refuted";
    case ProverVerdict::Kind::Unknown: return "unknown";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
    Clock::time_point at;
    bool passed() const { return Clock::now() >= at; }
};

// ------------------------------------------------------------ clause terms

// sym >= 0: function symbol (constants have arity 0); sym < 0: variable -(v+1).
struct PT {
    int sym = 0;
    std::vector<PT> args;
    bool is_var() const { return sym < 0; }
    int var() const { return -sym - 1; }
    static PT variable(int v) { return {-v - 1, {}}; }
    bool operator==(const PT &) const = default;
};

struct Lit {
    bool pos = true;
    int pred = 0;
    std::vector<PT> args;
    bool operator==(const Lit &) const = default;
};

struct Clause {
    std::vector<Lit> lits;
    int depth = 0;
    int vars = 0; // variables are 0 .. vars-1
};

struct Symbols {
    std::vector<std::string> fn_name;
    std::vector<int> fn_arity;
    std::map<std::string, int> fn_id;
    std::vector<std::string> pred_name;
    std::vector<int> pred_arity;
    std::map<std::string, int> pred_id;
    int eq = 0;
    int skolems = 0;

    Symbols() { eq = pred("=", 2); }

    int fn(const std::string &n, int arity) {
        auto it = fn_id.find(n);
        if (it != fn_id.end()) return it->second;
        fn_name.push_back(n);
        fn_arity.push_back(arity);
        return fn_id[n] = static_cast<int>(fn_name.size()) - 1;
    }
    int pred(const std::string &n, int arity) {
        auto it = pred_id.find(n);
        if (it != pred_id.end()) return it->second;
        pred_name.push_back(n);
        pred_arity.push_back(arity);
        return pred_id[n] = static_cast<int>(pred_name.size()) - 1;
    }
    int skolem(int arity) { return fn("#sk" + std::to_string(++skolems), arity); }
};

// ---------------------------------------------------------------- NNF

struct N {
    enum class K { Lit, And, Or, Forall, Exists, True, False } k = K::True;
    Lit lit;
    int var = 0;
    std::vector<N> subs;
};

class Clausifier {
public:
    explicit Clausifier(Symbols &s) : sym_(s) {}

    N convert(const FoFormula &f, bool positive) {
        using K = FoFormula::Kind;
        switch (f.kind) {
        case K::True: return constant(positive);
        case K::False: return constant(!positive);
        case K::Rel:
        case K::Eq: {
            N n;
            n.k = N::K::Lit;
            n.lit.pos = positive;
            n.lit.pred = f.kind == K::Eq ? sym_.eq : sym_.pred(f.name, static_cast<int>(f.terms.size()));
            for (const auto &t : f.terms) n.lit.args.push_back(term(t));
            return n;
        }
        case K::Not: return convert(f.subs[0], !positive);
        case K::And:
        case K::Or: {
            const bool conj = (f.kind == K::And) == positive;
            return binary(conj, convert(f.subs[0], positive), convert(f.subs[1], positive));
        }
        case K::Implies:
            // a -> b  ==  not a | b
            return binary(!positive, convert(f.subs[0], !positive), convert(f.subs[1], positive));
        case K::Iff: {
            const auto &a = f.subs[0];
            const auto &b = f.subs[1];
            if (positive)
                return binary(true, binary(false, convert(a, false), convert(b, true)),
                              binary(false, convert(a, true), convert(b, false)));
            return binary(false, binary(true, convert(a, true), convert(b, false)),
                          binary(true, convert(a, false), convert(b, true)));
        }
        case K::Exists:
        case K::Forall: {
            const bool universal = (f.kind == K::Forall) == positive;
            const int v = next_var_++;
            scope_.emplace_back(f.name, v);
            N body = convert(f.subs[0], positive);
            scope_.pop_back();
            if (body.k == N::K::True || body.k == N::K::False) return body;
            N n;
            n.k = universal ? N::K::Forall : N::K::Exists;
            n.var = v;
            n.subs.push_back(std::move(body));
            return n;
        }
        }
        return constant(true);
    }

    // Replaces existentials by Skolem terms over the enclosing universals
    // that occur free in the existential's body, and drops the universals.
    N skolemize(const N &n, std::vector<int> &universals, std::map<int, PT> &subst) {
        switch (n.k) {
        case N::K::Lit: {
            N out = n;
            for (auto &a : out.lit.args) a = apply(a, subst);
            return out;
        }
        case N::K::And:
        case N::K::Or: {
            N out;
            out.k = n.k;
            for (const auto &s : n.subs) out.subs.push_back(skolemize(s, universals, subst));
            return out;
        }
        case N::K::Forall: {
            universals.push_back(n.var);
            N out = skolemize(n.subs[0], universals, subst);
            universals.pop_back();
            return out;
        }
        case N::K::Exists: {
            std::set<int> fv;
            free_vars(n, fv);
            std::vector<PT> args;
            for (int u : universals)
                if (fv.count(u)) args.push_back(PT::variable(u));
            PT sk{sym_.skolem(static_cast<int>(args.size())), args};
            for (auto &a : sk.args) a = apply(a, subst);
            subst[n.var] = sk;
            N out = skolemize(n.subs[0], universals, subst);
            subst.erase(n.var);
            return out;
        }
        default: return n;
        }
    }

private:
    static N constant(bool value) {
        N n;
        n.k = value ? N::K::True : N::K::False;
        return n;
    }

    static N binary(bool conj, N a, N b) {
        const auto unit = conj ? N::K::True : N::K::False;
        const auto zero = conj ? N::K::False : N::K::True;
        if (a.k == zero || b.k == zero) return constant(!conj);
        if (a.k == unit) return b;
        if (b.k == unit) return a;
        N n;
        n.k = conj ? N::K::And : N::K::Or;
        n.subs.push_back(std::move(a));
        n.subs.push_back(std::move(b));
        return n;
    }

    PT term(const Term &t) {
        switch (t.kind) {
        case Term::Kind::TeamVar: {
            auto it = std::find_if(scope_.rbegin(), scope_.rend(), [&](const auto &p) { return p.first == t.name; });
            if (it == scope_.rend()) throw Error("prover input has a free team variable '" + t.name + "'");
            return PT::variable(it->second);
        }
        case Term::Kind::ParamVar: return {sym_.fn("$" + t.name, 0), {}};
        case Term::Kind::Const: return {sym_.fn(t.name, 0), {}};
        case Term::Kind::App: {
            PT out{sym_.fn(t.name, static_cast<int>(t.args.size())), {}};
            for (const auto &a : t.args) out.args.push_back(term(a));
            return out;
        }
        }
        return {};
    }

    static PT apply(const PT &t, const std::map<int, PT> &subst) {
        if (t.is_var()) {
            auto it = subst.find(t.var());
            return it == subst.end() ? t : it->second;
        }
        PT out{t.sym, {}};
        for (const auto &a : t.args) out.args.push_back(apply(a, subst));
        return out;
    }

    static void term_vars(const PT &t, std::set<int> &out) {
        if (t.is_var()) out.insert(t.var());
        for (const auto &a : t.args) term_vars(a, out);
    }

    static void free_vars(const N &n, std::set<int> &out) {
        switch (n.k) {
        case N::K::Lit:
            for (const auto &a : n.lit.args) term_vars(a, out);
            break;
        case N::K::Forall:
        case N::K::Exists: {
            std::set<int> inner;
            free_vars(n.subs[0], inner);
            inner.erase(n.var);
            out.insert(inner.begin(), inner.end());
            break;
        }
        default:
            for (const auto &s : n.subs) free_vars(s, out);
        }
    }

    Symbols &sym_;
    std::vector<std::pair<std::string, int>> scope_;
    int next_var_ = 0;
};

struct ClauseExplosion {};

std::vector<std::vector<Lit>> cnf(const N &n, std::size_t cap) {
    switch (n.k) {
    case N::K::True: return {};
    case N::K::False: return {{}};
    case N::K::Lit: return {{n.lit}};
    case N::K::And: {
        auto a = cnf(n.subs[0], cap);
        auto b = cnf(n.subs[1], cap);
        a.insert(a.end(), b.begin(), b.end());
        if (a.size() > cap) throw ClauseExplosion{};
        return a;
    }
    case N::K::Or: {
        auto a = cnf(n.subs[0], cap);
        auto b = cnf(n.subs[1], cap);
        if (a.size() * b.size() > cap) throw ClauseExplosion{};
        std::vector<std::vector<Lit>> out;
        for (const auto &x : a)
            for (const auto &y : b) {
                auto c = x;
                c.insert(c.end(), y.begin(), y.end());
                out.push_back(std::move(c));
            }
        return out;
    }
    default: throw Error("quantifier left after skolemization");
    }
}

// ----------------------------------------------------------- unification

class Subst {
public:
    explicit Subst(int vars) : b_(static_cast<std::size_t>(vars)) {}

    // Grows the variable range; only call between unifications.
    void ensure(int vars) {
        if (b_.size() < static_cast<std::size_t>(vars)) b_.resize(static_cast<std::size_t>(vars));
    }

    const PT &walk(const PT &t) const {
        const PT *p = &t;
        while (p->is_var() && b_[static_cast<std::size_t>(p->var())]) p = &*b_[static_cast<std::size_t>(p->var())];
        return *p;
    }

    bool occurs(int v, const PT &t) const {
        const PT &w = walk(t);
        if (w.is_var()) return w.var() == v;
        return std::any_of(w.args.begin(), w.args.end(), [&](const PT &a) { return occurs(v, a); });
    }

    bool unify(const PT &a, const PT &b) {
        const PT &x = walk(a);
        const PT &y = walk(b);
        if (x.is_var() && y.is_var() && x.var() == y.var()) return true;
        if (x.is_var()) return bind(x.var(), y);
        if (y.is_var()) return bind(y.var(), x);
        if (x.sym != y.sym || x.args.size() != y.args.size()) return false;
        for (std::size_t i = 0; i < x.args.size(); ++i)
            if (!unify(x.args[i], y.args[i])) return false;
        return true;
    }

    PT apply(const PT &t) const {
        const PT &w = walk(t);
        if (w.is_var()) return w;
        PT out{w.sym, {}};
        out.args.reserve(w.args.size());
        for (const auto &a : w.args) out.args.push_back(apply(a));
        return out;
    }

    std::size_t mark() const { return trail_.size(); }
    void undo(std::size_t m) {
        while (trail_.size() > m) {
            b_[static_cast<std::size_t>(trail_.back())].reset();
            trail_.pop_back();
        }
    }

private:
    bool bind(int v, const PT &t) {
        if (occurs(v, t)) return false;
        b_[static_cast<std::size_t>(v)] = t;
        trail_.push_back(v);
        return true;
    }

    std::vector<std::optional<PT>> b_;
    std::vector<int> trail_;
};

PT shift(const PT &t, int by) {
    if (t.is_var()) return PT::variable(t.var() + by);
    PT out{t.sym, {}};
    for (const auto &a : t.args) out.args.push_back(shift(a, by));
    return out;
}

// One-way matching: pattern variables bind, target is rigid.
bool match(const PT &pat, const PT &target, std::vector<const PT *> &bind, std::vector<int> &trail) {
    if (pat.is_var()) {
        auto &slot = bind[static_cast<std::size_t>(pat.var())];
        if (slot) return *slot == target;
        slot = &target;
        trail.push_back(pat.var());
        return true;
    }
    if (target.is_var() || pat.sym != target.sym || pat.args.size() != target.args.size()) return false;
    for (std::size_t i = 0; i < pat.args.size(); ++i)
        if (!match(pat.args[i], target.args[i], bind, trail)) return false;
    return true;
}

void undo(std::vector<const PT *> &bind, std::vector<int> &trail, std::size_t mark) {
    while (trail.size() > mark) {
        bind[static_cast<std::size_t>(trail.back())] = nullptr;
        trail.pop_back();
    }
}

std::size_t weight(const PT &t) {
    std::size_t w = 1;
    for (const auto &a : t.args) w += weight(a);
    return w;
}

std::size_t weight(const Clause &c) {
    std::size_t w = 0;
    for (const auto &l : c.lits)
        for (const auto &a : l.args) w += weight(a);
    return w + c.lits.size();
}

// ------------------------------------------------------------ saturation

enum class Outcome { Refuted, Saturated, Exhausted };

class Saturation {
public:
    Saturation(const Symbols &sym, int depth_limit, Deadline deadline)
        : sym_(sym), limit_(depth_limit), deadline_(deadline) {}

    Outcome run(const std::vector<Clause> &input) {
        for (const auto &c : input)
            if (add(c)) return Outcome::Refuted;
        while (!sos_.empty()) {
            if (deadline_.passed() || kept_.size() > kClauseCap) return Outcome::Exhausted;
            const std::size_t g = std::get<2>(sos_.top());
            sos_.pop();
            if (dead_[g]) continue;
            if (infer(g)) return Outcome::Refuted;
            if (overflow_) return Outcome::Exhausted;
        }
        return incomplete_ ? Outcome::Exhausted : Outcome::Saturated;
    }

    std::size_t steps() const { return steps_; }

private:
    static constexpr std::size_t kClauseCap = 20000;

    bool is_eq(const Lit &l) const { return l.pred == sym_.eq; }

    // Removes false equalities; returns false for tautologies.
    bool clean(Clause &c) const {
        std::vector<Lit> out;
        for (auto &l : c.lits) {
            if (is_eq(l) && l.args[0] == l.args[1]) {
                if (l.pos) return false;
                continue;
            }
            if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
        }
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                if (out[i].pos != out[j].pos && out[i].pred == out[j].pred && out[i].args == out[j].args) return false;
        c.lits = std::move(out);
        return true;
    }

    static void renumber(Clause &c) {
        std::map<int, int> ren;
        auto fix = [&](auto &&self, PT &t) -> void {
            if (t.is_var()) {
                auto [it, fresh] = ren.try_emplace(t.var(), static_cast<int>(ren.size()));
                (void)fresh;
                t = PT::variable(it->second);
                return;
            }
            for (auto &a : t.args) self(self, a);
        };
        for (auto &l : c.lits)
            for (auto &a : l.args) fix(fix, a);
        c.vars = static_cast<int>(ren.size());
    }

    bool lit_matches(const Lit &pat, const Lit &target, std::vector<const PT *> &bind, std::vector<int> &trail) const {
        if (pat.pos != target.pos || pat.pred != target.pred) return false;
        const std::size_t m = trail.size();
        bool ok = true;
        for (std::size_t i = 0; ok && i < pat.args.size(); ++i) ok = match(pat.args[i], target.args[i], bind, trail);
        if (ok) return true;
        undo(bind, trail, m);
        if (is_eq(pat)) {
            ok = match(pat.args[0], target.args[1], bind, trail) && match(pat.args[1], target.args[0], bind, trail);
            if (ok) return true;
            undo(bind, trail, m);
        }
        return false;
    }

    bool subsumes_from(const Clause &c, std::size_t i, const Clause &d, std::vector<const PT *> &bind,
                       std::vector<int> &trail) const {
        if (i == c.lits.size()) return true;
        for (const auto &t : d.lits) {
            const std::size_t m = trail.size();
            if (lit_matches(c.lits[i], t, bind, trail) && subsumes_from(c, i + 1, d, bind, trail)) return true;
            undo(bind, trail, m);
        }
        return false;
    }

    bool subsumes(const Clause &c, const Clause &d) const {
        if (c.lits.size() > d.lits.size()) return false;
        std::vector<const PT *> bind(static_cast<std::size_t>(c.vars), nullptr);
        std::vector<int> trail;
        return subsumes_from(c, 0, d, bind, trail);
    }

    // Deletes literals of `c` whose complement is an instance of a unit.
    void unit_delete(Clause &c) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < c.lits.size() && !changed; ++i) {
                Lit flipped = c.lits[i];
                flipped.pos = !flipped.pos;
                for (std::size_t u : units_) {
                    const Clause &uc = kept_[u];
                    std::vector<const PT *> bind(static_cast<std::size_t>(uc.vars), nullptr);
                    std::vector<int> trail;
                    if (lit_matches(uc.lits[0], flipped, bind, trail)) {
                        c.lits.erase(c.lits.begin() + static_cast<std::ptrdiff_t>(i));
                        c.depth = std::max(c.depth, uc.depth);
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    // Returns true when the empty clause is derived.
    bool add(Clause c) {
        if (c.depth > limit_) {
            incomplete_ = true;
            return false;
        }
        if (!clean(c)) return false;
        unit_delete(c);
        if (c.lits.empty()) return true;
        renumber(c);
        for (std::size_t k = 0; k < kept_.size(); ++k)
            if (!dead_[k] && subsumes(kept_[k], c)) return false;
        const std::size_t id = kept_.size();
        kept_.push_back(std::move(c));
        dead_.push_back(false);
        const Clause &nc = kept_.back();
        if (nc.lits.size() == 1) units_.push_back(id);
        // Anything inferred from a clause at the limit would exceed it.
        if (nc.depth >= limit_) incomplete_ = true;
        else sos_.emplace(nc.depth, weight(nc), id);
        return false;
    }

    static bool positive(const Clause &c) {
        return std::all_of(c.lits.begin(), c.lits.end(), [](const Lit &l) { return l.pos; });
    }

    struct Used {
        const Clause *clause;
        std::size_t lit;
        int offset;
    };

    // Positive hyperresolution: every negative literal of the nucleus is
    // resolved against a literal of some positive clause. When `must` is
    // set, that satellite has to take part.
    void hyper(const Clause &nuc, const std::vector<std::size_t> &neg, std::size_t k, Subst &s, int offset,
               std::vector<Used> &used, std::optional<std::size_t> must, bool must_used, std::vector<Clause> &out) {
        if (overflow_) return;
        if (k == neg.size()) {
            if (must && !must_used) return;
            if ((++steps_ & 255U) == 0 && deadline_.passed()) overflow_ = true;
            Clause r;
            r.depth = nuc.depth;
            for (const auto &l : nuc.lits)
                if (l.pos) r.lits.push_back(apply(l, s, 0));
            for (const auto &u : used) {
                r.depth = std::max(r.depth, u.clause->depth);
                for (std::size_t j = 0; j < u.clause->lits.size(); ++j)
                    if (j != u.lit) r.lits.push_back(apply(u.clause->lits[j], s, u.offset));
            }
            ++r.depth;
            out.push_back(std::move(r));
            return;
        }
        const Lit &target = nuc.lits[neg[k]];
        if (is_eq(target)) {
            // Against reflexivity: unify the two sides.
            const std::size_t mark = s.mark();
            if (s.unify(target.args[0], target.args[1]))
                hyper(nuc, neg, k + 1, s, offset, used, must, must_used, out);
            s.undo(mark);
        }
        for (std::size_t id : sats_) {
            if (dead_[id]) continue;
            const Clause &sat = kept_[id];
            for (std::size_t j = 0; j < sat.lits.size(); ++j) {
                const Lit &cand = sat.lits[j];
                if (cand.pred != target.pred) continue;
                for (int orient = 0; orient < (is_eq(target) ? 2 : 1); ++orient) {
                    const std::size_t mark = s.mark();
                    s.ensure(offset + sat.vars);
                    bool ok = true;
                    const std::size_t n = target.args.size();
                    for (std::size_t a = 0; ok && a < n; ++a)
                        ok = s.unify(target.args[a], shift(cand.args[orient ? n - 1 - a : a], offset));
                    if (ok) {
                        used.push_back({&sat, j, offset});
                        hyper(nuc, neg, k + 1, s, offset + sat.vars, used, must, must_used || id == must, out);
                        used.pop_back();
                    }
                    s.undo(mark);
                }
            }
        }
    }

    void hyper_from(const Clause &nuc, std::optional<std::size_t> must, std::vector<Clause> &out) {
        std::vector<std::size_t> neg;
        for (std::size_t i = 0; i < nuc.lits.size(); ++i)
            if (!nuc.lits[i].pos) neg.push_back(i);
        Subst s(nuc.vars);
        std::vector<Used> used;
        hyper(nuc, neg, 0, s, nuc.vars, used, must, false, out);
    }

    // Factors of a positive clause; they stay at the clause's level.
    void factors(const Clause &a, std::vector<Clause> &out) {
        for (std::size_t i = 0; i < a.lits.size(); ++i)
            for (std::size_t j = i + 1; j < a.lits.size(); ++j) {
                const Lit &x = a.lits[i];
                const Lit &y = a.lits[j];
                if (x.pred != y.pred) continue;
                Subst s(a.vars);
                bool ok = true;
                for (std::size_t k = 0; ok && k < x.args.size(); ++k) ok = s.unify(x.args[k], y.args[k]);
                if (!ok) continue;
                ++steps_;
                Clause r;
                r.depth = a.depth;
                for (std::size_t k = 0; k < a.lits.size(); ++k)
                    if (k != j) r.lits.push_back(apply(a.lits[k], s, 0));
                out.push_back(std::move(r));
            }
    }

    static Lit apply(const Lit &l, const Subst &s, int shift_by) {
        Lit out{l.pos, l.pred, {}};
        for (const auto &a : l.args) out.args.push_back(s.apply(shift_by ? shift(a, shift_by) : a));
        return out;
    }

    bool infer(std::size_t g) {
        std::vector<Clause> fresh;
        const Clause given = kept_[g];
        if (positive(given)) {
            sats_.push_back(g);
            factors(given, fresh);
            for (std::size_t n : nucs_)
                if (!dead_[n]) hyper_from(kept_[n], g, fresh);
        } else {
            nucs_.push_back(g);
            hyper_from(given, std::nullopt, fresh);
        }
        for (auto &c : fresh)
            if (add(std::move(c))) return true;
        return false;
    }

    const Symbols &sym_;
    int limit_;
    Deadline deadline_;
    std::vector<Clause> kept_;
    std::vector<bool> dead_;
    std::vector<std::size_t> units_;
    std::vector<std::size_t> sats_;
    std::vector<std::size_t> nucs_;
    bool overflow_ = false;
    // (depth, weight, id): shallow clauses first, lighter ones among them.
    using Key = std::tuple<int, std::size_t, std::size_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> sos_;
    bool incomplete_ = false;
    std::size_t steps_ = 0;
};

std::vector<Clause> equality_axioms(const Symbols &sym) {
    std::vector<Clause> out;
    auto v = PT::variable;
    auto eq = [&](bool pos, PT a, PT b) { return Lit{pos, sym.eq, {std::move(a), std::move(b)}}; };
    out.push_back({{eq(false, v(0), v(1)), eq(true, v(1), v(0))}, 0, 2});
    out.push_back({{eq(false, v(0), v(1)), eq(false, v(1), v(2)), eq(true, v(0), v(2))}, 0, 3});
    for (std::size_t f = 0; f < sym.fn_name.size(); ++f) {
        const int n = sym.fn_arity[f];
        for (int i = 0; i < n; ++i) {
            PT l{static_cast<int>(f), {}}, r{static_cast<int>(f), {}};
            for (int k = 0; k < n; ++k) {
                l.args.push_back(v(k == i ? n : k));
                r.args.push_back(v(k == i ? n + 1 : k));
            }
            out.push_back({{eq(false, v(n), v(n + 1)), eq(true, l, r)}, 0, n + 2});
        }
    }
    for (std::size_t p = 0; p < sym.pred_name.size(); ++p) {
        if (static_cast<int>(p) == sym.eq) continue;
        const int n = sym.pred_arity[p];
        for (int i = 0; i < n; ++i) {
            Lit l{false, static_cast<int>(p), {}}, r{true, static_cast<int>(p), {}};
            for (int k = 0; k < n; ++k) {
                l.args.push_back(v(k == i ? n : k));
                r.args.push_back(v(k == i ? n + 1 : k));
            }
            out.push_back({{eq(false, v(n), v(n + 1)), l, r}, 0, n + 2});
        }
    }
    return out;
}

bool uses_equality(const std::vector<Clause> &cs, const Symbols &sym) {
    for (const auto &c : cs)
        for (const auto &l : c.lits)
            if (l.pred == sym.eq) return true;
    return false;
}

// Replaces quantified subformulas that occur more than once by fresh
// predicates over their free team variables, each with a defining
// biconditional. Satisfiability is unchanged and clausification no longer
// copies the shared subformulas.
class SharedNames {
public:
    std::vector<FoFormula> apply(const std::vector<FoFormula> &sentences) {
        for (const auto &f : sentences) count(f, true);
        std::vector<FoFormula> out;
        for (const auto &f : sentences) out.push_back(rewrite(f, true));
        out.insert(out.end(), defs_.begin(), defs_.end());
        return out;
    }

private:
    static bool quantified(const FoFormula &f) {
        return f.kind == FoFormula::Kind::Exists || f.kind == FoFormula::Kind::Forall;
    }

    // `top` marks the universal prefix of a sentence, which is never named.
    void count(const FoFormula &f, bool top) {
        const bool prefix = top && f.kind == FoFormula::Kind::Forall;
        if (quantified(f) && !prefix) ++seen_[f];
        for (const auto &c : f.subs) count(c, prefix);
    }

    FoFormula rewrite(const FoFormula &f, bool top) {
        const bool prefix = top && f.kind == FoFormula::Kind::Forall;
        if (quantified(f) && !prefix && seen_[f] > 1) {
            if (auto it = names_.find(f); it != names_.end()) return it->second;
            std::vector<std::string> vars;
            for (const auto &v : free_team_vars(f)) vars.push_back(v);
            std::vector<Term> args;
            for (const auto &v : vars) args.push_back(Term::team_var(v));
            FoFormula atom = fo::rel("$share" + std::to_string(names_.size()), std::move(args));
            names_.emplace(f, atom);
            FoFormula body = f;
            for (auto &c : body.subs) c = rewrite(c, false);
            defs_.push_back(fo::forall_all(vars, fo::iff(atom, std::move(body))));
            return atom;
        }
        FoFormula g = f;
        for (auto &c : g.subs) c = rewrite(c, prefix);
        return g;
    }

    std::map<FoFormula, int> seen_;
    std::map<FoFormula, FoFormula> names_;
    std::vector<FoFormula> defs_;
};

struct Refutation {
    bool refuted = false;
    std::size_t steps = 0;
    std::string reason;
};

Refutation run_refutation(const std::vector<FoFormula> &input_sentences, const ProverBudget &budget,
                          Deadline deadline) {
    Refutation out;
    const std::vector<FoFormula> sentences = SharedNames().apply(input_sentences);
    if (budget.depth <= 0) {
        out.reason = "refutation search disabled (depth 0)";
        return out;
    }
    Symbols sym;
    std::vector<Clause> input;
    try {
        for (const auto &f : sentences) {
            Clausifier c(sym);
            N n = c.convert(f, true);
            std::vector<int> universals;
            std::map<int, PT> subst;
            N sk = c.skolemize(n, universals, subst);
            for (auto &lits : cnf(sk, 4000)) {
                Clause cl{std::move(lits), 0, 0};
                int maxv = -1;
                auto scan = [&](auto &&self, const PT &t) -> void {
                    if (t.is_var()) maxv = std::max(maxv, t.var());
                    for (const auto &a : t.args) self(self, a);
                };
                for (const auto &l : cl.lits)
                    for (const auto &a : l.args) scan(scan, a);
                cl.vars = maxv + 1;
                input.push_back(std::move(cl));
            }
            if (input.size() > 4000) throw ClauseExplosion{};
        }
    } catch (const ClauseExplosion &) {
        out.reason = "clause normal form too large";
        return out;
    }
    const bool eq = uses_equality(input, sym);
    auto with_axioms = input;
    if (eq) {
        auto ax = equality_axioms(sym);
        with_axioms.insert(with_axioms.end(), ax.begin(), ax.end());
    }
    bool saturated_plain = false;
    for (int d = 1; d <= budget.depth; ++d) {
        if (!saturated_plain) {
            Saturation plain(sym, d, deadline);
            auto r = plain.run(input);
            out.steps += plain.steps();
            if (r == Outcome::Refuted) {
                out.refuted = true;
                return out;
            }
            if (r == Outcome::Saturated && !eq) {
                out.reason = "clause set saturated without contradiction";
                return out;
            }
            saturated_plain = r == Outcome::Saturated;
        }
        if (eq) {
            Saturation full(sym, d, deadline);
            auto r = full.run(with_axioms);
            out.steps += full.steps();
            if (r == Outcome::Refuted) {
                out.refuted = true;
                return out;
            }
            if (r == Outcome::Saturated) {
                out.reason = "clause set saturated without contradiction";
                return out;
            }
        }
        if (deadline.passed()) {
            out.reason = "time budget exhausted";
            return out;
        }
    }
    out.reason = "depth budget exhausted";
    return out;
}

std::vector<std::string> params_of(const std::vector<FoFormula> &fs) {
    std::set<std::string> ps;
    for (const auto &f : fs) {
        const auto fv = free_vars(f);
        if (!fv.team.empty()) throw Error("sentence has free team variable '" + *fv.team.begin() + "'");
        ps.insert(fv.params.begin(), fv.params.end());
    }
    return {ps.begin(), ps.end()};
}

// nullopt: none found; the flag reports whether the search finished.
std::optional<std::pair<Structure, ParamAssignment>> search_models(const std::vector<FoFormula> &sentences, int from,
                                                                   int to, const Deadline *deadline, bool *finished) {
    Signature sig;
    for (const auto &f : sentences) collect_signature(f, sig);
    const auto params = params_of(sentences);
    if (finished) *finished = true;
    for (int size = std::max(from, 1); size <= to; ++size) {
        std::optional<std::pair<Structure, ParamAssignment>> found;
        bool timed_out = false;
        std::size_t visited = 0;
        for_each_structure(sig, static_cast<std::size_t>(size), params,
                           [&](const Structure &m, const ParamAssignment &h) {
                               if (deadline && (++visited & 63U) == 0 && deadline->passed()) {
                                   timed_out = true;
                                   return false;
                               }
                               for (const auto &f : sentences)
                                   if (!eval_fo(m, h, {}, f)) return true;
                               found.emplace(m, h);
                               return false;
                           });
        if (found) return found;
        if (timed_out) {
            if (finished) *finished = false;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::string cache_key(const std::vector<FoFormula> &premises, const std::vector<FoFormula> &goals,
                      const ProverBudget &b) {
    std::string k = std::to_string(b.depth) + "/" + std::to_string(b.ms) + "/" + std::to_string(b.cm_size) + "|";
    for (const auto &f : premises) k += to_string(f) + ";";
    k += "|";
    for (const auto &f : goals) k += to_string(f) + ";";
    return k;
}

std::mutex cache_mutex;
std::map<std::string, ProverVerdict> cache;

} // namespace

bool refute(const std::vector<FoFormula> &sentences, const ProverBudget &budget, std::size_t *steps) {
    Deadline dl{Clock::now() + std::chrono::milliseconds(budget.ms)};
    auto r = run_refutation(sentences, budget, dl);
    if (steps) *steps = r.steps;
    return r.refuted;
}

std::optional<std::pair<Structure, ParamAssignment>> find_countermodel(const std::vector<FoFormula> &sentences,
                                                                       int max_size) {
    if (max_size < 1) throw Error("countermodel size bound must be at least 1");
    return search_models(sentences, 1, max_size, nullptr, nullptr);
}

namespace {

// Splits a goal into conjunctive pieces under its universal prefix:
// ∀v(A ∧ B), ∀v(A ↔ B) and ∀v(A → B ∧ C) each yield two goals.
void split_conjuncts(const FoFormula &f, std::vector<std::string> &prefix, std::vector<FoFormula> &out) {
    using K = FoFormula::Kind;
    switch (f.kind) {
    case K::True: return;
    case K::Forall:
        prefix.push_back(f.name);
        split_conjuncts(f.subs[0], prefix, out);
        prefix.pop_back();
        return;
    case K::And:
        for (const auto &c : f.subs) split_conjuncts(c, prefix, out);
        return;
    case K::Iff:
        split_conjuncts(fo::implies(f.subs[0], f.subs[1]), prefix, out);
        split_conjuncts(fo::implies(f.subs[1], f.subs[0]), prefix, out);
        return;
    case K::Implies:
        if (f.subs[1].kind == K::And || f.subs[1].kind == K::Iff || f.subs[1].kind == K::Forall) {
            // quantified variables of a consequent are renamed away from the antecedent first
            if (f.subs[1].kind == K::Forall && free_team_vars(f.subs[0]).count(f.subs[1].name)) break;
            const FoFormula &b = f.subs[1];
            if (b.kind == K::Forall) {
                prefix.push_back(b.name);
                split_conjuncts(fo::implies(f.subs[0], b.subs[0]), prefix, out);
                prefix.pop_back();
            } else if (b.kind == K::And) {
                for (const auto &c : b.subs) split_conjuncts(fo::implies(f.subs[0], c), prefix, out);
            } else {
                split_conjuncts(fo::implies(f.subs[0], fo::implies(b.subs[0], b.subs[1])), prefix, out);
                split_conjuncts(fo::implies(f.subs[0], fo::implies(b.subs[1], b.subs[0])), prefix, out);
            }
            return;
        }
        break;
    default: break;
    }
    out.push_back(fo::forall_all(prefix, f));
}

} // namespace

ProverVerdict prove_entailment(const std::vector<FoFormula> &premises, const std::vector<FoFormula> &goals,
                               const ProverBudget &budget) {
    const std::string key = cache_key(premises, goals, budget);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    ProverVerdict v;
    // Each conjunct of the goal is settled on its own; the refutations stay
    // Horn-like instead of distributing one negated conjunction.
    std::vector<FoFormula> conjuncts;
    std::vector<std::string> prefix;
    for (const auto &g : goals) split_conjuncts(g, prefix, conjuncts);
    if (conjuncts.size() > 1) {
        v.kind = ProverVerdict::Kind::Proved;
        for (const auto &g : conjuncts) {
            ProverVerdict one = prove_entailment(premises, {g}, budget);
            v.steps += one.steps;
            if (one.kind == ProverVerdict::Kind::Refuted) {
                v = std::move(one);
                // parameters absent from the refuted conjunct are irrelevant to it
                std::vector<FoFormula> all = premises;
                all.insert(all.end(), goals.begin(), goals.end());
                for (const auto &p : params_of(all)) v.params.emplace(p, 0);
                Signature sig;
                for (const auto &f : all) collect_signature(f, sig);
                const Signature have = v.model->signature();
                for (const auto &[r, n] : sig.relations)
                    if (!have.has_relation(r)) v.model->declare_relation(r, n);
                for (const auto &[fn, n] : sig.functions)
                    if (!have.has_function(fn)) v.model->declare_function(fn, n);
                for (const auto &c : sig.constants)
                    if (!have.has_constant(c)) v.model->set_constant(c, 0);
                break;
            }
            if (one.kind == ProverVerdict::Kind::Unknown && v.kind == ProverVerdict::Kind::Proved) {
                v.kind = ProverVerdict::Kind::Unknown;
                v.reason = one.reason;
            }
        }
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(key, v);
        return v;
    }
    const Deadline dl{Clock::now() + std::chrono::milliseconds(budget.ms)};
    std::vector<FoFormula> refutand = premises;
    refutand.push_back(fo::neg(fo::conj_all(goals)));
    params_of(refutand);

    auto refuted_by = [&](std::optional<std::pair<Structure, ParamAssignment>> cm) {
        if (!cm) return false;
        for (const auto &p : premises)
            if (!eval_fo(cm->first, cm->second, {}, p)) throw Error("countermodel failed re-verification");
        if (eval_fo(cm->first, cm->second, {}, fo::conj_all(goals))) throw Error("countermodel failed re-verification");
        v.kind = ProverVerdict::Kind::Refuted;
        v.model = std::move(cm->first);
        v.params = std::move(cm->second);
        return true;
    };

    bool finished = true;
    if (goals.empty()) {
        v.kind = ProverVerdict::Kind::Proved;
    } else if (!refuted_by(search_models(refutand, 1, std::min(2, budget.cm_size), &dl, &finished))) {
        auto r = run_refutation(refutand, budget, dl);
        v.steps = r.steps;
        if (r.refuted) {
            v.kind = ProverVerdict::Kind::Proved;
        } else if (!refuted_by(search_models(refutand, 3, budget.cm_size, &dl, &finished))) {
            v.reason = r.reason;
            if (!finished) v.reason += "; countermodel search timed out";
        }
    }
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(key, v);
    return v;
}

} // namespace indep
