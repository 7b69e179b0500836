#include "indep/semantics.h"

#include <algorithm>
#include <bit>
#include <map>

namespace indep {

namespace {

void require_team_covers(const Team &x, const IlFormula &phi) {
    const auto fv = free_vars(phi);
    if (!fv.params.empty()) throw Error("independence formulas must not contain parameter variables");
    for (const auto &v : fv.team)
        if (!x.has_var(v)) throw Error("free variable '" + v + "' is not in the team domain");
}

Row eval_tuple(const std::vector<CompiledTerm> &ts, const std::vector<Element> &env) {
    Row r;
    r.reserve(ts.size());
    for (const auto &t : ts) r.push_back(t.eval(env));
    return r;
}

std::vector<CompiledTerm> compile_tuple(const TermTuple &ts, const Structure &m, const std::vector<std::string> &vars) {
    std::vector<CompiledTerm> out;
    for (const auto &t : ts) {
        if (!free_vars(t).params.empty()) throw Error("independence atom terms must be parameter-free");
        out.emplace_back(t, m, vars, ParamAssignment{});
    }
    return out;
}

// Atoms of the dependence kind, indep(t1 ; t2 ; t2), are downward closed,
// and downward closure is preserved by every connective and quantifier.
bool downward_closed(const IlFormula &f) {
    switch (f.kind) {
    case IlFormula::Kind::Literal: return true;
    case IlFormula::Kind::Indep: return f.tuples[1] == f.tuples[2];
    case IlFormula::Kind::Dep: return true;
    default:
        return std::all_of(f.subs.begin(), f.subs.end(), [](const IlFormula &s) { return downward_closed(s); });
    }
}

void top_conjuncts(const IlFormula &f, std::vector<const IlFormula *> &out) {
    if (f.kind == IlFormula::Kind::And) {
        top_conjuncts(f.subs[0], out);
        top_conjuncts(f.subs[1], out);
    } else {
        out.push_back(&f);
    }
}

using Key = std::pair<const IlFormula *, Team>;

class FullEvaluator {
public:
    FullEvaluator(const Structure &m, EvalOptions opts) : m_(m), opts_(opts) {}

    bool sat(const IlFormula &f, const Team &x) {
        const Key key{&f, x};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const bool r = compute(f, x);
        memo_.emplace(key, r);
        return r;
    }

    std::optional<SatTrace> explain(const IlFormula &f, const Team &x) {
        using K = IlFormula::Kind;
        if (!sat(f, x)) return std::nullopt;
        SatTrace t{x, {}};
        switch (f.kind) {
        case K::Literal:
        case K::Indep:
        case K::Dep: break;
        case K::And:
            t.children.push_back(*explain(f.subs[0], x));
            t.children.push_back(*explain(f.subs[1], x));
            break;
        case K::Or: {
            auto yz = split(f, x);
            t.children.push_back(*explain(f.subs[0], yz->first));
            t.children.push_back(*explain(f.subs[1], yz->second));
            break;
        }
        case K::Exists: t.children.push_back(*explain(f.subs[0], *variation(f, x))); break;
        case K::Forall: t.children.push_back(*explain(f.subs[0], team_extend_universal(m_, x, f.var))); break;
        }
        return t;
    }

private:
    struct Info {
        bool flat = false;
        bool down = false;
        FoFormula fo;
    };

    const Info &info(const IlFormula &f) {
        auto it = info_.find(&f);
        if (it != info_.end()) return it->second;
        Info i;
        i.flat = is_flat_fragment(f);
        i.down = downward_closed(f);
        if (i.flat) i.fo = to_fo(f);
        return info_.emplace(&f, std::move(i)).first->second;
    }

    const CompiledFo &compiled(const FoFormula &f, const std::vector<std::string> &vars) {
        auto key = std::make_pair(&f, vars);
        auto it = compiled_.find(key);
        if (it == compiled_.end()) it = compiled_.emplace(key, CompiledFo(f, m_, vars, {})).first;
        return it->second;
    }

    bool row_sat(const FoFormula &f, const std::vector<std::string> &vars, const Row &r) {
        const auto &c = compiled(f, vars);
        env_.assign(std::max(c.slots(), r.size()), 0);
        std::copy(r.begin(), r.end(), env_.begin());
        return c.eval(env_);
    }

    bool all_rows(const FoFormula &f, const Team &x) {
        for (const auto &r : x.rows())
            if (!row_sat(f, x.vars(), r)) return false;
        return true;
    }

    bool compute(const IlFormula &f, const Team &x) {
        using K = IlFormula::Kind;
        if (opts_.shortcuts && f.kind != K::Literal && info(f).flat) return all_rows(info(f).fo, x);
        switch (f.kind) {
        case K::Literal: {
            for (const auto &r : x.rows())
                if (row_sat(f.atom, x.vars(), r) != f.positive) return false;
            return true;
        }
        case K::Indep: return sat_independence_atom(m_, x, f.tuples[0], f.tuples[1], f.tuples[2]);
        case K::Dep: throw Error("dependence atom reached the evaluator undesugared");
        case K::And: return sat(f.subs[0], x) && sat(f.subs[1], x);
        case K::Or: return split(f, x).has_value();
        case K::Exists: return variation(f, x).has_value();
        case K::Forall: return sat(f.subs[0], team_extend_universal(m_, x, f.var));
        }
        return false;
    }

    static void check_size(std::size_t n) {
        if (n > 30) throw Error("team too large for exhaustive search (" + std::to_string(n) + " rows)");
    }

    // Y ∪ Z = X with Y ⊨ ψ1 and Z ⊨ ψ2.
    std::optional<std::pair<Team, Team>> split(const IlFormula &f, const Team &x) {
        const IlFormula &a = f.subs[0];
        const IlFormula &b = f.subs[1];
        const auto rows = x.row_vector();
        const std::size_t n = rows.size();
        if (opts_.shortcuts) {
            const Info &ia = info(a);
            const Info &ib = info(b);
            if (ia.flat || ib.flat) {
                // The largest part allowed for the flat side is the set of
                // rows satisfying it; the other side must cover the rest.
                const bool a_flat = ia.flat;
                const Info &flat = a_flat ? ia : ib;
                const IlFormula &other = a_flat ? b : a;
                Team s(x.vars()), rest(x.vars());
                std::vector<Row> inside;
                for (const auto &r : rows) {
                    if (row_sat(flat.fo, x.vars(), r)) {
                        s.insert(r);
                        inside.push_back(r);
                    } else {
                        rest.insert(r);
                    }
                }
                auto make = [&](Team z) -> std::pair<Team, Team> {
                    return a_flat ? std::make_pair(s, std::move(z)) : std::make_pair(std::move(z), s);
                };
                if (info(other).down) {
                    if (sat(other, rest)) return make(rest);
                    return std::nullopt;
                }
                check_size(inside.size());
                for (std::uint64_t w = 0; w < (std::uint64_t{1} << inside.size()); ++w) {
                    Team z = rest;
                    for (std::size_t i = 0; i < inside.size(); ++i)
                        if (w >> i & 1U) z.insert(inside[i]);
                    if (sat(other, z)) return make(std::move(z));
                }
                return std::nullopt;
            }
            check_size(n);
            const std::uint64_t full = (std::uint64_t{1} << n) - 1U;
            if (ia.down || ib.down) {
                // A downward closed part can be shrunk to the complement of the other.
                const bool a_down = ia.down;
                const IlFormula &d = a_down ? a : b;
                const IlFormula &o = a_down ? b : a;
                for (std::uint64_t om = full + 1; om-- > 0;) {
                    Team ot = x.subteam(rows, om);
                    if (!sat(o, ot)) continue;
                    Team dt = x.subteam(rows, full & ~om);
                    if (sat(d, dt)) return a_down ? std::make_pair(dt, ot) : std::make_pair(ot, dt);
                }
                return std::nullopt;
            }
        }
        check_size(n);
        const std::uint64_t full = (std::uint64_t{1} << n) - 1U;
        for (std::uint64_t y = full + 1; y-- > 0;) {
            Team yt = x.subteam(rows, y);
            if (!sat(a, yt)) continue;
            const std::uint64_t comp = full & ~y;
            for (std::uint64_t sub = y;; sub = (sub - 1) & y) {
                Team zt = x.subteam(rows, comp | sub);
                if (sat(b, zt)) return std::make_pair(std::move(yt), std::move(zt));
                if (sub == 0) break;
            }
        }
        return std::nullopt;
    }

    std::optional<Team> variation(const IlFormula &f, const Team &x) {
        const IlFormula &body = f.subs[0];
        if (!opts_.shortcuts) {
            XVariations gen(m_, x, f.var);
            while (auto v = gen.next())
                if (sat(body, *v)) return v;
            return std::nullopt;
        }
        std::set<std::string> rest(x.vars().begin(), x.vars().end());
        rest.erase(f.var);
        const Team base = team_restrict(x, rest);
        auto all = x.vars();
        if (!x.has_var(f.var)) all.push_back(f.var);
        const Team shape(all);
        const auto col = static_cast<std::size_t>(shape.column(f.var));

        std::vector<const IlFormula *> conj;
        top_conjuncts(body, conj);
        std::vector<const FoFormula *> filters;
        for (const auto *c : conj)
            if (info(*c).flat) filters.push_back(&info(*c).fo);

        // Candidate values per base row: those passing every flat conjunct.
        std::vector<Row> open;
        std::vector<std::vector<Element>> cand;
        for (const auto &r : base.rows()) {
            Row o = r;
            o.insert(o.begin() + static_cast<std::ptrdiff_t>(col), 0);
            std::vector<Element> ok;
            for (std::size_t e = 0; e < m_.size(); ++e) {
                o[col] = static_cast<Element>(e);
                bool pass = true;
                for (const auto *flt : filters)
                    if (!row_sat(*flt, shape.vars(), o)) {
                        pass = false;
                        break;
                    }
                if (pass) ok.push_back(static_cast<Element>(e));
            }
            if (ok.empty()) return std::nullopt;
            open.push_back(std::move(o));
            cand.push_back(std::move(ok));
        }
        auto build = [&](const std::vector<std::uint32_t> &choice) {
            Team t(shape.vars());
            for (std::size_t i = 0; i < open.size(); ++i) {
                Row o = open[i];
                for (std::size_t j = 0; j < cand[i].size(); ++j)
                    if (choice[i] >> j & 1U) {
                        o[col] = cand[i][j];
                        t.insert(o);
                    }
            }
            return t;
        };
        if (info(body).flat) {
            std::vector<std::uint32_t> every(open.size());
            for (std::size_t i = 0; i < open.size(); ++i) every[i] = (1U << cand[i].size()) - 1U;
            return build(every);
        }
        // Per-row options: singletons suffice for downward closed bodies;
        // otherwise every nonempty subset, larger sets first.
        const bool down = info(body).down;
        std::vector<std::vector<std::uint32_t>> options(open.size());
        for (std::size_t i = 0; i < open.size(); ++i) {
            const std::uint32_t k = static_cast<std::uint32_t>(cand[i].size());
            if (down) {
                for (std::uint32_t j = 0; j < k; ++j) options[i].push_back(1U << j);
            } else {
                for (std::uint32_t s = 1; s < (1U << k); ++s) options[i].push_back(s);
                std::stable_sort(options[i].begin(), options[i].end(), [](std::uint32_t p, std::uint32_t q) {
                    return std::popcount(p) > std::popcount(q);
                });
            }
        }
        std::vector<std::size_t> idx(open.size(), 0);
        std::vector<std::uint32_t> choice(open.size());
        while (true) {
            for (std::size_t i = 0; i < open.size(); ++i) choice[i] = options[i][idx[i]];
            Team t = build(choice);
            if (sat(body, t)) return t;
            std::size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < options[i].size()) break;
                idx[i] = 0;
            }
            if (i == idx.size()) return std::nullopt;
        }
    }

    const Structure &m_;
    EvalOptions opts_;
    std::map<Key, bool> memo_;
    std::map<const IlFormula *, Info> info_;
    std::map<std::pair<const FoFormula *, std::vector<std::string>>, CompiledFo> compiled_;
    std::vector<Element> env_;
};

class GtsEvaluator {
public:
    GtsEvaluator(const Structure &m, const TeamFamily &family) : m_(m) {
        for (const auto &t : family) by_vars_[t.vars()].push_back(&t);
    }

    bool sat(const IlFormula &f, const Team &x) {
        const Key key{&f, x};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const bool r = compute(f, x);
        memo_.emplace(key, r);
        return r;
    }

private:
    // Family members over `vars`; the empty team counts as a member.
    const std::vector<const Team *> &over(const std::vector<std::string> &vars) {
        auto &ts = by_vars_[vars];
        if (!empties_.count(vars)) {
            const Team &e = empties_.emplace(vars, Team(vars)).first->second;
            if (std::none_of(ts.begin(), ts.end(), [](const Team *t) { return t->size() == 0; })) ts.push_back(&e);
        }
        return ts;
    }

    bool compute(const IlFormula &f, const Team &x) {
        using K = IlFormula::Kind;
        switch (f.kind) {
        case K::Literal: {
            CompiledFo c(f.atom, m_, x.vars(), {});
            std::vector<Element> env;
            for (const auto &r : x.rows()) {
                env.assign(std::max(c.slots(), r.size()), 0);
                std::copy(r.begin(), r.end(), env.begin());
                if (c.eval(env) != f.positive) return false;
            }
            return true;
        }
        case K::Indep: return sat_independence_atom(m_, x, f.tuples[0], f.tuples[1], f.tuples[2]);
        case K::Dep: throw Error("dependence atom reached the evaluator undesugared");
        case K::And: return sat(f.subs[0], x) && sat(f.subs[1], x);
        case K::Or: {
            std::vector<const Team *> parts;
            for (const auto *t : over(x.vars()))
                if (t->subset_of(x)) parts.push_back(t);
            for (const auto *y : parts) {
                if (!sat(f.subs[0], *y)) continue;
                for (const auto *z : parts) {
                    if (y->size() + z->size() < x.size()) continue;
                    std::set<Row> uni = y->rows();
                    uni.insert(z->rows().begin(), z->rows().end());
                    if (uni.size() != x.size()) continue;
                    if (sat(f.subs[1], *z)) return true;
                }
            }
            return false;
        }
        case K::Exists: {
            auto vars = x.vars();
            if (!x.has_var(f.var)) vars.push_back(f.var);
            for (const auto *t : over(Team(vars).vars()))
                if (is_x_variation(x, *t, f.var) && sat(f.subs[0], *t)) return true;
            return false;
        }
        case K::Forall: return sat(f.subs[0], team_extend_universal(m_, x, f.var));
        }
        return false;
    }

    const Structure &m_;
    std::map<std::vector<std::string>, std::vector<const Team *>> by_vars_;
    std::map<std::vector<std::string>, Team> empties_;
    std::map<Key, bool> memo_;
};

} // namespace

bool is_flat_fragment(const IlFormula &phi) { return !contains_dependency_atom(phi); }

bool sat_independence_atom(const Structure &m, const Team &x, const TermTuple &t1, const TermTuple &t2,
                           const TermTuple &t3) {
    const auto c1 = compile_tuple(t1, m, x.vars());
    const auto c2 = compile_tuple(t2, m, x.vars());
    const auto c3 = compile_tuple(t3, m, x.vars());
    // Group the value triples by their t1 part.
    std::map<Row, std::set<std::pair<Row, Row>>> groups;
    std::vector<Element> env;
    for (const auto &r : x.rows()) {
        env.assign(r.begin(), r.end());
        groups[eval_tuple(c1, env)].emplace(eval_tuple(c2, env), eval_tuple(c3, env));
    }
    for (const auto &[a, bc] : groups) {
        std::set<Row> bs, cs;
        for (const auto &[b, c] : bc) {
            bs.insert(b);
            cs.insert(c);
        }
        if (bs.size() * cs.size() != bc.size()) return false;
    }
    return true;
}

bool eval_full(const Structure &m, const Team &x, const IlFormula &phi, EvalOptions opts) {
    require_team_covers(x, phi);
    const IlFormula f = desugar_dep(phi);
    FullEvaluator ev(m, opts);
    return ev.sat(f, x);
}

std::optional<SatTrace> explain_full(const Structure &m, const Team &x, const IlFormula &phi, EvalOptions opts) {
    require_team_covers(x, phi);
    const IlFormula f = desugar_dep(phi);
    FullEvaluator ev(m, opts);
    return ev.explain(f, x);
}

bool eval_gts(const Structure &m, const TeamFamily &family, const Team &x, const IlFormula &phi) {
    require_team_covers(x, phi);
    if (x.size() != 0 && !family.count(x)) throw Error("the team is not a member of the family");
    const IlFormula f = desugar_dep(phi);
    GtsEvaluator ev(m, family);
    return ev.sat(f, x);
}

} // namespace indep
