#include "indep/general.h"

#include <algorithm>

#include "lexer.h"

namespace indep {

using detail::Tok;

// ------------------------------------------------------------------ theta

Theta parse_theta(const std::string &text, const Signature &sig) {
    detail::TokenStream ts(detail::tokenize(text));
    Theta theta;
    ts.expect_word("theta");
    ts.expect(Tok::LBrace, "after 'theta'");
    while (!ts.accept(Tok::RBrace)) {
        ts.expect_word("exists");
        ThetaSentence s;
        Signature ext = sig;
        do {
            const auto off = ts.peek().offset;
            std::string r = ts.expect_ident("as relation variable");
            ts.expect(Tok::Slash, "before arity");
            const auto a = ts.expect(Tok::Ident, "as arity");
            int arity = 0;
            try {
                std::size_t used = 0;
                arity = std::stoi(a.text, &used);
                if (used != a.text.size() || arity < 0) throw std::invalid_argument("arity");
            } catch (const std::exception &) {
                throw ParseError("invalid arity '" + a.text + "'", a.offset);
            }
            if (sig.declares(r)) throw ParseError("relation variable '" + r + "' clashes with a signature symbol", off);
            for (const auto &[q, k] : s.relations)
                if (q == r) throw ParseError("relation variable '" + r + "' bound twice", off);
            s.relations.emplace_back(r, arity);
            ext.add_relation(r, arity);
        } while (ts.accept(Tok::Comma));
        ts.expect(Tok::Colon, "after the relation variables");
        const auto body_at = ts.peek().offset;
        detail::FormulaParser p(ts, ext);
        s.body = p.fo();
        const auto fv = free_vars(s.body);
        if (!fv.team.empty() || !fv.params.empty()) throw ParseError("theta sentence bodies must be closed", body_at);
        theta.sentences.push_back(std::move(s));
        if (!ts.accept(Tok::Semi) && !ts.at(Tok::RBrace)) ts.fail("expected ';' or '}' after a theta sentence");
    }
    if (!ts.at(Tok::End)) ts.fail("unexpected input after the theta block");
    return theta;
}

std::string to_string(const ThetaSentence &s) {
    std::string out = "exists ";
    for (std::size_t i = 0; i < s.relations.size(); ++i)
        out += (i ? ", " : "") + s.relations[i].first + "/" + std::to_string(s.relations[i].second);
    return out + " : " + to_string(s.body);
}

// ----------------------------------------------------------- families

TeamFamily least_family(const Structure &m, const std::set<std::string> &universe) {
    const auto vars = var_domain(universe);
    TeamFamily out;
    const std::size_t k = vars.size();
    for (std::uint32_t sub = 0; sub < (1U << k); ++sub) {
        std::vector<std::string> dom;
        for (std::size_t i = 0; i < k; ++i)
            if (sub >> i & 1U) dom.push_back(vars[i]);
        for (auto &t : all_teams(m, dom)) out.insert(std::move(t));
    }
    return out;
}

bool family_teams_definable(const Structure &m, const TeamFamily &family) {
    for (const auto &x : family) {
        const auto d = canonical_team_definition(x);
        if (team_of_definition(m, d.gamma, d.params, x.vars()) != x) return false;
    }
    return true;
}

TeamFamily materialize_family(const GeneralModel &g, const std::set<std::string> &universe) {
    if (g.kind == FamilyKind::Explicit) return g.family;
    return least_family(g.structure, universe);
}

Structure expand_structure(const Structure &m, const std::vector<std::pair<std::string, int>> &names,
                           const std::vector<std::set<Row>> &rels) {
    Structure out = m;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (m.signature().declares(names[i].first))
            throw Error("relation '" + names[i].first + "' is already interpreted by the structure");
        out.declare_relation(names[i].first, names[i].second);
        for (const auto &r : rels[i]) {
            if (static_cast<int>(r.size()) != names[i].second) throw Error("arity mismatch for relation variable");
            out.add_tuple(names[i].first, r);
        }
    }
    return out;
}

ThetaVerdict check_theta_closed(const GeneralModel &g, const Theta &theta) {
    const Structure &m = g.structure;
    ThetaVerdict v;
    for (std::size_t si = 0; si < theta.sentences.size(); ++si) {
        const auto &s = theta.sentences[si];
        std::vector<std::vector<std::set<Row>>> cands;
        for (const auto &[name, arity] : s.relations) {
            std::set<std::set<Row>> uniq;
            if (g.kind == FamilyKind::Explicit) {
                uniq.insert({}); // the empty team is in every family
                for (const auto &x : g.family)
                    if (static_cast<int>(x.vars().size()) == arity) uniq.insert(team_relation(x));
            } else {
                std::vector<std::string> vars;
                for (int i = 0; i < arity; ++i) vars.push_back("v" + std::to_string(i));
                for (const auto &x : all_teams(m, vars)) uniq.insert(team_relation(x));
            }
            cands.emplace_back(uniq.begin(), uniq.end());
        }
        bool found = false;
        std::vector<std::size_t> idx(cands.size(), 0);
        const bool empty_choice = std::any_of(cands.begin(), cands.end(), [](const auto &c) { return c.empty(); });
        while (!empty_choice) {
            std::vector<std::set<Row>> pick;
            for (std::size_t i = 0; i < cands.size(); ++i) pick.push_back(cands[i][idx[i]]);
            Structure ext = expand_structure(m, s.relations, pick);
            if (eval_fo(ext, {}, {}, s.body)) {
                v.witnesses.push_back(pick);
                found = true;
                break;
            }
            std::size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < cands[i].size()) break;
                idx[i] = 0;
            }
            if (i == idx.size()) break;
        }
        if (!found) {
            v.closed = false;
            v.failed = si;
            return v;
        }
    }
    return v;
}

// ------------------------------------------------------ closure checking

namespace {

struct DefTerm {
    Term term;
    std::vector<Element> val; // value per assignment of the universe
    std::uint32_t free = 0;
};

struct Denotation {
    std::uint64_t mask = 0;
    std::uint32_t free = 0;
    FoFormula formula;
};

class ClosureSearch {
public:
    ClosureSearch(const GeneralModel &g, const std::set<std::string> &universe)
        : m_(g.structure), family_(g.family), vars_(var_domain(universe)) {
        const std::size_t n = m_.size();
        k_ = vars_.size();
        count_ = 1;
        for (std::size_t i = 0; i < k_; ++i) {
            count_ *= n;
            if (count_ > 64) throw Error("universe too large for the closure check");
        }
        full_ = count_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << count_) - 1U;
        rows_.resize(count_);
        for (std::size_t a = 0; a < count_; ++a) {
            Row r(k_);
            std::size_t c = a;
            for (std::size_t i = k_; i-- > 0;) {
                r[i] = static_cast<Element>(c % n);
                c /= n;
            }
            rows_[a] = std::move(r);
        }
    }

    ClosureVerdict run(int bound) {
        ClosureVerdict out;
        std::vector<std::vector<Denotation>> level(static_cast<std::size_t>(bound) + 1);
        auto add = [&](std::vector<Denotation> &into, Denotation d) -> bool {
            if (!seen_.insert({d.mask, d.free}).second) return true;
            ++out.denotations;
            if (!check(d, out)) return false;
            into.push_back(std::move(d));
            return true;
        };
        for (auto &d : atoms())
            if (!add(level[1], std::move(d))) return out;
        for (std::size_t size = 2; size <= static_cast<std::size_t>(bound); ++size) {
            std::vector<Denotation> next;
            for (const auto &d : level[size - 1]) {
                if (!add(next, {full_ & ~d.mask, d.free, fo::neg(d.formula)})) return out;
                for (std::size_t i = 0; i < k_; ++i) {
                    const std::uint32_t f = d.free & ~(1U << i);
                    if (!add(next, {quantify(d.mask, i, true), f, fo::exists(vars_[i], d.formula)})) return out;
                    if (!add(next, {quantify(d.mask, i, false), f, fo::forall(vars_[i], d.formula)})) return out;
                }
            }
            for (std::size_t ls = 1; ls + 1 < size; ++ls) {
                const std::size_t rs = size - 1 - ls;
                for (const auto &a : level[ls])
                    for (const auto &b : level[rs]) {
                        const std::uint32_t f = a.free | b.free;
                        if (!add(next, {a.mask & b.mask, f, fo::conj(a.formula, b.formula)})) return out;
                        if (!add(next, {a.mask | b.mask, f, fo::disj(a.formula, b.formula)})) return out;
                        if (!add(next, {(full_ & ~a.mask) | b.mask, f, fo::implies(a.formula, b.formula)})) return out;
                        if (!add(next, {full_ & ~(a.mask ^ b.mask), f, fo::iff(a.formula, b.formula)})) return out;
                    }
            }
            level[size] = std::move(next);
        }
        return out;
    }

private:
    std::uint64_t quantify(std::uint64_t mask, std::size_t var, bool exists) const {
        const std::size_t n = m_.size();
        std::size_t stride = 1;
        for (std::size_t i = var + 1; i < k_; ++i) stride *= n;
        std::uint64_t out = 0;
        for (std::size_t a = 0; a < count_; ++a) {
            const std::size_t c = (a / stride) % n;
            const std::size_t base = a - c * stride;
            bool acc = !exists;
            for (std::size_t v = 0; v < n; ++v) {
                const bool bit = mask >> (base + v * stride) & 1U;
                acc = exists ? (acc || bit) : (acc && bit);
            }
            if (acc) out |= std::uint64_t{1} << a;
        }
        return out;
    }

    std::vector<DefTerm> base_terms() const {
        std::vector<DefTerm> ts;
        for (std::size_t i = 0; i < k_; ++i) {
            DefTerm t{Term::team_var(vars_[i]), {}, 1U << i};
            for (const auto &r : rows_) t.val.push_back(r[i]);
            ts.push_back(std::move(t));
        }
        for (std::size_t e = 0; e < m_.size(); ++e)
            ts.push_back({Term::param_var("m" + std::to_string(e)), std::vector<Element>(count_, static_cast<Element>(e)), 0});
        for (const auto &[c, v] : m_.constants()) ts.push_back({Term::constant(c), std::vector<Element>(count_, v), 0});
        return ts;
    }

    std::vector<DefTerm> terms() const {
        auto base = base_terms();
        auto out = base;
        for (const auto &[fn, table] : m_.functions()) {
            std::vector<std::size_t> idx(static_cast<std::size_t>(table.arity), 0);
            while (true) {
                DefTerm t;
                std::vector<Term> args;
                for (auto i : idx) {
                    args.push_back(base[i].term);
                    t.free |= base[i].free;
                }
                t.term = Term::app(fn, args);
                for (std::size_t a = 0; a < count_; ++a) {
                    Row r;
                    for (auto i : idx) r.push_back(base[i].val[a]);
                    t.val.push_back(table.values[m_.code(r)]);
                }
                out.push_back(std::move(t));
                std::size_t j = 0;
                for (; j < idx.size(); ++j) {
                    if (++idx[j] < base.size()) break;
                    idx[j] = 0;
                }
                if (j == idx.size()) break;
            }
        }
        return out;
    }

    void relation_atoms(const std::string &name, const RelationTable &table, const std::vector<DefTerm> &ts,
                        std::vector<Denotation> &out) const {
        std::vector<std::size_t> idx(static_cast<std::size_t>(table.arity), 0);
        while (true) {
            Denotation d;
            std::vector<Term> args;
            for (auto i : idx) {
                args.push_back(ts[i].term);
                d.free |= ts[i].free;
            }
            for (std::size_t a = 0; a < count_; ++a) {
                Row r;
                for (auto i : idx) r.push_back(ts[i].val[a]);
                if (table.holds[m_.code(r)]) d.mask |= std::uint64_t{1} << a;
            }
            d.formula = fo::rel(name, args);
            out.push_back(std::move(d));
            std::size_t j = 0;
            for (; j < idx.size(); ++j) {
                if (++idx[j] < ts.size()) break;
                idx[j] = 0;
            }
            if (j == idx.size()) break;
        }
    }

    std::vector<Denotation> atoms() {
        const auto ts = terms();
        std::vector<Denotation> out;
        // Relation parameters Rel(X) of the family come first.
        std::set<std::pair<int, std::set<Row>>> rels;
        for (const auto &x : family_) {
            auto key = std::make_pair(static_cast<int>(x.vars().size()), team_relation(x));
            if (!rels.insert(key).second) continue;
            std::string name = "G" + std::to_string(rels.size());
            while (m_.signature().declares(name)) name += "_";
            RelationTable table{key.first, std::vector<bool>(1, false)};
            std::size_t cells = 1;
            for (int i = 0; i < key.first; ++i) cells *= m_.size();
            table.holds.assign(cells, false);
            for (const auto &r : key.second) table.holds[m_.code(r)] = true;
            relation_params_[name] = x;
            rel_tables_.emplace(name, table);
            relation_atoms(name, rel_tables_.at(name), ts, out);
        }
        for (const auto &[name, table] : m_.relations()) relation_atoms(name, table, ts, out);
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = i + 1; j < ts.size(); ++j) {
                Denotation d{0, ts[i].free | ts[j].free, fo::eq(ts[i].term, ts[j].term)};
                for (std::size_t a = 0; a < count_; ++a)
                    if (ts[i].val[a] == ts[j].val[a]) d.mask |= std::uint64_t{1} << a;
                out.push_back(std::move(d));
            }
        out.push_back({full_, 0, fo::top()});
        out.push_back({0, 0, fo::bottom()});
        return out;
    }

    bool check(const Denotation &d, ClosureVerdict &out) const {
        const std::uint32_t all = (1U << k_) - 1U;
        // Every domain V with free ⊆ V ⊆ universe.
        for (std::uint32_t v = all;; v = (v - 1) & all) {
            if ((v & d.free) == d.free) {
                std::vector<std::string> dom;
                std::vector<std::size_t> cols;
                for (std::size_t i = 0; i < k_; ++i)
                    if (v >> i & 1U) {
                        dom.push_back(vars_[i]);
                        cols.push_back(i);
                    }
                Team t(dom);
                for (std::size_t a = 0; a < count_; ++a) {
                    if (!(d.mask >> a & 1U)) continue;
                    Row r;
                    for (auto c : cols) r.push_back(rows_[a][c]);
                    t.insert(std::move(r));
                }
                if (!family_.count(t)) {
                    report(d, dom, v, std::move(t), out);
                    return false;
                }
            }
            if (v == 0) break;
        }
        return true;
    }

    void report(const Denotation &d, const std::vector<std::string> &dom, std::uint32_t v, Team missing,
                ClosureVerdict &out) const {
        out.closed = false;
        std::vector<std::string> extra;
        for (std::size_t i = 0; i < k_; ++i)
            if ((v >> i & 1U) && !(d.free >> i & 1U)) extra.push_back(vars_[i]);
        out.witness = fo::exists_all(extra, d.formula);
        out.domain = dom;
        out.missing = std::move(missing);
        for (const auto &p : free_vars(out.witness).params) out.params[p] = static_cast<Element>(std::stoi(p.substr(1)));
        const auto sig = signature_of(out.witness);
        for (const auto &[name, team] : relation_params_)
            if (sig.has_relation(name)) out.relation_params.emplace(name, team);
    }

    const Structure &m_;
    const TeamFamily &family_;
    std::vector<std::string> vars_;
    std::size_t k_ = 0;
    std::size_t count_ = 1;
    std::uint64_t full_ = 1;
    std::vector<Row> rows_;
    std::set<std::pair<std::uint64_t, std::uint32_t>> seen_;
    std::map<std::string, Team> relation_params_;
    std::map<std::string, RelationTable> rel_tables_;
};

} // namespace

ClosureVerdict check_general_closure(const GeneralModel &g, const std::set<std::string> &universe, int bound) {
    if (bound <= 0) throw Error("formula size bound must be positive");
    if (g.kind != FamilyKind::Explicit) {
        // Full and Least families contain every team over the universe.
        return ClosureVerdict{};
    }
    ClosureSearch search(g, universe);
    return search.run(bound);
}

TeamFamily close_family(const Structure &m, TeamFamily seed, const std::set<std::string> &universe, int bound) {
    while (true) {
        GeneralModel g{m, FamilyKind::Explicit, seed};
        auto v = check_general_closure(g, universe, bound);
        if (v.closed) return seed;
        seed.insert(v.missing);
    }
}

} // namespace indep
