#include "indep/entailment.h"

#include <algorithm>

namespace indep {

namespace {

void require_params(const FoFormula &gamma, const ParamAssignment &h) {
    for (const auto &p : free_vars(gamma).params)
        if (!h.count(p)) throw Error("parameter '$" + p + "' of the definition is unassigned");
}

std::set<std::string> set_union(std::set<std::string> a, const std::set<std::string> &b) {
    a.insert(b.begin(), b.end());
    return a;
}

class WitnessBuilder {
public:
    explicit WitnessBuilder(std::set<std::string> taken) : taken_(std::move(taken)) {}

    WitnessNode build(const IlFormula &f, const SatTrace &t) {
        using K = IlFormula::Kind;
        WitnessNode w;
        switch (f.kind) {
        case K::Literal: w.rule = WitnessNode::Rule::Lit; break;
        case K::Indep: w.rule = WitnessNode::Rule::Ind; break;
        case K::Dep: throw Error("dependence atom reached the witness builder undesugared");
        case K::And:
            w.rule = WitnessNode::Rule::And;
            w.children.push_back(build(f.subs[0], t.children[0]));
            w.children.push_back(build(f.subs[1], t.children[1]));
            break;
        case K::Or:
            w.rule = WitnessNode::Rule::Or;
            for (int i = 0; i < 2; ++i) w.formulas.push_back(diagram(t.children[static_cast<std::size_t>(i)].team, w));
            w.children.push_back(build(f.subs[0], t.children[0]));
            w.children.push_back(build(f.subs[1], t.children[1]));
            break;
        case K::Exists:
        case K::Forall:
            w.rule = f.kind == K::Exists ? WitnessNode::Rule::Exists : WitnessNode::Rule::Forall;
            w.formulas.push_back(diagram(t.children[0].team, w));
            w.children.push_back(build(f.subs[0], t.children[0]));
            break;
        }
        return w;
    }

private:
    FoFormula diagram(const Team &x, WitnessNode &into) {
        std::vector<FoFormula> disjuncts;
        for (const auto &r : x.rows()) {
            std::vector<FoFormula> eqs;
            for (std::size_t i = 0; i < r.size(); ++i) {
                std::string p;
                do p = "w" + std::to_string(next_++);
                while (taken_.count(p));
                into.extension[p] = r[i];
                eqs.push_back(fo::eq(Term::team_var(x.vars()[i]), Term::param_var(p)));
            }
            disjuncts.push_back(fo::conj_all(eqs));
        }
        return fo::disj_all(disjuncts);
    }

    std::set<std::string> taken_;
    int next_ = 1;
};

class WitnessChecker {
public:
    explicit WitnessChecker(const Structure &m) : m_(m) {}

    bool check(const FoFormula &gamma, const ParamAssignment &h, const IlFormula &f, const WitnessNode &w) {
        using K = IlFormula::Kind;
        using R = WitnessNode::Rule;
        const auto expected = [&] {
            switch (f.kind) {
            case K::Literal: return R::Lit;
            case K::Indep: return R::Ind;
            case K::Or: return R::Or;
            case K::And: return R::And;
            case K::Exists: return R::Exists;
            case K::Forall: return R::Forall;
            case K::Dep: break;
            }
            throw Error("dependence atom reached the witness checker undesugared");
        }();
        const std::size_t want_children = f.subs.size();
        const std::size_t want_formulas = f.kind == K::Or ? 2 : (f.kind == K::Exists || f.kind == K::Forall) ? 1 : 0;
        if (w.rule != expected || w.children.size() != want_children || w.formulas.size() != want_formulas)
            throw Error("witness shape does not match the formula");
        if ((f.kind == K::Literal || f.kind == K::Indep || f.kind == K::And) && !w.extension.empty())
            throw Error("witness shape does not match the formula");

        switch (f.kind) {
        case K::Literal: return check_literal(gamma, h, f);
        case K::Indep: return check_indep(gamma, h, f);
        case K::And: return check(gamma, h, f.subs[0], w.children[0]) && check(gamma, h, f.subs[1], w.children[1]);
        default: break;
        }

        ParamAssignment h2 = h;
        for (const auto &[p, v] : w.extension) {
            if (v < 0 || static_cast<std::size_t>(v) >= m_.size()) return false;
            if (auto it = h.find(p); it != h.end() && it->second != v) return false; // must extend h
            h2[p] = v;
        }
        for (const auto &g : w.formulas)
            for (const auto &p : free_vars(g).params)
                if (!h2.count(p)) return false;

        const auto gt = free_team_vars(gamma);
        if (f.kind == K::Or) {
            const auto &g1 = w.formulas[0];
            const auto &g2 = w.formulas[1];
            auto v = var_domain(set_union(set_union(gt, free_team_vars(g1)), free_team_vars(g2)));
            if (!eval_fo(m_, h2, {}, fo::forall_all(v, fo::iff(gamma, fo::disj(g1, g2))))) return false;
            return check(g1, h2, f.subs[0], w.children[0]) && check(g2, h2, f.subs[1], w.children[1]);
        }
        const auto &g1 = w.formulas[0];
        auto v = var_domain(set_union(gt, free_team_vars(g1)));
        const FoFormula side = f.kind == K::Exists
                                   ? fo::iff(fo::exists(f.var, g1), fo::exists(f.var, gamma))
                                   : fo::iff(g1, fo::exists(f.var, gamma));
        if (!eval_fo(m_, h2, {}, fo::forall_all(v, side))) return false;
        return check(g1, h2, f.subs[0], w.children[0]);
    }

private:
    // All assignments over `vars` satisfying γ under h.
    std::vector<Assignment> models(const FoFormula &gamma, const ParamAssignment &h, const std::set<std::string> &vars) {
        const Team t = team_of_definition(m_, gamma, h, var_domain(vars));
        std::vector<Assignment> out;
        for (const auto &r : t.rows()) out.push_back(t.assignment(r));
        return out;
    }

    bool check_literal(const FoFormula &gamma, const ParamAssignment &h, const IlFormula &f) {
        for (const auto &s : models(gamma, h, set_union(free_team_vars(gamma), free_team_vars(f))))
            if (eval_fo(m_, {}, s, f.atom) != f.positive) return false;
        return true;
    }

    Row values(const Assignment &s, const TermTuple &ts) {
        Row r;
        for (const auto &t : ts) r.push_back(eval_term(m_, {}, s, t));
        return r;
    }

    bool check_indep(const FoFormula &gamma, const ParamAssignment &h, const IlFormula &f) {
        const auto &[t1, t2, t3] = f.tuples;
        const auto ss = models(gamma, h, set_union(free_team_vars(gamma), free_team_vars(f)));
        TermTuple t12 = t1, t13 = t1;
        t12.insert(t12.end(), t2.begin(), t2.end());
        t13.insert(t13.end(), t3.begin(), t3.end());
        for (const auto &s : ss)
            for (const auto &s1 : ss) {
                if (values(s, t1) != values(s1, t1)) continue;
                const Row want2 = values(s, t12), want3 = values(s1, t13);
                const bool found = std::any_of(ss.begin(), ss.end(), [&](const Assignment &s2) {
                    return values(s2, t12) == want2 && values(s2, t13) == want3;
                });
                if (!found) return false;
            }
        return true;
    }

    const Structure &m_;
};

void format_node(const WitnessNode &w, const Structure &m, int depth, std::string &out) {
    static const char *names[] = {"lit", "ind", "or", "and", "exists", "forall"};
    out += std::string(static_cast<std::size_t>(depth) * 2, ' ') + names[static_cast<int>(w.rule)];
    if (!w.extension.empty()) {
        out += " h'={";
        bool first = true;
        for (const auto &[p, v] : w.extension) {
            out += (first ? "$" : ", $") + p + "=" + m.element_name(v);
            first = false;
        }
        out += "}";
    }
    for (std::size_t i = 0; i < w.formulas.size(); ++i) {
        const std::string key = w.rule == WitnessNode::Rule::Or ? "gamma" + std::to_string(i + 1) : "gamma'";
        out += " " + key + "=\"" + to_string(w.formulas[i]) + "\"";
    }
    out += "\n";
    for (const auto &c : w.children) format_node(c, m, depth + 1, out);
}

} // namespace

bool eval_entailment(const Structure &m, const FoFormula &gamma, const ParamAssignment &h, const IlFormula &phi,
                     const std::vector<std::string> &vars) {
    require_params(gamma, h);
    const Team x = team_of_definition(m, gamma, h, vars);
    return eval_full(m, x, phi);
}

bool eval_entailment(const Structure &m, const FoFormula &gamma, const ParamAssignment &h, const IlFormula &phi) {
    return eval_entailment(m, gamma, h, phi, var_domain(set_union(free_team_vars(gamma), free_team_vars(phi))));
}

std::optional<WitnessNode> eval_entailment_witnessed(const Structure &m, const FoFormula &gamma,
                                                     const ParamAssignment &h, const IlFormula &phi) {
    require_params(gamma, h);
    const IlFormula f = desugar_dep(phi);
    const auto vars = var_domain(set_union(free_team_vars(gamma), free_team_vars(f)));
    const Team x = team_of_definition(m, gamma, h, vars);
    auto trace = explain_full(m, x, f);
    if (!trace) return std::nullopt;
    std::set<std::string> taken = free_vars(gamma).params;
    for (const auto &[p, v] : h) taken.insert(p);
    WitnessBuilder b(std::move(taken));
    return b.build(f, *trace);
}

bool check_witness(const Structure &m, const FoFormula &gamma, const ParamAssignment &h, const IlFormula &phi,
                   const WitnessNode &w) {
    require_params(gamma, h);
    if (!free_vars(phi).params.empty()) throw Error("independence formulas must not contain parameter variables");
    WitnessChecker c(m);
    return c.check(gamma, h, desugar_dep(phi), w);
}

std::string format_witness(const WitnessNode &w, const Structure &m) {
    std::string out;
    format_node(w, m, 0, out);
    return out;
}

} // namespace indep
