#include "indep/sampling.h"

namespace indep {

namespace {

std::size_t uniform(Rng &rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool coin(Rng &rng) { return uniform(rng, 2) == 1; }

} // namespace

std::vector<IlFormula> enumerate_formulas(const FormulaGrammar &g, std::size_t max_size) {
    std::vector<std::vector<IlFormula>> by_size(max_size + 1);
    if (max_size >= 1) by_size[1] = g.atoms;
    for (std::size_t n = 2; n <= max_size; ++n) {
        auto &out = by_size[n];
        for (const auto &sub : by_size[n - 1]) {
            for (const auto &x : g.exists_vars) out.push_back(il::exists(x, sub));
            for (const auto &x : g.forall_vars) out.push_back(il::forall(x, sub));
        }
        for (std::size_t left = 1; left + 1 < n; ++left) {
            const std::size_t right = n - 1 - left;
            for (const auto &a : by_size[left])
                for (const auto &b : by_size[right]) {
                    if (g.disjunction) out.push_back(il::tensor_or(a, b));
                    if (g.conjunction) out.push_back(il::conj(a, b));
                }
        }
    }
    std::vector<IlFormula> all;
    for (auto &v : by_size) all.insert(all.end(), v.begin(), v.end());
    return all;
}

IlFormula random_formula(const FormulaGrammar &g, std::size_t max_size, Rng &rng) {
    if (g.atoms.empty()) throw Error("grammar has no atoms");
    const std::size_t quantifiers = g.exists_vars.size() + g.forall_vars.size();
    const bool binary = (g.disjunction || g.conjunction) && max_size >= 3;
    const bool unary = quantifiers > 0 && max_size >= 2;
    const std::size_t pick = uniform(rng, 3);
    if (max_size <= 1 || pick == 0 || (!binary && !unary)) return g.atoms[uniform(rng, g.atoms.size())];
    if (unary && (pick == 1 || !binary)) {
        const std::size_t q = uniform(rng, quantifiers);
        IlFormula body = random_formula(g, max_size - 1, rng);
        if (q < g.exists_vars.size()) return il::exists(g.exists_vars[q], std::move(body));
        return il::forall(g.forall_vars[q - g.exists_vars.size()], std::move(body));
    }
    const std::size_t left = 1 + uniform(rng, max_size - 2);
    IlFormula a = random_formula(g, left, rng);
    IlFormula b = random_formula(g, max_size - 1 - formula_size(a), rng);
    const bool use_or = g.disjunction && (!g.conjunction || coin(rng));
    return use_or ? il::tensor_or(std::move(a), std::move(b)) : il::conj(std::move(a), std::move(b));
}

Structure random_structure(const Signature &sig, std::size_t size, Rng &rng) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < size; ++i) names.push_back(std::to_string(i));
    Structure m(names);
    for (const auto &[r, arity] : sig.relations) {
        m.declare_relation(r, arity);
        std::size_t n = 1;
        for (int i = 0; i < arity; ++i) n *= size;
        for (std::size_t code = 0; code < n; ++code)
            if (coin(rng)) m.add_tuple(r, m.decode(code, arity));
    }
    for (const auto &[f, arity] : sig.functions) {
        m.declare_function(f, arity);
        std::size_t n = 1;
        for (int i = 0; i < arity; ++i) n *= size;
        for (std::size_t code = 0; code < n; ++code)
            m.set_value(f, m.decode(code, arity), static_cast<Element>(uniform(rng, size)));
    }
    for (const auto &c : sig.constants) m.set_constant(c, static_cast<Element>(uniform(rng, size)));
    return m;
}

Team random_team(const Structure &m, const std::vector<std::string> &vars, std::size_t max_rows, Rng &rng) {
    Team x(vars);
    const std::size_t rows = uniform(rng, max_rows + 1);
    for (std::size_t i = 0; i < rows; ++i) {
        Row r;
        for (std::size_t k = 0; k < vars.size(); ++k) r.push_back(static_cast<Element>(uniform(rng, m.size())));
        x.insert(r);
    }
    return x;
}

TermTuple random_var_tuple(const std::vector<std::string> &vars, std::size_t max_len, Rng &rng) {
    TermTuple t;
    const std::size_t n = uniform(rng, max_len + 1);
    for (std::size_t i = 0; i < n; ++i) t.push_back(Term::team_var(vars[uniform(rng, vars.size())]));
    return t;
}

FoFormula random_fo(const Signature &sig, const std::vector<std::string> &vars, const std::vector<std::string> &params,
                    int depth, Rng &rng) {
    auto term = [&] {
        const std::size_t n = vars.size() + params.size();
        const std::size_t i = uniform(rng, n);
        return i < vars.size() ? Term::team_var(vars[i]) : Term::param_var(params[i - vars.size()]);
    };
    auto atom = [&] {
        const std::size_t choice = uniform(rng, sig.relations.size() + 1);
        if (choice == sig.relations.size()) return fo::eq(term(), term());
        auto it = sig.relations.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(choice));
        std::vector<Term> args;
        for (int i = 0; i < it->second; ++i) args.push_back(term());
        return fo::rel(it->first, std::move(args));
    };
    if (depth <= 0 || uniform(rng, 4) == 0) return atom();
    switch (uniform(rng, 6)) {
    case 0: return fo::neg(random_fo(sig, vars, params, depth - 1, rng));
    case 1: return fo::conj(random_fo(sig, vars, params, depth - 1, rng), random_fo(sig, vars, params, depth - 1, rng));
    case 2: return fo::disj(random_fo(sig, vars, params, depth - 1, rng), random_fo(sig, vars, params, depth - 1, rng));
    case 3:
        return fo::implies(random_fo(sig, vars, params, depth - 1, rng), random_fo(sig, vars, params, depth - 1, rng));
    case 4: return fo::exists(vars[uniform(rng, vars.size())], random_fo(sig, vars, params, depth - 1, rng));
    default: return fo::forall(vars[uniform(rng, vars.size())], random_fo(sig, vars, params, depth - 1, rng));
    }
}

} // namespace indep
