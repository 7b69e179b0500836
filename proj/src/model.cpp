#include "indep/model.h"

#include <algorithm>
#include <sstream>

namespace indep {

bool operator==(const RelationTable &a, const RelationTable &b) { return a.arity == b.arity && a.holds == b.holds; }
bool operator==(const FunctionTable &a, const FunctionTable &b) { return a.arity == b.arity && a.values == b.values; }

namespace {

std::size_t power(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

} // namespace

// ------------------------------------------------------------- Structure

Structure::Structure(std::vector<std::string> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw Error("structure domain must be nonempty");
    std::set<std::string> seen;
    for (const auto &e : elements_)
        if (!seen.insert(e).second) throw Error("duplicate domain element '" + e + "'");
}

Element Structure::element(const std::string &n) const {
    auto it = std::find(elements_.begin(), elements_.end(), n);
    if (it == elements_.end()) throw Error("unknown domain element '" + n + "'");
    return static_cast<Element>(it - elements_.begin());
}

bool Structure::has_element(const std::string &n) const {
    return std::find(elements_.begin(), elements_.end(), n) != elements_.end();
}

std::size_t Structure::code(const Row &args) const {
    std::size_t c = 0;
    for (Element a : args) {
        if (a < 0 || static_cast<std::size_t>(a) >= size()) throw Error("element index out of range");
        c = c * size() + static_cast<std::size_t>(a);
    }
    return c;
}

Row Structure::decode(std::size_t c, int arity) const {
    Row r(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
        r[static_cast<std::size_t>(i)] = static_cast<Element>(c % size());
        c /= size();
    }
    return r;
}

void Structure::declare_relation(const std::string &rel, int arity) {
    if (functions_.count(rel) || constants_.count(rel)) throw Error("symbol '" + rel + "' already declared");
    auto [it, fresh] = relations_.try_emplace(rel);
    if (!fresh && it->second.arity != arity) throw Error("relation '" + rel + "' redeclared with another arity");
    if (fresh) it->second = RelationTable{arity, std::vector<bool>(power(size(), arity), false)};
}

void Structure::declare_function(const std::string &fn, int arity) {
    if (relations_.count(fn) || constants_.count(fn)) throw Error("symbol '" + fn + "' already declared");
    auto [it, fresh] = functions_.try_emplace(fn);
    if (!fresh && it->second.arity != arity) throw Error("function '" + fn + "' redeclared with another arity");
    if (fresh) it->second = FunctionTable{arity, std::vector<Element>(power(size(), arity), 0)};
}

void Structure::add_tuple(const std::string &rel, const Row &args) { set_tuple(rel, args, true); }

void Structure::set_tuple(const std::string &rel, const Row &args, bool value) {
    auto *t = mutable_relation_table(rel);
    if (!t) throw Error("undeclared relation '" + rel + "'");
    if (static_cast<int>(args.size()) != t->arity) throw Error("arity mismatch for relation '" + rel + "'");
    t->holds[code(args)] = value;
}

void Structure::set_value(const std::string &fn, const Row &args, Element value) {
    auto *t = mutable_function_table(fn);
    if (!t) throw Error("undeclared function '" + fn + "'");
    if (static_cast<int>(args.size()) != t->arity) throw Error("arity mismatch for function '" + fn + "'");
    if (value < 0 || static_cast<std::size_t>(value) >= size()) throw Error("element index out of range");
    t->values[code(args)] = value;
}

void Structure::set_constant(const std::string &c, Element value) {
    if (relations_.count(c) || functions_.count(c)) throw Error("symbol '" + c + "' already declared");
    if (value < 0 || static_cast<std::size_t>(value) >= size()) throw Error("element index out of range");
    constants_[c] = value;
}

bool Structure::holds(const std::string &rel, const Row &args) const {
    const auto *t = relation_table(rel);
    if (!t) throw Error("undeclared relation '" + rel + "'");
    if (static_cast<int>(args.size()) != t->arity) throw Error("arity mismatch for relation '" + rel + "'");
    return t->holds[code(args)];
}

Element Structure::apply(const std::string &fn, const Row &args) const {
    const auto *t = function_table(fn);
    if (!t) throw Error("undeclared function '" + fn + "'");
    if (static_cast<int>(args.size()) != t->arity) throw Error("arity mismatch for function '" + fn + "'");
    return t->values[code(args)];
}

Element Structure::constant(const std::string &c) const {
    auto it = constants_.find(c);
    if (it == constants_.end()) throw Error("undeclared constant '" + c + "'");
    return it->second;
}

const RelationTable *Structure::relation_table(const std::string &rel) const {
    auto it = relations_.find(rel);
    return it == relations_.end() ? nullptr : &it->second;
}
const FunctionTable *Structure::function_table(const std::string &fn) const {
    auto it = functions_.find(fn);
    return it == functions_.end() ? nullptr : &it->second;
}
RelationTable *Structure::mutable_relation_table(const std::string &rel) {
    auto it = relations_.find(rel);
    return it == relations_.end() ? nullptr : &it->second;
}
FunctionTable *Structure::mutable_function_table(const std::string &fn) {
    auto it = functions_.find(fn);
    return it == functions_.end() ? nullptr : &it->second;
}

Signature Structure::signature() const {
    Signature s;
    for (const auto &[n, t] : relations_) s.add_relation(n, t.arity);
    for (const auto &[n, t] : functions_) s.add_function(n, t.arity);
    for (const auto &[n, v] : constants_) s.add_constant(n);
    return s;
}

void Structure::require_signature(const Signature &sig) const {
    for (const auto &[n, a] : sig.relations) {
        const auto *t = relation_table(n);
        if (!t) throw Error("structure does not interpret relation '" + n + "'");
        if (t->arity != a) throw Error("relation '" + n + "' has arity " + std::to_string(t->arity) + " in the structure");
    }
    for (const auto &[n, a] : sig.functions) {
        const auto *t = function_table(n);
        if (!t) throw Error("structure does not interpret function '" + n + "'");
        if (t->arity != a) throw Error("function '" + n + "' has arity " + std::to_string(t->arity) + " in the structure");
    }
    for (const auto &c : sig.constants)
        if (!constants_.count(c)) throw Error("structure does not interpret constant '" + c + "'");
}

std::string describe(const Structure &m) {
    std::ostringstream out;
    auto row = [&](const Row &r, bool paren) {
        std::string s;
        for (std::size_t i = 0; i < r.size(); ++i) s += (i ? ", " : "") + m.element_name(r[i]);
        return paren || r.size() != 1 ? "(" + s + ")" : s;
    };
    out << "model " << (m.name.empty() ? "M" : m.name) << " {\n  domain = {";
    for (std::size_t i = 0; i < m.size(); ++i) out << (i ? ", " : "") << m.elements()[i];
    out << "}\n";
    for (const auto &[n, t] : m.relations()) {
        out << "  rel " << n << "/" << t.arity << " = {";
        bool first = true;
        for (std::size_t c = 0; c < t.holds.size(); ++c) {
            if (!t.holds[c]) continue;
            out << (first ? "" : ", ") << row(m.decode(c, t.arity), true);
            first = false;
        }
        out << "}\n";
    }
    for (const auto &[n, t] : m.functions()) {
        out << "  fun " << n << "/" << t.arity << " = {";
        for (std::size_t c = 0; c < t.values.size(); ++c)
            out << (c ? ", " : "") << row(m.decode(c, t.arity), false) << " -> " << m.element_name(t.values[c]);
        out << "}\n";
    }
    for (const auto &[n, v] : m.constants()) out << "  const " << n << " = " << m.element_name(v) << "\n";
    out << "}\n";
    return out.str();
}

// ------------------------------------------------------------------ Team

std::vector<std::string> var_domain(std::set<std::string> vars) { return {vars.begin(), vars.end()}; }

Team::Team(std::vector<std::string> vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    vars_ = std::move(vars);
}

Team::Team(std::vector<std::string> vars, const std::vector<Row> &rows) : Team(vars) {
    if (vars_.size() != vars.size()) throw Error("duplicate variable in team domain");
    std::vector<std::size_t> perm(vars_.size()); // perm[i] = position of vars_[i] in the input order
    for (std::size_t i = 0; i < vars_.size(); ++i)
        perm[i] = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), vars_[i]) - vars.begin());
    for (const auto &r : rows) {
        if (r.size() != vars_.size()) throw Error("team row has the wrong number of values");
        Row out(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[perm[i]];
        rows_.insert(std::move(out));
    }
}

void Team::insert(Row r) {
    if (r.size() != vars_.size()) throw Error("team row has the wrong number of values");
    rows_.insert(std::move(r));
}

int Team::column(const std::string &v) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
    return it != vars_.end() && *it == v ? static_cast<int>(it - vars_.begin()) : -1;
}

Assignment Team::assignment(const Row &r) const {
    Assignment s;
    for (std::size_t i = 0; i < vars_.size(); ++i) s[vars_[i]] = r.at(i);
    return s;
}

Team Team::subteam(const std::vector<Row> &rows, std::uint64_t mask) const {
    Team t(vars_);
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (mask >> i & 1U) t.rows_.insert(rows[i]);
    return t;
}

bool Team::subset_of(const Team &o) const {
    return vars_ == o.vars_ && std::includes(o.rows_.begin(), o.rows_.end(), rows_.begin(), rows_.end());
}

std::string describe(const Team &t, const Structure &m) {
    std::ostringstream out;
    out << "team X over (";
    for (std::size_t i = 0; i < t.vars().size(); ++i) out << (i ? ", " : "") << t.vars()[i];
    out << ") {";
    for (const auto &r : t.rows()) {
        out << " (";
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? ", " : "") << m.element_name(r[i]);
        out << ")";
    }
    out << " }";
    return out.str();
}

// ------------------------------------------------------- team operations

Team team_of_definition(const Structure &m, const FoFormula &gamma, const ParamAssignment &h,
                        std::vector<std::string> vars) {
    Team out(std::move(vars));
    const auto fv = free_team_vars(gamma);
    for (const auto &v : fv)
        if (!out.has_var(v)) throw Error("free variable '" + v + "' of the definition is not in the variable domain");
    CompiledFo f(gamma, m, out.vars(), h);
    const std::size_t k = out.vars().size();
    std::vector<Element> env(std::max(f.slots(), k), 0);
    Row row(k, 0);
    const std::size_t n = m.size();
    while (true) {
        for (std::size_t i = 0; i < k; ++i) env[i] = row[i];
        if (f.eval(env)) out.insert(row);
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (static_cast<std::size_t>(++row[i]) < n) break;
            row[i] = 0;
            if (i == 0) return out;
        }
        if (k == 0) return out;
    }
}

TeamDefinition canonical_team_definition(const Team &x) {
    ParamNamer namer;
    return canonical_team_definition(x, namer);
}

TeamDefinition canonical_team_definition(const Team &x, ParamNamer &namer) {
    TeamDefinition d;
    std::vector<FoFormula> disjuncts;
    for (const auto &r : x.rows()) {
        std::vector<FoFormula> eqs;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::string p = namer.fresh();
            d.params[p] = r[i];
            eqs.push_back(fo::eq(Term::team_var(x.vars()[i]), Term::param_var(p)));
        }
        disjuncts.push_back(fo::conj_all(eqs));
    }
    d.gamma = fo::disj_all(disjuncts);
    return d;
}

Team team_restrict(const Team &x, const std::vector<std::string> &vars) {
    Team out(vars);
    std::vector<int> cols;
    for (const auto &v : out.vars()) {
        int c = x.column(v);
        if (c < 0) throw Error("cannot restrict: '" + v + "' is not in the team domain");
        cols.push_back(c);
    }
    for (const auto &r : x.rows()) {
        Row o;
        o.reserve(cols.size());
        for (int c : cols) o.push_back(r[static_cast<std::size_t>(c)]);
        out.insert(std::move(o));
    }
    return out;
}

Team team_restrict(const Team &x, const std::set<std::string> &vars) { return team_restrict(x, var_domain(vars)); }

Team team_extend_universal(const Structure &m, const Team &x, const std::string &var) {
    auto vars = x.vars();
    if (!x.has_var(var)) vars.push_back(var);
    Team out(vars);
    const int col = out.column(var);
    const int old = x.column(var);
    for (const auto &r : x.rows()) {
        Row base;
        for (std::size_t i = 0, j = 0; i < out.vars().size(); ++i) {
            if (static_cast<int>(i) == col) {
                base.push_back(0);
                if (old >= 0) ++j;
            } else {
                base.push_back(r[j++]);
            }
        }
        for (std::size_t e = 0; e < m.size(); ++e) {
            base[static_cast<std::size_t>(col)] = static_cast<Element>(e);
            out.insert(base);
        }
    }
    return out;
}

bool is_x_variation(const Team &x, const Team &y, const std::string &var) {
    std::set<std::string> want(x.vars().begin(), x.vars().end());
    want.insert(var);
    if (var_domain(want) != y.vars()) return false;
    std::set<std::string> rest(x.vars().begin(), x.vars().end());
    rest.erase(var);
    return team_restrict(x, rest) == team_restrict(y, rest);
}

XVariations::XVariations(const Structure &m, const Team &x, std::string var) : domain_size_(m.size()) {
    if (domain_size_ > 31) throw Error("domain too large for x-variation enumeration");
    std::set<std::string> rest(x.vars().begin(), x.vars().end());
    rest.erase(var);
    Team base = team_restrict(x, rest);
    auto all = x.vars();
    if (!x.has_var(var)) all.push_back(var);
    out_vars_ = Team(all).vars();
    var_col_ = Team(out_vars_).column(var);
    for (const auto &r : base.rows()) {
        Row open = r;
        open.insert(open.begin() + var_col_, 0);
        base_rows_.push_back(std::move(open));
    }
    masks_.assign(base_rows_.size(), 1U);
}

std::optional<Team> XVariations::next() {
    if (done_) return std::nullopt;
    Team out(out_vars_);
    for (std::size_t i = 0; i < base_rows_.size(); ++i) {
        Row r = base_rows_[i];
        for (std::size_t e = 0; e < domain_size_; ++e) {
            if (!(masks_[i] >> e & 1U)) continue;
            r[static_cast<std::size_t>(var_col_)] = static_cast<Element>(e);
            out.insert(r);
        }
    }
    const std::uint32_t full = (1U << domain_size_) - 1U;
    std::size_t i = 0;
    for (; i < masks_.size(); ++i) {
        if (masks_[i] < full) {
            ++masks_[i];
            break;
        }
        masks_[i] = 1U;
    }
    if (i == masks_.size()) done_ = true;
    return out;
}

std::uint64_t XVariations::count() const {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < base_rows_.size(); ++i) c *= (std::uint64_t{1} << domain_size_) - 1U;
    return c;
}

std::vector<Team> enumerate_x_variations(const Structure &m, const Team &x, const std::string &var) {
    XVariations gen(m, x, var);
    std::vector<Team> out;
    while (auto t = gen.next()) out.push_back(std::move(*t));
    return out;
}

Team full_team(const Structure &m, const std::vector<std::string> &vars) {
    return team_of_definition(m, fo::top(), {}, vars);
}

std::vector<Team> all_teams(const Structure &m, const std::vector<std::string> &vars) {
    Team full = full_team(m, vars);
    auto rows = full.row_vector();
    if (rows.size() > 20) throw Error("too many assignments to enumerate every team");
    std::vector<Team> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rows.size()); ++mask) out.push_back(full.subteam(rows, mask));
    return out;
}

std::set<Row> team_relation(const Team &x) { return x.rows(); }

// -------------------------------------------------- structure enumeration

bool for_each_param_assignment(std::size_t domain_size, const std::vector<std::string> &params,
                               const std::function<bool(const ParamAssignment &)> &visit) {
    ParamAssignment h;
    for (const auto &p : params) h[p] = 0;
    while (true) {
        if (!visit(h)) return false;
        auto it = h.begin();
        for (; it != h.end(); ++it) {
            if (static_cast<std::size_t>(++it->second) < domain_size) break;
            it->second = 0;
        }
        if (it == h.end()) return true;
    }
}

bool for_each_structure(const Signature &sig, std::size_t size, const std::vector<std::string> &params,
                        const std::function<bool(const Structure &, const ParamAssignment &)> &visit) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < size; ++i) names.push_back(std::to_string(i));
    Structure m(names);
    // One odometer digit per relation tuple, function entry and constant.
    struct Digit {
        int kind; // 0 relation bit, 1 function entry, 2 constant
        std::string name;
        std::size_t index;
        std::size_t radix;
    };
    std::vector<Digit> digits;
    for (const auto &[n, a] : sig.relations) {
        m.declare_relation(n, a);
        for (std::size_t c = 0; c < m.relation_table(n)->holds.size(); ++c) digits.push_back({0, n, c, 2});
    }
    for (const auto &[n, a] : sig.functions) {
        m.declare_function(n, a);
        for (std::size_t c = 0; c < m.function_table(n)->values.size(); ++c) digits.push_back({1, n, c, size});
    }
    for (const auto &c : sig.constants) {
        m.set_constant(c, 0);
        digits.push_back({2, c, 0, size});
    }
    std::vector<std::size_t> value(digits.size(), 0);
    auto write = [&](std::size_t i) {
        const auto &d = digits[i];
        if (d.kind == 0) m.mutable_relation_table(d.name)->holds[d.index] = value[i] != 0;
        else if (d.kind == 1) m.mutable_function_table(d.name)->values[d.index] = static_cast<Element>(value[i]);
        else m.set_constant(d.name, static_cast<Element>(value[i]));
    };
    while (true) {
        bool go = for_each_param_assignment(size, params, [&](const ParamAssignment &h) { return visit(m, h); });
        if (!go) return false;
        std::size_t i = 0;
        for (; i < digits.size(); ++i) {
            if (++value[i] < digits[i].radix) {
                write(i);
                break;
            }
            value[i] = 0;
            write(i);
        }
        if (i == digits.size()) return true;
    }
}

} // namespace indep
