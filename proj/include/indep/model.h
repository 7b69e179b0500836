#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "indep/syntax.h"

namespace indep {

/// Domain elements are referred to by their index in declaration order.
using Element = int;
using Row = std::vector<Element>;

/// Team-variable assignment.
using Assignment = std::map<std::string, Element>;
/// Parameter assignment; keys are parameter names without the `$` sigil.
using ParamAssignment = std::map<std::string, Element>;

struct RelationTable {
    int arity = 0;
    std::vector<bool> holds; // indexed by the base-|M| code of the argument tuple
};

struct FunctionTable {
    int arity = 0;
    std::vector<Element> values; // indexed like RelationTable::holds
};

/// Finite first-order structure with a nonempty domain.
class Structure {
public:
    explicit Structure(std::vector<std::string> elements);

    std::string name;

    std::size_t size() const { return elements_.size(); }
    const std::vector<std::string> &elements() const { return elements_; }
    const std::string &element_name(Element e) const { return elements_.at(static_cast<std::size_t>(e)); }
    Element element(const std::string &name) const;
    bool has_element(const std::string &name) const;

    /// Empty relation / function defaulting to element 0; fill with the setters.
    void declare_relation(const std::string &rel, int arity);
    void declare_function(const std::string &fn, int arity);
    void add_tuple(const std::string &rel, const Row &args);
    void set_tuple(const std::string &rel, const Row &args, bool value);
    void set_value(const std::string &fn, const Row &args, Element value);
    void set_constant(const std::string &c, Element value);

    bool holds(const std::string &rel, const Row &args) const;
    Element apply(const std::string &fn, const Row &args) const;
    Element constant(const std::string &c) const;

    const RelationTable *relation_table(const std::string &rel) const;
    const FunctionTable *function_table(const std::string &fn) const;
    RelationTable *mutable_relation_table(const std::string &rel);
    FunctionTable *mutable_function_table(const std::string &fn);
    const std::map<std::string, RelationTable> &relations() const { return relations_; }
    const std::map<std::string, FunctionTable> &functions() const { return functions_; }
    const std::map<std::string, Element> &constants() const { return constants_; }

    Signature signature() const;
    std::size_t code(const Row &args) const;
    Row decode(std::size_t code, int arity) const;

    /// Throws unless every symbol of `sig` is interpreted with the right arity.
    void require_signature(const Signature &sig) const;

    bool operator==(const Structure &o) const {
        return elements_ == o.elements_ && relations_ == o.relations_ && functions_ == o.functions_ &&
               constants_ == o.constants_;
    }

private:
    std::vector<std::string> elements_;
    std::map<std::string, RelationTable> relations_;
    std::map<std::string, FunctionTable> functions_;
    std::map<std::string, Element> constants_;
};

bool operator==(const RelationTable &a, const RelationTable &b);
bool operator==(const FunctionTable &a, const FunctionTable &b);

std::string describe(const Structure &m);

/// Set of assignments over a common, finite, sorted variable domain.
class Team {
public:
    Team() = default;
    /// Empty team over the given variables (sorted and deduplicated).
    explicit Team(std::vector<std::string> vars);
    /// Rows are given in the order of `vars` as passed and reordered if needed.
    Team(std::vector<std::string> vars, const std::vector<Row> &rows);

    const std::vector<std::string> &vars() const { return vars_; }
    const std::set<Row> &rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }

    /// Row values follow vars() order.
    void insert(Row r);
    bool contains(const Row &r) const { return rows_.count(r) != 0; }
    bool has_var(const std::string &v) const { return column(v) >= 0; }
    int column(const std::string &v) const;
    Assignment assignment(const Row &r) const;
    std::vector<Row> row_vector() const { return {rows_.begin(), rows_.end()}; }

    /// The team with the rows selected by `mask` (bit i = i-th row in order).
    Team subteam(const std::vector<Row> &rows, std::uint64_t mask) const;
    bool subset_of(const Team &o) const;

    bool operator==(const Team &) const = default;
    std::strong_ordering operator<=>(const Team &o) const {
        if (auto c = vars_ <=> o.vars_; c != 0) return c;
        return rows_ <=> o.rows_;
    }

private:
    std::vector<std::string> vars_;
    std::set<Row> rows_;
};

std::string describe(const Team &t, const Structure &m);

/// Sorted, deduplicated variable list.
std::vector<std::string> var_domain(std::set<std::string> vars);

// ----------------------------------------------------------- evaluation

/// Formula compiled against a structure: symbols resolved and variables
/// mapped to slots. The first |inputs| slots are the input team variables
/// in the order given; parameters are fixed by `h` at compile time.
class CompiledFo {
public:
    CompiledFo(const FoFormula &f, const Structure &m, const std::vector<std::string> &inputs,
               const ParamAssignment &h);
    CompiledFo(CompiledFo &&) noexcept;
    CompiledFo &operator=(CompiledFo &&) noexcept;
    ~CompiledFo();

    /// `env` must have at least slots() entries; only inputs need to be set.
    bool eval(std::vector<Element> &env) const;
    std::size_t slots() const;

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

/// Compiled term, same slot discipline as CompiledFo.
class CompiledTerm {
public:
    CompiledTerm(const Term &t, const Structure &m, const std::vector<std::string> &inputs,
                 const ParamAssignment &h);
    CompiledTerm(CompiledTerm &&) noexcept;
    CompiledTerm &operator=(CompiledTerm &&) noexcept;
    ~CompiledTerm();
    Element eval(const std::vector<Element> &env) const;

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

/// Tarski satisfaction of `f` under h ∪ s. Throws on unbound variables.
bool eval_fo(const Structure &m, const ParamAssignment &h, const Assignment &s, const FoFormula &f);
Element eval_term(const Structure &m, const ParamAssignment &h, const Assignment &s, const Term &t);

// -------------------------------------------------------- team operations

/// All assignments over `vars` (sorted) satisfying `gamma` under h.
Team team_of_definition(const Structure &m, const FoFormula &gamma, const ParamAssignment &h,
                        std::vector<std::string> vars);

struct ParamNamer {
    std::string prefix = "q";
    int next = 1;
    std::string fresh() { return prefix + std::to_string(next++); }
};

struct TeamDefinition {
    FoFormula gamma;
    ParamAssignment params;
};

/// Diagram of the team: one disjunct per row, each the conjunction of
/// `x_i = $q_k` with fresh parameters. The empty team yields `false`.
TeamDefinition canonical_team_definition(const Team &x);
TeamDefinition canonical_team_definition(const Team &x, ParamNamer &namer);

Team team_restrict(const Team &x, const std::vector<std::string> &vars);
Team team_restrict(const Team &x, const std::set<std::string> &vars);

/// X[M/x].
Team team_extend_universal(const Structure &m, const Team &x, const std::string &var);

/// True iff `y` has domain dom(x) ∪ {var} and both agree once restricted to
/// dom(x) \ {var}.
bool is_x_variation(const Team &x, const Team &y, const std::string &var);

/// Lazy enumeration of all x-variations. Rows of X|dom\{x} are processed in
/// row order and each chooses a nonempty set of values, enumerated in
/// increasing bitmask order with the first row varying fastest.
class XVariations {
public:
    XVariations(const Structure &m, const Team &x, std::string var);
    /// Next variation, or nullopt when exhausted.
    std::optional<Team> next();
    /// ∏ (2^|M| - 1) over the restricted rows.
    std::uint64_t count() const;

private:
    std::vector<std::string> out_vars_;
    std::vector<Row> base_rows_; // X|dom\{x}, values in out_vars_ order with the var column left open
    int var_col_ = 0;
    std::size_t domain_size_ = 0;
    std::vector<std::uint32_t> masks_;
    bool done_ = false;
};

std::vector<Team> enumerate_x_variations(const Structure &m, const Team &x, const std::string &var);

/// Every team over `vars` (all subsets of M^vars), in increasing bitmask order.
std::vector<Team> all_teams(const Structure &m, const std::vector<std::string> &vars);
/// M^vars as a team.
Team full_team(const Structure &m, const std::vector<std::string> &vars);

/// Rel(X): the rows of X read as tuples in vars() order.
std::set<Row> team_relation(const Team &x);

// -------------------------------------------------- structure enumeration

/// Calls `visit` on every structure interpreting exactly `sig` over the
/// domain {0 .. size-1}, plus every assignment of the listed parameters.
/// Stops early when `visit` returns false; returns false in that case.
bool for_each_structure(const Signature &sig, std::size_t size, const std::vector<std::string> &params,
                        const std::function<bool(const Structure &, const ParamAssignment &)> &visit);

/// Calls `visit` on each parameter assignment over `params` (sorted).
bool for_each_param_assignment(std::size_t domain_size, const std::vector<std::string> &params,
                               const std::function<bool(const ParamAssignment &)> &visit);

} // namespace indep
