#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace indep {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by every parser in the project; carries the byte offset of the
/// offending token.
class ParseError : public Error {
public:
    ParseError(const std::string &what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

struct Term {
    enum class Kind : std::uint8_t { TeamVar, ParamVar, Const, App };

    Kind kind = Kind::TeamVar;
    /// Variable, constant or function name. Parameter names are stored
    /// without the `$` sigil.
    std::string name;
    std::vector<Term> args;

    static Term team_var(std::string name) { return {Kind::TeamVar, std::move(name), {}}; }
    static Term param_var(std::string name) { return {Kind::ParamVar, std::move(name), {}}; }
    static Term constant(std::string name) { return {Kind::Const, std::move(name), {}}; }
    static Term app(std::string fn, std::vector<Term> args) { return {Kind::App, std::move(fn), std::move(args)}; }

    bool is_team_var() const { return kind == Kind::TeamVar; }
    bool is_param_var() const { return kind == Kind::ParamVar; }

    bool operator==(const Term &) const = default;
    std::strong_ordering operator<=>(const Term &o) const;
};

using TermTuple = std::vector<Term>;

/// Unrestricted first-order formula. Used for team definitions, sequent
/// contexts and relation existence theories.
struct FoFormula {
    enum class Kind : std::uint8_t { True, False, Rel, Eq, Not, And, Or, Implies, Iff, Exists, Forall };

    Kind kind = Kind::True;
    std::string name;            // relation symbol (Rel) or bound variable (Exists/Forall)
    std::vector<Term> terms;     // Rel arguments; Eq holds exactly two
    std::vector<FoFormula> subs; // one for Not/quantifiers, two for binary connectives

    bool is_atom() const { return kind == Kind::Rel || kind == Kind::Eq; }
    bool is_binary() const {
        return kind == Kind::And || kind == Kind::Or || kind == Kind::Implies || kind == Kind::Iff;
    }
    bool is_quantifier() const { return kind == Kind::Exists || kind == Kind::Forall; }

    bool operator==(const FoFormula &) const = default;
    std::strong_ordering operator<=>(const FoFormula &o) const;
};

namespace fo {
FoFormula top();
FoFormula bottom();
FoFormula rel(std::string name, std::vector<Term> args);
FoFormula eq(Term lhs, Term rhs);
FoFormula neg(FoFormula f);
FoFormula conj(FoFormula a, FoFormula b);
FoFormula disj(FoFormula a, FoFormula b);
FoFormula implies(FoFormula a, FoFormula b);
FoFormula iff(FoFormula a, FoFormula b);
FoFormula exists(std::string var, FoFormula body);
FoFormula forall(std::string var, FoFormula body);
/// Left-nested conjunction; the empty conjunction is `true`.
FoFormula conj_all(const std::vector<FoFormula> &fs);
/// Left-nested disjunction; the empty disjunction is `false`.
FoFormula disj_all(const std::vector<FoFormula> &fs);
/// Prefix of universal quantifiers in the order given (outermost first).
FoFormula forall_all(const std::vector<std::string> &vars, FoFormula body);
FoFormula exists_all(const std::vector<std::string> &vars, FoFormula body);
/// Componentwise equalities `a_i = b_i`; tuples must have equal length.
std::vector<FoFormula> tuple_equalities(const TermTuple &a, const TermTuple &b);
} // namespace fo

/// Independence-logic formula in negation normal form. Negation can only be
/// expressed through the polarity of a literal.
struct IlFormula {
    enum class Kind : std::uint8_t { Literal, Indep, Dep, Or, And, Exists, Forall };

    Kind kind = Kind::Literal;
    bool positive = true;
    FoFormula atom;                   // Literal: a Rel or Eq node
    std::array<TermTuple, 3> tuples;  // Indep: t1 ; t2 ; t3.  Dep: tuples[0] = t1 ... tn
    std::string var;                  // Exists/Forall
    std::vector<IlFormula> subs;      // Or/And: two, quantifiers: one

    bool operator==(const IlFormula &) const = default;
    std::strong_ordering operator<=>(const IlFormula &o) const;
};

namespace il {
IlFormula literal(bool positive, FoFormula atom);
IlFormula indep(TermTuple t1, TermTuple t2, TermTuple t3);
IlFormula dep(TermTuple terms);
IlFormula tensor_or(IlFormula a, IlFormula b);
IlFormula conj(IlFormula a, IlFormula b);
IlFormula exists(std::string var, IlFormula body);
IlFormula forall(std::string var, IlFormula body);
} // namespace il

struct Signature {
    std::map<std::string, int> relations;
    std::map<std::string, int> functions;
    std::set<std::string> constants;

    /// Throws if the name is already declared with a different role or arity.
    void add_relation(const std::string &name, int arity);
    void add_function(const std::string &name, int arity);
    void add_constant(const std::string &name);
    void merge(const Signature &other);

    bool has_relation(const std::string &n) const { return relations.count(n) != 0; }
    bool has_function(const std::string &n) const { return functions.count(n) != 0; }
    bool has_constant(const std::string &n) const { return constants.count(n) != 0; }
    bool declares(const std::string &n) const { return has_relation(n) || has_function(n) || has_constant(n); }

    bool operator==(const Signature &) const = default;
};

/// Signature containing exactly the non-logical symbols that occur.
Signature signature_of(const FoFormula &f);
Signature signature_of(const IlFormula &f);
void collect_signature(const FoFormula &f, Signature &sig);
void collect_signature(const IlFormula &f, Signature &sig);

struct FreeVars {
    std::set<std::string> team;
    std::set<std::string> params;
    bool operator==(const FreeVars &) const = default;
};

FreeVars free_vars(const Term &t);
FreeVars free_vars(const TermTuple &ts);
FreeVars free_vars(const FoFormula &f);
FreeVars free_vars(const IlFormula &f);
std::set<std::string> free_team_vars(const FoFormula &f);
std::set<std::string> free_team_vars(const IlFormula &f);

/// Every team variable name occurring anywhere (free or bound).
std::set<std::string> all_team_vars(const FoFormula &f);
std::set<std::string> all_team_vars(const IlFormula &f);
std::set<std::string> all_team_vars(const TermTuple &ts);

/// Variables bound by some quantifier of the formula.
std::set<std::string> bound_vars(const IlFormula &f);

using VarRenaming = std::map<std::string, std::string>;

/// Simultaneous substitution of free team variables. Throws if the mapping
/// identifies two free variables or if a target would be captured.
FoFormula rename_team_vars(const FoFormula &f, const VarRenaming &m);
TermTuple rename_team_vars(const TermTuple &ts, const VarRenaming &m);
Term rename_team_vars(const Term &t, const VarRenaming &m);

/// Replaces every free occurrence of the parameter `param` by the team
/// variable `var`. The caller guarantees `var` does not occur in `f`.
FoFormula param_to_team_var(const FoFormula &f, const std::string &param, const std::string &var);

/// Renames relation symbols (used for Θ sentences and PS-Θ).
FoFormula rename_relations(const FoFormula &f, const std::map<std::string, std::string> &m);
bool mentions_relation(const FoFormula &f, const std::string &rel);
bool mentions_relation(const IlFormula &f, const std::string &rel);

/// dep(t1 ... tn) becomes indep(t1 ... t(n-1) ; tn ; tn).
IlFormula desugar_dep(const IlFormula &f);
bool contains_dep(const IlFormula &f);
bool contains_dependency_atom(const IlFormula &f); // indep or dep anywhere

/// Number of formula nodes; terms are not counted.
std::size_t formula_size(const FoFormula &f);
std::size_t formula_size(const IlFormula &f);

/// The first-order formula denoted by an atom-free independence formula.
/// Throws for independence or dependence atoms.
FoFormula to_fo(const IlFormula &f);
/// Inverse of to_fo on the NNF image (literals, /\, \/, quantifiers).
/// Throws for ->, <->, true, false and negation above atoms.
IlFormula fo_to_il(const FoFormula &f);

/// Fresh variable `base_<suffix>` avoiding `taken`; extra underscores are
/// inserted until fresh: x_1, x__1, x___1, ...
std::string fresh_variant(const std::string &base, const std::string &suffix, const std::set<std::string> &taken);

// ---------------------------------------------------------------- parsing

/// FO grammar:
///   true | false | R(t,...) | t = t | not F | F & F | F '|' F | F -> F
///   | F <-> F | exists x. F | forall x. F | (F)
/// with precedence not > & > | > -> > <-> and quantifier bodies extending
/// as far right as possible.
FoFormula parse_fo(const std::string &text, const Signature &sig);

/// IL grammar:
///   R(t,...) | ~R(t,...) | t = t | t != t | indep(ts ; ts ; ts) | dep(ts)
///   | F \/ F | F /\ F | exists x. F | forall x. F | (F)
/// Negation is accepted only in front of an atom. Warnings (currently: empty
/// second or third tuple of an independence atom) are appended to `warnings`.
IlFormula parse_il(const std::string &text, const Signature &sig, std::vector<std::string> *warnings = nullptr);

Term parse_term(const std::string &text, const Signature &sig);
/// Comma separated, possibly empty.
TermTuple parse_term_tuple(const std::string &text, const Signature &sig);

// --------------------------------------------------------------- printing

std::string to_string(const Term &t);
std::string to_string(const TermTuple &ts);
std::string to_string(const FoFormula &f);
std::string to_string(const IlFormula &f);

} // namespace indep
