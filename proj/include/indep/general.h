#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "indep/semantics.h"

namespace indep {

enum class FamilyKind { Full, Least, Explicit };

struct GeneralModel {
    Structure structure;
    FamilyKind kind = FamilyKind::Full;
    TeamFamily family; // used when kind == Explicit
};

/// One sentence ∃R1..Rk body of a relation existence theory.
struct ThetaSentence {
    std::vector<std::pair<std::string, int>> relations; // relation variables with arities
    FoFormula body;
};

struct Theta {
    std::vector<ThetaSentence> sentences;
};

/// `theta { exists R/1, S/2 : <fo> ; exists T/1 : <fo> }`. Bodies are
/// parsed over `sig` extended by the sentence's relation variables and
/// must be closed.
Theta parse_theta(const std::string &text, const Signature &sig);
std::string to_string(const ThetaSentence &s);

struct ClosureVerdict {
    bool closed = true;
    /// When not closed: a defining formula, the variable domain it is read
    /// over, its parameter values and the relation parameters it uses.
    FoFormula witness;
    std::vector<std::string> domain;
    ParamAssignment params;
    std::map<std::string, Team> relation_params;
    Team missing;
    std::size_t denotations = 0; // distinct definable sets examined
};

/// Bounded closure check of an explicit family: every formula of size up
/// to `bound` built from team variables of `universe`, element parameters
/// ($m0, $m1, ... one per element), the structure's symbols and relation
/// parameters Rel(X) for X in the family must define a team in the family,
/// for every variable domain between its free variables and `universe`.
ClosureVerdict check_general_closure(const GeneralModel &g, const std::set<std::string> &universe, int bound);

/// Adds missing definable teams until check_general_closure passes.
TeamFamily close_family(const Structure &m, TeamFamily seed, const std::set<std::string> &universe, int bound);

/// Every team over every subset of `universe`. Over a finite structure
/// each of them is definable by its diagram, so this is the least family.
TeamFamily least_family(const Structure &m, const std::set<std::string> &universe);

/// True iff every team of the family round-trips through its canonical
/// definition in `m`.
bool family_teams_definable(const Structure &m, const TeamFamily &family);

/// The family a descriptor stands for, relative to `universe`. Full and
/// Least coincide over finite structures.
TeamFamily materialize_family(const GeneralModel &g, const std::set<std::string> &universe);

struct ThetaVerdict {
    bool closed = true;
    std::size_t failed = 0; // index of the first sentence without witnesses
    /// For each sentence that holds: the relations chosen for its variables.
    std::vector<std::vector<std::set<Row>>> witnesses;
};

/// Each ∃R body must hold for some interpretation of R drawn from Rel(X),
/// X in the family, with |dom X| equal to the arity (Explicit), or from all
/// relations of that arity (Full, Least).
ThetaVerdict check_theta_closed(const GeneralModel &g, const Theta &theta);

/// `m` with the extra relations added under the given names.
Structure expand_structure(const Structure &m, const std::vector<std::pair<std::string, int>> &names,
                           const std::vector<std::set<Row>> &rels);

} // namespace indep
