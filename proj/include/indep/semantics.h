#pragma once

#include <set>
#include <vector>

#include "indep/model.h"

namespace indep {

/// TS-ind: for all s, s' agreeing on t1 some s'' agrees with s on t1 t2 and
/// with s' on t1 t3. Terms must be parameter-free.
bool sat_independence_atom(const Structure &m, const Team &x, const TermTuple &t1, const TermTuple &t2,
                           const TermTuple &t3);

struct EvalOptions {
    /// Use flatness of atom-free subformulas and downward closure of
    /// dependence-only subformulas to shrink the split and variation
    /// searches. Off means the clauses are searched literally.
    bool shortcuts = true;
};

/// Team semantics over the full model (lax disjunction and existential).
/// `dep` atoms are desugared first.
bool eval_full(const Structure &m, const Team &x, const IlFormula &phi, EvalOptions opts = {});

/// The choices made by a successful team-semantics search, mirroring the
/// formula: Or holds the two cover parts, Exists the chosen variation,
/// Forall the universal extension, And the team twice; atoms are leaves.
struct SatTrace {
    Team team;
    std::vector<SatTrace> children;
};

/// Trace of a successful eval_full search, or nullopt when φ fails on X.
std::optional<SatTrace> explain_full(const Structure &m, const Team &x, const IlFormula &phi, EvalOptions opts = {});

using TeamFamily = std::set<Team>;

/// General team semantics: disjunction parts and existential witnesses are
/// drawn from `family`; the universal clause uses X[M/x] unconditionally.
/// Throws if X is not in the family.
bool eval_gts(const Structure &m, const TeamFamily &family, const Team &x, const IlFormula &phi);

/// True iff `phi` contains no independence or dependence atom.
bool is_flat_fragment(const IlFormula &phi);

} // namespace indep
