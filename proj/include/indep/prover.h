#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indep/model.h"

namespace indep {

struct ProverBudget {
    /// Iterative-deepening bound on inference depth. A hyperresolution
    /// step sits one level above its deepest parent; factoring stays at
    /// its parent's level, and deleting a literal whose complement is an
    /// instance of a unit clause keeps the deeper level of the two.
    /// 0 disables the refutation search.
    int depth = 5;
    int ms = 5000;
    /// Largest countermodel size tried.
    int cm_size = 3;
};

struct ProverVerdict {
    enum class Kind { Proved, Refuted, Unknown };
    Kind kind = Kind::Unknown;
    /// Proved: number of inferences performed by the successful search.
    std::size_t steps = 0;
    /// Refuted: a structure and parameter values satisfying every premise
    /// and falsifying some goal, verified with eval_fo.
    std::optional<Structure> model;
    ParamAssignment params;
    std::string reason;
};

const char *to_string(ProverVerdict::Kind k);

/// Decides ⋀premises ⊨ ⋀goals where possible. Parameter variables are
/// read as constants; formulas must have no free team variables.
ProverVerdict prove_entailment(const std::vector<FoFormula> &premises, const std::vector<FoFormula> &goals,
                               const ProverBudget &budget = {});

/// A model of all sentences with at most `max_size` elements, parameters
/// read as constants, or nullopt.
std::optional<std::pair<Structure, ParamAssignment>> find_countermodel(const std::vector<FoFormula> &sentences,
                                                                       int max_size);

/// Refutation search only: true iff the clause set of the sentences is
/// shown unsatisfiable within the budget.
bool refute(const std::vector<FoFormula> &sentences, const ProverBudget &budget, std::size_t *steps = nullptr);

} // namespace indep
