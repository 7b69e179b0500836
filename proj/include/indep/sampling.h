#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "indep/model.h"

namespace indep {

using Rng = std::mt19937_64;

/// A finite grammar of independence formulas: the given atoms closed
/// under \/, /\ and the listed quantifiers.
struct FormulaGrammar {
    std::vector<IlFormula> atoms;
    std::vector<std::string> exists_vars;
    std::vector<std::string> forall_vars;
    bool disjunction = true;
    bool conjunction = true;
};

/// Every formula of the grammar with formula_size at most `max_size`, in
/// increasing size.
std::vector<IlFormula> enumerate_formulas(const FormulaGrammar &g, std::size_t max_size);

/// A formula of size at most `max_size` (at least one atom).
IlFormula random_formula(const FormulaGrammar &g, std::size_t max_size, Rng &rng);

/// Structure over elements 0..size-1 with each relation tuple, function
/// value and constant drawn uniformly.
Structure random_structure(const Signature &sig, std::size_t size, Rng &rng);

/// Team over `vars` with at most `max_rows` distinct rows (possibly none).
Team random_team(const Structure &m, const std::vector<std::string> &vars, std::size_t max_rows, Rng &rng);

/// First-order formula over the signature's relations, equality, the
/// given team variables (free or quantified) and parameters, with at most
/// `depth` nested connectives.
FoFormula random_fo(const Signature &sig, const std::vector<std::string> &vars, const std::vector<std::string> &params,
                    int depth, Rng &rng);

/// Tuple of up to `max_len` variables drawn from `vars`, repeats allowed.
TermTuple random_var_tuple(const std::vector<std::string> &vars, std::size_t max_len, Rng &rng);

} // namespace indep
