#pragma once

#include <optional>
#include <string>
#include <vector>

#include "indep/semantics.h"

namespace indep {

/// Evidence for M ⊨_{γ(h)} φ, shaped like φ (after desugaring).
struct WitnessNode {
    enum class Rule { Lit, Ind, Or, And, Exists, Forall };
    Rule rule = Rule::Lit;
    /// Parameters added on top of the inherited assignment (h' \ h).
    ParamAssignment extension;
    /// Or: γ1 and γ2. Exists and Forall: γ'. Otherwise empty.
    std::vector<FoFormula> formulas;
    std::vector<WitnessNode> children;
};

/// Fast verdict: evaluates φ on the team defined by γ under h over the
/// variables free in γ or φ.
bool eval_entailment(const Structure &m, const FoFormula &gamma, const ParamAssignment &h, const IlFormula &phi);
/// Same, with an explicit variable domain containing Free_T(γ) ∪ Free_T(φ).
bool eval_entailment(const Structure &m, const FoFormula &gamma, const ParamAssignment &h, const IlFormula &phi,
                     const std::vector<std::string> &vars);

/// A witness tree built from team diagrams with fresh parameters $w1,
/// $w2, ... when the verdict is true; nullopt otherwise.
std::optional<WitnessNode> eval_entailment_witnessed(const Structure &m, const FoFormula &gamma,
                                                     const ParamAssignment &h, const IlFormula &phi);

/// Checks every clause of the entailment semantics along the tree. Throws
/// when the tree does not have the shape of φ.
bool check_witness(const Structure &m, const FoFormula &gamma, const ParamAssignment &h, const IlFormula &phi,
                   const WitnessNode &w);

/// Indented text, one node per line: rule tag, h' bindings, formulas.
std::string format_witness(const WitnessNode &w, const Structure &m);

} // namespace indep
