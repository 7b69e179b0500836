#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "indep/general.h"
#include "indep/prover.h"

namespace indep {

/// Γ | γ ⊢ φ. Γ has only parameter variables free; φ has none.
struct Sequent {
    std::set<FoFormula> context;
    FoFormula gamma;
    IlFormula phi;
};

/// Contexts compared as sets, γ syntactically, φ after desugaring dep.
bool same_sequent(const Sequent &a, const Sequent &b);
/// Throws Error naming the violated restriction.
void require_well_formed(const Sequent &s);
std::string to_string(const Sequent &s);

enum class RuleTag { Lit, Ind, Or, And, Exists, Forall, Ent, Depar, Split, Theta };

/// "PS-lit", "PS-ind", "PS-or", "PS-and", "PS-exists", "PS-forall",
/// "PS-ent", "PS-depar", "PS-split", "PS-theta".
const char *to_string(RuleTag t);
std::optional<RuleTag> parse_rule_tag(const std::string &s);

struct RuleParams {
    /// Conclusion γ for PS-or, PS-exists and PS-forall.
    FoFormula gamma;
    /// Bound variable for PS-exists and PS-forall.
    std::string var;
    /// Parameter variable for PS-depar, without the sigil.
    std::string param;
    /// New context Γ' for PS-ent.
    std::vector<FoFormula> context;
    /// PS-theta: sentence index and the symbols S replacing its relation
    /// variables, in order.
    std::size_t theta = 0;
    std::vector<std::string> symbols;
};

/// ⋀premises ⊨ ⋀goals, to be settled by the prover.
struct Obligation {
    std::vector<FoFormula> premises;
    std::vector<FoFormula> goals;
};

struct RuleApplication {
    Sequent conclusion;
    std::optional<Obligation> obligation; // PS-ent only
};

/// ∀⃗v(γ → lit) | γ ⊢ lit with ⃗v the sorted free team variables.
Sequent axiom_lit(const FoFormula &gamma, const IlFormula &lit);

/// Fresh copies of ⃗v = Free_T(γ) ∪ Free_T(⃗t1⃗t2⃗t3): `x` becomes x_1,
/// x_2, x_3 (more underscores when taken).
Sequent axiom_ind(const FoFormula &gamma, const TermTuple &t1, const TermTuple &t2, const TermTuple &t3);

/// Builds the conclusion of a rule from its premises. Throws Error on a
/// shape mismatch or a violated side condition. `theta` is needed for
/// PS-theta only.
RuleApplication apply_rule(RuleTag tag, const std::vector<Sequent> &premises, const RuleParams &params,
                           const Theta *theta = nullptr);

/// The variable PS-depar binds in place of the parameter `p`: `p` itself
/// unless taken in the context, otherwise a fresh variant.
std::string depar_variable(const std::string &p, const std::vector<FoFormula> &context);

struct ProofStep {
    Sequent sequent;
    RuleTag rule = RuleTag::Lit;
    std::vector<std::size_t> premises; // 0-based indices of earlier steps
    RuleParams params;
};

struct Proof {
    std::string name;
    Signature signature;
    Theta theta;
    std::vector<ProofStep> steps;

    /// Number of steps minus one.
    std::size_t length() const { return steps.empty() ? 0 : steps.size() - 1; }
    const Sequent &conclusion() const { return steps.back().sequent; }
};

struct StepReport {
    enum class Status { OK, Failed, Conditional };
    Status status = Status::OK;
    std::string reason;
    std::size_t prover_steps = 0;
};

struct CheckReport {
    enum class Overall { Verified, ConditionallyVerified, Rejected };
    Overall overall = Overall::Verified;
    std::vector<StepReport> steps;
    std::string reason; // set when the proof has no steps
};

const char *to_string(StepReport::Status s);
const char *to_string(CheckReport::Overall o);

CheckReport check_proof(const Proof &proof, const Theta &theta, const ProverBudget &budget = {});

/// Proof of ∀⃗v(γ → φ) | γ ⊢ φ by recursion on φ. Throws Error when φ
/// contains a dependency atom or a parameter variable.
Proof derive_fo(const FoFormula &gamma, const IlFormula &phi);

/// Two steps: PS-ind for ⟨⃗t; t'; t'⟩, then PS-ent to the
/// functional-dependency context with φ stated as dep(⃗t, t').
Proof derive_dep(const FoFormula &gamma, const TermTuple &t, const Term &t2);

/// The context of the PS-dep conclusion, built with the same fresh
/// names as axiom_ind.
FoFormula dependency_context(const FoFormula &gamma, const TermTuple &t, const Term &t2);

struct ThetaFo {
    std::vector<FoFormula> sentences;
    Signature signature; // the input signature plus the fresh symbols
    std::vector<std::vector<std::string>> symbols;
};

/// Replaces the relation variables of each sentence by fresh symbols S1,
/// S2, ... that are pairwise distinct and unused by `sig` and Θ.
ThetaFo theta_fo(const Theta &theta, const Signature &sig);

struct SequentVerdict {
    bool valid = true;
    int checked_size = 0; // largest size fully checked
    std::optional<Structure> model;
    ParamAssignment params;
};

/// Exhaustive search for M, h with M ⊨_h Γ and not M ⊨_{γ(h)} φ over all
/// structures of the sequent's signature with at most `max_size` elements.
SequentVerdict validate_sequent(const Sequent &s, int max_size);
SequentVerdict validate_sequent(const Sequent &s, const Signature &sig, int max_size);

} // namespace indep
