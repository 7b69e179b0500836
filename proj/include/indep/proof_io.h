#pragma once

#include <string>

#include "indep/proof.h"

namespace indep {

/// `sig { rel R/2, P/1; fun f/1; const c, d }`; every part optional.
Signature parse_signature(const std::string &text);
std::string format_signature(const Signature &sig);

/// One `proof <name> { sig {...} theta {...}? <steps> }` block. A step is
///   <n>: <tag> [from [i, j]] gamma="..." phi="..." ctx=["...", ...] [params]
/// numbered 1, 2, ... in order; params are var=x, param=p, theta=<k>
/// (1-based sentence index) and rels=[S1, ...].
Proof parse_proof(const std::string &text);
std::string format_proof(const Proof &p);

struct NamedSequent {
    std::string name;
    Signature signature;
    Sequent sequent;
};

/// `sequent <name> { sig {...} ctx=[...] gamma="..." phi="..." }`.
NamedSequent parse_sequent(const std::string &text);
std::string format_sequent(const NamedSequent &s);

} // namespace indep
