#pragma once

#include <string>
#include <vector>

namespace indep {

struct SelftestCase {
    std::string name;
    bool passed = true;
    std::string detail;
};

/// A reduced run of the library's invariants: oracle comparisons, locality,
/// the empty team, entailment against team semantics, the prover examples
/// and the derived-rule generators. Deterministic (fixed seed).
std::vector<SelftestCase> run_selftest();

} // namespace indep
