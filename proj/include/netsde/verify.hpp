#pragma once

#include <string>
#include <vector>

#include "netsde/network.hpp"
#include "netsde/solver.hpp"

namespace netsde {

struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0; // distance to the failure threshold (sign: positive passes)
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::string to_string() const;
};

/// Runs the full invariant suite on a model: validation, form symmetry,
/// coercivity, sub-Markov bounds, the analyticity proxy, flux-balance
/// consistency at the vertices, dissipativity, and noise growth.
VerificationReport run_verification(const NetworkModel& model, const SolverConfig& config);

} // namespace netsde
