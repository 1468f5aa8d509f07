#pragma once

#include <string>
#include <vector>

#include "ivsqrt/types.hpp"

namespace ivsqrt::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail; // measured metrics, thresholds, resolved conventions
};

// Names of the acceptance criteria, in execution order.
std::vector<std::string> criteria_names();

// Runs the full acceptance suite with the given special-function policy.
// Deterministic (fixed seeds); finishes in seconds.
std::vector<CriterionResult> run_acceptance(const EvalPolicy& policy = {});

} // namespace ivsqrt::verify
