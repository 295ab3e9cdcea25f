#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace obslab {

struct CriterionResult {
    std::string id;
    bool passed{false};
    std::string detail;
};

/// Criterion ids accepted by run_criterion, in order: A1..A8.
std::vector<std::string> criterion_ids();

/// Runs one acceptance criterion end to end with pinned tolerances; `seed`
/// drives the randomized matrix sampling in A1. Solver fixtures are memoized
/// across calls within the process, so running all eight costs two solves.
CriterionResult run_criterion(const std::string& id, uint64_t seed = 1);

}  // namespace obslab
