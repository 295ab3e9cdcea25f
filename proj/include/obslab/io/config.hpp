#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "obslab/core/problem.hpp"
#include "obslab/geom/free_boundary.hpp"
#include "obslab/solver/solver.hpp"

namespace obslab {

struct GridConfig {
    int dim{2};
    double h{1.0 / 32.0};
    double radius{1.0};
    int levels{1};
};

struct MeasureConfig {
    FitWindow window{};
    std::vector<double> porosity_radii;
    std::vector<double> box_scales;
    double rho{0.5};
    int k_max{4};
};

struct ExperimentConfig {
    ProblemSpec problem;
    GridConfig grid;
    SolverConfig solver;
    MeasureConfig measure;
    uint64_t seed{1};
    std::string output_dir{"out"};
    nlohmann::json raw;
};

/// Builds an operator from its JSON descriptor {"kind": ..., params...}.
std::shared_ptr<const EllipticOperator> parse_operator(const nlohmann::json& j);

/// Scalar-function field of the config: either an expression string or a
/// catalog object {"catalog": "radial_v" | "radial_source" | "const", ...}.
ScalarFn parse_scalar_fn(const nlohmann::json& j);

/// Parses and validates the whole experiment document; throws
/// std::invalid_argument with a pointed message on any violation.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

}  // namespace obslab
