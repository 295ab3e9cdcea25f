#pragma once

#include <memory>

#include "obslab/core/field.hpp"
#include "obslab/ops/elliptic.hpp"

namespace obslab {

/// Instance data of the degenerate obstacle problem
///   |Du|^gamma F(x, D^2 u) = f  on { u > phi },   u = g on the boundary,
/// with u >= phi throughout. `alpha` is the Holder exponent of the obstacle's
/// gradient and enters only through the predicted regularity exponent.
struct ProblemSpec {
    double gamma{0.0};
    std::shared_ptr<const EllipticOperator> op;
    ScalarFn obstacle;
    ScalarFn source;
    ScalarFn boundary;
    double alpha{1.0};

    /// min{alpha, 1/(gamma+1)}: the sharp growth exponent of u - tangent
    /// plane at free boundary points is 1 + beta().
    double beta() const;
};

/// Validates ranges and the standing assumption g > phi on the boundary ring
/// of `domain`; throws std::invalid_argument on violation.
void validate_problem(const ProblemSpec& spec, const GridDomain& domain);

/// Discrete C^{1,alpha} norm of a sampled function: sup |phi| + sup |D phi|
/// plus the Holder seminorm of the discrete gradient, sampled over axis pairs
/// at dyadic separations.
double c1alpha_norm(const GridField& phi, double alpha);

/// Rescaling u -> u/kappa, phi -> phi/kappa, f -> f/kappa^{gamma+1} that
/// drives the solution into the unit ball of the sup norm and the source
/// below delta0.
struct NormalizationMap {
    double kappa{1.0};
    double delta0{1.0};
    double gamma{0.0};

    /// kappa = ||u|| + (2^{gamma+1} ||phi||_{C^{1,alpha}}^{gamma+1}
    ///                  + ||f|| / delta0)^{1/(gamma+1)}.
    static NormalizationMap from(const ProblemSpec& spec, const GridField& u,
                                 double delta0);

    /// Problem with obstacle/boundary divided by kappa and source by
    /// kappa^{gamma+1}; the operator is unchanged (the families here are
    /// positively 1-homogeneous in X).
    ProblemSpec apply(const ProblemSpec& spec) const;
    GridField scale_solution(const GridField& u) const;
};

}  // namespace obslab
