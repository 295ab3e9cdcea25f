#pragma once

#include <memory>

#include "obslab/core/problem.hpp"

namespace obslab {

/// min{alpha, 1/(1+gamma)}: the regularity exponent of the solution's
/// gradient at free boundary points.
double beta_of(double gamma, double alpha);

/// Exact radial solution v(x) = (|x| - r)_+^{(gamma+2)/(gamma+1)} of the
/// degenerate trace equation |Dv|^gamma Lap v = f with zero obstacle, where f
/// is the matching positive radial source. Witnesses that the exponent
/// 1 + 1/(gamma+1) cannot be improved.
struct RadialSharpness {
    double gamma{1.0};
    double r_contact{0.5};
    int dim{2};

    /// (gamma+2)/(gamma+1), in (1, 2).
    double exponent() const;

    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    /// ((gamma+2)/(gamma+1))^{gamma+1} (1/(1+gamma) + (n-1)(1 - r/|x|))
    /// outside the contact ball; its |x| -> r limit inside.
    double source(const Vec& x) const;
    /// Value on the unit sphere, (1 - r)^{(gamma+2)/(gamma+1)}.
    double boundary_value() const;

    /// Full instance: trace operator, zero obstacle, this source, v's own
    /// trace as boundary datum, alpha = 1.
    ProblemSpec problem() const;
};

/// Sup of |wrapper(Dv, D^2 v) - f| over grid nodes away from the contact
/// sphere (||x| - r| > collar); pure finite-difference truncation, vanishing
/// as h -> 0. Collar must be at least 2h because v is only C^{1, 1/(gamma+1)}
/// across the sphere.
double verify_radial_is_solution(const RadialSharpness& oracle,
                                 std::shared_ptr<const GridDomain> domain,
                                 double grad_floor, double collar);

/// Comparison function of the non-degeneracy estimate:
/// Xi(x) = base + C(m, Lambda, n, gamma) |x - center|^{(gamma+2)/(gamma+1)}.
/// Any solution with inf f >= m must exceed Xi somewhere on each sphere
/// around a free boundary point.
struct ComparisonXi {
    double m_inf{1.0};
    double lambda_cap{1.0};
    int dim{2};
    double gamma{1.0};
    double base_value{0.0};
    Vec center{};

    /// { m (gamma+1)^{gamma+2} / ([n (gamma+1) Lambda] (gamma+2)^{gamma+1})
    /// }^{1/(gamma+1)}.
    double coefficient() const;
    double value(const Vec& x) const;
};

}  // namespace obslab
