#pragma once

#include <memory>
#include <vector>

#include "obslab/core/field.hpp"
#include "obslab/geom/fit.hpp"

namespace obslab {

/// Node sets of the discrete contact region { u - phi <= tol } and its edge
/// (contact nodes with at least one axis neighbor off contact).
struct FreeBoundaryReport {
    std::vector<int64_t> contact_nodes;
    std::vector<int64_t> fb_nodes;
    double tol_contact{0.0};

    bool contact_empty() const { return contact_nodes.empty(); }
};

FreeBoundaryReport extract_free_boundary(const GridField& u, const GridField& phi,
                                         double tol_contact);

/// Dyadic radius window for the log-log exponent fits. Radii below
/// max(r_min, 4h) are never used; radii whose measured sup falls below
/// floor_multiple * h^2 are discarded (below truncation error the slope
/// carries no information).
struct FitWindow {
    double r_min{0.0};
    double r_max{0.25};
    double floor_multiple{10.0};

    /// Dyadic radii r_max, r_max/2, ... down to max(r_min, 4h).
    std::vector<double> radii(double h) const;
};

/// Where the tangent-plane slope Du(x0) comes from. The obstacle's gradient
/// is the default: u touches phi in C^1 at free boundary points and the
/// obstacle is smooth data, so its discrete gradient is far less noisy.
enum class GradientSource { Obstacle, Solution };

/// Slope of log sup_{B_r(x0)} |u - tangent plane| vs log r; estimates
/// 1 + beta.
LogLogFit growth_exponent_at(const GridField& u, const GridField& phi, int64_t x0,
                             const FitWindow& window,
                             GradientSource source = GradientSource::Obstacle);

/// Slope of log sup_{B_r(x0)} (u - phi) vs log r; estimates 1 + beta.
LogLogFit detach_rate_at(const GridField& u, const GridField& phi, int64_t x0,
                         const FitWindow& window);

/// Slope of log sup_{B_r(x0)} |Du - Du(x0)| vs log r over interior nodes;
/// estimates beta.
LogLogFit gradient_growth_at(const GridField& u, int64_t x0, const FitWindow& window,
                             GradientSource source = GradientSource::Solution,
                             const GridField* phi = nullptr);

/// Per radius, sup_{boundary of B_r(x0)} (u - phi(x0)) / r^exponent. The
/// minimum over radii estimates the non-degeneracy constant; exponent is
/// 1 + 1/(gamma+1) in the inf f > 0 regime and 2 for strict-supersolution
/// obstacles.
std::vector<double> nondegeneracy_profile(const GridField& u, const GridField& phi,
                                          int64_t x0, const std::vector<double>& radii,
                                          double exponent);

struct PorosityEstimate {
    double sigma_hat{0.0};
    bool non_porous{false};  // no avoiding ball above grid scale at some sample
};

/// For every free boundary node x and sample radius r, the largest lattice
/// ball inside B_r(x) avoiding the free boundary (via a distance transform);
/// sigma_hat is the worst ratio radius/r. Radii below 4h are skipped.
PorosityEstimate porosity_estimate(const std::vector<int64_t>& fb_nodes,
                                   std::shared_ptr<const GridDomain> domain,
                                   const std::vector<double>& sample_radii);

/// Box-counting slope of the free boundary restricted to the half ball
/// |x| <= R/2: slope of log N(s) vs log(1/s) over the given box sizes (each
/// a multiple of h).
LogLogFit box_dimension(const std::vector<int64_t>& fb_nodes,
                        std::shared_ptr<const GridDomain> domain,
                        const std::vector<double>& scales);

}  // namespace obslab
