#pragma once

#include <memory>
#include <string>
#include <vector>

#include "obslab/core/problem.hpp"

namespace obslab {

/// Smoothed indicator ramp: phi_eps(s) = Phi(s / epsilon) with the quintic
/// smoothstep Phi(t) = 6t^5 - 15t^4 + 10t^3 on [0, 1], clamped outside.
/// `sign` is the +-epsilon shift of the right-hand side, +1 when the source
/// is uniformly positive and -1 when uniformly negative.
struct PenaltyProfile {
    double epsilon{0.05};
    int sign{+1};

    static double shape(double t);
    double shift() const { return sign * epsilon; }
};

/// Phi(s / profile.epsilon) in [0, 1]; 0 iff s <= 0, 1 for s >= epsilon.
double phi_eps(const PenaltyProfile& profile, double s);

enum class SolverBackend { Penalized, Projection };

struct SolverConfig {
    std::vector<double> epsilon_schedule{0.1, 0.05, 0.025};
    /// Gradient regularization inside the degeneracy factor; negative means
    /// "use the grid spacing".
    double grad_floor{-1.0};
    /// Pseudo-time step is dt_safety * h^2 / (n Lambda (factor + 1)); the
    /// explicit march is stable for dt_safety <= Lambda (factor+1)/(2 factor),
    /// so anything <= 0.5 is safe for every factor.
    double dt_safety{0.45};
    double tol_inner{1e-5};
    double tol_outer{1e-5};
    int64_t max_inner{2000000};
    int max_outer{60};
    SolverBackend backend{SolverBackend::Penalized};

    double grad_floor_for(double h) const { return grad_floor < 0.0 ? h : grad_floor; }
    void validate() const;
};

struct SolverReport {
    GridField solution;
    std::vector<double> residual_history;  // final inner residual per outer step
    std::vector<double> outer_gaps;
    double epsilon_used{0.0};
    bool converged{false};
    int64_t wall_iterations{0};
    std::string kernel_isa;
};

struct InnerReport {
    double final_residual{0.0};
    int64_t iterations{0};
    bool converged{false};
    std::string kernel_isa;
};

/// One stage of the penalization scheme: marches v to a residual below
/// tol_inner for wrapper(Dv, D^2 v) = f phi_eps(frozen - phi) + sign*eps,
/// holding the boundary ring fixed. `start` defaults to `frozen`.
GridField inner_solve(const ProblemSpec& spec, std::shared_ptr<const GridDomain> domain,
                      const GridField& frozen, const PenaltyProfile& profile,
                      const SolverConfig& config, InnerReport* report = nullptr,
                      const GridField* start = nullptr);

/// Picks the +-epsilon sign from the source samples; throws when the source
/// changes sign (the penalized backend requires inf f > 0 or sup f < 0).
PenaltyProfile make_profile(const ProblemSpec& spec, const GridDomain& domain,
                            double epsilon);

/// Schauder-style fixed point over the frozen penalty argument, continued
/// down config.epsilon_schedule with warm starts. `initial` seeds the first
/// iterate (boundary ring is always re-imposed from spec.boundary).
SolverReport outer_fixed_point(const ProblemSpec& spec,
                               std::shared_ptr<const GridDomain> domain,
                               const PenaltyProfile& profile, const SolverConfig& config,
                               const GridField* initial = nullptr);

/// Complementarity backend: unconstrained march toward wrapper = f with a
/// clamp u <- max(u, phi) after every sweep. Works for sign-changing sources.
SolverReport projection_solve(const ProblemSpec& spec,
                              std::shared_ptr<const GridDomain> domain,
                              const SolverConfig& config,
                              const GridField* initial = nullptr);

/// Backend dispatch; builds the profile internally for the penalized path.
SolverReport solve(const ProblemSpec& spec, std::shared_ptr<const GridDomain> domain,
                   const SolverConfig& config, const GridField* initial = nullptr);

/// Multilinear interpolation of a coarse solution onto a finer lattice of the
/// same ball, used to warm-start refined solves.
GridField prolong(const GridField& coarse, std::shared_ptr<const GridDomain> fine);

/// Solves on a geometric cascade of grids h * 2^{levels-1}, ..., 2h, h, each
/// level warm-starting the next; returns the finest-level report.
SolverReport solve_cascade(const ProblemSpec& spec, int dim, double spacing,
                           double radius, const SolverConfig& config, int levels);

/// Nodewise wrapper(Du, D^2 u) - rhs with the hard indicator
/// rhs = f * [u > phi + max(tol_inner, h^2)] when `profile` is null, or the
/// penalized right-hand side when it is set. Ring values are zero.
GridField residual_field(const ProblemSpec& spec, std::shared_ptr<const GridDomain> domain,
                         const GridField& u, const SolverConfig& config,
                         const PenaltyProfile* profile = nullptr);

}  // namespace obslab
