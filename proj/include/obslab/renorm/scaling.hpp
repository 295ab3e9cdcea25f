#pragma once

#include <memory>
#include <vector>

#include "obslab/core/problem.hpp"

namespace obslab {

enum class ScalingKind { Smallness, Dyadic, GradientBlock };

/// Zoom u |-> u(x0 + tau x) with the matching transforms of the operator,
/// source, and obstacle. Restricted to grid-commensurable tau so every scaled
/// node lands exactly on a node of the source lattice; the module verifies
/// identities and interpolation would contaminate them.
struct ScalingMap {
    double tau{1.0};
    Vec center{};
    ScalingKind kind{ScalingKind::Smallness};
};

struct ScaledProblem {
    ProblemSpec spec;
    GridField field;
};

/// Smallness-regime transform: field u(x0 + tau x), operator
/// tau^2 F(x0 + tau x, X / tau^2), source tau^{gamma+2} f(x0 + tau x),
/// obstacle and boundary composed with the zoom. Throws when a node of
/// `fine_domain`, mapped through the zoom, misses the source lattice.
ScaledProblem apply_scaling(const ScalingMap& map, const ProblemSpec& spec,
                            const GridField& u,
                            std::shared_ptr<const GridDomain> fine_domain);

/// (u(x0 + tau x) - u(x0)) / tau^{1+beta} on `fine_domain`. With
/// tau = |Du(x0)|^{1/beta} the rescaled function has a unit gradient at the
/// origin, the normalization of the large-gradient case of the regularity
/// proof.
GridField gradient_block_rescale(const GridField& u, const Vec& x0, double tau,
                                 double beta,
                                 std::shared_ptr<const GridDomain> fine_domain);

/// Same transform sampled from a closed-form function, for maps whose tau
/// (e.g. |Du(x0)|^{1/beta}) is not grid-commensurable.
GridField gradient_block_rescale(const ScalarFn& u, const Vec& x0, double tau,
                                 double beta,
                                 std::shared_ptr<const GridDomain> fine_domain);

/// v_k(x) = (u(rho^k x) - u(0)) / (rho^{k(1+beta)}
///           + |grad0| sum_{j<k} rho^{k+j beta}), k = 1..k_max, each on a
/// unit-ball lattice with spacing h / rho^k. Bounded sup-norms are the
/// discrete shadow of C^{1,beta} regularity at the origin; for beta above the
/// sharp exponent they blow up on the radial witness.
struct DyadicSequence {
    std::vector<GridField> fields;
    std::vector<double> sup_norms;
};

DyadicSequence dyadic_sequence(const GridField& u, double rho, double beta, int k_max,
                               const Vec& grad0);

/// 1 / (rho^{1+beta} (1 - rho^beta)), the constant absorbing the dyadic sums
/// into a single power bound.
double dyadic_M(double rho, double beta);

struct FlatnessMeasurement {
    double sup_gap{0.0};
    double sup_grad_gap{0.0};
    double iota{0.0};

    bool flat() const { return sup_gap <= iota && sup_grad_gap <= iota; }
};

/// max |u - phi| and max |D(u - phi)| over nodes with |x| <= R/2.
FlatnessMeasurement flatness_measure(const GridField& u, const GridField& phi,
                                     double iota);

}  // namespace obslab
