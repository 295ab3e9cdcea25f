#include "obslab/renorm/scaling.hpp"

#include <cmath>
#include <stdexcept>

#include "obslab/ops/stencil.hpp"

namespace obslab {

namespace {

/// Exact node lookup: the zoomed point must coincide with a stored node of
/// the source lattice.
double lookup(const GridField& u, const Vec& p) {
    const GridDomain& dom = u.domain();
    if (!dom.is_node(p))
        throw std::invalid_argument(
            "scaling is not grid-commensurable: zoomed node misses the source lattice");
    const int64_t lin = dom.nearest(p);
    if (!dom.is_stored(lin))
        throw std::invalid_argument("zoomed node falls outside the stored ball");
    return u[lin];
}

std::vector<int64_t> stored_nodes(const GridDomain& dom) {
    std::vector<int64_t> out = dom.interior_list();
    out.insert(out.end(), dom.ring_list().begin(), dom.ring_list().end());
    return out;
}

}  // namespace

ScaledProblem apply_scaling(const ScalingMap& map, const ProblemSpec& spec,
                            const GridField& u,
                            std::shared_ptr<const GridDomain> fine_domain) {
    if (map.kind != ScalingKind::Smallness)
        throw std::invalid_argument(
            "apply_scaling handles the smallness transform; use the dedicated "
            "dyadic/gradient-block entry points");
    if (!(map.tau > 0.0 && map.tau <= 1.0))
        throw std::invalid_argument("tau must lie in (0, 1]");
    if (map.tau * fine_domain->radius() + map.center.norm() >
        u.domain().radius() * (1.0 + 1e-12))
        throw std::invalid_argument("zoomed ball is not contained in the source ball");

    const double tau = map.tau;
    const Vec x0 = map.center;

    ScaledProblem out{spec, GridField(fine_domain)};
    out.spec.op = std::make_shared<EllipticOperator>(
        EllipticOperator::scaled(*spec.op, tau, x0));
    const ScalarFn f = spec.source;
    const ScalarFn phi = spec.obstacle;
    const double fscale = std::pow(tau, spec.gamma + 2.0);
    out.spec.source = [f, fscale, tau, x0](const Vec& x) {
        return fscale * f(x0 + tau * x);
    };
    out.spec.obstacle = [phi, tau, x0](const Vec& x) { return phi(x0 + tau * x); };
    const GridField usrc = u;
    out.spec.boundary = [usrc, tau, x0](const Vec& x) {
        return lookup(usrc, x0 + tau * x);
    };

    for (int64_t lin : stored_nodes(*fine_domain))
        out.field[lin] = lookup(u, x0 + tau * fine_domain->point(lin));
    return out;
}

GridField gradient_block_rescale(const GridField& u, const Vec& x0, double tau,
                                 double beta,
                                 std::shared_ptr<const GridDomain> fine_domain) {
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    const double denom = std::pow(tau, 1.0 + beta);
    const double u0 = lookup(u, x0);
    GridField out(fine_domain);
    for (int64_t lin : stored_nodes(*fine_domain))
        out[lin] = (lookup(u, x0 + tau * fine_domain->point(lin)) - u0) / denom;
    return out;
}

GridField gradient_block_rescale(const ScalarFn& u, const Vec& x0, double tau,
                                 double beta,
                                 std::shared_ptr<const GridDomain> fine_domain) {
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    const double denom = std::pow(tau, 1.0 + beta);
    const double u0 = u(x0);
    GridField out(fine_domain);
    for (int64_t lin : stored_nodes(*fine_domain))
        out[lin] = (u(x0 + tau * fine_domain->point(lin)) - u0) / denom;
    return out;
}

DyadicSequence dyadic_sequence(const GridField& u, double rho, double beta, int k_max,
                               const Vec& grad0) {
    if (!(rho > 0.0 && rho <= 0.5))
        throw std::invalid_argument("rho must lie in (0, 1/2]");
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    const GridDomain& src = u.domain();
    const double R = src.radius();
    if (std::pow(rho, k_max) * R < 4.0 * src.spacing())
        throw std::invalid_argument("k_max too deep: rho^k R falls below 4h");

    const double u0 = lookup(u, Vec(src.dim(), 0.0));
    const double g = grad0.norm();

    DyadicSequence seq;
    for (int k = 1; k <= k_max; ++k) {
        const double rk = std::pow(rho, k);
        double denom = std::pow(rho, k * (1.0 + beta));
        for (int j = 0; j < k; ++j) denom += g * std::pow(rho, k + j * beta);

        auto dom = std::make_shared<GridDomain>(
            build_domain(src.dim(), src.spacing() / rk, R));
        GridField vk(dom);
        for (int64_t lin : stored_nodes(*dom))
            vk[lin] = (lookup(u, rk * dom->point(lin)) - u0) / denom;
        seq.sup_norms.push_back(vk.sup_norm());
        seq.fields.push_back(std::move(vk));
    }
    return seq;
}

double dyadic_M(double rho, double beta) {
    if (!(rho > 0.0 && rho < 1.0 && beta > 0.0))
        throw std::invalid_argument("dyadic_M needs rho in (0,1) and beta > 0");
    return 1.0 / (std::pow(rho, 1.0 + beta) * (1.0 - std::pow(rho, beta)));
}

FlatnessMeasurement flatness_measure(const GridField& u, const GridField& phi,
                                     double iota) {
    const GridDomain& dom = u.domain();
    if (!phi.domain().same_layout(dom))
        throw std::invalid_argument("fields live on different lattices");
    const double half2 = 0.25 * dom.radius() * dom.radius();

    FlatnessMeasurement m;
    m.iota = iota;
    for (int64_t lin : dom.interior_list()) {
        if (dom.point(lin).norm2() > half2) continue;
        m.sup_gap = std::max(m.sup_gap, std::abs(u[lin] - phi[lin]));
        const Vec dg = discrete_gradient(u, lin) - discrete_gradient(phi, lin);
        m.sup_grad_gap = std::max(m.sup_grad_gap, dg.norm());
    }
    return m;
}

}  // namespace obslab
