#include "obslab/oracle/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "obslab/ops/stencil.hpp"

namespace obslab {

double beta_of(double gamma, double alpha) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1]");
    return std::min(alpha, 1.0 / (1.0 + gamma));
}

namespace {
void check(const RadialSharpness& o) {
    if (!(o.gamma > 0.0)) throw std::invalid_argument("radial oracle needs gamma > 0");
    if (!(o.r_contact > 0.0 && o.r_contact < 1.0))
        throw std::invalid_argument("contact radius must lie in (0, 1)");
    if (o.dim < 1 || o.dim > 3) throw std::invalid_argument("dim must be 1, 2, or 3");
}
}  // namespace

double RadialSharpness::exponent() const { return (gamma + 2.0) / (gamma + 1.0); }

double RadialSharpness::value(const Vec& x) const {
    check(*this);
    const double s = x.norm() - r_contact;
    return s <= 0.0 ? 0.0 : std::pow(s, exponent());
}

Vec RadialSharpness::gradient(const Vec& x) const {
    check(*this);
    Vec g;
    g.n = dim;
    const double rho = x.norm();
    const double s = rho - r_contact;
    if (s <= 0.0) return g;
    const double mag = exponent() * std::pow(s, exponent() - 1.0);
    for (int k = 0; k < dim; ++k) g[k] = mag * x[k] / rho;
    return g;
}

double RadialSharpness::source(const Vec& x) const {
    check(*this);
    const double a = exponent();
    const double lead = std::pow(a, gamma + 1.0);
    const double rho = x.norm();
    if (rho <= r_contact) return lead / (1.0 + gamma);
    return lead * (1.0 / (1.0 + gamma) + (dim - 1) * (1.0 - r_contact / rho));
}

double RadialSharpness::boundary_value() const {
    check(*this);
    return std::pow(1.0 - r_contact, exponent());
}

ProblemSpec RadialSharpness::problem() const {
    check(*this);
    const RadialSharpness self = *this;
    ProblemSpec spec;
    spec.gamma = gamma;
    spec.op = std::make_shared<EllipticOperator>(EllipticOperator::trace());
    spec.obstacle = [](const Vec&) { return 0.0; };
    spec.source = [self](const Vec& x) { return self.source(x); };
    spec.boundary = [self](const Vec& x) { return self.value(x); };
    spec.alpha = 1.0;
    return spec;
}

double verify_radial_is_solution(const RadialSharpness& oracle,
                                 std::shared_ptr<const GridDomain> domain,
                                 double grad_floor, double collar) {
    check(oracle);
    const GridDomain& dom = *domain;
    if (!(collar >= 2.0 * dom.spacing()))
        throw std::invalid_argument("collar must be at least 2h");

    const GridField v =
        sample([&oracle](const Vec& x) { return oracle.value(x); }, domain);
    const EllipticOperator trace = EllipticOperator::trace();
    double sup = 0.0;
    for (int64_t lin : dom.interior_list()) {
        const Vec x = dom.point(lin);
        if (std::abs(x.norm() - oracle.r_contact) <= collar) continue;
        const HessianSample hs = discrete_hessian(v, lin);
        const double w =
            degenerate_wrapper(trace, x, hs.grad, hs.hess, oracle.gamma, grad_floor);
        // the equation carries the indicator: rhs vanishes on the contact ball
        const double rhs = x.norm() > oracle.r_contact ? oracle.source(x) : 0.0;
        sup = std::max(sup, std::abs(w - rhs));
    }
    return sup;
}

double ComparisonXi::coefficient() const {
    if (!(m_inf > 0.0)) throw std::invalid_argument("comparison needs inf f > 0");
    if (!(lambda_cap > 0.0)) throw std::invalid_argument("Lambda must be positive");
    const double g1 = gamma + 1.0;
    const double num = m_inf * std::pow(g1, gamma + 2.0);
    const double den = dim * g1 * lambda_cap * std::pow(gamma + 2.0, g1);
    return std::pow(num / den, 1.0 / g1);
}

double ComparisonXi::value(const Vec& x) const {
    const double e = (gamma + 2.0) / (gamma + 1.0);
    return base_value + coefficient() * std::pow((x - center).norm(), e);
}

}  // namespace obslab
