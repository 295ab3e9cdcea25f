#include "obslab/ops/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace obslab {

const char* operator_kind_name(OperatorKind k) {
    switch (k) {
        case OperatorKind::Trace: return "trace";
        case OperatorKind::TraceModulated: return "trace_modulated";
        case OperatorKind::PucciMinus: return "pucci_minus";
        case OperatorKind::PucciPlus: return "pucci_plus";
        case OperatorKind::Bellman: return "bellman";
        case OperatorKind::Isaacs: return "isaacs";
        case OperatorKind::PLaplacianNormalized: return "p_laplacian_normalized";
        case OperatorKind::MMomentum: return "m_momentum";
        case OperatorKind::SpecialLagrangianPerturbed: return "special_lagrangian_perturbed";
        case OperatorKind::Recession: return "recession";
        case OperatorKind::Scaled: return "scaled";
    }
    return "?";
}

EllipticOperator EllipticOperator::trace() {
    EllipticOperator op;
    op.kind_ = OperatorKind::Trace;
    op.lambda_ = op.Lambda_ = 1.0;
    return op;
}

EllipticOperator EllipticOperator::trace_modulated(double c) {
    if (std::abs(c) >= 0.4)
        throw std::invalid_argument("trace_modulated: |c| must be < 0.4 to stay elliptic");
    EllipticOperator op;
    op.kind_ = OperatorKind::TraceModulated;
    op.mod_c_ = c;
    // coefficient 1 + c x_1 over |x_1| <= 2 (ball of radius 1 plus ring slack)
    op.lambda_ = 1.0 - 2.0 * std::abs(c);
    op.Lambda_ = 1.0 + 2.0 * std::abs(c);
    op.modulus_ = {3.0 * std::abs(c), CoeffModulus::Omega::Linear};
    return op;
}

EllipticOperator EllipticOperator::pucci_minus_op(double lambda, double Lambda) {
    if (!(lambda > 0.0) || Lambda < lambda)
        throw std::invalid_argument("pucci: need 0 < lambda <= Lambda");
    EllipticOperator op;
    op.kind_ = OperatorKind::PucciMinus;
    op.lambda_ = lambda;
    op.Lambda_ = Lambda;
    return op;
}

EllipticOperator EllipticOperator::pucci_plus_op(double lambda, double Lambda) {
    EllipticOperator op = pucci_minus_op(lambda, Lambda);
    op.kind_ = OperatorKind::PucciPlus;
    return op;
}

namespace {

void spectrum_range(const std::vector<SymMat>& tables, double& lo, double& hi) {
    for (const SymMat& a : tables) {
        const auto e = sym_eigenvalues(a);
        lo = std::min(lo, e[0]);
        hi = std::max(hi, e[static_cast<size_t>(a.n - 1)]);
    }
}

double trace_form(const SymMat& a, const SymMat& x) {
    double s = 0.0;
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) s += a(i, j) * x(i, j);
    return s;
}

}  // namespace

EllipticOperator EllipticOperator::bellman(std::vector<SymMat> tables) {
    if (tables.empty()) throw std::invalid_argument("bellman: empty coefficient table");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    spectrum_range(tables, lo, hi);
    if (!(lo > 0.0)) throw std::invalid_argument("bellman: coefficient spectra must be positive");
    EllipticOperator op;
    op.kind_ = OperatorKind::Bellman;
    op.lambda_ = lo;
    op.Lambda_ = hi;
    op.tables_ = std::move(tables);
    return op;
}

EllipticOperator EllipticOperator::isaacs(std::vector<std::vector<SymMat>> groups) {
    if (groups.empty()) throw std::invalid_argument("isaacs: empty group list");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("isaacs: empty inner table");
        spectrum_range(g, lo, hi);
    }
    if (!(lo > 0.0)) throw std::invalid_argument("isaacs: coefficient spectra must be positive");
    if (1.0 - lo / hi > 0.1)
        throw std::invalid_argument(
            "isaacs: ellipticity aperture 1 - lambda/Lambda exceeds 0.1");
    EllipticOperator op;
    op.kind_ = OperatorKind::Isaacs;
    op.lambda_ = lo;
    op.Lambda_ = hi;
    op.groups_ = std::move(groups);
    return op;
}

EllipticOperator EllipticOperator::p_laplacian(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("p_laplacian: need p > 1");
    EllipticOperator op;
    op.kind_ = OperatorKind::PLaplacianNormalized;
    op.p_ = p;
    op.lambda_ = std::min(p - 1.0, 1.0);
    op.Lambda_ = std::max(p - 1.0, 1.0);
    return op;
}

namespace {

// Eigenvalue slope of e -> (sigma^m + e^m)^(1/m).
double momentum_slope(double sigma, int m, double e) {
    const double base = std::pow(sigma, m) + std::pow(e, m);
    return std::pow(e, m - 1) * std::pow(base, (1.0 - m) / static_cast<double>(m));
}

}  // namespace

EllipticOperator EllipticOperator::m_momentum(int m, std::vector<double> sigma,
                                              double band_lo, double band_hi) {
    if (m < 1 || m % 2 == 0) throw std::invalid_argument("m_momentum: m must be odd");
    if (sigma.empty()) throw std::invalid_argument("m_momentum: empty sigma list");
    for (double s : sigma)
        if (!(s > 0.0)) throw std::invalid_argument("m_momentum: sigma_j must be positive");
    if (!(band_lo < band_hi)) throw std::invalid_argument("m_momentum: bad trust band");

    EllipticOperator op;
    op.kind_ = OperatorKind::MMomentum;
    op.m_ = m;
    op.sigma_ = std::move(sigma);
    op.band_lo_ = band_lo;
    op.band_hi_ = band_hi;

    // Slope bounds over the trust band by dense sampling (monotonicity of the
    // slope is not relied on).
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const int samples = 2048;
    for (double s : op.sigma_) {
        if (m > 1 && band_lo <= -0.9 * s)
            throw std::invalid_argument("m_momentum: trust band too close to -sigma");
        for (int i = 0; i <= samples; ++i) {
            const double e = band_lo + (band_hi - band_lo) * i / samples;
            const double sl = (m == 1) ? 1.0 : momentum_slope(s, m, e);
            lo = std::min(lo, sl);
            hi = std::max(hi, sl);
        }
    }
    if (!(lo > 0.0))
        throw std::invalid_argument("m_momentum: slope degenerates inside the trust band");
    op.lambda_ = lo;
    op.Lambda_ = hi;
    return op;
}

EllipticOperator EllipticOperator::special_lagrangian(std::vector<double> h_values,
                                                      double band_half_width) {
    if (h_values.empty()) throw std::invalid_argument("special_lagrangian: empty h list");
    const double E = band_half_width;
    double hmin = *std::min_element(h_values.begin(), h_values.end());
    double hmax = *std::max_element(h_values.begin(), h_values.end());
    const double lo = hmin + 1.0 / (1.0 + E * E);
    if (!(lo > 0.0))
        throw std::invalid_argument("special_lagrangian: not elliptic on the trust band");
    EllipticOperator op;
    op.kind_ = OperatorKind::SpecialLagrangianPerturbed;
    op.h_values_ = std::move(h_values);
    op.band_lo_ = -E;
    op.band_hi_ = E;
    op.lambda_ = lo;
    op.Lambda_ = hmax + 1.0;
    return op;
}

EllipticOperator EllipticOperator::recession_of(EllipticOperator inner) {
    EllipticOperator op;
    op.kind_ = OperatorKind::Recession;
    op.lambda_ = inner.lambda_;
    op.Lambda_ = inner.Lambda_;
    op.band_lo_ = inner.band_lo_;
    op.band_hi_ = inner.band_hi_;
    op.inner_ = std::make_shared<const EllipticOperator>(std::move(inner));
    return op;
}

EllipticOperator EllipticOperator::scaled(EllipticOperator inner, double tau, Vec center) {
    if (!(tau > 0.0) || tau > 1.0) throw std::invalid_argument("scaled: need tau in (0, 1]");
    EllipticOperator op;
    op.kind_ = OperatorKind::Scaled;
    op.lambda_ = inner.lambda_;
    op.Lambda_ = inner.Lambda_;
    op.band_lo_ = inner.band_lo_;
    op.band_hi_ = inner.band_hi_;
    op.modulus_ = {inner.modulus_.C_F * tau, inner.modulus_.omega};
    op.tau_ = tau;
    op.center_ = center;
    op.inner_ = std::make_shared<const EllipticOperator>(std::move(inner));
    return op;
}

bool EllipticOperator::x_dependent() const {
    if (kind_ == OperatorKind::TraceModulated) return true;
    if (inner_) return inner_->x_dependent();
    return false;
}

double EllipticOperator::evaluate(const Vec& x, const SymMat& X, const Vec* grad) const {
    switch (kind_) {
        case OperatorKind::Trace:
            return X.trace();
        case OperatorKind::TraceModulated:
            return (1.0 + mod_c_ * x[0]) * X.trace();
        case OperatorKind::PucciMinus:
            return pucci_minus(X, lambda_, Lambda_);
        case OperatorKind::PucciPlus:
            return pucci_plus(X, lambda_, Lambda_);
        case OperatorKind::Bellman: {
            double best = std::numeric_limits<double>::infinity();
            for (const SymMat& a : tables_) best = std::min(best, trace_form(a, X));
            return best;
        }
        case OperatorKind::Isaacs: {
            double outer = -std::numeric_limits<double>::infinity();
            for (const auto& g : groups_) {
                double inner = std::numeric_limits<double>::infinity();
                for (const SymMat& a : g) inner = std::min(inner, trace_form(a, X));
                outer = std::max(outer, inner);
            }
            return outer;
        }
        case OperatorKind::PLaplacianNormalized: {
            if (grad == nullptr || grad->norm2() == 0.0)
                throw std::invalid_argument(
                    "p_laplacian: nonzero gradient required (route zero-gradient "
                    "evaluations through the degenerate wrapper's regularization)");
            const double inv_g2 = 1.0 / grad->norm2();
            double s = X.trace();
            double quad = 0.0;
            for (int i = 0; i < X.n; ++i)
                for (int j = 0; j < X.n; ++j) quad += (*grad)[i] * X(i, j) * (*grad)[j];
            return s + (p_ - 2.0) * quad * inv_g2;
        }
        case OperatorKind::MMomentum: {
            const auto e = sym_eigenvalues(X);
            double s = 0.0;
            for (int j = 0; j < X.n; ++j) {
                const double sig = sigma_[static_cast<size_t>(j) % sigma_.size()];
                const double base = std::pow(sig, m_) + std::pow(e[static_cast<size_t>(j)], m_);
                s += (base >= 0.0) ? std::pow(base, 1.0 / m_) : -std::pow(-base, 1.0 / m_);
                s -= sig;
            }
            return s;
        }
        case OperatorKind::SpecialLagrangianPerturbed: {
            const auto e = sym_eigenvalues(X);
            double s = 0.0;
            for (int j = 0; j < X.n; ++j) {
                const double ev = e[static_cast<size_t>(j)];
                s += h_values_[static_cast<size_t>(j) % h_values_.size()] * ev + std::atan(ev);
            }
            return s;
        }
        case OperatorKind::Recession:
            return recession_limit(*inner_, x, X).value;
        case OperatorKind::Scaled: {
            Vec y = center_ + tau_ * x;
            return tau_ * tau_ * inner_->evaluate(y, (1.0 / (tau_ * tau_)) * X, grad);
        }
    }
    throw std::logic_error("EllipticOperator::evaluate: unreachable");
}

double degenerate_wrapper(const EllipticOperator& op, const Vec& x, const Vec& grad,
                          const SymMat& X, double gamma, double grad_floor) {
    if (gamma < 0.0) throw std::invalid_argument("degenerate_wrapper: gamma must be >= 0");
    if (grad_floor < 0.0) throw std::invalid_argument("degenerate_wrapper: grad_floor must be >= 0");
    const double g2 = grad.norm2() + grad_floor * grad_floor;
    const double factor = (gamma == 0.0) ? 1.0 : std::pow(g2, 0.5 * gamma);
    if (factor == 0.0) return 0.0;  // |0|^gamma F = 0 even if F is not evaluable
    return factor * op.evaluate(x, X, &grad);
}

double recession(const EllipticOperator& op, double tau, const Vec& x, const SymMat& X) {
    if (!(tau > 0.0)) throw std::invalid_argument("recession: tau must be positive");
    return tau * op.evaluate(x, (1.0 / tau) * X);
}

RecessionLimit recession_limit(const EllipticOperator& op, const Vec& x, const SymMat& X,
                               double tol) {
    const double g1 = recession(op, 1e-2, x, X);
    const double g2 = recession(op, 1e-3, x, X);
    const double g3 = recession(op, 1e-4, x, X);
    // Richardson step assuming a leading O(tau) error, sample ratio 10.
    const double r12 = (10.0 * g2 - g1) / 9.0;
    const double r23 = (10.0 * g3 - g2) / 9.0;
    RecessionLimit out;
    out.value = r23;
    out.spread = std::abs(r23 - r12);
    out.converged = out.spread <= tol * (1.0 + std::abs(out.value));
    if (!out.converged)
        throw std::runtime_error("recession_limit: extrapolation did not settle");
    return out;
}

}  // namespace obslab
