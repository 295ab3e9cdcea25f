#include "obslab/ops/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace obslab {

namespace {

// Characteristic polynomial coefficients: det(A - t I) = -t^3 + c2 t^2 + c1 t + c0 (n = 3).
struct CharPoly3 {
    double c2, c1, c0;
    explicit CharPoly3(const SymMat& m) {
        const double a = m(0, 0), b = m(1, 1), c = m(2, 2);
        const double d = m(0, 1), e = m(0, 2), f = m(1, 2);
        c2 = a + b + c;
        c1 = -(a * b + a * c + b * c - d * d - e * e - f * f);
        c0 = a * b * c + 2.0 * d * e * f - a * f * f - b * e * e - c * d * d;
    }
    double value(double t) const { return ((-t + c2) * t + c1) * t + c0; }
    double deriv(double t) const { return (-3.0 * t + 2.0 * c2) * t + c1; }
};

}  // namespace

std::array<double, 3> sym_eigenvalues(const SymMat& m) {
    std::array<double, 3> e{0.0, 0.0, 0.0};
    switch (m.n) {
        case 1:
            e[0] = m(0, 0);
            return e;
        case 2: {
            const double a = m(0, 0), d = m(1, 1), b = m(0, 1);
            const double t = 0.5 * (a + d);
            const double s = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
            e[0] = t - s;
            e[1] = t + s;
            return e;
        }
        case 3: {
            const double p1 = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
            const double q = m.trace() / 3.0;
            const double scale = std::max({std::abs(m(0, 0)), std::abs(m(1, 1)),
                                           std::abs(m(2, 2)), std::sqrt(p1)});
            if (p1 <= 1e-30 * std::max(1.0, scale * scale)) {
                e = {m(0, 0), m(1, 1), m(2, 2)};
                std::sort(e.begin(), e.end());
                return e;
            }
            double p2 = 2.0 * p1;
            for (int i = 0; i < 3; ++i) {
                const double d = m(i, i) - q;
                p2 += d * d;
            }
            const double p = std::sqrt(p2 / 6.0);
            SymMat b = (1.0 / p) * m;
            for (int i = 0; i < 3; ++i) b.set(i, i, (m(i, i) - q) / p);
            const double detb =
                b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(1, 2)) -
                b(0, 1) * (b(0, 1) * b(2, 2) - b(1, 2) * b(0, 2)) +
                b(0, 2) * (b(0, 1) * b(1, 2) - b(1, 1) * b(0, 2));
            const double r = std::clamp(0.5 * detb, -1.0, 1.0);
            const double phi = std::acos(r) / 3.0;
            const double two_pi_3 = 2.0943951023931953;
            e[2] = q + 2.0 * p * std::cos(phi);
            e[0] = q + 2.0 * p * std::cos(phi + two_pi_3);
            e[1] = 3.0 * q - e[0] - e[2];

            // Newton polish keeps the characteristic-polynomial residual at
            // rounding level even for clustered spectra.
            const CharPoly3 cp(m);
            for (double& ev : e) {
                for (int it = 0; it < 2; ++it) {
                    const double dp = cp.deriv(ev);
                    if (std::abs(dp) < 1e-14 * std::max(1.0, scale * scale)) break;
                    ev -= cp.value(ev) / dp;
                }
            }
            std::sort(e.begin(), e.end());
            return e;
        }
        default:
            throw std::invalid_argument("sym_eigenvalues: dim must be 1..3");
    }
}

double SymMat::spectral_norm() const {
    const auto e = sym_eigenvalues(*this);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s = std::max(s, std::abs(e[static_cast<size_t>(i)]));
    return s;
}

double pucci_minus(const SymMat& x, double lambda, double Lambda) {
    if (!(lambda > 0.0) || Lambda < lambda)
        throw std::invalid_argument("pucci: need 0 < lambda <= Lambda");
    const auto e = sym_eigenvalues(x);
    double s = 0.0;
    for (int i = 0; i < x.n; ++i) {
        const double ev = e[static_cast<size_t>(i)];
        s += (ev > 0.0) ? lambda * ev : Lambda * ev;
    }
    return s;
}

double pucci_plus(const SymMat& x, double lambda, double Lambda) {
    if (!(lambda > 0.0) || Lambda < lambda)
        throw std::invalid_argument("pucci: need 0 < lambda <= Lambda");
    const auto e = sym_eigenvalues(x);
    double s = 0.0;
    for (int i = 0; i < x.n; ++i) {
        const double ev = e[static_cast<size_t>(i)];
        s += (ev > 0.0) ? Lambda * ev : lambda * ev;
    }
    return s;
}

}  // namespace obslab
