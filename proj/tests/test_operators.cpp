#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "obslab/core/field.hpp"
#include "obslab/ops/elliptic.hpp"
#include "obslab/ops/matrix.hpp"
#include "obslab/ops/stencil.hpp"

using namespace obslab;

TEST_CASE("symmetric eigenvalues, closed form") {
    SymMat m(2);
    m.set(0, 0, 2.0);
    m.set(1, 1, 2.0);
    m.set(0, 1, 1.0);
    const auto ev = sym_eigenvalues(m);
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(3.0));
    CHECK(m.spectral_norm() == doctest::Approx(3.0));

    SymMat t(3);
    t.set(0, 0, 1.0);
    t.set(1, 1, 2.0);
    t.set(2, 2, 3.0);
    t.set(0, 1, 0.5);
    t.set(1, 2, -0.25);
    const auto e3 = sym_eigenvalues(t);
    CHECK(e3[0] <= e3[1]);
    CHECK(e3[1] <= e3[2]);
    CHECK(e3[0] + e3[1] + e3[2] == doctest::Approx(t.trace()));
    // characteristic polynomial vanishes at each root
    for (int k = 0; k < 3; ++k) {
        const double l = e3[k];
        const double det = (1.0 - l) * ((2.0 - l) * (3.0 - l) - 0.0625) -
                           0.5 * (0.5 * (3.0 - l));
        CHECK(det == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("pucci extremal operators on a diagonal matrix") {
    const SymMat x = SymMat::diag(2, 3.0, -2.0);
    CHECK(pucci_minus(x, 0.5, 2.0) == doctest::Approx(0.5 * 3.0 - 2.0 * 2.0));
    CHECK(pucci_plus(x, 0.5, 2.0) == doctest::Approx(2.0 * 3.0 - 0.5 * 2.0));
    // M-(X) <= M+(X), equality at lambda = Lambda
    CHECK(pucci_minus(x, 1.0, 1.0) == doctest::Approx(pucci_plus(x, 1.0, 1.0)));
}

TEST_CASE("operator families evaluate to their formulas") {
    const Vec x0(2, 0.3, -0.1);
    SymMat X = SymMat::diag(2, 1.0, -4.0);
    X.set(0, 1, 0.5);

    const EllipticOperator tr = EllipticOperator::trace();
    CHECK(tr.evaluate(x0, X) == doctest::Approx(X.trace()));
    CHECK(tr.lambda() == 1.0);
    CHECK(tr.Lambda() == 1.0);
    CHECK_FALSE(tr.x_dependent());

    const EllipticOperator trm = EllipticOperator::trace_modulated(0.1);
    CHECK(trm.evaluate(x0, X) == doctest::Approx((1.0 + 0.1 * 0.3) * X.trace()));
    CHECK(trm.x_dependent());
    CHECK(trm.coeff_modulus()(0.5) == doctest::Approx(0.5));

    const EllipticOperator pm = EllipticOperator::pucci_minus_op(0.5, 2.0);
    CHECK(pm.evaluate(x0, X) == doctest::Approx(pucci_minus(X, 0.5, 2.0)));

    SymMat a = SymMat::diag(2, 1.0, 0.5);
    SymMat b = SymMat::diag(2, 0.5, 1.0);
    const EllipticOperator bel = EllipticOperator::bellman({a, b});
    const double ta = a(0, 0) * X(0, 0) + a(1, 1) * X(1, 1);
    const double tb = b(0, 0) * X(0, 0) + b(1, 1) * X(1, 1);
    CHECK(bel.evaluate(x0, X) == doctest::Approx(std::min(ta, tb)));
    CHECK(bel.lambda() <= 0.5);
}

TEST_CASE("isaacs aperture gate") {
    SymMat wide = SymMat::diag(2, 0.5, 2.0);
    CHECK_THROWS_AS(EllipticOperator::isaacs({{wide}}), std::invalid_argument);
    SymMat narrow_a = SymMat::diag(2, 0.95, 1.0);
    SymMat narrow_b = SymMat::diag(2, 1.0, 0.96);
    const EllipticOperator is = EllipticOperator::isaacs({{narrow_a}, {narrow_b}});
    const Vec x0(2, 0.0, 0.0);
    const SymMat X = SymMat::diag(2, 1.0, 1.0);
    // sup of infs over singleton groups = max of the two traces
    CHECK(is.evaluate(x0, X) == doctest::Approx(1.96));
}

TEST_CASE("normalized p-laplacian formula") {
    const EllipticOperator pl = EllipticOperator::p_laplacian(3.0);
    CHECK(pl.needs_gradient());
    const Vec x0(2, 0.0, 0.0);
    const Vec g(2, 1.0, 0.0);
    SymMat X = SymMat::diag(2, 2.0, 5.0);
    // Lap u + (p-2) <D^2 u e, e> with e = g/|g|
    CHECK(pl.evaluate(x0, X, &g) == doctest::Approx(7.0 + 1.0 * 2.0));
    CHECK_THROWS_AS(pl.evaluate(x0, X, nullptr), std::invalid_argument);
}

TEST_CASE("m-momentum vanishes at its anchor spectrum") {
    const EllipticOperator mm = EllipticOperator::m_momentum(3, {1.0, 1.0});
    const Vec x0(2, 0.0, 0.0);
    // e = 0: sum (1 + 0)^{1/3} - sum 1 = 0
    CHECK(mm.evaluate(x0, SymMat(2)) == doctest::Approx(0.0));
    // diagonal perturbation: sum_j (1 + e_j^3)^{1/3} - 2
    const SymMat X = SymMat::diag(2, 0.5, -0.25);
    const double want = std::cbrt(1.0 + 0.125) + std::cbrt(1.0 - 0.015625) - 2.0;
    CHECK(mm.evaluate(x0, X) == doctest::Approx(want));
    CHECK(mm.band_lo() == doctest::Approx(0.25));
    CHECK(mm.band_hi() == doctest::Approx(2.0));
}

TEST_CASE("perturbed special lagrangian formula") {
    const EllipticOperator sl = EllipticOperator::special_lagrangian({1.0, 2.0});
    const Vec x0(2, 0.0, 0.0);
    const SymMat X = SymMat::diag(2, 0.5, -1.0);
    // weights pair with the eigenvalues in ascending order: (-1, 0.5)
    const double want =
        1.0 * (-1.0) + std::atan(-1.0) + 2.0 * 0.5 + std::atan(0.5);
    CHECK(sl.evaluate(x0, X) == doctest::Approx(want));
}

TEST_CASE("degenerate wrapper and homogeneity") {
    const EllipticOperator tr = EllipticOperator::trace();
    const Vec x0(2, 0.0, 0.0);
    const Vec g(2, 3.0, 4.0);  // |g| = 5
    const SymMat X = SymMat::diag(2, 1.0, 1.0);
    CHECK(degenerate_wrapper(tr, x0, g, X, 1.0, 0.0) == doctest::Approx(10.0));
    CHECK(degenerate_wrapper(tr, x0, g, X, 0.0, 0.0) == doctest::Approx(2.0));
    // grad_floor regularizes: factor (25 + 0.01)^{1/2}
    CHECK(degenerate_wrapper(tr, x0, g, X, 1.0, 0.1) ==
          doctest::Approx(std::sqrt(25.01) * 2.0));
}

TEST_CASE("recession of a 1-homogeneous operator is itself") {
    const EllipticOperator pm = EllipticOperator::pucci_minus_op(0.5, 2.0);
    const Vec x0(2, 0.0, 0.0);
    SymMat X = SymMat::diag(2, 2.0, -1.0);
    const RecessionLimit lim = recession_limit(pm, x0, X);
    CHECK(lim.converged);
    CHECK(lim.value == doctest::Approx(pm.evaluate(x0, X)).epsilon(1e-6));

    const EllipticOperator rec =
        EllipticOperator::recession_of(EllipticOperator::special_lagrangian({1.0, 1.0}));
    // recession of sum h_j e_j + arctan e_j is sum h_j e_j (arctan flattens)
    CHECK(rec.evaluate(x0, X) == doctest::Approx(X.trace()).epsilon(1e-3));
}

TEST_CASE("scaled operator identity for the trace") {
    const EllipticOperator sc =
        EllipticOperator::scaled(EllipticOperator::trace(), 0.5, Vec(2, 0.1, 0.2));
    const Vec x0(2, 0.0, 0.0);
    const SymMat X = SymMat::diag(2, 3.0, -1.0);
    // tau^2 Tr(X / tau^2) = Tr(X)
    CHECK(sc.evaluate(x0, X) == doctest::Approx(X.trace()));
}

TEST_CASE("discrete derivatives are exact on quadratics") {
    auto dom = std::make_shared<GridDomain>(build_domain(2, 0.125, 1.0));
    GridField u = sample(
        [](const Vec& x) {
            return 1.0 + 2.0 * x[0] - x[1] + 3.0 * x[0] * x[0] + x[0] * x[1] -
                   0.5 * x[1] * x[1];
        },
        dom);
    const int64_t node = dom->nearest(Vec(2, 0.25, -0.25));
    const Vec x = dom->point(node);
    const Vec g = discrete_gradient(u, node);
    CHECK(g[0] == doctest::Approx(2.0 + 6.0 * x[0] + x[1]));
    CHECK(g[1] == doctest::Approx(-1.0 + x[0] - x[1]));
    const HessianSample hs = discrete_hessian(u, node);
    CHECK(hs.hess(0, 0) == doctest::Approx(6.0));
    CHECK(hs.hess(1, 1) == doctest::Approx(-1.0));
    CHECK(hs.hess(0, 1) == doctest::Approx(1.0));
    CHECK(hs.eigenvalues[0] <= hs.eigenvalues[1]);
}
