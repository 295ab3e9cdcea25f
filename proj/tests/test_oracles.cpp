#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "obslab/oracle/radial.hpp"

using namespace obslab;

TEST_CASE("beta is the minimum of the two exponents") {
    CHECK(beta_of(1.0, 1.0) == doctest::Approx(0.5));
    CHECK(beta_of(1.0, 0.3) == doctest::Approx(0.3));
    CHECK(beta_of(0.0, 1.0) == doctest::Approx(1.0));
    CHECK(beta_of(3.0, 0.9) == doctest::Approx(0.25));
}

TEST_CASE("radial witness: value, gradient, boundary") {
    RadialSharpness o{1.0, 0.5, 2};
    CHECK(o.exponent() == doctest::Approx(1.5));

    // inside the contact ball the function vanishes flat
    CHECK(o.value(Vec(2, 0.2, 0.1)) == 0.0);
    CHECK(o.gradient(Vec(2, 0.2, 0.1)).norm() == 0.0);

    // outside: v = (|x| - r)^{3/2}, radial gradient 1.5 (|x| - r)^{1/2}
    const Vec x(2, 0.8, 0.0);
    CHECK(o.value(x) == doctest::Approx(std::pow(0.3, 1.5)));
    const Vec g = o.gradient(x);
    CHECK(g[0] == doctest::Approx(1.5 * std::sqrt(0.3)));
    CHECK(g[1] == doctest::Approx(0.0));

    CHECK(o.boundary_value() == doctest::Approx(std::pow(0.5, 1.5)));

    // rotational symmetry
    const Vec y(2, 0.8 / std::sqrt(2.0), 0.8 / std::sqrt(2.0));
    CHECK(o.value(y) == doctest::Approx(o.value(x)));
}

TEST_CASE("radial source matches the equation symbolically") {
    // |Dv|^g (v'' + (n-1) v'/rho) must equal source(); check by direct
    // differentiation at a few radii for gamma in {0.5, 1, 2} and n in {1,2,3}
    for (double gamma : {0.5, 1.0, 2.0}) {
        for (int n : {1, 2, 3}) {
            RadialSharpness o{gamma, 0.5, n};
            const double a = o.exponent();
            for (double rho : {0.6, 0.75, 0.95}) {
                const double s = rho - 0.5;
                const double vp = a * std::pow(s, a - 1.0);
                const double vpp = a * (a - 1.0) * std::pow(s, a - 2.0);
                const double lhs =
                    std::pow(vp, gamma) * (vpp + (n - 1) * vp / rho);
                Vec x(n, rho);
                CHECK(lhs == doctest::Approx(o.source(x)).epsilon(1e-10));
            }
            // interior limit value
            const double inside = std::pow(gamma + 2.0, gamma + 1.0) /
                                  std::pow(gamma + 1.0, gamma + 2.0);
            CHECK(o.source(Vec(n, 0.1)) == doctest::Approx(inside));
            // the source is strictly positive everywhere
            CHECK(o.source(Vec(n, 0.5)) > 0.0);
        }
    }
}

TEST_CASE("discrete residual off the collar vanishes with h") {
    RadialSharpness o{1.0, 0.5, 2};
    auto coarse = std::make_shared<GridDomain>(build_domain(2, 1.0 / 32.0, 1.0));
    auto fine = std::make_shared<GridDomain>(build_domain(2, 1.0 / 64.0, 1.0));
    // same physical collar on both lattices so the comparison is fair
    const double rc = verify_radial_is_solution(o, coarse, 0.0, 0.125);
    const double rf = verify_radial_is_solution(o, fine, 0.0, 0.125);
    CHECK(rc < 0.5);
    CHECK(rf < rc);
    // collar narrower than 2h is rejected
    CHECK_THROWS_AS(verify_radial_is_solution(o, coarse, 0.0, 1.0 / 64.0),
                    std::invalid_argument);
}

TEST_CASE("oracle problem spec is well formed") {
    RadialSharpness o{1.0, 0.5, 2};
    const ProblemSpec spec = o.problem();
    CHECK(spec.gamma == 1.0);
    CHECK(spec.alpha == 1.0);
    CHECK(spec.beta() == doctest::Approx(0.5));
    CHECK(spec.obstacle(Vec(2, 0.3, 0.3)) == 0.0);
    CHECK(spec.boundary(Vec(2, 1.0, 0.0)) == doctest::Approx(o.value(Vec(2, 1.0, 0.0))));
    GridDomain dom = build_domain(2, 1.0 / 16.0, 1.0);
    CHECK_NOTHROW(validate_problem(spec, dom));
}

TEST_CASE("comparison function coefficient, gamma 1 in the plane") {
    ComparisonXi xi{1.0, 1.0, 2, 1.0, 0.0, Vec(2, 0.0, 0.0)};
    // {1 * 2^3 / (2 * 2 * 1 * 3^2)}^{1/2} = sqrt(8/36)
    CHECK(xi.coefficient() == doctest::Approx(std::sqrt(8.0 / 36.0)));
    CHECK(xi.value(Vec(2, 0.0, 0.0)) == doctest::Approx(0.0));
    const double r = 0.25;
    CHECK(xi.value(Vec(2, r, 0.0)) ==
          doctest::Approx(xi.coefficient() * std::pow(r, 1.5)));
}

TEST_CASE("comparison function is dominated by the witness on spheres") {
    // the witness solves with source >= its interior plateau m; on each sphere
    // around the contact point (r,0) its sup must reach the comparison level
    RadialSharpness o{1.0, 0.5, 2};
    const double m = std::pow(3.0, 2.0) / std::pow(2.0, 3.0);  // inside plateau
    ComparisonXi xi{m, 1.0, 2, 1.0, 0.0, Vec(2, 0.5, 0.0)};
    for (double rad : {0.1, 0.2, 0.4}) {
        // sup of v over the sphere of radius rad around (0.5, 0) is attained
        // on the outward ray
        const double sup_v = o.value(Vec(2, 0.5 + rad, 0.0));
        CHECK(sup_v >= xi.value(Vec(2, 0.5 + rad, 0.0)));
    }
}
