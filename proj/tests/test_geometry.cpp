#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "obslab/geom/fit.hpp"
#include "obslab/geom/free_boundary.hpp"
#include "obslab/oracle/radial.hpp"

using namespace obslab;

namespace {

struct RadialFixture {
    std::shared_ptr<const GridDomain> dom;
    GridField u;
    GridField phi;
    FreeBoundaryReport fb;

    explicit RadialFixture(double h)
        : dom(std::make_shared<GridDomain>(build_domain(2, h, 1.0))),
          u(sample([](const Vec& x) { return RadialSharpness{1.0, 0.5, 2}.value(x); },
                   dom)),
          phi(dom, 0.0),
          fb(extract_free_boundary(u, phi, h * h)) {}
};

}  // namespace

TEST_CASE("log-log fit recovers exact power laws") {
    std::vector<double> r, s;
    for (int k = 0; k < 6; ++k) {
        const double rr = 0.4 / (1 << k);
        r.push_back(rr);
        s.push_back(3.0 * std::pow(rr, 1.5));
    }
    const LogLogFit fit = fit_loglog(r, s);
    CHECK(fit.slope == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit.halfwidth < 1e-9);
    CHECK(fit.points == 6);

    CHECK_THROWS_AS(fit_loglog({0.1, 0.2, 0.3}, {1.0, 2.0, 3.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog({0.1, 0.2, 0.3, -0.4}, {1.0, 2.0, 3.0, 4.0}),
                    std::invalid_argument);
}

TEST_CASE("fit window radii are dyadic and grid-aware") {
    FitWindow w;
    w.r_max = 0.25;
    const auto radii = w.radii(1.0 / 128.0);
    REQUIRE(radii.size() >= 3);
    CHECK(radii.front() == doctest::Approx(0.25));
    for (size_t i = 1; i < radii.size(); ++i)
        CHECK(radii[i] == doctest::Approx(radii[i - 1] / 2.0));
    CHECK(radii.back() >= 4.0 / 128.0 - 1e-12);
}

TEST_CASE("free boundary of the radial witness is the contact sphere edge") {
    RadialFixture fx(1.0 / 64.0);
    CHECK_FALSE(fx.fb.contact_empty());
    CHECK(fx.fb.fb_nodes.size() > 8);
    for (int64_t lin : fx.fb.fb_nodes) {
        const double rho = fx.dom->point(lin).norm();
        // the contact tolerance h^2 admits nodes out to (0.5 + h^{4/3}), so
        // edge nodes hug the sphere to within a couple of spacings
        CHECK(rho <= 0.5 + 2.0 * fx.dom->spacing());
        CHECK(rho >= 0.5 - 4.0 * fx.dom->spacing());
    }
}

TEST_CASE("growth, detachment, and gradient exponents on the witness") {
    RadialFixture fx(1.0 / 128.0);
    const int64_t x0 = fx.dom->nearest(Vec(2, 0.5, 0.0));
    FitWindow w;
    w.r_max = 0.25;

    const LogLogFit growth = growth_exponent_at(fx.u, fx.phi, x0, w);
    CHECK(growth.slope == doctest::Approx(1.5).epsilon(0.05));

    const LogLogFit detach = detach_rate_at(fx.u, fx.phi, x0, w);
    CHECK(detach.slope == doctest::Approx(1.5).epsilon(0.05));

    const LogLogFit grad =
        gradient_growth_at(fx.u, x0, w, GradientSource::Solution);
    CHECK(grad.slope == doctest::Approx(0.5).epsilon(0.12));
}

TEST_CASE("non-degeneracy profile of the witness is bounded below") {
    RadialFixture fx(1.0 / 64.0);
    const int64_t x0 = fx.dom->nearest(Vec(2, 0.5, 0.0));
    const std::vector<double> radii{0.25, 0.125, 0.0625};
    const auto profile = nondegeneracy_profile(fx.u, fx.phi, x0, radii, 1.5);
    REQUIRE(profile.size() == radii.size());
    for (double v : profile) {
        // sup over the sphere of radius r around (0.5, 0) is ~ r^{3/2}
        CHECK(v > 0.3);
        CHECK(v < 3.0);
    }
}

TEST_CASE("porosity of a circle is positive") {
    RadialFixture fx(1.0 / 64.0);
    const PorosityEstimate por =
        porosity_estimate(fx.fb.fb_nodes, fx.dom, {0.25, 0.125});
    CHECK_FALSE(por.non_porous);
    CHECK(por.sigma_hat > 0.15);
    CHECK(por.sigma_hat <= 0.5 + 1e-9);

    CHECK_THROWS_AS(porosity_estimate({}, fx.dom, {0.25}), std::invalid_argument);
    // all radii below the grid scale: nothing usable
    CHECK_THROWS_AS(porosity_estimate(fx.fb.fb_nodes, fx.dom, {1.0 / 64.0}),
                    std::invalid_argument);
}

TEST_CASE("box dimension of a circle arc is near one") {
    RadialFixture fx(1.0 / 128.0);
    const double h = fx.dom->spacing();
    const LogLogFit bd =
        box_dimension(fx.fb.fb_nodes, fx.dom, {2 * h, 4 * h, 8 * h, 16 * h});
    CHECK(bd.slope == doctest::Approx(1.0).epsilon(0.35));
    CHECK(bd.slope < 1.8);
}

TEST_CASE("empty free boundary for an untouched obstacle") {
    auto dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 16.0, 1.0));
    GridField u = sample([](const Vec& x) { return 1.0 + x.norm2(); }, dom);
    GridField phi(dom, 0.0);
    const FreeBoundaryReport fb = extract_free_boundary(u, phi, 1e-4);
    CHECK(fb.contact_empty());
    CHECK(fb.fb_nodes.empty());
}
