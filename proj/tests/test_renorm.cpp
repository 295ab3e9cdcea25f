#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "obslab/oracle/radial.hpp"
#include "obslab/renorm/scaling.hpp"

using namespace obslab;

TEST_CASE("smallness zoom composes field, source, and operator") {
    auto src_dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 32.0, 1.0));
    auto fine_dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 16.0, 1.0));

    ProblemSpec spec;
    spec.gamma = 1.0;
    spec.op = std::make_shared<EllipticOperator>(EllipticOperator::trace());
    spec.obstacle = [](const Vec&) { return -1.0; };
    spec.source = [](const Vec& x) { return 2.0 + x[0]; };
    spec.boundary = [](const Vec&) { return 1.0; };
    spec.alpha = 1.0;

    GridField u = sample([](const Vec& x) { return x.norm2(); }, src_dom);

    ScalingMap map;
    map.tau = 0.5;  // commensurable: 0.5 * (k/16) lands on the 1/32 lattice
    map.center = Vec(2, 0.0, 0.0);
    map.kind = ScalingKind::Smallness;

    const ScaledProblem sp = apply_scaling(map, spec, u, fine_dom);
    for (int64_t lin : fine_dom->interior_list()) {
        const Vec x = fine_dom->point(lin);
        CHECK(sp.field[lin] == doctest::Approx(0.25 * x.norm2()).epsilon(1e-12));
    }
    // source gains tau^{gamma+2} = 1/8
    const Vec probe(2, 0.25, 0.0);
    CHECK(sp.spec.source(probe) ==
          doctest::Approx(std::pow(0.5, 3.0) * (2.0 + 0.125)));
    // operator: tau^2 Tr(X / tau^2) = Tr X
    const SymMat X = SymMat::diag(2, 1.0, 2.0);
    CHECK(sp.spec.op->evaluate(probe, X) == doctest::Approx(3.0));

    // incommensurable tau misses the lattice
    map.tau = 0.3;
    CHECK_THROWS_AS(apply_scaling(map, spec, u, fine_dom), std::invalid_argument);

    // only the smallness regime goes through this entry point
    map.tau = 0.5;
    map.kind = ScalingKind::Dyadic;
    CHECK_THROWS_AS(apply_scaling(map, spec, u, fine_dom), std::invalid_argument);
}

TEST_CASE("gradient block rescale normalizes a linear function") {
    auto fine_dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 16.0, 1.0));
    const double beta = 0.5;
    const double tau = 0.1;  // plays |Du(x0)|^{1/beta}, not grid-commensurable
    const ScalarFn lin = [](const Vec& x) { return 3.0 + 2.0 * x[0]; };
    GridField w = gradient_block_rescale(lin, Vec(2, 0.2, 0.0), tau, beta, fine_dom);
    // (u(x0 + tau x) - u(x0)) / tau^{1+beta} = 2 x1 tau^{-beta}
    const double scale = 2.0 * std::pow(tau, -beta);
    for (int64_t node : fine_dom->interior_list()) {
        const Vec x = fine_dom->point(node);
        CHECK(w[node] == doctest::Approx(scale * x[0]).epsilon(1e-10));
    }
}

TEST_CASE("dyadic sequence is level on an exact power profile") {
    // u = |x|^{1+beta} with Du(0) = 0: v_k = u(rho^k x)/rho^{k(1+beta)} = u(x)
    const double beta = 0.5;
    auto dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 128.0, 1.0));
    GridField u = sample([beta](const Vec& x) { return std::pow(x.norm(), 1.0 + beta); },
                         dom);
    const DyadicSequence seq = dyadic_sequence(u, 0.5, beta, 3, Vec(2, 0.0, 0.0));
    REQUIRE(seq.sup_norms.size() == 3);
    for (size_t k = 0; k < seq.fields.size(); ++k) {
        auto vk_dom = seq.fields[k].domain_ptr();
        CHECK(vk_dom->spacing() ==
              doctest::Approx((1.0 / 128.0) * std::pow(2.0, k + 1.0)));
        // bounded and of unit size: sup over the ring reaches ~ (1+h_k)^{1.5}
        CHECK(seq.sup_norms[k] > 0.9);
        CHECK(seq.sup_norms[k] < 1.6);
    }
    // above the profile's exponent the rescalings blow up geometrically
    const DyadicSequence steep = dyadic_sequence(u, 0.5, beta + 0.25, 3,
                                                 Vec(2, 0.0, 0.0));
    CHECK(steep.sup_norms[0] < steep.sup_norms[1]);
    CHECK(steep.sup_norms[1] < steep.sup_norms[2]);
    CHECK(steep.sup_norms[2] > std::pow(2.0, 0.25 * 3.0) * 0.9);

    // unresolvable depth is rejected
    CHECK_THROWS_AS(dyadic_sequence(u, 0.5, beta, 20, Vec(2, 0.0, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(dyadic_sequence(u, 0.7, beta, 2, Vec(2, 0.0, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("dyadic constant") {
    const double rho = 0.5, beta = 0.5;
    CHECK(dyadic_M(rho, beta) ==
          doctest::Approx(1.0 / (std::pow(rho, 1.5) * (1.0 - std::pow(rho, 0.5)))));
}

TEST_CASE("flatness measure on matching fields") {
    auto dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 16.0, 1.0));
    GridField u = sample([](const Vec& x) { return x.norm2(); }, dom);
    const FlatnessMeasurement same = flatness_measure(u, u, 0.05);
    CHECK(same.sup_gap == 0.0);
    CHECK(same.sup_grad_gap == 0.0);
    CHECK(same.flat());

    GridField phi = sample([](const Vec& x) { return x.norm2() - 0.2 * x[0]; }, dom);
    const FlatnessMeasurement off = flatness_measure(u, phi, 0.05);
    // gap 0.2 x1 over |x| <= 1/2: sup 0.1; gradient gap 0.2
    CHECK(off.sup_gap == doctest::Approx(0.1).epsilon(0.05));
    CHECK(off.sup_grad_gap == doctest::Approx(0.2).epsilon(0.05));
    CHECK_FALSE(off.flat());
}

TEST_CASE("radial witness dyadic sequence blows up beyond the sharp exponent") {
    RadialSharpness oracle{1.0, 0.5, 2};
    auto dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 128.0, 1.0));
    GridField u = sample([&](const Vec& x) { return oracle.value(x + Vec(2, 0.5, 0.0)); },
                         dom);
    // centered at the contact point: growth is exactly r^{3/2}, so at the
    // sharp beta = 1/2 the sequence stays level...
    const Vec g0(2, 0.0, 0.0);
    const DyadicSequence flat = dyadic_sequence(u, 0.5, 0.5, 4, g0);
    for (double s : flat.sup_norms) CHECK(s < 1.6);
    // ...and at any larger exponent it grows
    const DyadicSequence steep = dyadic_sequence(u, 0.5, 0.75, 4, g0);
    CHECK(steep.sup_norms.back() > flat.sup_norms.back());
    CHECK(steep.sup_norms.back() > std::pow(2.0, 0.25 * 4.0) * 0.5);
}
