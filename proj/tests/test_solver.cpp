#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "obslab/oracle/radial.hpp"
#include "obslab/solver/solver.hpp"

using namespace obslab;

namespace {

ProblemSpec quadratic_contact_1d() {
    // gamma = 0: u'' = 2 on {u > phi}, phi = 0.5 - 4 x^2. Closed form: contact
    // on [-a, a] with a = 1 - sqrt(0.9); outside, u = x^2 - 10 a |x| + 10 a.
    ProblemSpec spec;
    spec.gamma = 0.0;
    spec.op = std::make_shared<EllipticOperator>(EllipticOperator::trace());
    spec.obstacle = [](const Vec& x) { return 0.5 - 4.0 * x[0] * x[0]; };
    spec.source = [](const Vec&) { return 2.0; };
    const double a = 1.0 - std::sqrt(0.9);
    spec.boundary = [a](const Vec& x) {
        const double t = std::abs(x[0]);
        return t * t - 10.0 * a * t + 10.0 * a;
    };
    spec.alpha = 1.0;
    return spec;
}

double exact_quadratic_contact(const Vec& x) {
    const double a = 1.0 - std::sqrt(0.9);
    const double t = std::abs(x[0]);
    if (t <= a) return 0.5 - 4.0 * t * t;
    return t * t - 10.0 * a * t + 10.0 * a;
}

}  // namespace

TEST_CASE("penalty ramp shape") {
    CHECK(PenaltyProfile::shape(-0.5) == 0.0);
    CHECK(PenaltyProfile::shape(0.0) == 0.0);
    CHECK(PenaltyProfile::shape(1.0) == 1.0);
    CHECK(PenaltyProfile::shape(2.0) == 1.0);
    CHECK(PenaltyProfile::shape(0.5) == doctest::Approx(0.5));
    // monotone on [0, 1]
    double prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double v = PenaltyProfile::shape(k / 20.0);
        CHECK(v >= prev);
        prev = v;
    }
    PenaltyProfile p{0.05, +1};
    CHECK(phi_eps(p, 0.05) == 1.0);
    CHECK(phi_eps(p, -1.0) == 0.0);
    CHECK(p.shift() == doctest::Approx(0.05));
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.grad_floor_for(0.01) == doctest::Approx(0.01));
    cfg.grad_floor = 0.2;
    CHECK(cfg.grad_floor_for(0.01) == doctest::Approx(0.2));

    SolverConfig bad = cfg;
    bad.epsilon_schedule.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.epsilon_schedule = {0.05, 0.1};  // must decrease
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.dt_safety = 0.6;  // beyond the stability bound
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.tol_inner = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("profile sign detection") {
    auto dom = std::make_shared<GridDomain>(build_domain(1, 1.0 / 16.0, 1.0));
    ProblemSpec spec = quadratic_contact_1d();
    const PenaltyProfile p = make_profile(spec, *dom, 0.05);
    CHECK(p.sign == +1);
    CHECK(p.epsilon == doctest::Approx(0.05));

    spec.source = [](const Vec& x) { return x[0]; };
    CHECK_THROWS_AS(make_profile(spec, *dom, 0.05), std::invalid_argument);
}

TEST_CASE("unconstrained dirichlet problem is solved to the residual tolerance") {
    // obstacle far below: plain u'' = 2 with boundary x^2, whose discrete
    // solution is exactly x^2 (central differences are exact on quadratics)
    ProblemSpec spec;
    spec.gamma = 0.0;
    spec.op = std::make_shared<EllipticOperator>(EllipticOperator::trace());
    spec.obstacle = [](const Vec&) { return -10.0; };
    spec.source = [](const Vec&) { return 2.0; };
    spec.boundary = [](const Vec& x) { return x[0] * x[0]; };
    auto dom = std::make_shared<GridDomain>(build_domain(1, 1.0 / 32.0, 1.0));

    SolverConfig cfg;
    cfg.backend = SolverBackend::Projection;
    cfg.tol_inner = 1e-8;
    SolverReport rep = solve(spec, dom, cfg);
    CHECK(rep.converged);
    double worst = 0.0;
    for (int64_t lin : dom->interior_list()) {
        const Vec x = dom->point(lin);
        worst = std::max(worst, std::abs(rep.solution[lin] - x[0] * x[0]));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("1d obstacle problem against the closed form") {
    ProblemSpec spec = quadratic_contact_1d();
    auto dom = std::make_shared<GridDomain>(build_domain(1, 1.0 / 64.0, 1.0));

    SolverConfig cfg;
    cfg.epsilon_schedule = {0.05, 0.0125, 0.003125};
    cfg.tol_inner = 1e-7;
    cfg.tol_outer = 1e-6;

    for (SolverBackend backend : {SolverBackend::Penalized, SolverBackend::Projection}) {
        cfg.backend = backend;
        SolverReport rep = solve(spec, dom, cfg);
        CHECK(rep.converged);
        CHECK(rep.solution.all_finite());
        double worst = 0.0;
        for (int64_t lin : dom->interior_list()) {
            const Vec x = dom->point(lin);
            worst = std::max(worst,
                             std::abs(rep.solution[lin] - exact_quadratic_contact(x)));
        }
        CHECK(worst < 2e-2);
        // the constraint holds: exactly for the clamped backend, up to the
        // final penalization width otherwise
        const double slack =
            backend == SolverBackend::Projection ? 1e-12 : 2.0 * 0.003125;
        for (int64_t lin : dom->interior_list()) {
            const Vec x = dom->point(lin);
            CHECK(rep.solution[lin] >= 0.5 - 4.0 * x[0] * x[0] - slack);
        }
    }
}

TEST_CASE("prolongation is exact on affine fields") {
    auto coarse_dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 8.0, 1.0));
    auto fine_dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 16.0, 1.0));
    GridField coarse = sample([](const Vec& x) { return 1.0 + x[0] - 2.0 * x[1]; },
                              coarse_dom);
    GridField fine = prolong(coarse, fine_dom);
    for (int64_t lin : fine_dom->interior_list()) {
        const Vec x = fine_dom->point(lin);
        CHECK(fine[lin] == doctest::Approx(1.0 + x[0] - 2.0 * x[1]).epsilon(1e-9));
    }
}

TEST_CASE("cascade reproduces the 1d radial witness") {
    RadialSharpness oracle{1.0, 0.5, 1};
    SolverConfig cfg;
    cfg.epsilon_schedule = {0.05, 0.0125, 0.003125};
    cfg.tol_inner = 1e-7;
    cfg.tol_outer = 1e-6;
    SolverReport rep = solve_cascade(oracle.problem(), 1, 1.0 / 64.0, 1.0, cfg, 3);
    CHECK(rep.converged);
    CHECK(rep.kernel_isa.size() > 0);
    auto dom = rep.solution.domain_ptr();
    double worst = 0.0;
    for (int64_t lin : dom->interior_list())
        worst = std::max(worst,
                         std::abs(rep.solution[lin] - oracle.value(dom->point(lin))));
    CHECK(worst < 5e-2);
    // near non-negativity (zero obstacle, penalized backend can undershoot by
    // the final penalization width) and flatness inside the contact ball
    for (int64_t lin : dom->interior_list()) {
        CHECK(rep.solution[lin] >= -2.0 * 0.003125);
        if (std::abs(dom->point(lin)[0]) < 0.25)
            CHECK(rep.solution[lin] < 2e-2);
    }
}

TEST_CASE("residual field is small off contact for a settled solve") {
    ProblemSpec spec = quadratic_contact_1d();
    auto dom = std::make_shared<GridDomain>(build_domain(1, 1.0 / 64.0, 1.0));
    SolverConfig cfg;
    cfg.backend = SolverBackend::Projection;
    cfg.tol_inner = 1e-8;
    SolverReport rep = solve(spec, dom, cfg);
    REQUIRE(rep.converged);
    GridField res = residual_field(spec, dom, rep.solution, cfg);
    const double h = dom->spacing();
    const double tol_contact = std::max(cfg.tol_inner, h * h);
    for (int64_t lin : dom->interior_list()) {
        const Vec x = dom->point(lin);
        const double gap = rep.solution[lin] - spec.obstacle(x);
        // skip a collar of nodes near the contact edge where the indicator
        // and the stencil disagree at truncation scale
        if (std::abs(std::abs(x[0]) - (1.0 - std::sqrt(0.9))) < 4.0 * h) continue;
        if (gap > tol_contact) CHECK(std::abs(res[lin]) < 1e-3);
    }
}
