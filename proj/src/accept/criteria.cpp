#include "obslab/accept/criteria.hpp"

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "obslab/core/problem.hpp"
#include "obslab/geom/free_boundary.hpp"
#include "obslab/io/expr.hpp"
#include "obslab/oracle/radial.hpp"
#include "obslab/renorm/scaling.hpp"
#include "obslab/solver/solver.hpp"

namespace obslab {

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(4);
    ss << v;
    return ss.str();
}

// ---------------------------------------------------------------------------
// Random symmetric matrices with prescribed spectrum range (for the sampled
// ellipticity sandwich).

SymMat random_orthogonal_conjugate(std::mt19937_64& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> eig(lo, hi);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * 3.14159265358979323846);
    if (n == 1) return SymMat::diag(1, eig(rng));
    if (n == 2) {
        const double e0 = eig(rng), e1 = eig(rng), t = ang(rng);
        const double c = std::cos(t), s = std::sin(t);
        SymMat m(2);
        m.set(0, 0, c * c * e0 + s * s * e1);
        m.set(1, 1, s * s * e0 + c * c * e1);
        m.set(0, 1, c * s * (e0 - e1));
        return m;
    }
    // n = 3: conjugate a diagonal by three axis rotations.
    double q[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int axis = 0; axis < 3; ++axis) {
        const double t = ang(rng);
        const double c = std::cos(t), s = std::sin(t);
        const int i = axis, j = (axis + 1) % 3;
        for (int k = 0; k < 3; ++k) {
            const double a = q[k][i], b = q[k][j];
            q[k][i] = c * a - s * b;
            q[k][j] = s * a + c * b;
        }
    }
    const double e[3] = {eig(rng), eig(rng), eig(rng)};
    SymMat m(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            double v = 0.0;
            for (int k = 0; k < 3; ++k) v += q[i][k] * e[k] * q[j][k];
            m.set(i, j, v);
        }
    return m;
}

struct SandwichCase {
    std::string name;
    EllipticOperator op;
    int n;
    double lo, hi;  // spectrum band for the sampled pairs
    bool needs_grad;
};

double sandwich_violation(const SandwichCase& c, std::mt19937_64& rng, int pairs) {
    const Vec x = c.n == 3 ? Vec(3, 0.3, -0.2, 0.1) : Vec(c.n, 0.3, -0.2);
    const Vec xi = c.n == 3 ? Vec(3, 0.6, -0.8, 0.0) : Vec(c.n, 0.6, -0.8);
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const SymMat X = random_orthogonal_conjugate(rng, c.n, c.lo, c.hi);
        const SymMat Y = random_orthogonal_conjugate(rng, c.n, c.lo, c.hi);
        const Vec* g = c.needs_grad ? &xi : nullptr;
        const double diff = c.op.evaluate(x, X, g) - c.op.evaluate(x, Y, g);
        const double lo = pucci_minus(X - Y, c.op.lambda(), c.op.Lambda());
        const double hi = pucci_plus(X - Y, c.op.lambda(), c.op.Lambda());
        worst = std::max(worst, std::max(lo - diff, diff - hi));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Shared solver fixtures, memoized for the whole process.

std::map<std::string, SolverReport>& cache() {
    static std::map<std::string, SolverReport> c;
    return c;
}

/// Penalization error scales like epsilon, so convergence under grid
/// refinement requires coupling: the schedule is continued down to
/// epsilon = h^{3/2}, the resolvability limit where the indicator transition
/// width epsilon^{2/3} equals the grid spacing.
SolverConfig radial_config(double h_finest) {
    SolverConfig cfg;
    cfg.epsilon_schedule = {0.08, 0.02, 0.005};
    const double eps_target = std::pow(h_finest, 1.5);
    while (cfg.epsilon_schedule.back() > 1.5 * eps_target)
        cfg.epsilon_schedule.push_back(cfg.epsilon_schedule.back() / 4.0);
    if (cfg.epsilon_schedule.back() > 1.001 * eps_target)
        cfg.epsilon_schedule.push_back(eps_target);
    cfg.tol_inner = 1e-5;
    cfg.tol_outer = 1e-4;
    cfg.max_inner = 2000000;
    cfg.max_outer = 60;
    return cfg;
}

/// Penalized solve of the gamma = 1 radial fixture at spacing 1/(1 << level),
/// warm-started up a dyadic cascade from h = 1/16.
const SolverReport& radial_solve(int level) {
    const std::string key = "radial-" + std::to_string(level);
    auto it = cache().find(key);
    if (it != cache().end()) return it->second;

    RadialSharpness oracle{1.0, 0.5, 2};
    const double h = 1.0 / static_cast<double>(int64_t{1} << level);
    SolverReport rep =
        solve_cascade(oracle.problem(), 2, h, 1.0, radial_config(h), level - 3);
    return cache().emplace(key, std::move(rep)).first->second;
}

/// gamma = 0 fixture with a strict supersolution obstacle: trace operator,
/// phi = 0.5 - |x|^2 (Lap phi = -4), f = 1, g = 0.3 on a 2D ball.
ProblemSpec gamma0_spec() {
    ProblemSpec spec;
    spec.gamma = 0.0;
    spec.alpha = 1.0;
    spec.op = std::make_shared<EllipticOperator>(EllipticOperator::trace());
    spec.obstacle = parse_expression("0.5 - r^2");
    spec.source = [](const Vec&) { return 1.0; };
    spec.boundary = [](const Vec&) { return 0.3; };
    return spec;
}

const SolverReport& gamma0_solve() {
    auto it = cache().find("gamma0");
    if (it != cache().end()) return it->second;
    SolverConfig cfg = radial_config(1.0 / 64.0);
    SolverReport rep = solve_cascade(gamma0_spec(), 2, 1.0 / 64.0, 1.0, cfg, 3);
    return cache().emplace("gamma0", std::move(rep)).first->second;
}

GridField sample_oracle(const RadialSharpness& o, std::shared_ptr<const GridDomain> dom) {
    return sample([&o](const Vec& x) { return o.value(x); }, dom);
}

double sup_error_vs_oracle(const GridField& u, const RadialSharpness& o) {
    const GridDomain& dom = u.domain();
    double e = 0.0;
    for (int64_t lin : dom.interior_list())
        e = std::max(e, std::abs(u[lin] - o.value(dom.point(lin))));
    return e;
}

// ---------------------------------------------------------------------------
// Criteria. Tolerances pinned here, nowhere else.

CriterionResult a1(uint64_t seed) {
    CriterionResult res{"A1", true, ""};

    const double id2 = pucci_minus(SymMat::identity(2), 1.0, 2.0);
    const double mix = pucci_plus(SymMat::diag(2, 1.0, -1.0), 1.0, 2.0);
    if (id2 != 2.0 || mix != 1.0) {
        res.passed = false;
        res.detail = "Pucci identities off: " + fmt(id2) + ", " + fmt(mix);
        return res;
    }

    std::vector<SandwichCase> cases;
    cases.push_back({"trace", EllipticOperator::trace(), 2, -3.0, 3.0, false});
    cases.push_back(
        {"trace_modulated", EllipticOperator::trace_modulated(0.1), 2, -3.0, 3.0, false});
    cases.push_back(
        {"pucci_minus", EllipticOperator::pucci_minus_op(1.0, 2.0), 3, -3.0, 3.0, false});
    cases.push_back(
        {"pucci_plus", EllipticOperator::pucci_plus_op(1.0, 2.0), 3, -3.0, 3.0, false});
    {
        std::vector<SymMat> tables = {SymMat::identity(2), SymMat::diag(2, 1.5, 0.5)};
        cases.push_back({"bellman", EllipticOperator::bellman(tables), 2, -3.0, 3.0, false});
    }
    {
        std::vector<std::vector<SymMat>> groups = {
            {SymMat::identity(2), SymMat::diag(2, 0.95, 1.0)},
            {SymMat::diag(2, 1.0, 0.95)}};
        cases.push_back({"isaacs", EllipticOperator::isaacs(groups), 2, -3.0, 3.0, false});
    }
    for (double p : {1.5, 3.0, 5.0})
        cases.push_back({"p_laplacian(" + fmt(p) + ")", EllipticOperator::p_laplacian(p),
                         2, -3.0, 3.0, true});
    cases.push_back({"m_momentum", EllipticOperator::m_momentum(3, {1.0, 1.0}), 2, 0.25,
                     2.0, false});
    cases.push_back({"special_lagrangian",
                     EllipticOperator::special_lagrangian({1.0, 1.0}), 2, -2.0, 2.0,
                     false});
    cases.push_back({"recession(pucci_minus)",
                     EllipticOperator::recession_of(EllipticOperator::pucci_minus_op(1.0, 2.0)),
                     2, -3.0, 3.0, false});

    std::mt19937_64 rng(seed);
    double worst = 0.0;
    std::string worst_name;
    for (const SandwichCase& c : cases) {
        const double v = sandwich_violation(c, rng, 100);
        if (v > worst) {
            worst = v;
            worst_name = c.name;
        }
    }
    res.passed = worst <= 1e-10;
    res.detail = "worst sandwich violation " + fmt(worst) +
                 (worst_name.empty() ? "" : " (" + worst_name + ")");
    return res;
}

CriterionResult a2() {
    const RadialSharpness oracle{1.0, 0.5, 2};
    const SolverReport& r64 = radial_solve(6);
    const SolverReport& r128 = radial_solve(7);
    const double e64 = sup_error_vs_oracle(r64.solution, oracle);
    const double e128 = sup_error_vs_oracle(r128.solution, oracle);
    const double ratio = e64 / e128;

    CriterionResult res{"A2", false, ""};
    res.passed = r64.converged && r128.converged && e64 <= 5e-2 && ratio >= 1.5;
    res.detail = "err(1/64)=" + fmt(e64) + " err(1/128)=" + fmt(e128) +
                 " ratio=" + fmt(ratio) +
                 (r64.converged && r128.converged ? "" : " [non-convergence]");
    return res;
}

CriterionResult a3() {
    CriterionResult res{"A3", true, ""};
    auto dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 256.0, 1.0));
    const GridField zero(dom);
    FitWindow window;
    window.r_max = 0.25;
    for (double gamma : {0.5, 1.0, 2.0}) {
        const RadialSharpness oracle{gamma, 0.5, 2};
        const GridField v = sample_oracle(oracle, dom);
        const int64_t x0 = dom->nearest(Vec(2, 0.5, 0.0));
        const LogLogFit fit = growth_exponent_at(v, zero, x0, window);
        const double target = 1.0 + 1.0 / (gamma + 1.0);
        if (std::abs(fit.slope - target) > 0.05) res.passed = false;
        res.detail += (res.detail.empty() ? "" : "; ") + std::string("gamma=") +
                      fmt(gamma) + " slope=" + fmt(fit.slope) + " target=" + fmt(target);
    }
    return res;
}

CriterionResult a4() {
    const SolverReport& rep = radial_solve(7);
    auto dom = rep.solution.domain_ptr();
    const double h = dom->spacing();
    const GridField zero(dom);

    const SolverConfig cfg = radial_config(h);
    // The contact threshold must dominate the solution accuracy: the
    // penalization bias scales with the final epsilon = h^{3/2}, and a
    // threshold below it misreads the biased collar as detached, dragging the
    // detected front inside the true sphere and steepening the fitted slope.
    const double tol_contact = std::max(cfg.tol_inner, std::pow(h, 1.5));
    FreeBoundaryReport fb = extract_free_boundary(rep.solution, zero, tol_contact);

    CriterionResult res{"A4", false, ""};
    if (fb.fb_nodes.empty()) {
        res.detail = "free boundary empty";
        return res;
    }
    // Sample point: the free boundary node closest to (0.5, 0).
    const Vec probe(2, 0.5, 0.0);
    int64_t x0 = fb.fb_nodes.front();
    double best = 1e30;
    for (int64_t lin : fb.fb_nodes) {
        const double d = (dom->point(lin) - probe).norm2();
        if (d < best) {
            best = d;
            x0 = lin;
        }
    }

    FitWindow window;
    window.r_max = 0.25;
    const LogLogFit growth = growth_exponent_at(rep.solution, zero, x0, window);
    const LogLogFit grad =
        gradient_growth_at(rep.solution, x0, window, GradientSource::Solution);
    res.passed = std::abs(growth.slope - 1.5) <= 0.15 && std::abs(grad.slope - 0.5) <= 0.1;
    res.detail = "growth slope=" + fmt(growth.slope) + " (target 1.5 +-0.15), grad slope=" +
                 fmt(grad.slope) + " (target 0.5 +-0.1)";
    return res;
}

CriterionResult a5() {
    const RadialSharpness oracle{1.0, 0.5, 2};
    auto dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 512.0, 1.0));
    // Oracle recentered at a free boundary point, so the dyadic balls probe
    // the detachment profile: w(x) = v(x0 + x), w(0) = 0, Dw(0) = 0.
    const Vec x0(2, 0.5, 0.0);
    const GridField w =
        sample([&](const Vec& x) { return oracle.value(x0 + x); }, dom);
    const Vec grad0(2, 0.0, 0.0);

    const double beta_sharp = 1.0 / (oracle.gamma + 1.0);
    const DyadicSequence flat = dyadic_sequence(w, 0.5, beta_sharp, 6, grad0);
    const DyadicSequence steep = dyadic_sequence(w, 0.5, beta_sharp + 0.1, 6, grad0);

    double flat_max = 0.0;
    for (double s : flat.sup_norms) flat_max = std::max(flat_max, s);
    const bool bounded_ok = flat_max <= 1.5;
    const bool blowup_ok = steep.sup_norms.back() > 10.0;

    CriterionResult res{"A5", bounded_ok && blowup_ok, ""};
    res.detail = "sup_k |v_k| at sharp beta=" + fmt(flat_max) +
                 " (<=1.5), at beta+0.1 k=6: " + fmt(steep.sup_norms.back()) +
                 " (>10 required; growth 2^{0.1 k} reaches only ~1.52 by k=6)";
    return res;
}

CriterionResult a6() {
    CriterionResult res{"A6", true, ""};

    // Radial oracle, gamma = 1: dyadic non-degeneracy ratios at the sharp
    // exponent 1 + 1/(gamma+1).
    {
        const RadialSharpness oracle{1.0, 0.5, 2};
        auto dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 128.0, 1.0));
        const GridField v = sample_oracle(oracle, dom);
        const GridField zero(dom);
        const int64_t x0 = dom->nearest(Vec(2, 0.5, 0.0));
        const std::vector<double> radii = {0.25, 0.125, 0.0625, 0.03125};
        const std::vector<double> ratios =
            nondegeneracy_profile(v, zero, x0, radii, 1.5);
        double lo = 1e30, hi = 0.0;
        for (double q : ratios) {
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        if (!(lo >= 0.3) || !(hi / lo <= 3.0)) res.passed = false;
        res.detail = "radial min ratio=" + fmt(lo) + " spread=" + fmt(hi / lo);
    }

    // gamma = 0 strict-supersolution fixture: quadratic-profile ratios
    // positive.
    {
        const SolverReport& rep = gamma0_solve();
        auto dom = rep.solution.domain_ptr();
        const ProblemSpec spec = gamma0_spec();
        const GridField phi = sample(spec.obstacle, dom);
        const double tol_contact =
            std::max(radial_config(dom->spacing()).tol_inner, dom->spacing() * dom->spacing());
        FreeBoundaryReport fb = extract_free_boundary(rep.solution, phi, tol_contact);
        if (fb.fb_nodes.empty()) {
            res.passed = false;
            res.detail += "; gamma0 free boundary empty";
            return res;
        }
        const int64_t x0 = fb.fb_nodes.front();
        const std::vector<double> radii = {0.125, 0.0625, 0.03125};
        const std::vector<double> ratios =
            nondegeneracy_profile(rep.solution, phi, x0, radii, 2.0);
        double lo = 1e30;
        for (double q : ratios) lo = std::min(lo, q);
        if (!(lo > 0.0)) res.passed = false;
        res.detail += "; gamma0 quadratic min ratio=" + fmt(lo);
    }
    return res;
}

CriterionResult a7() {
    const RadialSharpness oracle{1.0, 0.5, 2};
    auto dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 128.0, 1.0));
    const double h = dom->spacing();
    const GridField v = sample_oracle(oracle, dom);
    const GridField zero(dom);
    FreeBoundaryReport fb = extract_free_boundary(v, zero, 10.0 * h * h);

    CriterionResult res{"A7", false, ""};
    if (fb.fb_nodes.empty()) {
        res.detail = "free boundary empty";
        return res;
    }
    const PorosityEstimate por =
        porosity_estimate(fb.fb_nodes, dom, {0.25, 0.125});
    const LogLogFit dim =
        box_dimension(fb.fb_nodes, dom, {2.0 * h, 4.0 * h, 8.0 * h, 16.0 * h});
    res.passed = por.sigma_hat >= 0.2 && dim.slope <= 2.0 - 0.2;
    res.detail = "porosity=" + fmt(por.sigma_hat) + " (>=0.2), boxdim=" +
                 fmt(dim.slope) + " (<=1.8)";
    return res;
}

CriterionResult a8() {
    CriterionResult res{"A8", true, ""};
    SolverConfig cfg;
    cfg.epsilon_schedule = {0.05, 0.0125};
    cfg.tol_inner = 1e-5;
    cfg.tol_outer = 5e-5;
    cfg.max_inner = 2000000;

    struct Pair {
        std::string name;
        int dim;
        double h;
        double gamma;
        ScalarFn phi, f;
        double g_hi, g_lo;
    };
    const ScalarFn phi_1d = parse_expression("0.5 - 4*x1^2");
    const ScalarFn phi_2d = parse_expression("0.5 - r^2");
    const ScalarFn f_two = [](const Vec&) { return 2.0; };
    const ScalarFn f_one = [](const Vec&) { return 1.0; };
    std::vector<Pair> pairs = {
        {"1d g0", 1, 1.0 / 64.0, 0.0, phi_1d, f_two, 1.0, 0.9},
        {"1d g1", 1, 1.0 / 64.0, 1.0, phi_1d, f_two, 1.0, 0.8},
        {"1d g0.5", 1, 1.0 / 64.0, 0.5, phi_1d, f_two, 1.2, 1.0},
        {"2d g1", 2, 1.0 / 32.0, 1.0, phi_2d, f_one, 0.4, 0.3},
        {"2d g0", 2, 1.0 / 32.0, 0.0, phi_2d, f_one, 0.3, 0.25},
    };

    double worst_cmp = 0.0, worst_obs = 0.0;
    bool all_converged = true;
    for (const Pair& p : pairs) {
        auto dom = std::make_shared<GridDomain>(build_domain(p.dim, p.h, 1.0));
        auto run = [&](double g) {
            ProblemSpec spec;
            spec.gamma = p.gamma;
            spec.alpha = 1.0;
            spec.op = std::make_shared<EllipticOperator>(EllipticOperator::trace());
            spec.obstacle = p.phi;
            spec.source = p.f;
            spec.boundary = [g](const Vec&) { return g; };
            SolverReport rep = solve(spec, dom, cfg);
            all_converged = all_converged && rep.converged;
            const GridField phi_s = sample(p.phi, dom);
            for (int64_t lin : dom->interior_list())
                worst_obs = std::max(worst_obs, phi_s[lin] - rep.solution[lin]);
            return rep.solution;
        };
        const GridField hi = run(p.g_hi);
        const GridField lo = run(p.g_lo);
        for (int64_t lin : dom->interior_list())
            worst_cmp = std::max(worst_cmp, lo[lin] - hi[lin]);
    }
    const bool cmp_ok = worst_cmp <= 10.0 * cfg.tol_inner;
    const bool obs_ok = worst_obs <= 10.0 * cfg.tol_inner;

    // Cutting surrogate: with f = 0 and the obstacle inactive, the degenerate
    // factor carries no information and any gamma gives the same solution.
    double cut_gap = 0.0;
    {
        auto dom = std::make_shared<GridDomain>(build_domain(2, 1.0 / 32.0, 1.0));
        SolverConfig pcfg = cfg;
        pcfg.backend = SolverBackend::Projection;
        auto run = [&](double gamma) {
            ProblemSpec spec;
            spec.gamma = gamma;
            spec.alpha = 1.0;
            spec.op = std::make_shared<EllipticOperator>(EllipticOperator::trace());
            spec.obstacle = [](const Vec&) { return -1.0; };
            spec.source = [](const Vec&) { return 0.0; };
            spec.boundary = parse_expression("0.1 + 0.3*x1^2 - 0.2*x2");
            SolverReport rep = solve(spec, dom, pcfg);
            all_converged = all_converged && rep.converged;
            return rep.solution;
        };
        const GridField u2 = run(2.0);
        const GridField u0 = run(0.0);
        cut_gap = u2.sup_diff(u0);
    }
    const double h32 = 1.0 / 32.0;
    const bool cut_ok = cut_gap <= 5.0 * std::max(cfg.tol_inner, h32 * h32);

    // Backend agreement on the 1D obstacle fixture.
    double backend_gap = 0.0;
    {
        auto dom = std::make_shared<GridDomain>(build_domain(1, 1.0 / 64.0, 1.0));
        ProblemSpec spec;
        spec.gamma = 0.0;
        spec.alpha = 1.0;
        spec.op = std::make_shared<EllipticOperator>(EllipticOperator::trace());
        spec.obstacle = phi_1d;
        spec.source = f_two;
        spec.boundary = [](const Vec&) { return 1.0; };
        SolverReport pen = solve(spec, dom, cfg);
        SolverConfig jcfg = cfg;
        jcfg.backend = SolverBackend::Projection;
        SolverReport prj = solve(spec, dom, jcfg);
        all_converged = all_converged && pen.converged && prj.converged;
        backend_gap = pen.solution.sup_diff(prj.solution);
    }
    const double h64 = 1.0 / 64.0;
    const bool backend_ok = backend_gap <= 5.0 * std::max(cfg.tol_outer, h64 * h64);

    res.passed = cmp_ok && obs_ok && cut_ok && backend_ok && all_converged;
    res.detail = "comparison gap=" + fmt(worst_cmp) + ", obstacle gap=" + fmt(worst_obs) +
                 ", cutting gap=" + fmt(cut_gap) + ", backend gap=" + fmt(backend_gap) +
                 (all_converged ? "" : " [non-convergence]");
    return res;
}

}  // namespace

std::vector<std::string> criterion_ids() {
    return {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"};
}

CriterionResult run_criterion(const std::string& id, uint64_t seed) {
    if (id == "A1") return a1(seed);
    if (id == "A2") return a2();
    if (id == "A3") return a3();
    if (id == "A4") return a4();
    if (id == "A5") return a5();
    if (id == "A6") return a6();
    if (id == "A7") return a7();
    if (id == "A8") return a8();
    throw std::invalid_argument("unknown acceptance criterion: " + id);
}

}  // namespace obslab
