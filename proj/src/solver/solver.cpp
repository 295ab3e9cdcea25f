#include "obslab/solver/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "obslab/ops/stencil.hpp"
#include "obslab/simd/kernels.hpp"

namespace obslab {

double PenaltyProfile::shape(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double phi_eps(const PenaltyProfile& profile, double s) {
    if (!(profile.epsilon > 0.0 && profile.epsilon < 1.0))
        throw std::invalid_argument("penalty epsilon must lie in (0, 1)");
    return PenaltyProfile::shape(s / profile.epsilon);
}

void SolverConfig::validate() const {
    if (epsilon_schedule.empty())
        throw std::invalid_argument("epsilon schedule must be nonempty");
    double prev = 1.0;
    for (double e : epsilon_schedule) {
        if (!(e > 0.0 && e < prev))
            throw std::invalid_argument(
                "epsilon schedule must be strictly decreasing in (0, 1)");
        prev = e;
    }
    // dt = dt_safety h^2 / (n Lambda (factor + 1)) with effective diffusion
    // coefficient factor * Lambda; as factor grows the explicit march is
    // stable only for dt_safety <= 1/2.
    if (!(dt_safety > 0.0 && dt_safety <= 0.5))
        throw std::invalid_argument("dt_safety must lie in (0, 0.5]");
    if (!(tol_inner > 0.0 && tol_outer > 0.0))
        throw std::invalid_argument("tolerances must be positive");
    if (max_inner <= 0 || max_outer <= 0)
        throw std::invalid_argument("iteration caps must be positive");
}

namespace {

bool fast_path(const ProblemSpec& spec) {
    return spec.op->kind() == OperatorKind::Trace;
}

std::vector<double> interior_mask(const GridDomain& dom) {
    std::vector<double> mask(static_cast<size_t>(dom.box_size()), 0.0);
    for (int64_t lin : dom.interior_list()) mask[static_cast<size_t>(lin)] = 1.0;
    return mask;
}

void impose_ring(GridField& u, const ProblemSpec& spec) {
    const GridDomain& dom = u.domain();
    for (int64_t lin : dom.ring_list()) u[lin] = spec.boundary(dom.point(lin));
}

GridField default_initial(const ProblemSpec& spec,
                          std::shared_ptr<const GridDomain> dom) {
    double ring_min = std::numeric_limits<double>::infinity();
    for (int64_t lin : dom->ring_list())
        ring_min = std::min(ring_min, spec.boundary(dom->point(lin)));
    GridField u(dom);
    for (int64_t lin : dom->interior_list())
        u[lin] = std::max(spec.obstacle(dom->point(lin)), ring_min);
    impose_ring(u, spec);
    return u;
}

Vec safe_direction(Vec grad) {
    if (grad.norm2() < 1e-28) grad[0] = 1e-14;  // deterministic stand-in at critical points
    return grad;
}

/// Degeneracy factor and operator value at one node of a generic sweep.
double node_value(const ProblemSpec& spec, const Vec& x, const HessianSample& hs,
                  double grad_floor, double* factor_out) {
    const double g2 = hs.grad.norm2() + grad_floor * grad_floor;
    const double factor = spec.gamma == 0.0 ? 1.0 : std::pow(g2, 0.5 * spec.gamma);
    *factor_out = factor;
    if (factor == 0.0) return 0.0;
    const Vec dir = safe_direction(hs.grad);
    return factor * spec.op->evaluate(x, hs.hess, &dir);
}

struct MarchResult {
    double residual{0.0};
    int64_t iterations{0};
    bool converged{false};
    std::string isa;
};

/// Complementarity residual: |r| off contact, max(r, 0) where the clamp is
/// active (there the scheme only requires wrapper <= rhs).
double clamped_metric(double r, double u, double lower, double tol_contact) {
    return u > lower + tol_contact ? std::abs(r) : std::max(r, 0.0);
}

MarchResult march_trace(const ProblemSpec& spec, std::shared_ptr<const GridDomain> domp,
                        std::vector<double>& u, const std::vector<double>& rhs,
                        const std::vector<double>& mask, const std::vector<double>* lower,
                        const SolverConfig& cfg) {
    const GridDomain& dom = *domp;
    const double h = dom.spacing();
    const double gf = cfg.grad_floor_for(h);
    const auto& K = simd::active_kernels();
    const int slot = simd::gamma_slot(spec.gamma);
    const simd::SweepFn sweep = K.sweep[dom.dim() - 1][slot];

    simd::SweepParams p;
    p.inv_h2 = 1.0 / (h * h);
    p.inv_2h = 0.5 / h;
    p.grad_floor2 = gf * gf;
    p.gamma = spec.gamma;
    p.dt_base = cfg.dt_safety * h * h / (dom.dim() * spec.op->Lambda());
    p.sy = dom.dim() >= 2 ? dom.stride(1) : 0;
    p.sz = dom.dim() >= 3 ? dom.stride(2) : 0;

    const double tol_contact = std::max(cfg.tol_inner, h * h);
    std::vector<double> unew = u;
    MarchResult out;
    out.isa = K.isa;
    for (int64_t it = 0; it < cfg.max_inner; ++it) {
        double rmax = 0.0;
        for (const RowSpan& span : dom.row_spans())
            rmax = std::max(rmax, sweep(u.data(), rhs.data(), mask.data(), unew.data(),
                                        span.begin, span.count, p));
        if (!std::isfinite(rmax))
            throw std::runtime_error("pseudo-time march produced a non-finite residual");
        if (lower)
            K.clamp_to_lower(unew.data(), lower->data(), mask.data(), dom.box_size());
        u.swap(unew);
        out.iterations = it + 1;

        if (!lower) {
            out.residual = rmax;
        } else if (it % 16 == 15 || rmax <= cfg.tol_inner) {
            // Re-measure against the complementarity conditions: the raw
            // max |r| never settles on the contact set.
            double m = 0.0;
            for (const RowSpan& span : dom.row_spans())
                for (int64_t i = span.begin; i < span.begin + span.count; ++i) {
                    const double uc = u[static_cast<size_t>(i)];
                    double lap = 0.0, g2 = p.grad_floor2;
                    for (int k = 0; k < dom.dim(); ++k) {
                        const int64_t s = dom.stride(k);
                        const double up = u[static_cast<size_t>(i + s)];
                        const double um = u[static_cast<size_t>(i - s)];
                        lap += (up - 2.0 * uc + um) * p.inv_h2;
                        const double g = (up - um) * p.inv_2h;
                        g2 += g * g;
                    }
                    const double factor =
                        spec.gamma == 0.0 ? 1.0 : std::pow(g2, 0.5 * spec.gamma);
                    const double r = factor * lap - rhs[static_cast<size_t>(i)];
                    m = std::max(m, clamped_metric(r, uc, (*lower)[static_cast<size_t>(i)],
                                                   tol_contact));
                }
            out.residual = m;
        } else {
            continue;
        }
        if (out.residual <= cfg.tol_inner) {
            out.converged = true;
            break;
        }
    }
    return out;
}

MarchResult march_generic(const ProblemSpec& spec,
                          std::shared_ptr<const GridDomain> domp, std::vector<double>& u,
                          const std::vector<double>& rhs, const std::vector<double>* lower,
                          const SolverConfig& cfg) {
    const GridDomain& dom = *domp;
    const double h = dom.spacing();
    const double gf = cfg.grad_floor_for(h);
    const double dt_base = cfg.dt_safety * h * h / (dom.dim() * spec.op->Lambda());
    const double tol_contact = std::max(cfg.tol_inner, h * h);

    GridField uf(domp);
    uf.values() = u;
    GridField unew = uf;
    MarchResult out;
    out.isa = "generic";
    for (int64_t it = 0; it < cfg.max_inner; ++it) {
        double metric = 0.0;
        for (int64_t lin : dom.interior_list()) {
            const Vec x = dom.point(lin);
            const HessianSample hs = discrete_hessian(uf, lin);
            double factor = 1.0;
            const double w = node_value(spec, x, hs, gf, &factor);
            const double r = w - rhs[static_cast<size_t>(lin)];
            const double dt = dt_base / (factor + 1.0);
            double next = uf[lin] + dt * r;
            double m = std::abs(r);
            if (lower) {
                const double lo = (*lower)[static_cast<size_t>(lin)];
                next = std::max(next, lo);
                m = clamped_metric(r, uf[lin], lo, tol_contact);
            }
            unew[lin] = next;
            metric = std::max(metric, m);
        }
        if (!std::isfinite(metric))
            throw std::runtime_error("pseudo-time march produced a non-finite residual");
        uf.values().swap(unew.values());
        out.iterations = it + 1;
        out.residual = metric;
        if (metric <= cfg.tol_inner) {
            out.converged = true;
            break;
        }
    }
    u = uf.values();
    return out;
}

MarchResult march(const ProblemSpec& spec, std::shared_ptr<const GridDomain> domp,
                  std::vector<double>& u, const std::vector<double>& rhs,
                  const std::vector<double>& mask, const std::vector<double>* lower,
                  const SolverConfig& cfg) {
    return fast_path(spec) ? march_trace(spec, domp, u, rhs, mask, lower, cfg)
                           : march_generic(spec, domp, u, rhs, lower, cfg);
}

}  // namespace

GridField inner_solve(const ProblemSpec& spec, std::shared_ptr<const GridDomain> domain,
                      const GridField& frozen, const PenaltyProfile& profile,
                      const SolverConfig& config, InnerReport* report,
                      const GridField* start) {
    config.validate();
    if (!frozen.domain().same_layout(*domain))
        throw std::invalid_argument("frozen field lives on a different lattice");

    std::vector<double> rhs(static_cast<size_t>(domain->box_size()), 0.0);
    std::vector<double> lower(static_cast<size_t>(domain->box_size()), 0.0);
    for (int64_t lin : domain->interior_list()) {
        const Vec x = domain->point(lin);
        rhs[static_cast<size_t>(lin)] =
            spec.source(x) * phi_eps(profile, frozen[lin] - spec.obstacle(x)) +
            profile.shift();
        lower[static_cast<size_t>(lin)] = spec.obstacle(x);
    }

    GridField u = start ? *start : frozen;
    impose_ring(u, spec);
    // The switched source alone admits spurious fixed points that dive under
    // the obstacle (the source turns off there and nothing pushes back up);
    // the admissibility constraint u >= phi selects the supersolution branch.
    const std::vector<double> mask = interior_mask(*domain);
    MarchResult mr = march(spec, domain, u.values(), rhs, mask, &lower, config);
    if (report) {
        report->final_residual = mr.residual;
        report->iterations = mr.iterations;
        report->converged = mr.converged;
        report->kernel_isa = mr.isa;
    }
    return u;
}

PenaltyProfile make_profile(const ProblemSpec& spec, const GridDomain& domain,
                            double epsilon) {
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -fmin;
    for (int64_t lin : domain.interior_list()) {
        const double f = spec.source(domain.point(lin));
        fmin = std::min(fmin, f);
        fmax = std::max(fmax, f);
    }
    if (!(fmin > 0.0) && !(fmax < 0.0))
        throw std::invalid_argument(
            "penalized backend requires a source of uniform sign; use the projection "
            "backend for sign-changing sources");
    PenaltyProfile p;
    p.epsilon = epsilon;
    p.sign = fmin > 0.0 ? +1 : -1;
    return p;
}

SolverReport outer_fixed_point(const ProblemSpec& spec,
                               std::shared_ptr<const GridDomain> domain,
                               const PenaltyProfile& profile, const SolverConfig& config,
                               const GridField* initial) {
    config.validate();
    validate_problem(spec, *domain);

    GridField v = initial ? *initial : default_initial(spec, domain);
    impose_ring(v, spec);

    SolverReport rep{v, {}, {}, 0.0, false, 0, {}};
    bool all_converged = true;
    for (double eps : config.epsilon_schedule) {
        PenaltyProfile stage = profile;
        stage.epsilon = eps;
        // The frozen-indicator map is order-reversing (a larger iterate turns
        // the source on over a larger set, pushing the next iterate down) and
        // its slope near the transition grows as epsilon shrinks, so the
        // plain iteration oscillates. Under-relax: halve theta on every
        // step-over-step bounce (remembering the bounce level as a cap) and
        // let it recover toward the cap after a streak of improvements. The
        // sweet spot differs per stage, so a stage that exhausts its budget
        // restarts the adaptation state from the current, closer iterate.
        bool stage_converged = false;
        bool inner_failed = false;
        for (int round = 0; round < 3 && !stage_converged && !inner_failed; ++round) {
            int stagnation = 0;
            int improving_streak = 0;
            double theta = 0.5;
            double cap = 0.5;
            double prev_gap = std::numeric_limits<double>::infinity();
            for (int j = 0; j < config.max_outer; ++j) {
                InnerReport ir;
                GridField next = inner_solve(spec, domain, v, stage, config, &ir, &v);
                rep.wall_iterations += ir.iterations;
                rep.residual_history.push_back(ir.final_residual);
                rep.kernel_isa = ir.kernel_isa;
                const double gap = next.sup_diff(v);
                rep.outer_gaps.push_back(gap);
                if (ir.converged && gap <= config.tol_outer) {
                    v = std::move(next);
                    stage_converged = true;
                    break;
                }
                if (gap >= prev_gap) {
                    theta = std::max(0.5 * theta, 1.0 / 64.0);
                    cap = theta;
                    improving_streak = 0;
                    if (++stagnation >= 20) break;
                } else {
                    stagnation = 0;
                    if (++improving_streak >= 5) {
                        theta = std::min(2.0 * theta, cap);
                        improving_streak = 0;
                    }
                }
                prev_gap = gap;
                for (int64_t lin : domain->interior_list())
                    v[lin] += theta * (next[lin] - v[lin]);
                if (!ir.converged) {
                    inner_failed = true;
                    break;
                }
            }
        }
        all_converged = all_converged && stage_converged;
        rep.epsilon_used = eps;
    }
    rep.solution = std::move(v);
    rep.converged = all_converged;
    return rep;
}

SolverReport projection_solve(const ProblemSpec& spec,
                              std::shared_ptr<const GridDomain> domain,
                              const SolverConfig& config, const GridField* initial) {
    config.validate();
    validate_problem(spec, *domain);

    std::vector<double> rhs(static_cast<size_t>(domain->box_size()), 0.0);
    std::vector<double> lower(static_cast<size_t>(domain->box_size()), 0.0);
    for (int64_t lin : domain->interior_list()) {
        const Vec x = domain->point(lin);
        rhs[static_cast<size_t>(lin)] = spec.source(x);
        lower[static_cast<size_t>(lin)] = spec.obstacle(x);
    }

    GridField u = initial ? *initial : default_initial(spec, domain);
    impose_ring(u, spec);
    for (int64_t lin : domain->interior_list())
        u[lin] = std::max(u[lin], lower[static_cast<size_t>(lin)]);

    const std::vector<double> mask = interior_mask(*domain);
    MarchResult mr = march(spec, domain, u.values(), rhs, mask, &lower, config);

    SolverReport rep{std::move(u), {}, {}, 0.0, false, 0, {}};
    rep.residual_history.push_back(mr.residual);
    rep.epsilon_used = 0.0;
    rep.converged = mr.converged;
    rep.wall_iterations = mr.iterations;
    rep.kernel_isa = mr.isa;
    return rep;
}

SolverReport solve(const ProblemSpec& spec, std::shared_ptr<const GridDomain> domain,
                   const SolverConfig& config, const GridField* initial) {
    if (config.backend == SolverBackend::Projection)
        return projection_solve(spec, domain, config, initial);
    const PenaltyProfile profile =
        make_profile(spec, *domain, config.epsilon_schedule.front());
    return outer_fixed_point(spec, domain, profile, config, initial);
}

GridField prolong(const GridField& coarse, std::shared_ptr<const GridDomain> fine) {
    const GridDomain& cd = coarse.domain();
    const GridDomain& fd = *fine;
    if (cd.dim() != fd.dim() || cd.radius() != fd.radius())
        throw std::invalid_argument("prolong: lattices describe different balls");

    const double hc = cd.spacing();
    GridField out(fine);
    std::vector<int64_t> stored = fd.interior_list();
    stored.insert(stored.end(), fd.ring_list().begin(), fd.ring_list().end());
    for (int64_t lin : stored) {
        const Vec x = fd.point(lin);
        // Base corner of the coarse cell containing x, clamped into the box.
        std::array<int64_t, 3> base{0, 0, 0};
        std::array<double, 3> w{0.0, 0.0, 0.0};
        for (int k = 0; k < fd.dim(); ++k) {
            double t = std::floor(x[k] / hc);
            t = std::clamp(t, -static_cast<double>(cd.half_width()),
                           static_cast<double>(cd.half_width() - 1));
            base[static_cast<size_t>(k)] = static_cast<int64_t>(t);
            w[static_cast<size_t>(k)] = x[k] / hc - t;
        }
        double acc = 0.0, wsum = 0.0;
        const int corners = 1 << fd.dim();
        for (int c = 0; c < corners; ++c) {
            double cw = 1.0;
            std::array<int64_t, 3> idx = base;
            for (int k = 0; k < fd.dim(); ++k) {
                const int bit = (c >> k) & 1;
                idx[static_cast<size_t>(k)] += bit;
                cw *= bit ? w[static_cast<size_t>(k)] : 1.0 - w[static_cast<size_t>(k)];
            }
            const int64_t clin = cd.linear(idx[0], idx[1], idx[2]);
            if (!cd.is_stored(clin) || cw == 0.0) continue;  // corner outside the ball
            acc += cw * coarse[clin];
            wsum += cw;
        }
        out[lin] = wsum > 0.0 ? acc / wsum : 0.0;
    }
    return out;
}

SolverReport solve_cascade(const ProblemSpec& spec, int dim, double spacing,
                           double radius, const SolverConfig& config, int levels) {
    if (levels < 1) throw std::invalid_argument("cascade needs at least one level");
    std::optional<SolverReport> rep;
    int64_t total_iters = 0;
    for (int level = levels - 1; level >= 0; --level) {
        const double h = spacing * static_cast<double>(int64_t{1} << level);
        auto dom = std::make_shared<GridDomain>(build_domain(dim, h, radius));
        if (rep) {
            GridField init = prolong(rep->solution, dom);
            rep = solve(spec, dom, config, &init);
        } else {
            rep = solve(spec, dom, config, nullptr);
        }
        total_iters += rep->wall_iterations;
    }
    rep->wall_iterations = total_iters;
    return std::move(*rep);
}

GridField residual_field(const ProblemSpec& spec,
                         std::shared_ptr<const GridDomain> domain, const GridField& u,
                         const SolverConfig& config, const PenaltyProfile* profile) {
    const GridDomain& dom = *domain;
    const double h = dom.spacing();
    const double gf = config.grad_floor_for(h);
    const double tol_contact = std::max(config.tol_inner, h * h);

    GridField out(domain);
    for (int64_t lin : dom.interior_list()) {
        const Vec x = dom.point(lin);
        const HessianSample hs = discrete_hessian(u, lin);
        double factor = 1.0;
        const double w = node_value(spec, x, hs, gf, &factor);
        const double s = u[lin] - spec.obstacle(x);
        const double rhs = profile
                               ? spec.source(x) * phi_eps(*profile, s) + profile->shift()
                               : (s > tol_contact ? spec.source(x) : 0.0);
        out[lin] = w - rhs;
    }
    return out;
}

}  // namespace obslab
