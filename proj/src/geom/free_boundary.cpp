#include "obslab/geom/free_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "obslab/ops/stencil.hpp"

namespace obslab {

FreeBoundaryReport extract_free_boundary(const GridField& u, const GridField& phi,
                                         double tol_contact) {
    const GridDomain& dom = u.domain();
    if (!phi.domain().same_layout(dom))
        throw std::invalid_argument("fields live on different lattices");

    FreeBoundaryReport rep;
    rep.tol_contact = tol_contact;
    std::vector<char> on_contact(static_cast<size_t>(dom.box_size()), 0);
    for (int64_t lin : dom.interior_list())
        if (u[lin] - phi[lin] <= tol_contact) {
            on_contact[static_cast<size_t>(lin)] = 1;
            rep.contact_nodes.push_back(lin);
        }
    for (int64_t lin : rep.contact_nodes) {
        bool edge = false;
        for (int k = 0; k < dom.dim() && !edge; ++k) {
            const int64_t s = dom.stride(k);
            for (int64_t nb : {lin + s, lin - s})
                if (dom.is_interior(nb) && !on_contact[static_cast<size_t>(nb)]) {
                    edge = true;
                    break;
                }
        }
        if (edge) rep.fb_nodes.push_back(lin);
    }
    return rep;
}

std::vector<double> FitWindow::radii(double h) const {
    if (!(r_max > 0.0)) throw std::invalid_argument("fit window needs r_max > 0");
    const double lo = std::max(r_min, 4.0 * h);
    std::vector<double> out;
    for (double r = r_max; r >= lo * (1.0 - 1e-12); r *= 0.5) out.push_back(r);
    return out;
}

namespace {

/// Radii from the window that stay at least their own length away from the
/// outer sphere (the sup must not touch the boundary ring's data).
std::vector<double> usable_radii(const FitWindow& window, const GridDomain& dom,
                                 const Vec& center) {
    const double reach = (dom.radius() - center.norm()) / 2.0;
    std::vector<double> out;
    for (double r : window.radii(dom.spacing()))
        if (r <= reach * (1.0 + 1e-12)) out.push_back(r);
    return out;
}

LogLogFit fit_or_throw(const std::vector<double>& rs, const std::vector<double>& ss) {
    if (rs.size() < 4)
        throw std::invalid_argument(
            "exponent fit: fewer than 4 usable radii (sup below the discretization "
            "floor or window too narrow)");
    return fit_loglog(rs, ss);
}

}  // namespace

LogLogFit growth_exponent_at(const GridField& u, const GridField& phi, int64_t x0,
                             const FitWindow& window, GradientSource source) {
    const GridDomain& dom = u.domain();
    const Vec center = dom.point(x0);
    const double floor = window.floor_multiple * dom.spacing() * dom.spacing();

    AffineRef ref;
    ref.c0 = u[x0];
    ref.grad = discrete_gradient(source == GradientSource::Obstacle ? phi : u, x0);
    ref.center = center;

    std::vector<double> rs, ss;
    for (double r : usable_radii(window, dom, center)) {
        const double s = sup_over_ball(u, center, r, ref).value;
        if (s >= floor) {
            rs.push_back(r);
            ss.push_back(s);
        }
    }
    return fit_or_throw(rs, ss);
}

LogLogFit detach_rate_at(const GridField& u, const GridField& phi, int64_t x0,
                         const FitWindow& window) {
    const GridDomain& dom = u.domain();
    const Vec center = dom.point(x0);
    const double floor = window.floor_multiple * dom.spacing() * dom.spacing();

    std::vector<double> rs, ss;
    for (double r : usable_radii(window, dom, center)) {
        double s = -std::numeric_limits<double>::infinity();
        const double r2 = r * r;
        for (int64_t lin : dom.interior_list()) {
            if ((dom.point(lin) - center).norm2() > r2) continue;
            s = std::max(s, u[lin] - phi[lin]);
        }
        if (s >= floor) {
            rs.push_back(r);
            ss.push_back(s);
        }
    }
    return fit_or_throw(rs, ss);
}

LogLogFit gradient_growth_at(const GridField& u, int64_t x0, const FitWindow& window,
                             GradientSource source, const GridField* phi) {
    const GridDomain& dom = u.domain();
    const Vec center = dom.point(x0);
    const double floor = window.floor_multiple * dom.spacing() * dom.spacing();

    if (source == GradientSource::Obstacle && phi == nullptr)
        throw std::invalid_argument("gradient growth: obstacle field required");
    const Vec g0 = discrete_gradient(source == GradientSource::Obstacle ? *phi : u, x0);

    std::vector<double> rs, ss;
    for (double r : usable_radii(window, dom, center)) {
        double s = 0.0;
        const double r2 = r * r;
        for (int64_t lin : dom.interior_list()) {
            if ((dom.point(lin) - center).norm2() > r2) continue;
            s = std::max(s, (discrete_gradient(u, lin) - g0).norm());
        }
        if (s >= floor) {
            rs.push_back(r);
            ss.push_back(s);
        }
    }
    return fit_or_throw(rs, ss);
}

std::vector<double> nondegeneracy_profile(const GridField& u, const GridField& phi,
                                          int64_t x0, const std::vector<double>& radii,
                                          double exponent) {
    const GridDomain& dom = u.domain();
    const Vec center = dom.point(x0);
    std::vector<double> out;
    out.reserve(radii.size());
    for (double r : radii) {
        const double s = sup_over_sphere(u, center, r).value - phi[x0];
        out.push_back(s / std::pow(r, exponent));
    }
    return out;
}

PorosityEstimate porosity_estimate(const std::vector<int64_t>& fb_nodes,
                                   std::shared_ptr<const GridDomain> domain,
                                   const std::vector<double>& sample_radii) {
    const GridDomain& dom = *domain;
    if (fb_nodes.empty())
        throw std::invalid_argument("porosity: free boundary is empty");

    std::vector<double> usable;
    for (double r : sample_radii)
        if (r >= 4.0 * dom.spacing()) usable.push_back(r);
    if (usable.empty())
        throw std::invalid_argument("porosity: every sample radius is below 4h");

    // Distance transform to the free boundary over all stored nodes.
    std::vector<double> dist(static_cast<size_t>(dom.box_size()),
                             std::numeric_limits<double>::infinity());
    std::vector<Vec> fb_points;
    fb_points.reserve(fb_nodes.size());
    for (int64_t lin : fb_nodes) fb_points.push_back(dom.point(lin));
    auto fill = [&](const std::vector<int64_t>& list) {
        for (int64_t lin : list) {
            const Vec x = dom.point(lin);
            double best = std::numeric_limits<double>::infinity();
            for (const Vec& y : fb_points) best = std::min(best, (x - y).norm2());
            dist[static_cast<size_t>(lin)] = std::sqrt(best);
        }
    };
    fill(dom.interior_list());
    fill(dom.ring_list());

    // Sample centers: every free boundary node up to a deterministic cap.
    const size_t cap = 64;
    const size_t stride = std::max<size_t>(1, fb_nodes.size() / cap);

    PorosityEstimate est;
    est.sigma_hat = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < fb_nodes.size(); i += stride) {
        const Vec x = dom.point(fb_nodes[i]);
        for (double r : usable) {
            double best = 0.0;
            const int64_t reach = static_cast<int64_t>(std::ceil(r / dom.spacing()));
            const auto mi = dom.multi_index(fb_nodes[i]);
            const int64_t m = dom.half_width();
            const int64_t lo0 = std::max(mi[0] - reach, -m), hi0 = std::min(mi[0] + reach, m);
            const int64_t lo1 = dom.dim() >= 2 ? std::max(mi[1] - reach, -m) : 0;
            const int64_t hi1 = dom.dim() >= 2 ? std::min(mi[1] + reach, m) : 0;
            const int64_t lo2 = dom.dim() >= 3 ? std::max(mi[2] - reach, -m) : 0;
            const int64_t hi2 = dom.dim() >= 3 ? std::min(mi[2] + reach, m) : 0;
            for (int64_t a = lo0; a <= hi0; ++a)
                for (int64_t b = lo1; b <= hi1; ++b)
                    for (int64_t c = lo2; c <= hi2; ++c) {
                        const int64_t lin = dom.linear(a, b, c);
                        if (!dom.is_stored(lin)) continue;
                        const double d = (dom.point(lin) - x).norm();
                        if (d > r) continue;
                        best = std::max(
                            best, std::min(dist[static_cast<size_t>(lin)], r - d));
                    }
            est.sigma_hat = std::min(est.sigma_hat, best / r);
        }
    }
    const double r_big = *std::max_element(usable.begin(), usable.end());
    est.non_porous = est.sigma_hat <= 2.0 * dom.spacing() / r_big;
    return est;
}

LogLogFit box_dimension(const std::vector<int64_t>& fb_nodes,
                        std::shared_ptr<const GridDomain> domain,
                        const std::vector<double>& scales) {
    const GridDomain& dom = *domain;
    const double h = dom.spacing();
    const double half2 = 0.25 * dom.radius() * dom.radius();

    std::vector<double> inv_s, counts;
    for (double s : scales) {
        const int64_t k = static_cast<int64_t>(std::llround(s / h));
        if (k < 1 || std::abs(k * h - s) > 1e-9 * s)
            throw std::invalid_argument("box size must be a positive multiple of h");
        std::unordered_set<int64_t> boxes;
        for (int64_t lin : fb_nodes) {
            if (dom.point(lin).norm2() > half2) continue;
            const auto mi = dom.multi_index(lin);
            const int64_t m = dom.half_width();
            int64_t key = 0;
            for (int d = 0; d < dom.dim(); ++d)
                key = key * (2 * m / k + 3) + (mi[static_cast<size_t>(d)] + m) / k;
            boxes.insert(key);
        }
        if (boxes.empty()) continue;  // free boundary misses the half ball
        inv_s.push_back(1.0 / s);
        counts.push_back(static_cast<double>(boxes.size()));
    }
    if (inv_s.size() < 4)
        throw std::invalid_argument("box dimension: need at least 4 usable scales");
    return fit_loglog(inv_s, counts);
}

}  // namespace obslab
