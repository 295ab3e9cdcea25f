#include "obslab/core/domain.hpp"

#include <cmath>

namespace obslab {

double Vec::norm() const { return std::sqrt(norm2()); }

namespace {

// Exact-ish ball membership: when R/h is an integer Q, |i|^2 h^2 <= R^2 is
// the integer test s <= Q^2; otherwise fall back to a guarded double compare.
struct BallTest {
    bool integer_mode{false};
    int64_t q2{0};
    double r2{0.0};
    double h2{0.0};

    BallTest(double h, double radius) {
        const double q = radius / h;
        const double qr = std::round(q);
        if (std::abs(q - qr) < 1e-9 * std::max(1.0, q)) {
            integer_mode = true;
            q2 = static_cast<int64_t>(qr) * static_cast<int64_t>(qr);
        }
        r2 = radius * radius;
        h2 = h * h;
    }

    bool inside_closed(int64_t s) const {
        if (integer_mode) return s <= q2;
        return static_cast<double>(s) * h2 <= r2 * (1.0 + 1e-12);
    }
    bool inside_open(int64_t s) const {
        if (integer_mode) return s < q2;
        return static_cast<double>(s) * h2 < r2 * (1.0 - 1e-12);
    }
};

}  // namespace

GridDomain::GridDomain(int dim, double spacing, double radius)
    : dim_(dim), h_(spacing), radius_(radius) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("GridDomain: dim must be 1, 2 or 3");
    if (!(spacing > 0.0) || !(radius > 0.0))
        throw std::invalid_argument("GridDomain: spacing and radius must be positive");

    const double sqrtn = std::sqrt(static_cast<double>(dim));
    ring_width_ = sqrtn * h_;
    m_ = static_cast<int64_t>(std::ceil((radius_ + ring_width_) / h_ - 1e-12));
    width_ = 2 * m_ + 1;
    box_size_ = width_;
    for (int k = 1; k < dim_; ++k) box_size_ *= width_;
    strides_ = {1, width_, width_ * width_};

    const BallTest ball(h_, radius_);
    // ring outer limit (R + sqrt(n) h)^2 in units of h^2
    const double outer2 = (radius_ + ring_width_) * (radius_ + ring_width_) / (h_ * h_);

    cls_.assign(static_cast<size_t>(box_size_), NodeClass::Exterior);

    const int64_t jm = (dim_ >= 2) ? m_ : 0;
    const int64_t km = (dim_ >= 3) ? m_ : 0;
    for (int64_t k = -km; k <= km; ++k) {
        for (int64_t j = -jm; j <= jm; ++j) {
            for (int64_t i = -m_; i <= m_; ++i) {
                const int64_t s = i * i + j * j + k * k;
                const int64_t lin = linear(i, j, k);
                if (ball.inside_open(s)) {
                    cls_[static_cast<size_t>(lin)] = NodeClass::Interior;
                    interior_.push_back(lin);
                    ++ball_count_;
                } else if (static_cast<double>(s) <= outer2 * (1.0 + 1e-12)) {
                    cls_[static_cast<size_t>(lin)] = NodeClass::Ring;
                    ring_.push_back(lin);
                    ++ring_count_;
                    if (ball.inside_closed(s)) ++ball_count_;  // sphere node
                }
            }
        }
    }

    // Interior row spans along the innermost axis.
    for (size_t a = 0; a < interior_.size();) {
        RowSpan span{interior_[a], 1};
        size_t b = a + 1;
        while (b < interior_.size() && interior_[b] == interior_[b - 1] + 1) {
            ++span.count;
            ++b;
        }
        spans_.push_back(span);
        a = b;
    }
}

Vec GridDomain::point(int64_t lin) const {
    const auto mi = multi_index(lin);
    Vec p;
    p.n = dim_;
    for (int k = 0; k < dim_; ++k) p[k] = static_cast<double>(mi[static_cast<size_t>(k)]) * h_;
    return p;
}

std::array<int64_t, 3> GridDomain::multi_index(int64_t lin) const {
    std::array<int64_t, 3> mi{0, 0, 0};
    mi[0] = lin % width_ - m_;
    if (dim_ >= 2) mi[1] = (lin / width_) % width_ - m_;
    if (dim_ >= 3) mi[2] = lin / (width_ * width_) - m_;
    return mi;
}

int64_t GridDomain::linear(int64_t i, int64_t j, int64_t k) const {
    int64_t lin = i + m_;
    if (dim_ >= 2) lin += (j + m_) * width_;
    if (dim_ >= 3) lin += (k + m_) * width_ * width_;
    return lin;
}

int64_t GridDomain::nearest(const Vec& p) const {
    std::array<int64_t, 3> mi{0, 0, 0};
    for (int k = 0; k < dim_; ++k) {
        mi[static_cast<size_t>(k)] = static_cast<int64_t>(std::llround(p[k] / h_));
        if (std::llabs(mi[static_cast<size_t>(k)]) > m_)
            throw std::invalid_argument("GridDomain::nearest: point outside bounding box");
    }
    return linear(mi[0], mi[1], mi[2]);
}

bool GridDomain::is_node(const Vec& p, double tol) const {
    for (int k = 0; k < dim_; ++k) {
        const double q = p[k] / h_;
        if (std::abs(q - std::round(q)) > tol) return false;
        if (std::abs(q) > static_cast<double>(m_) + 0.5) return false;
    }
    return true;
}

GridDomain build_domain(int dim, double spacing, double radius) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("build_domain: dim must be 1, 2 or 3");
    const double coarse_limit = (dim == 1) ? radius / 2.0 : radius / 4.0;
    if (!(spacing > 0.0) || spacing > coarse_limit * (1.0 + 1e-12))
        throw std::invalid_argument("build_domain: spacing too coarse for a stencil on this ball");

    GridDomain dom(dim, spacing, radius);
    if (dom.interior_count() == 0)
        throw std::invalid_argument("build_domain: empty interior node set");

    // Stencil invariant: every axis and diagonal neighbor of an interior node
    // is stored (interior or ring).
    for (int64_t lin : dom.interior_list()) {
        const auto mi = dom.multi_index(lin);
        const int64_t dj = (dim >= 2) ? 1 : 0;
        const int64_t dk = (dim >= 3) ? 1 : 0;
        for (int64_t ck = -dk; ck <= dk; ++ck)
            for (int64_t cj = -dj; cj <= dj; ++cj)
                for (int64_t ci = -1; ci <= 1; ++ci) {
                    const int64_t nb = dom.linear(mi[0] + ci, mi[1] + cj, mi[2] + ck);
                    if (!dom.is_stored(nb))
                        throw std::invalid_argument(
                            "build_domain: incomplete stencil near the boundary");
                }
    }
    return dom;
}

}  // namespace obslab
