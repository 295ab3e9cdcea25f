#include "obslab/core/field.hpp"

#include <cmath>
#include <stdexcept>

namespace obslab {

GridField::GridField(std::shared_ptr<const GridDomain> domain, double fill)
    : domain_(std::move(domain)),
      values_(static_cast<size_t>(domain_->box_size()), 0.0) {
    if (fill != 0.0) {
        for (int64_t lin : domain_->interior_list()) values_[static_cast<size_t>(lin)] = fill;
        for (int64_t lin : domain_->ring_list()) values_[static_cast<size_t>(lin)] = fill;
    }
}

double GridField::sup_norm() const {
    double s = 0.0;
    for (int64_t lin : domain_->interior_list()) s = std::max(s, std::abs(values_[static_cast<size_t>(lin)]));
    for (int64_t lin : domain_->ring_list()) s = std::max(s, std::abs(values_[static_cast<size_t>(lin)]));
    return s;
}

double GridField::sup_diff(const GridField& other) const {
    if (!domain_->same_layout(other.domain()))
        throw std::invalid_argument("GridField::sup_diff: domain layout mismatch");
    double s = 0.0;
    for (int64_t lin : domain_->interior_list())
        s = std::max(s, std::abs(values_[static_cast<size_t>(lin)] - other[lin]));
    for (int64_t lin : domain_->ring_list())
        s = std::max(s, std::abs(values_[static_cast<size_t>(lin)] - other[lin]));
    return s;
}

bool GridField::all_finite() const {
    for (int64_t lin : domain_->interior_list())
        if (!std::isfinite(values_[static_cast<size_t>(lin)])) return false;
    for (int64_t lin : domain_->ring_list())
        if (!std::isfinite(values_[static_cast<size_t>(lin)])) return false;
    return true;
}

GridField& GridField::operator+=(double s) {
    for (int64_t lin : domain_->interior_list()) values_[static_cast<size_t>(lin)] += s;
    for (int64_t lin : domain_->ring_list()) values_[static_cast<size_t>(lin)] += s;
    return *this;
}

GridField& GridField::operator-=(const GridField& other) {
    if (!domain_->same_layout(other.domain()))
        throw std::invalid_argument("GridField::operator-=: domain layout mismatch");
    for (int64_t lin : domain_->interior_list()) values_[static_cast<size_t>(lin)] -= other[lin];
    for (int64_t lin : domain_->ring_list()) values_[static_cast<size_t>(lin)] -= other[lin];
    return *this;
}

GridField sample(const ScalarFn& fn, std::shared_ptr<const GridDomain> domain) {
    GridField out(domain);
    auto fill = [&](int64_t lin) {
        const double v = fn(domain->point(lin));
        if (!std::isfinite(v))
            throw std::invalid_argument("sample: non-finite function value at a node");
        out[lin] = v;
    };
    for (int64_t lin : domain->interior_list()) fill(lin);
    for (int64_t lin : domain->ring_list()) fill(lin);
    return out;
}

namespace {

template <class Pred, class Score>
SupResult scan(const GridField& field, Pred&& keep, Score&& score) {
    const GridDomain& dom = field.domain();
    SupResult best;
    auto visit = [&](int64_t lin) {
        const Vec x = dom.point(lin);
        if (!keep(x)) return;
        const double v = score(lin, x);
        if (best.arg_node < 0 || v > best.value) {
            best.value = v;
            best.arg_node = lin;
        }
    };
    for (int64_t lin : dom.interior_list()) visit(lin);
    for (int64_t lin : dom.ring_list()) visit(lin);
    return best;
}

}  // namespace

SupResult sup_over_ball(const GridField& field, const Vec& center, double r, const AffineRef& ref) {
    const double r2 = r * r;
    SupResult best = scan(
        field,
        [&](const Vec& x) { return (x - center).norm2() <= r2 * (1.0 + 1e-12); },
        [&](int64_t lin, const Vec& x) { return std::abs(field[lin] - ref(x)); });
    if (best.arg_node < 0)
        throw std::invalid_argument("sup_over_ball: no nodes in the ball");
    return best;
}

SupResult sup_over_sphere(const GridField& field, const Vec& center, double r) {
    const double h = field.domain().spacing();
    if (r < h) throw std::invalid_argument("sup_over_sphere: radius below grid spacing");
    const double lo = r - 0.5 * h;
    const double hi = r + 0.5 * h;
    SupResult best = scan(
        field,
        [&](const Vec& x) {
            const double d = (x - center).norm();
            return d > lo && d <= hi * (1.0 + 1e-12);
        },
        [&](int64_t lin, const Vec&) { return field[lin]; });
    if (best.arg_node < 0)
        throw std::invalid_argument("sup_over_sphere: empty discrete sphere");
    return best;
}

}  // namespace obslab
