#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "obslab/core/domain.hpp"

namespace obslab {

using ScalarFn = std::function<double(const Vec&)>;

/// One scalar per stored node (interior and boundary ring), kept on the dense
/// bounding box of the domain. Exterior cells are zero and never read.
class GridField {
public:
    explicit GridField(std::shared_ptr<const GridDomain> domain, double fill = 0.0);

    const GridDomain& domain() const { return *domain_; }
    std::shared_ptr<const GridDomain> domain_ptr() const { return domain_; }

    double operator[](int64_t lin) const { return values_[static_cast<size_t>(lin)]; }
    double& operator[](int64_t lin) { return values_[static_cast<size_t>(lin)]; }
    double at(const Vec& p) const { return values_[static_cast<size_t>(domain_->nearest(p))]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Max of |values| over interior + ring.
    double sup_norm() const;
    /// Max of |this - other| over interior + ring; domains must share layout.
    double sup_diff(const GridField& other) const;
    /// True when every stored value is finite.
    bool all_finite() const;

    GridField& operator+=(double s);
    GridField& operator-=(const GridField& other);

private:
    std::shared_ptr<const GridDomain> domain_;
    std::vector<double> values_;
};

/// Samples a scalar function at every stored node; throws on a non-finite
/// value.
GridField sample(const ScalarFn& fn, std::shared_ptr<const GridDomain> domain);

/// Affine reference plane c0 + g . (x - center), the tangent-plane object of
/// the growth measurements.
struct AffineRef {
    double c0{0.0};
    Vec grad{};
    Vec center{};

    double operator()(const Vec& x) const { return c0 + grad.dot(x - center); }
};

struct SupResult {
    double value{0.0};
    int64_t arg_node{-1};
};

/// Max over stored nodes x with |x - center| <= r of |field(x) - ref(x)|.
/// Throws when no node lies in the ball.
SupResult sup_over_ball(const GridField& field, const Vec& center, double r, const AffineRef& ref);

/// Max of the field over the discrete sphere: nodes with
/// r - h/2 < |x - center| <= r + h/2. Throws when the annulus is empty.
SupResult sup_over_sphere(const GridField& field, const Vec& center, double r);

}  // namespace obslab
