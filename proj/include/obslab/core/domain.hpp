#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace obslab {

/// Small fixed-capacity point/vector used for node coordinates and gradients.
struct Vec {
    int n{0};
    std::array<double, 3> c{0.0, 0.0, 0.0};

    Vec() = default;
    Vec(int dim, double x0, double x1 = 0.0, double x2 = 0.0) : n(dim), c{x0, x1, x2} {}

    double& operator[](int k) { return c[static_cast<size_t>(k)]; }
    double operator[](int k) const { return c[static_cast<size_t>(k)]; }

    double norm2() const { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2]; }
    double norm() const;

    friend Vec operator+(Vec a, const Vec& b) {
        for (int k = 0; k < a.n; ++k) a[k] += b[k];
        return a;
    }
    friend Vec operator-(Vec a, const Vec& b) {
        for (int k = 0; k < a.n; ++k) a[k] -= b[k];
        return a;
    }
    friend Vec operator*(double s, Vec a) {
        for (int k = 0; k < a.n; ++k) a[k] *= s;
        return a;
    }
    double dot(const Vec& b) const {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += c[static_cast<size_t>(k)] * b[k];
        return s;
    }
};

enum class NodeClass : uint8_t { Exterior = 0, Interior = 1, Ring = 2 };

/// Contiguous run of interior cells along the innermost (x) axis.
/// The hot solver kernels sweep these spans.
struct RowSpan {
    int64_t begin{0};  // linear index of first interior cell in the run
    int32_t count{0};
};

/// Uniform Cartesian lattice masked to a ball of radius `radius`, stored on a
/// dense bounding box so axis neighbors are at fixed strides.
///
/// Node classes:
///   interior: |x| < R (the PDE is discretized here),
///   ring:     R <= |x| <= R + sqrt(n) h (carries Dirichlet data; wide enough
///             that axis and diagonal stencils of interior nodes never leave
///             interior + ring).
/// Node coordinates are exactly i*h componentwise. Membership uses integer
/// comparisons whenever R/h is an integer, so node sets are reproducible.
class GridDomain {
public:
    GridDomain(int dim, double spacing, double radius);

    int dim() const { return dim_; }
    double spacing() const { return h_; }
    double radius() const { return radius_; }
    double ring_width() const { return ring_width_; }

    /// Cells per axis of the bounding box.
    int64_t width() const { return width_; }
    /// Total cells in the bounding box (W^n).
    int64_t box_size() const { return box_size_; }
    /// Half-width in index units: indices run over [-m, m] per axis.
    int64_t half_width() const { return m_; }

    int64_t interior_count() const { return static_cast<int64_t>(interior_.size()); }
    int64_t ring_count() const { return ring_count_; }
    /// Lattice points with |x| <= R (interior plus the sphere nodes).
    int64_t ball_node_count() const { return ball_count_; }

    NodeClass node_class(int64_t lin) const { return cls_[static_cast<size_t>(lin)]; }
    bool is_interior(int64_t lin) const { return cls_[static_cast<size_t>(lin)] == NodeClass::Interior; }
    bool is_stored(int64_t lin) const { return cls_[static_cast<size_t>(lin)] != NodeClass::Exterior; }

    const std::vector<int64_t>& interior_list() const { return interior_; }
    const std::vector<int64_t>& ring_list() const { return ring_; }
    const std::vector<RowSpan>& row_spans() const { return spans_; }

    /// Stride of axis k in the linear index (k = 0 is contiguous).
    int64_t stride(int k) const { return strides_[static_cast<size_t>(k)]; }

    Vec point(int64_t lin) const;
    /// Multi-index (i, j, k) in [-m, m]^n for a linear index.
    std::array<int64_t, 3> multi_index(int64_t lin) const;
    /// Linear index of multi-index; valid for any index inside the box.
    int64_t linear(int64_t i, int64_t j = 0, int64_t k = 0) const;

    /// Linear index of the lattice node nearest to p; throws if p falls
    /// outside the bounding box.
    int64_t nearest(const Vec& p) const;
    /// True if p coincides with a lattice node to within `tol` per component.
    bool is_node(const Vec& p, double tol = 1e-9) const;

    bool same_layout(const GridDomain& o) const {
        return dim_ == o.dim_ && h_ == o.h_ && radius_ == o.radius_;
    }

private:
    int dim_;
    double h_;
    double radius_;
    double ring_width_;
    int64_t m_;
    int64_t width_;
    int64_t box_size_;
    std::array<int64_t, 3> strides_{1, 0, 0};
    std::vector<NodeClass> cls_;
    std::vector<int64_t> interior_;
    std::vector<int64_t> ring_;
    std::vector<RowSpan> spans_;
    int64_t ring_count_{0};
    int64_t ball_count_{0};
};

/// Builds the lattice ball. Rejects unsupported dimensions and spacings too
/// coarse to carry a central-difference stencil (h <= R/2 in 1D, h <= R/4
/// otherwise), and verifies the stencil-completeness invariant.
GridDomain build_domain(int dim, double spacing, double radius);

}  // namespace obslab
