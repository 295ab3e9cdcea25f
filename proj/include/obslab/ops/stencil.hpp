#pragma once

#include "obslab/core/field.hpp"
#include "obslab/ops/matrix.hpp"

namespace obslab {

/// Central-difference derivative sample at an interior node.
struct HessianSample {
    Vec grad;
    SymMat hess;
    std::array<double, 3> eigenvalues{0.0, 0.0, 0.0};  // ascending, first n valid
};

/// Componentwise (u(x + h e_k) - u(x - h e_k)) / (2h). Node must be interior.
Vec discrete_gradient(const GridField& field, int64_t node);

/// Second central differences on the diagonal, four-point diagonal formula for
/// mixed entries; eigenvalues by the closed-form symmetric solver.
HessianSample discrete_hessian(const GridField& field, int64_t node);

}  // namespace obslab
