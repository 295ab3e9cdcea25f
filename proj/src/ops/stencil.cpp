#include "obslab/ops/stencil.hpp"

#include <stdexcept>

namespace obslab {

Vec discrete_gradient(const GridField& field, int64_t node) {
    const GridDomain& dom = field.domain();
    if (!dom.is_interior(node))
        throw std::invalid_argument("discrete_gradient: node must be interior");
    const double inv2h = 0.5 / dom.spacing();
    Vec g;
    g.n = dom.dim();
    for (int k = 0; k < dom.dim(); ++k) {
        const int64_t s = dom.stride(k);
        g[k] = (field[node + s] - field[node - s]) * inv2h;
    }
    return g;
}

HessianSample discrete_hessian(const GridField& field, int64_t node) {
    const GridDomain& dom = field.domain();
    if (!dom.is_interior(node))
        throw std::invalid_argument("discrete_hessian: node must be interior");
    const double h = dom.spacing();
    const double invh2 = 1.0 / (h * h);

    HessianSample out;
    out.grad = discrete_gradient(field, node);
    out.hess = SymMat(dom.dim());
    const double uc = field[node];
    for (int k = 0; k < dom.dim(); ++k) {
        const int64_t s = dom.stride(k);
        out.hess.set(k, k, (field[node + s] - 2.0 * uc + field[node - s]) * invh2);
        for (int l = k + 1; l < dom.dim(); ++l) {
            const int64_t t = dom.stride(l);
            const double mixed = (field[node + s + t] - field[node + s - t] -
                                  field[node - s + t] + field[node - s - t]) *
                                 (0.25 * invh2);
            out.hess.set(k, l, mixed);
        }
    }
    out.eigenvalues = sym_eigenvalues(out.hess);
    return out;
}

}  // namespace obslab
