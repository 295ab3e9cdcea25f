// Shared per-node update body. Both the scalar kernels and the vector
// kernels' remainder loops use this exact expression tree, so the lanes can
// be compared bitwise in the equivalence tests.

template <int DIM, int GK>
inline double sweep_node(const double* u, const double* rhs, const double* mask,
                         double* unew, int64_t i, const obslab::simd::SweepParams& p) {
    const double uc = u[i];
    double lap = (u[i + 1] - 2.0 * uc + u[i - 1]) * p.inv_h2;
    double gx = (u[i + 1] - u[i - 1]) * p.inv_2h;
    double g2 = gx * gx;
    if constexpr (DIM >= 2) {
        lap += (u[i + p.sy] - 2.0 * uc + u[i - p.sy]) * p.inv_h2;
        const double gy = (u[i + p.sy] - u[i - p.sy]) * p.inv_2h;
        g2 += gy * gy;
    }
    if constexpr (DIM >= 3) {
        lap += (u[i + p.sz] - 2.0 * uc + u[i - p.sz]) * p.inv_h2;
        const double gz = (u[i + p.sz] - u[i - p.sz]) * p.inv_2h;
        g2 += gz * gz;
    }
    g2 += p.grad_floor2;

    double factor;
    if constexpr (GK == 0)
        factor = 1.0;
    else if constexpr (GK == 1)
        factor = std::sqrt(g2);
    else if constexpr (GK == 2)
        factor = g2;
    else
        factor = std::pow(g2, 0.5 * p.gamma);

    const double r = factor * lap - rhs[i];
    const double dt = p.dt_base / (factor + 1.0);
    unew[i] = uc + mask[i] * (dt * r);
    return mask[i] * std::abs(r);
}
