#include <cmath>

#include "obslab/simd/kernels.hpp"

namespace obslab::simd {

namespace {

#include "sweep_node.inl"

template <int DIM, int GK>
double sweep_scalar(const double* u, const double* rhs, const double* mask,
                    double* unew, int64_t begin, int32_t count, const SweepParams& p) {
    double rmax = 0.0;
    for (int64_t i = begin; i < begin + count; ++i)
        rmax = std::max(rmax, sweep_node<DIM, GK>(u, rhs, mask, unew, i, p));
    return rmax;
}

double max_abs_diff_scalar(const double* a, const double* b, const double* mask, int64_t n) {
    double m = 0.0;
    for (int64_t i = 0; i < n; ++i) m = std::max(m, mask[i] * std::abs(a[i] - b[i]));
    return m;
}

void clamp_scalar(double* u, const double* lower, const double* mask, int64_t n) {
    for (int64_t i = 0; i < n; ++i)
        if (mask[i] != 0.0 && u[i] < lower[i]) u[i] = lower[i];
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {
        {{sweep_scalar<1, 0>, sweep_scalar<1, 1>, sweep_scalar<1, 2>, sweep_scalar<1, 3>},
         {sweep_scalar<2, 0>, sweep_scalar<2, 1>, sweep_scalar<2, 2>, sweep_scalar<2, 3>},
         {sweep_scalar<3, 0>, sweep_scalar<3, 1>, sweep_scalar<3, 2>, sweep_scalar<3, 3>}},
        max_abs_diff_scalar,
        clamp_scalar,
        "scalar",
    };
    return k;
}

int gamma_slot(double gamma) {
    if (gamma == 0.0) return 0;
    if (gamma == 1.0) return 1;
    if (gamma == 2.0) return 2;
    return 3;
}

}  // namespace obslab::simd
