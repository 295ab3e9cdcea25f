#pragma once

#include <cstdint>

namespace obslab::simd {

/// Geometry and coefficients for one damped pseudo-time sweep of the
/// degenerate trace-operator equation on the dense box layout.
///
/// Per node: factor = (|grad u|^2 + grad_floor2)^(gamma/2),
///           r      = factor * lap_h(u) - rhs,
///           dt     = dt_base / (factor + 1),
///           unew   = u + mask * dt * r,
/// with dt_base = c_dt h^2 / (n Lambda) folded in by the caller. Returns the
/// masked max |r| over the run.
struct SweepParams {
    double inv_h2{0.0};
    double inv_2h{0.0};
    double grad_floor2{0.0};
    double gamma{0.0};  // used by the generic-exponent kernel only
    double dt_base{0.0};
    int64_t sy{0};
    int64_t sz{0};
};

using SweepFn = double (*)(const double* u, const double* rhs, const double* mask,
                           double* unew, int64_t begin, int32_t count,
                           const SweepParams& p);
using MaxAbsDiffFn = double (*)(const double* a, const double* b, const double* mask,
                                int64_t n);
using ClampFn = void (*)(double* u, const double* lower, const double* mask, int64_t n);

/// Kernel table: sweep[dim-1][g] with g = 0, 1, 2 for gamma in {0, 1, 2} and
/// g = 3 for the generic-exponent fallback (always scalar).
struct Kernels {
    SweepFn sweep[3][4];
    MaxAbsDiffFn max_abs_diff;
    ClampFn clamp_to_lower;
    const char* isa;
};

const Kernels& scalar_kernels();
bool avx2_available();
/// Best kernel set for this machine, chosen once at first use.
const Kernels& active_kernels();

/// Index into the sweep table for a gamma value (3 = generic).
int gamma_slot(double gamma);

}  // namespace obslab::simd
