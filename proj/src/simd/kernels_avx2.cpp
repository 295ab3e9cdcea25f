#include <cmath>

#include "obslab/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace obslab::simd {

namespace {

#include "sweep_node.inl"

// Vector body mirrors sweep_node's expression tree lane for lane; no FMA so
// the scalar and vector lanes agree bitwise.
template <int DIM, int GK>
double sweep_avx2(const double* u, const double* rhs, const double* mask,
                  double* unew, int64_t begin, int32_t count, const SweepParams& p) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d inv_h2 = _mm256_set1_pd(p.inv_h2);
    const __m256d inv_2h = _mm256_set1_pd(p.inv_2h);
    const __m256d gf2 = _mm256_set1_pd(p.grad_floor2);
    const __m256d dt_base = _mm256_set1_pd(p.dt_base);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

    __m256d rmax = _mm256_setzero_pd();
    int64_t i = begin;
    const int64_t vend = begin + (count & ~3);
    for (; i < vend; i += 4) {
        const __m256d uc = _mm256_loadu_pd(u + i);
        const __m256d uxp = _mm256_loadu_pd(u + i + 1);
        const __m256d uxm = _mm256_loadu_pd(u + i - 1);

        __m256d lap = _mm256_mul_pd(
            _mm256_add_pd(_mm256_sub_pd(uxp, _mm256_mul_pd(two, uc)), uxm), inv_h2);
        __m256d gx = _mm256_mul_pd(_mm256_sub_pd(uxp, uxm), inv_2h);
        __m256d g2 = _mm256_mul_pd(gx, gx);
        if constexpr (DIM >= 2) {
            const __m256d uyp = _mm256_loadu_pd(u + i + p.sy);
            const __m256d uym = _mm256_loadu_pd(u + i - p.sy);
            lap = _mm256_add_pd(
                lap, _mm256_mul_pd(
                         _mm256_add_pd(_mm256_sub_pd(uyp, _mm256_mul_pd(two, uc)), uym),
                         inv_h2));
            const __m256d gy = _mm256_mul_pd(_mm256_sub_pd(uyp, uym), inv_2h);
            g2 = _mm256_add_pd(g2, _mm256_mul_pd(gy, gy));
        }
        if constexpr (DIM >= 3) {
            const __m256d uzp = _mm256_loadu_pd(u + i + p.sz);
            const __m256d uzm = _mm256_loadu_pd(u + i - p.sz);
            lap = _mm256_add_pd(
                lap, _mm256_mul_pd(
                         _mm256_add_pd(_mm256_sub_pd(uzp, _mm256_mul_pd(two, uc)), uzm),
                         inv_h2));
            const __m256d gz = _mm256_mul_pd(_mm256_sub_pd(uzp, uzm), inv_2h);
            g2 = _mm256_add_pd(g2, _mm256_mul_pd(gz, gz));
        }
        g2 = _mm256_add_pd(g2, gf2);

        __m256d factor;
        if constexpr (GK == 0)
            factor = one;
        else if constexpr (GK == 1)
            factor = _mm256_sqrt_pd(g2);
        else
            factor = g2;  // GK == 2; the generic exponent stays scalar

        const __m256d r =
            _mm256_sub_pd(_mm256_mul_pd(factor, lap), _mm256_loadu_pd(rhs + i));
        const __m256d dt = _mm256_div_pd(dt_base, _mm256_add_pd(factor, one));
        const __m256d mk = _mm256_loadu_pd(mask + i);
        _mm256_storeu_pd(unew + i,
                         _mm256_add_pd(uc, _mm256_mul_pd(mk, _mm256_mul_pd(dt, r))));
        rmax = _mm256_max_pd(rmax, _mm256_mul_pd(mk, _mm256_and_pd(r, absmask)));
    }

    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, rmax);
    double out = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < begin + count; ++i)
        out = std::max(out, sweep_node<DIM, GK>(u, rhs, mask, unew, i, p));
    return out;
}

double max_abs_diff_avx2(const double* a, const double* b, const double* mask, int64_t n) {
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d vmax = _mm256_setzero_pd();
    int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        vmax = _mm256_max_pd(
            vmax, _mm256_mul_pd(_mm256_loadu_pd(mask + i), _mm256_and_pd(d, absmask)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vmax);
    double out = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) out = std::max(out, mask[i] * std::abs(a[i] - b[i]));
    return out;
}

void clamp_avx2(double* u, const double* lower, const double* mask, int64_t n) {
    int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d uv = _mm256_loadu_pd(u + i);
        const __m256d lo = _mm256_loadu_pd(lower + i);
        const __m256d mk = _mm256_cmp_pd(_mm256_loadu_pd(mask + i), _mm256_setzero_pd(),
                                         _CMP_NEQ_OQ);
        const __m256d clamped = _mm256_max_pd(uv, lo);
        _mm256_storeu_pd(u + i, _mm256_blendv_pd(uv, clamped, mk));
    }
    for (; i < n; ++i)
        if (mask[i] != 0.0 && u[i] < lower[i]) u[i] = lower[i];
}

}  // namespace

const Kernels* avx2_kernel_table() {
    static const Kernels k = {
        {{sweep_avx2<1, 0>, sweep_avx2<1, 1>, sweep_avx2<1, 2>, nullptr},
         {sweep_avx2<2, 0>, sweep_avx2<2, 1>, sweep_avx2<2, 2>, nullptr},
         {sweep_avx2<3, 0>, sweep_avx2<3, 1>, sweep_avx2<3, 2>, nullptr}},
        max_abs_diff_avx2,
        clamp_avx2,
        "avx2",
    };
    return &k;
}

}  // namespace obslab::simd

#endif  // x86_64
