#include "obslab/simd/kernels.hpp"

namespace obslab::simd {

#if defined(__x86_64__) || defined(_M_X64)
const Kernels* avx2_kernel_table();  // defined in the AVX2 translation unit

bool avx2_available() { return __builtin_cpu_supports("avx2") != 0; }

namespace {
Kernels merge_with_scalar(const Kernels& vec) {
    Kernels out = vec;
    const Kernels& ref = scalar_kernels();
    for (int d = 0; d < 3; ++d)
        for (int g = 0; g < 4; ++g)
            if (out.sweep[d][g] == nullptr) out.sweep[d][g] = ref.sweep[d][g];
    return out;
}
}  // namespace

const Kernels& active_kernels() {
    static const Kernels chosen =
        avx2_available() ? merge_with_scalar(*avx2_kernel_table()) : scalar_kernels();
    return chosen;
}
#else
bool avx2_available() { return false; }

const Kernels& active_kernels() { return scalar_kernels(); }
#endif

}  // namespace obslab::simd
