#include "kernels_internal.hpp"

#if OPTVAL_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <bit>

// Compiled for the baseline target; only the functions below carry
// target("avx2"), so nothing else in this TU (or inlined std code) can leak
// AVX2 instructions into paths that run on older CPUs.
#define OPTVAL_AVX2 __attribute__((target("avx2")))

namespace optval::kernels::detail {

OPTVAL_AVX2 void window_stats_avx2(std::span<const double> xs, std::size_t window, std::span<double> means,
                                   std::span<double> sds) {
    const std::size_t n = means.size();
    const double* x = xs.data();
    const __m256d len = _mm256_set1_pd(static_cast<double>(window));
    const __m256d dof = _mm256_set1_pd(static_cast<double>(window - 1));

    // Lane l of block k accumulates window k+l in the same order as the
    // scalar loop.
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d sum = _mm256_setzero_pd();
        for (std::size_t i = 0; i < window; ++i) sum = _mm256_add_pd(sum, _mm256_loadu_pd(x + k + i));
        const __m256d mean = _mm256_div_pd(sum, len);
        __m256d ss = _mm256_setzero_pd();
        for (std::size_t i = 0; i < window; ++i) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k + i), mean);
            ss = _mm256_add_pd(ss, _mm256_mul_pd(d, d));
        }
        _mm256_storeu_pd(means.data() + k, mean);
        if (window > 1) {
            _mm256_storeu_pd(sds.data() + k, _mm256_sqrt_pd(_mm256_div_pd(ss, dof)));
        } else {
            _mm256_storeu_pd(sds.data() + k, _mm256_setzero_pd());
        }
    }
    if (k < n) {
        window_stats_scalar(xs.subspan(k), window, means.subspan(k), sds.subspan(k));
    }
}

OPTVAL_AVX2 std::int64_t count_matches_avx2(std::span<const Band> bands, std::span<const int> cells,
                                            std::size_t n) {
    std::int64_t count = 0;
    const std::size_t d = bands.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d hit = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
        for (std::size_t j = 0; j < d; ++j) {
            const double p = cells[j];
            const __m256d vp = _mm256_set1_pd(p);
            const __m256d vp1 = _mm256_set1_pd(p + 1.0);
            const __m256d m = _mm256_loadu_pd(bands[j].m + k);
            const __m256d s = _mm256_loadu_pd(bands[j].s + k);
            const __m256d z = _mm256_loadu_pd(bands[j].z + k);
            const __m256d lower = _mm256_add_pd(m, _mm256_mul_pd(vp, s));
            const __m256d upper = _mm256_add_pd(m, _mm256_mul_pd(vp1, s));
            hit = _mm256_and_pd(hit, _mm256_cmp_pd(z, lower, _CMP_GE_OQ));
            hit = _mm256_and_pd(hit, _mm256_cmp_pd(z, upper, _CMP_LT_OQ));
        }
        count += std::popcount(static_cast<unsigned>(_mm256_movemask_pd(hit)));
    }
    for (; k < n; ++k) {
        bool hit = true;
        for (std::size_t j = 0; j < d && hit; ++j) {
            const double p = cells[j];
            const double lower = bands[j].m[k] + p * bands[j].s[k];
            const double upper = bands[j].m[k] + (p + 1.0) * bands[j].s[k];
            hit = bands[j].z[k] >= lower && bands[j].z[k] < upper;
        }
        count += hit ? 1 : 0;
    }
    return count;
}

OPTVAL_AVX2 void classify_avx2(const Band& band, int lo, int hi, std::size_t n, std::span<std::int32_t> out) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d m = _mm256_loadu_pd(band.m + k);
        const __m256d s = _mm256_loadu_pd(band.s + k);
        const __m256d z = _mm256_loadu_pd(band.z + k);
        std::int32_t cell[4] = {outside, outside, outside, outside};
        // Cells are disjoint, so at most one p matches per lane; walking down
        // keeps the lowest match like the scalar first-hit loop.
        for (int p = hi; p >= lo; --p) {
            const double dp = p;
            const __m256d lower = _mm256_add_pd(m, _mm256_mul_pd(_mm256_set1_pd(dp), s));
            const __m256d upper = _mm256_add_pd(m, _mm256_mul_pd(_mm256_set1_pd(dp + 1.0), s));
            const __m256d in = _mm256_and_pd(_mm256_cmp_pd(z, lower, _CMP_GE_OQ), _mm256_cmp_pd(z, upper, _CMP_LT_OQ));
            const int bits = _mm256_movemask_pd(in);
            for (int l = 0; l < 4; ++l) {
                if (bits & (1 << l)) cell[l] = p;
            }
        }
        for (int l = 0; l < 4; ++l) out[k + static_cast<std::size_t>(l)] = cell[l];
    }
    if (k < n) {
        const Band rest{band.z + k, band.m + k, band.s + k};
        classify_scalar(rest, lo, hi, n - k, out.subspan(k));
    }
}

}  // namespace optval::kernels::detail

#endif
