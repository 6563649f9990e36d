#pragma once

#include "optval/kernels.hpp"

namespace optval::kernels::detail {

void window_stats_scalar(std::span<const double> x, std::size_t window, std::span<double> means,
                         std::span<double> sds);
std::int64_t count_matches_scalar(std::span<const Band> bands, std::span<const int> cells, std::size_t n);
void classify_scalar(const Band& band, int lo, int hi, std::size_t n, std::span<std::int32_t> out);

#if defined(__x86_64__) || defined(_M_X64)
#define OPTVAL_HAVE_AVX2_KERNELS 1
void window_stats_avx2(std::span<const double> x, std::size_t window, std::span<double> means,
                       std::span<double> sds);
std::int64_t count_matches_avx2(std::span<const Band> bands, std::span<const int> cells, std::size_t n);
void classify_avx2(const Band& band, int lo, int hi, std::size_t n, std::span<std::int32_t> out);
#else
#define OPTVAL_HAVE_AVX2_KERNELS 0
#endif

}  // namespace optval::kernels::detail
