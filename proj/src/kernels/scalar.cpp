#include "kernels_internal.hpp"

#include <cmath>

namespace optval::kernels::detail {

void window_stats_scalar(std::span<const double> x, std::size_t window, std::span<double> means,
                         std::span<double> sds) {
    const std::size_t n = means.size();
    const double len = static_cast<double>(window);
    const double dof = static_cast<double>(window - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double* w = x.data() + k;
        double sum = 0.0;
        for (std::size_t i = 0; i < window; ++i) sum += w[i];
        const double mean = sum / len;
        double ss = 0.0;
        for (std::size_t i = 0; i < window; ++i) {
            const double d = w[i] - mean;
            ss += d * d;
        }
        means[k] = mean;
        sds[k] = window > 1 ? std::sqrt(ss / dof) : 0.0;
    }
}

std::int64_t count_matches_scalar(std::span<const Band> bands, std::span<const int> cells, std::size_t n) {
    std::int64_t count = 0;
    for (std::size_t k = 0; k < n; ++k) {
        bool hit = true;
        for (std::size_t j = 0; j < bands.size() && hit; ++j) {
            const double p = cells[j];
            const double m = bands[j].m[k];
            const double s = bands[j].s[k];
            const double z = bands[j].z[k];
            const double lower = m + p * s;
            const double upper = m + (p + 1.0) * s;
            hit = z >= lower && z < upper;
        }
        count += hit ? 1 : 0;
    }
    return count;
}

void classify_scalar(const Band& band, int lo, int hi, std::size_t n, std::span<std::int32_t> out) {
    for (std::size_t k = 0; k < n; ++k) {
        const double m = band.m[k];
        const double s = band.s[k];
        const double z = band.z[k];
        std::int32_t cell = outside;
        for (int p = lo; p <= hi; ++p) {
            const double dp = p;
            const double lower = m + dp * s;
            const double upper = m + (dp + 1.0) * s;
            if (z >= lower && z < upper) {
                cell = p;
                break;
            }
        }
        out[k] = cell;
    }
}

}  // namespace optval::kernels::detail
