#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops. Each kernel has a scalar reference and an AVX2
// variant; the variant is chosen once at runtime from CPUID and can be pinned
// with OPTVAL_ISA=scalar|avx2 or set_isa(). Variants are bit-identical: the
// AVX2 code performs the same IEEE operations in the same order per lane, and
// the library is built with -ffp-contract=off so neither side fuses mul+add.

namespace optval::kernels {

enum class Isa { scalar, avx2 };

[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;
[[nodiscard]] bool isa_supported(Isa isa) noexcept;
/// Best supported ISA, unless overridden by OPTVAL_ISA or set_isa().
[[nodiscard]] Isa active_isa() noexcept;
/// Throws std::invalid_argument if the CPU lacks `isa`.
void set_isa(Isa isa);
/// Drops any set_isa() override.
void reset_isa() noexcept;

/// For each start k in [0, n_windows): mean and sample sd of x[k .. k+window).
/// Requires x.size() >= n_windows + window - 1 and means/sds sized n_windows.
using WindowStatsFn = void (*)(std::span<const double> x, std::size_t window,
                               std::span<double> means, std::span<double> sds);

/// One horizon's view of the history for the cell-membership test: element k
/// is the observation / window mean / window sd at start k + horizon.
struct Band {
    const double* z;
    const double* m;
    const double* s;
};

/// Number of starts k in [0, n) for which, for every band j,
///   m_j[k] + p_j*s_j[k] <= z_j[k] < m_j[k] + (p_j+1)*s_j[k].
using CountMatchesFn = std::int64_t (*)(std::span<const Band> bands, std::span<const int> cells,
                                        std::size_t n);

/// Cell index of z[k] within [m + lo*s, m + (hi+1)*s), or `outside` when no
/// half-open cell p in [lo, hi] contains it. Uses the same bounds as
/// CountMatchesFn so the two routes agree exactly.
using ClassifyFn = void (*)(const Band& band, int lo, int hi, std::size_t n, std::span<std::int32_t> out);

inline constexpr std::int32_t outside = INT32_MIN;

struct KernelTable {
    WindowStatsFn window_stats;
    CountMatchesFn count_matches;
    ClassifyFn classify;
};

[[nodiscard]] const KernelTable& table(Isa isa);
[[nodiscard]] inline const KernelTable& active() { return table(active_isa()); }

}  // namespace optval::kernels
