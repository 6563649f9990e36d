#include "kernels_internal.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace optval::kernels {

namespace {

constexpr KernelTable scalar_table{detail::window_stats_scalar, detail::count_matches_scalar,
                                   detail::classify_scalar};
#if OPTVAL_HAVE_AVX2_KERNELS
constexpr KernelTable avx2_table{detail::window_stats_avx2, detail::count_matches_avx2, detail::classify_avx2};
#endif

// -1: no override.
std::atomic<int> override_isa{-1};

Isa best_supported() noexcept { return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa from_environment() noexcept {
    const char* env = std::getenv("OPTVAL_ISA");
    if (env != nullptr) {
        const std::string v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
    }
    return best_supported();
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if OPTVAL_HAVE_AVX2_KERNELS
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() noexcept {
    const int o = override_isa.load(std::memory_order_relaxed);
    if (o >= 0) return static_cast<Isa>(o);
    static const Isa detected = from_environment();
    return detected;
}

void set_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("kernel ISA not supported on this CPU: " + std::string(isa_name(isa)));
    }
    override_isa.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void reset_isa() noexcept { override_isa.store(-1, std::memory_order_relaxed); }

const KernelTable& table(Isa isa) {
#if OPTVAL_HAVE_AVX2_KERNELS
    if (isa == Isa::avx2) {
        if (!isa_supported(Isa::avx2)) throw std::invalid_argument("avx2 kernels requested on a CPU without AVX2");
        return avx2_table;
    }
#endif
    if (isa != Isa::scalar) throw std::invalid_argument("kernel ISA not compiled in: " + std::string(isa_name(isa)));
    return scalar_table;
}

}  // namespace optval::kernels
