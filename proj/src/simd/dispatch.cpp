#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "monosob/simd/kernels.hpp"

namespace monosob::simd {
namespace {

bool cpu_has_avx2() {
#if defined(MONOSOB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() {
    const char* env = std::getenv("MONOSOB_SIMD");
    if (env != nullptr) {
        std::string choice(env);
        if (choice == "scalar") return Isa::scalar;
        if (choice == "avx2" && cpu_has_avx2()) return Isa::avx2;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2());
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (!isa_available(isa))
        throw std::invalid_argument("SIMD variant not available on this CPU: " + std::string(isa_name(isa)));
    current().store(isa, std::memory_order_relaxed);
}

const KernelTable& kernels_for(Isa isa) {
#if defined(MONOSOB_HAVE_AVX2)
    if (isa == Isa::avx2 && cpu_has_avx2()) return detail::avx2_table;
#endif
    (void)isa;
    return detail::scalar_table;
}

const KernelTable& kernels() { return kernels_for(active_isa()); }

}  // namespace monosob::simd
