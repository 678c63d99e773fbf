#pragma once

// Data-parallel inner loops used by the quadrature and rearrangement code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The active variant is chosen once at startup from the CPU features
// and can be pinned with the MONOSOB_SIMD environment variable
// ("scalar" or "avx2") or with set_isa(). Variants agree to rounding; each one
// reduces in a fixed order, so results are reproducible for a given variant.

#include <cstddef>
#include <span>
#include <string_view>

namespace monosob::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
    // sum_k a[k] * b[k]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sum_{j<n} 0.5 * (phi[j] + phi[j+1]) * w[j]; phi has n + 1 entries
    double (*trapezoid_dot)(const double* phi, const double* w, std::size_t n);
    // sum of m[k] over the k with v[k] > s
    double (*masked_sum_greater)(const double* v, const double* m, std::size_t n, double s);
    // out[k] = in[k] * factor
    void (*scale)(double* out, const double* in, double factor, std::size_t n);
};

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

Isa active_isa();
void set_isa(Isa isa);  // throws std::invalid_argument when unavailable

const KernelTable& kernels();
const KernelTable& kernels_for(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return kernels().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline double trapezoid_dot(std::span<const double> phi, std::span<const double> w) {
    if (phi.size() < 2) return 0.0;
    std::size_t n = phi.size() - 1;
    if (w.size() < n) n = w.size();
    return kernels().trapezoid_dot(phi.data(), w.data(), n);
}

inline double masked_sum_greater(std::span<const double> v, std::span<const double> m, double s) {
    return kernels().masked_sum_greater(v.data(), m.data(), v.size() < m.size() ? v.size() : m.size(), s);
}

inline void scale(std::span<double> out, std::span<const double> in, double factor) {
    kernels().scale(out.data(), in.data(), factor, out.size() < in.size() ? out.size() : in.size());
}

namespace detail {
extern const KernelTable scalar_table;
#if defined(MONOSOB_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace monosob::simd
