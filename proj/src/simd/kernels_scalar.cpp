#include "monosob/simd/kernels.hpp"

namespace monosob::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
    return acc;
}

double trapezoid_dot_scalar(const double* phi, const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += 0.5 * (phi[j] + phi[j + 1]) * w[j];
    return acc;
}

double masked_sum_greater_scalar(const double* v, const double* m, std::size_t n, double s) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        if (v[k] > s) acc += m[k];
    return acc;
}

void scale_scalar(double* out, const double* in, double factor, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = in[k] * factor;
}

}  // namespace

namespace detail {
const KernelTable scalar_table{dot_scalar, trapezoid_dot_scalar, masked_sum_greater_scalar, scale_scalar};
}

}  // namespace monosob::simd
