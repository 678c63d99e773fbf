#include "monosob/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "monosob/simd/kernels.hpp"

namespace monosob {

Integral operator+(const Integral& a, const Integral& b) {
    if (!a.finite()) return a;
    if (!b.finite()) return b;
    return {a.value + b.value, {}};
}

std::vector<double> power_increments(std::span<const double> grid, double beta) {
    std::vector<double> inc(grid.size() > 1 ? grid.size() - 1 : 0);
    const double e = beta + 1.0;
    for (std::size_t j = 0; j < inc.size(); ++j) {
        const double a = grid[j];
        const double b = grid[j + 1];
        const double log_ratio = std::log(b / a);
        if (e == 0.0) {
            inc[j] = log_ratio;
        } else {
            inc[j] = std::pow(a, e) * std::expm1(e * log_ratio) / e;
        }
    }
    return inc;
}

double grid_power_integral(std::span<const double> grid, std::span<const double> phi, double beta) {
    if (grid.size() < 2) return 0.0;
    const auto inc = power_increments(grid, beta);
    return simd::trapezoid_dot(phi, inc);
}

Integral head_power_integral(double t0, double phi0, double beta) {
    if (phi0 == 0.0 || t0 <= 0.0) return {};
    if (beta <= -1.0) return Integral::divergent("integrand not integrable at t = 0");
    return {phi0 * std::pow(t0, beta + 1.0) / (beta + 1.0), {}};
}

Integral tail_integral(const std::function<double(double)>& h, double from) {
    constexpr int kPerDecade = 500;
    constexpr int kDecades = 8;
    constexpr int kPoints = kPerDecade * kDecades;
    const double du = std::log(10.0) / kPerDecade;
    const double u0 = std::log(from);

    std::vector<double> H(kPoints + 1);
    for (int k = 0; k <= kPoints; ++k) {
        const double t = std::exp(u0 + k * du);
        const double v = h(t);
        if (!std::isfinite(v)) return Integral::divergent("integrand not finite on the tail");
        H[k] = v * t;
    }
    double sum = 0.0;
    for (int k = 0; k < kPoints; ++k) sum += 0.5 * (H[k] + H[k + 1]);
    sum *= du;

    const double end = H[kPoints];
    if (end == 0.0) return {sum, {}};
    const double before = H[kPoints - kPerDecade];
    if (before <= 0.0 || end < 0.0) return {sum, {}};
    const double kappa = std::log(before / end) / std::log(10.0);
    if (kappa < 0.02) return Integral::divergent("integrand decays no faster than 1/t at infinity");
    return {sum + end / kappa, {}};
}

double log_integral(const std::function<double(double)>& h, double a, double b) {
    if (!(a < b)) return 0.0;
    auto g = [&](double u) {
        const double t = std::exp(u);
        return h(t) * t;
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, std::log(a), std::log(b), 15, 1e-12);
}

}  // namespace monosob
