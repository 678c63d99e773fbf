#pragma once

// One-dimensional quadrature on geometric grids over (0, infinity).

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace monosob {

/// A possibly divergent integral. Divergence is a result, not an error.
struct Integral {
    double value = 0.0;
    std::string divergence;  // empty when finite

    bool finite() const { return divergence.empty(); }
    static Integral divergent(std::string reason) {
        return {std::numeric_limits<double>::infinity(), std::move(reason)};
    }
};

Integral operator+(const Integral& a, const Integral& b);

/// (b^{beta+1} - a^{beta+1}) / (beta+1) for every consecutive pair of the grid,
/// ln(b/a) when beta == -1.
std::vector<double> power_increments(std::span<const double> grid, double beta);

/// int_{grid.front()}^{grid.back()} phi(t) t^beta dt with phi averaged over each
/// interval and the power integrated exactly.
double grid_power_integral(std::span<const double> grid, std::span<const double> phi, double beta);

/// int_0^{t0} phi0 * t^beta dt (phi treated as constant below the grid).
Integral head_power_integral(double t0, double phi0, double beta);

/// int_from^infinity h(t) dt. Integrates on a logarithmic grid over eight
/// decades and extrapolates the remainder from the local power-law decay.
Integral tail_integral(const std::function<double(double)>& h, double from);

/// int_a^b h(t) dt by adaptive Gauss-Kronrod in the variable ln t (0 < a < b).
double log_integral(const std::function<double(double)>& h, double a, double b);

}  // namespace monosob
