#pragma once

// Functions of one variable t in (0, infinity) sampled on geometric grids.
//
// SampledCurve is an arbitrary nonnegative function (oscillation curves,
// derivative samples). MonotoneProfile is a nonincreasing one (decreasing
// rearrangements and everything built from them) and additionally carries its
// running integral, which is exact when the profile comes from a step function.
// Both store their behaviour beyond the last grid point as a power tail c*t^-g.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "monosob/quadrature.hpp"

namespace monosob {

struct PowerTail {
    double coefficient = 0.0;
    double exponent = 1.0;

    bool zero() const { return coefficient == 0.0; }
    double operator()(double t) const;
    /// int_a^b c t^-g dt (may be +inf when b is infinite and g <= 1).
    double integral(double a, double b) const;
};

class SampledCurve {
public:
    SampledCurve() = default;
    SampledCurve(std::vector<double> grid, std::vector<double> values, PowerTail tail = {});

    bool empty() const { return grid_.empty(); }
    std::span<const double> grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    const PowerTail& tail() const { return tail_; }
    double end() const { return grid_.empty() ? 0.0 : grid_.back(); }

    /// Linear interpolation on the grid, values.front() below it, tail above it.
    double value_at(double t) const;
    double sup() const;

    SampledCurve times_power(double beta) const;  // v(t) * t^beta
    SampledCurve pow(double r) const;             // v(t)^r

    void write_csv(std::ostream& os) const;

private:
    std::vector<double> grid_;
    std::vector<double> values_;
    PowerTail tail_;
};

class MonotoneProfile {
public:
    static constexpr double kGridSpan = 1e-6;
    static constexpr std::size_t kDefaultGridSize = 4096;

    /// n points from kGridSpan*T to T, geometrically spaced.
    static std::vector<double> geometric_grid(double T, std::size_t n);

    MonotoneProfile() = default;  // the profile of f == 0

    /// Step function with the given nonincreasing levels on consecutive
    /// intervals of the given lengths, resampled right-continuously onto the
    /// geometric grid over (0, sum of lengths]. Steps with level <= 0 end the
    /// support. The sample at the right end point is the left limit.
    static MonotoneProfile from_steps(std::span<const double> levels, std::span<const double> lengths,
                                      std::size_t grid_size = kDefaultGridSize, PowerTail tail = {});

    /// Samples on an arbitrary increasing grid. Values are clamped to be
    /// nonnegative and nonincreasing; the running integral uses the trapezoid rule.
    static MonotoneProfile from_samples(std::vector<double> grid, std::vector<double> values, PowerTail tail = {});

    /// c * indicator of [0, a).
    static MonotoneProfile step(double c, double a, std::size_t grid_size = kDefaultGridSize);

    bool empty() const { return grid_.empty(); }
    double support_mass() const { return grid_.empty() ? 0.0 : grid_.back(); }
    std::span<const double> grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> cumulative() const { return cumulative_; }
    const PowerTail& tail() const { return tail_; }
    double sup() const { return values_.empty() ? tail_(0.0) : values_.front(); }

    /// Smallest t above which every grid interval holds at least one step
    /// boundary of the underlying step function; derivative-type quantities are
    /// only meaningful beyond it.
    double resolved_from() const { return resolved_from_; }

    double value_at(double t) const;
    /// int_0^t of the profile, including the tail beyond the support.
    double integral_to(double t) const;
    /// int_0^infinity of the profile.
    Integral total_integral() const;

    /// E_s f(t) = f(t / s).
    MonotoneProfile dilate(double s) const;
    /// f^r; stays nonincreasing for r > 0.
    MonotoneProfile power(double r) const;
    SampledCurve as_curve() const;

    void write_csv(std::ostream& os) const;

private:
    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> cumulative_;
    PowerTail tail_;
    double resolved_from_ = 0.0;
};

}  // namespace monosob
