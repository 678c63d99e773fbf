#pragma once

// Weights w on (0, infinity) for the generalized Lorentz, Gamma and GGamma
// norms, with primitives and power moments int_a^b w(t) t^c dt.
//
// Every weight may carry an extra power factor t^g (see times_power), which is
// how the derived weights s^g w(s) of the embedding theorems are formed.
// Convergence of moments is decided from the behaviour of w at 0 and at
// infinity, not from sampled values.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monosob/quadrature.hpp"

namespace monosob {

enum class WeightKind { constant, power, logarithmic, exponential, broken_power, tabulated, custom };

/// w(t) ~ t^power * |ln t|^log_power near an end point; exponential_decay
/// means faster than any power (only meaningful at infinity).
struct Asymptote {
    double power = 0.0;
    double log_power = 0.0;
    bool exponential_decay = false;
};

enum class Decision { yes, no, undecidable };

class WeightFunction {
public:
    WeightFunction() = default;  // w = 1

    static WeightFunction constant();
    static WeightFunction power(double beta);
    /// (1 + |ln t|)^alpha
    static WeightFunction logarithmic(double alpha);
    /// exp(-rate * t)
    static WeightFunction exponential(double rate = 1.0);
    /// t^beta0 for t <= 1, t^beta1 for t > 1
    static WeightFunction broken_power(double beta0, double beta1);
    /// Piecewise log-log linear through (grid, values); optional power-law
    /// exponents below and above the table. Without them convergence questions
    /// are undecidable.
    static WeightFunction tabulated(std::vector<double> grid, std::vector<double> values,
                                    std::optional<double> power_at_zero = std::nullopt,
                                    std::optional<double> power_at_infinity = std::nullopt);
    static WeightFunction custom(std::string name, std::function<double(double)> w, std::optional<Asymptote> at_zero,
                                 std::optional<Asymptote> at_infinity);

    /// Canonical text: "1", "t^b", "log^a", "exp", "exp^r", "broken:b0:b1".
    static WeightFunction parse(std::string_view text);
    std::string to_string() const;

    WeightKind kind() const { return kind_; }
    double parameter(std::size_t i) const { return params_.at(i); }
    double extra_power() const { return extra_power_; }

    /// w(t) * t^g
    WeightFunction times_power(double g) const;

    double operator()(double t) const;

    std::optional<Asymptote> at_zero() const;
    std::optional<Asymptote> at_infinity() const;

    /// Single power exponent when w is exactly c * t^b (constant, power).
    std::optional<double> pure_power() const;
    /// Exponents (near 0, near infinity) when w is regularly varying at both
    /// ends; absent for exponential and undecidable tabulated weights.
    std::optional<std::pair<double, double>> end_exponents() const;

    /// int_a^b w(t) t^c dt, a may be 0 and b may be +infinity.
    Integral moment(double a, double b, double c) const;
    /// W(t) = int_0^t w
    Integral primitive(double t) const { return moment(0.0, t, 0.0); }
    /// int_t^infinity w(s) s^-p ds
    Integral tail_moment(double t, double p) const;

    /// int over each consecutive grid pair of w(t) t^c dt: exact for power
    /// kinds, geometric-midpoint rule on the weight otherwise.
    std::vector<double> grid_moments(std::span<const double> grid, double c) const;

    /// Is int_0 w t^c finite near 0 / int^infinity w t^c finite near infinity.
    Decision integrable_at_zero(double c) const;
    Decision integrable_at_infinity(double c) const;

private:
    bool piecewise_power() const;
    double table_value(double t) const;

    WeightKind kind_ = WeightKind::constant;
    std::vector<double> params_;
    double extra_power_ = 0.0;
    std::string name_;
    std::vector<double> table_t_, table_w_;
    std::optional<double> table_p0_, table_pinf_;
    std::function<double(double)> fn_;
    std::optional<Asymptote> custom_zero_, custom_inf_;
};

}  // namespace monosob
