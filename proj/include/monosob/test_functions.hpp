#pragma once

// Compactly supported test functions with analytic gradients.
//
//   cone              max(0, 1 - |x|/R)                       Lipschitz only
//   tensor_bump       prod_i (1 - x_i^2/R^2)_+^k              C^1 for k >= 2
//   radial_power      (1 - |x|^2/R^2)_+^k                     C^1 for k >= 2
//   double_revolution (1 - |x'|^2/R^2 - x_n^2/b^2)_+^k        x' = (x_1..x_{n-1})
//   plateau           min(1, (R - |x|_inf)/(R - a))_+          Lipschitz only
//
// Every family accepts per-axis stretches s1..s3 (f(x_1/s_1, ...)) and an
// amplitude c.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "monosob/profile.hpp"
#include "monosob/weighted_measure.hpp"

namespace monosob {

enum class Family { cone, tensor_bump, radial_power, double_revolution, plateau };

std::string to_string(Family f);
/// Throws std::invalid_argument listing the valid tags.
Family parse_family(std::string_view tag);
std::vector<std::string> family_tags();

using Parameters = std::map<std::string, double>;

struct ParameterRange {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
};

struct FamilySpec {
    Family tag = Family::cone;
    std::size_t dimension = 1;
    std::vector<ParameterRange> box;

    /// The default parameter box of a family in dimension n.
    static FamilySpec defaults(Family tag, std::size_t n);
    /// Default value of every parameter (inside the box).
    Parameters default_parameters() const;
    const ParameterRange* range(const std::string& name) const;
};

using GradientField = std::function<void(Point, std::span<double>)>;

struct TestFunction {
    Family family = Family::cone;
    Parameters params;
    std::size_t dimension = 1;
    ScalarField value;
    GradientField gradient_into;
    BoxDomain support{{-1.0}, {1.0}};
    bool c1 = false;

    double operator()(Point x) const { return value(x); }
    std::vector<double> gradient(Point x) const;
    /// |d f / d x_i|
    ScalarField partial_abs(std::size_t i) const;
    /// |grad f| (Euclidean)
    ScalarField gradient_norm() const;
    /// x -> f(lambda_1 x_1, ..., lambda_n x_n)
    TestFunction scaled(std::span<const double> lambda) const;
    /// x -> c f(x)
    TestFunction multiplied(double c) const;
    std::string label() const;
};

/// Params outside the family box are rejected with std::invalid_argument;
/// missing ones take their defaults.
TestFunction instantiate(const FamilySpec& spec, const Parameters& params = {});

/// Closed-form decreasing rearrangement with respect to x^A dx.
struct OracleProfile {
    std::function<double(double)> value;  // f*_mu(t)
    double support_mass = 0.0;

    MonotoneProfile sample(std::size_t grid_size = MonotoneProfile::kDefaultGridSize) const;
};

/// Absent when the family has no closed form for this weight.
std::optional<OracleProfile> oracle_profile(const TestFunction& f, const MonomialWeight& w);

/// mu of the unit Euclidean ball for the weight x^A.
double unit_ball_mass(const MonomialWeight& w);

}  // namespace monosob
