#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "monosob/rearrangement.hpp"
#include "monosob/test_functions.hpp"

using namespace monosob;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double cone1(Point x) { return std::max(0.0, 1.0 - std::abs(x[0])); }

// cone on [-1,1] with weight x^2: mu{f > s} = (2/3)(1-s)^3
double cone_fstar(double t) { return t >= 2.0 / 3.0 ? 0.0 : 1.0 - std::cbrt(1.5 * t); }
double cone_fss(double t) { return t >= 2.0 / 3.0 ? (1.0 / 6.0) / t : 1.0 - 0.75 * std::cbrt(1.5 * t); }
double cone_deriv(double t) { return 0.5 * std::pow(1.5 * t, -2.0 / 3.0); }

MonotoneProfile cone_profile(std::size_t res = 4096) {
    return rearrange(MonomialWeight({2}), cone1, BoxDomain::symmetric(1, 1.0), res);
}

double sup_rel_error(const MonotoneProfile& p, double (*exact)(double), double lo, double hi) {
    double err = 0.0, sup = 0.0;
    for (double t : p.grid()) {
        if (t < lo || t > hi) continue;
        err = std::max(err, std::abs(p.value_at(t) - exact(t)));
        sup = std::max(sup, std::abs(exact(t)));
    }
    return err / sup;
}

}  // namespace

TEST_CASE("cone rearrangement matches the closed form", "[rearrangement]") {
    const auto p = cone_profile();
    CHECK_THAT(p.support_mass(), WithinRel(2.0 / 3.0, 1e-4));
    CHECK(sup_rel_error(p, cone_fstar, 1e-4, 2.0 / 3.0) < 2e-3);
    CHECK_THAT(p.integral_to(1.0), WithinRel(1.0 / 6.0, 1e-4));
}

TEST_CASE("double star of the cone", "[rearrangement]") {
    const auto ss = double_star(cone_profile());
    CHECK(sup_rel_error(ss, cone_fss, 1e-4, 0.66) < 2e-3);
    CHECK_THAT(ss.value_at(2.0 / 3.0), WithinAbs(0.25, 1e-3));
    CHECK_THAT(ss.value_at(5.0), WithinRel(1.0 / 30.0, 1e-3));
    const auto osc = oscillation(cone_profile());
    CHECK_THAT(osc.value_at(2.0 / 3.0), WithinAbs(0.25, 2e-3));
}

TEST_CASE("double star of a step is c for t < a and c a / t beyond", "[rearrangement]") {
    const auto ss = double_star(MonotoneProfile::step(2.0, 0.5));
    CHECK_THAT(ss.value_at(0.1), WithinRel(2.0, 1e-12));
    CHECK_THAT(ss.value_at(2.0), WithinRel(0.5, 1e-9));
    CHECK_THAT(ss.value_at(100.0), WithinRel(0.01, 1e-9));
}

TEST_CASE("profile derivative and the oscillation identity", "[rearrangement]") {
    const auto p = cone_profile(8192);
    const auto d = profile_derivative(p);
    CHECK(d.absolutely_continuous);
    for (double t : {0.1, 0.3, 0.6})
        CHECK_THAT(d.derivative.value_at(t), WithinRel(cone_deriv(t), 5e-2));
    const auto a = oscillation(p);
    const auto b = oscillation_from_derivative(p);
    for (double t : {0.01, 0.1, 0.3, 0.6}) CHECK_THAT(b.value_at(t), WithinRel(a.value_at(t), 1e-2));
}

TEST_CASE("a jump of f is flagged in f*", "[rearrangement]") {
    auto f = [](Point x) { return std::max(0.0, 1.0 - std::abs(x[0])) + (std::abs(x[0]) < 0.3 ? 1.0 : 0.0); };
    const auto p = rearrange(MonomialWeight({0}), f, BoxDomain::symmetric(1, 1.0), 4096);
    const auto d = profile_derivative(p);
    CHECK_FALSE(d.absolutely_continuous);
    CHECK_THAT(d.jump_t, WithinRel(0.6, 0.1));
}

TEST_CASE("t O(f,t) is nondecreasing", "[rearrangement]") {
    const auto osc = oscillation(cone_profile());
    double prev = 0.0;
    for (std::size_t j = 0; j < osc.grid().size(); ++j) {
        const double v = osc.grid()[j] * osc.values()[j];
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("rearrangement ignores sign and reflections", "[rearrangement]") {
    const MonomialWeight w({2});
    const BoxDomain box = BoxDomain::symmetric(1, 1.0);
    auto g = [](Point x) { return x[0] > 0 ? 1.0 - x[0] : 0.5 * (1.0 + x[0]); };
    auto h = [&](Point x) {
        const double y = -x[0];
        return -g(Point(&y, 1));
    };
    const auto a = rearrange(w, g, box, 2048), b = rearrange(w, h, box, 2048);
    for (double t : {0.01, 0.1, 0.2, 0.4}) CHECK_THAT(b.value_at(t), WithinAbs(a.value_at(t), 1e-9));
}

TEST_CASE("distribution function is nonincreasing and matches the cone", "[rearrangement]") {
    const auto cells = CellDecomposition::build(MonomialWeight({2}), BoxDomain::symmetric(1, 1.0), 4096);
    const auto s = cells.sample(cone1);
    const auto df = distribution_function(cells, s, 64);
    REQUIRE(df.levels.size() == df.masses.size());
    for (std::size_t k = 1; k < df.masses.size(); ++k) CHECK(df.masses[k] <= df.masses[k - 1]);
    for (std::size_t k = 0; k < df.levels.size(); k += 8)
        CHECK_THAT(df.masses[k], WithinAbs(2.0 / 3.0 * std::pow(1.0 - df.levels[k], 3.0), 1e-3));
}

TEST_CASE("rearrange_pieces and rearrange_curve", "[rearrangement]") {
    const std::vector<double> v{1.0, 4.0, 2.0}, len{1.0, 0.5, 0.25};
    const auto p = rearrange_pieces(v, len, 1024);
    CHECK(p.value_at(0.2) == 4.0);
    CHECK(p.value_at(0.6) == 2.0);
    CHECK(p.value_at(1.5) == 1.0);
    CHECK_THAT(p.integral_to(2.0), WithinRel(3.5, 1e-9));
    const SampledCurve c({1.0, 2.0}, {1.0, 1.0}, PowerTail{4.0, 2.0});
    const auto r = rearrange_curve(c, 1024);
    CHECK(r.total_integral().finite());
    CHECK_THROWS_AS(rearrange_curve(SampledCurve({1.0, 2.0}, {1.0, 1.0}, PowerTail{1.0, 0.0}), 1024),
                    std::domain_error);
}

TEST_CASE("truncation branches", "[rearrangement]") {
    CHECK(truncate_value(5.0, 1.0, 3.0) == 2.0);
    CHECK(truncate_value(2.0, 1.0, 3.0) == 1.0);
    CHECK(truncate_value(-2.5, 1.0, 3.0) == 1.5);
    CHECK(truncate_value(0.5, 1.0, 3.0) == 0.0);
    const auto f = truncate([](Point x) { return x[0]; }, 0.5, 1.0);
    const double x = 0.75;
    CHECK(f(Point(&x, 1)) == 0.25);
}
