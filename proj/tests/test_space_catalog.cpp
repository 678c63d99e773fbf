#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "monosob/space_catalog.hpp"

using namespace monosob;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MonotoneProfile step(double c, double a) { return MonotoneProfile::step(c, a); }

double norm_value(const SpaceSpec& s, const MonotoneProfile& f) {
    const Integral r = norm(s, f);
    REQUIRE(r.finite());
    return r.value;
}

}  // namespace

TEST_CASE("Lebesgue and Lorentz norms of a step", "[space_catalog]") {
    const double c = 1.7, a = 0.3;
    const auto f = step(c, a);
    for (double p : {1.0, 2.0, 3.5}) CHECK_THAT(norm_value(SpaceSpec::lp(p), f), WithinRel(c * std::pow(a, 1.0 / p), 1e-6));
    CHECK(norm_value(SpaceSpec::lp(kInf), f) == c);
    CHECK(norm_value(SpaceSpec::linf(), f) == c);
    for (auto [p, q] : {std::pair{2.0, 1.0}, {3.0, 2.0}, {1.5, 4.0}}) {
        const double exact = c * std::pow(p / q, 1.0 / q) * std::pow(a, 1.0 / p);
        CHECK_THAT(norm_value(SpaceSpec::lorentz(p, q), f), WithinRel(exact, 1e-6));
    }
    CHECK_THAT(norm_value(SpaceSpec::lorentz(2.0, 2.0), f), WithinRel(norm_value(SpaceSpec::lp(2.0), f), 1e-6));
    CHECK_THAT(norm_value(SpaceSpec::lorentz_zygmund(3.0, 2.0, 0.0), f),
               WithinRel(norm_value(SpaceSpec::lorentz(3.0, 2.0), f), 1e-9));
}

TEST_CASE("L1 + Linf is the integral of f* over (0,1)", "[space_catalog]") {
    CHECK_THAT(norm_value(SpaceSpec::l1_plus_linf(), step(2.0, 3.0)), WithinRel(2.0, 1e-9));
    CHECK_THAT(norm_value(SpaceSpec::l1_plus_linf(), step(2.0, 0.25)), WithinRel(0.5, 1e-9));
}

TEST_CASE("Gamma norm of a step uses f**", "[space_catalog]") {
    // (f**)^2 = c^2 on (0,a), c^2 a^2 / t^2 beyond; integral 2 c^2 a
    const double c = 1.5, a = 0.4;
    CHECK_THAT(norm_value(SpaceSpec::gamma(2.0, WeightFunction::constant()), step(c, a)),
               WithinRel(c * std::sqrt(2.0 * a), 1e-5));
}

TEST_CASE("convexification raises the Lebesgue exponent", "[space_catalog]") {
    const double c = 1.3, a = 0.5;
    const auto s = SpaceSpec::convexified(SpaceSpec::lp(2.0), 1.5);
    CHECK_THAT(norm_value(s, step(c, a)), WithinRel(c * std::pow(a, 1.0 / 3.0), 1e-6));
}

TEST_CASE("divergent norms are results", "[space_catalog]") {
    const std::vector<double> lv{1.0}, len{1.0};
    const auto f = MonotoneProfile::from_steps(lv, len, 256, PowerTail{1.0, 0.5});
    const Integral r = norm(SpaceSpec::lp(1.0), f);
    CHECK_FALSE(r.finite());
    CHECK(norm(SpaceSpec::lp(4.0), f).finite());
}

TEST_CASE("Hardy operators on the indicator of [0,1)", "[space_catalog]") {
    const auto f = step(1.0, 1.0);
    const auto q0 = hardy_Q(0.0, f);
    const auto qh = hardy_Q(0.5, f);
    const auto P = hardy_P(f);
    for (double t : {1e-3, 0.01, 0.2, 0.7}) {
        CHECK_THAT(q0.value_at(t), WithinRel(std::log(1.0 / t), 1e-3));
        CHECK_THAT(qh.value_at(t), WithinRel(2.0 * (1.0 - std::sqrt(t)) / std::sqrt(t), 1e-3));
        CHECK_THAT(P.value_at(t), WithinRel(1.0, 1e-9));
    }
    CHECK_THAT(P.value_at(4.0), WithinRel(0.25, 1e-6));
    CHECK_THROWS(hardy_Q(1.0, f));
}

TEST_CASE("closed-form Boyd indices", "[space_catalog]") {
    auto lp = closed_form_boyd(SpaceSpec::lp(4.0));
    REQUIRE(lp);
    CHECK(lp->first == 0.25);
    CHECK(lp->second == 0.25);
    auto lz = closed_form_boyd(SpaceSpec::lorentz_zygmund(2.0, 3.0, 1.0));
    REQUIRE(lz);
    CHECK(lz->first == 0.5);
    auto conv = closed_form_boyd(SpaceSpec::convexified(SpaceSpec::lp(2.0), 2.0));
    REQUIRE(conv);
    CHECK(conv->first == 0.25);
    auto l1inf = closed_form_boyd(SpaceSpec::l1_plus_linf());
    REQUIRE(l1inf);
    CHECK(l1inf->first == 1.0);
    CHECK(l1inf->second == 0.0);
}

TEST_CASE("estimated Boyd indices agree with closed forms", "[space_catalog]") {
    const auto probes = default_probes(1024);
    for (double p : {1.5, 2.0, 4.0}) {
        const auto b = boyd_indices(SpaceSpec::lp(p), probes);
        CHECK_THAT(b.upper, WithinAbs(1.0 / p, 2e-2));
        CHECK_THAT(b.lower, WithinAbs(1.0 / p, 2e-2));
    }
    const auto b = boyd_indices(SpaceSpec::lorentz(3.0, 1.5), probes);
    CHECK_THAT(b.upper, WithinAbs(1.0 / 3.0, 2e-2));
    CHECK(dilation_norm(SpaceSpec::lp(2.0), 4.0, probes) == Catch::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("B_p weight tests", "[space_catalog]") {
    const auto grid = default_weight_grid();
    for (double p : {1.5, 2.0, 3.0}) {
        const auto r = is_Bp_weight(WeightFunction::constant(), p, grid);
        CHECK(r.member);
        CHECK_THAT(r.constant, WithinRel(1.0 / (p - 1.0), 2e-2));
        CHECK_FALSE(is_Bp_weight(WeightFunction::power(p - 1.0), p, grid).member);
    }
    CHECK(is_Bp_weight(WeightFunction::power(0.5), 2.0, grid).member);
}

TEST_CASE("Lambda^{p,q}(1) equals Lambda^q(t^{q/p-1})", "[space_catalog]") {
    const auto probes = default_probes(1024);
    CHECK(lambda_weight_identity_check(WeightFunction::constant(), 3.0, 2.0, probes) < 1e-2);
    CHECK_THAT(norm_value(SpaceSpec::generalized_lorentz(3.0, 2.0, WeightFunction::constant()), step(1.2, 0.7)),
               WithinRel(norm_value(SpaceSpec::lorentz(3.0, 2.0), step(1.2, 0.7)), 1e-2));
}

TEST_CASE("admissibility and GGamma weight checks", "[space_catalog]") {
    CHECK(check_admissible(WeightFunction::constant(), 2.0).verdict == Decision::yes);
    CHECK(check_admissible(WeightFunction::exponential(), 2.0).verdict != Decision::undecidable);
    const auto g = check_ggamma_weight(WeightFunction::constant(), 2.0, 2.0);
    CHECK_FALSE(g.reason.empty());
}

TEST_CASE("harmonic mean and Sobolev exponents", "[space_catalog]") {
    const std::vector<double> A{2.0}, p{2.0};
    CHECK_THAT(harmonic_mean_exponent(A, p), WithinRel(2.0, 1e-15));
    const std::vector<double> A2{0.0, 1.0}, p2{2.0, 4.0};
    // (1/3)(1/2 + 2/4) = 1/3
    CHECK_THAT(harmonic_mean_exponent(A2, p2), WithinRel(3.0, 1e-15));
    CHECK_THAT(*sobolev_exponent(2.0, 3.0), WithinRel(6.0, 1e-15));
    CHECK_FALSE(sobolev_exponent(3.0, 3.0).has_value());
}

TEST_CASE("space text round trips and errors", "[space_catalog]") {
    for (const char* text : {"lp:p=2", "lorentz:p=3,q=2", "lorentz:p=3,q=2,form=ss", "lz:p=2,q=1,alpha=0.5",
                             "glorentz:p=2,q=3,w=t^0.5", "gamma:p=2,w=1", "ggamma:p=2,m=3,w=1",
                             "convex:r=2/lp:p=2", "angle:r=1.5/lorentz:p=3,q=2", "l1+linf", "linf"}) {
        const auto s = SpaceSpec::parse(text);
        CHECK(SpaceSpec::parse(s.to_string()).to_string() == s.to_string());
    }
    CHECK(SpaceSpec::parse("lp:p=inf").p == kInf);
    CHECK_THROWS_WITH(SpaceSpec::parse("banach:p=2"), ContainsSubstring("banach"));
    CHECK_THROWS_WITH(SpaceSpec::parse("lp:p=0.5"), ContainsSubstring("p"));
    CHECK_THROWS_AS(SpaceSpec::parse("lorentz:p=2"), std::invalid_argument);
    CHECK_THROWS_AS(SpaceSpec::parse("lp:x=2"), std::invalid_argument);
}

TEST_CASE("Holder product ratio", "[space_catalog]") {
    const std::vector<double> lengths{0.5, 1.0, 0.25};
    const std::vector<std::vector<double>> same{{1.0, 3.0, 2.0}, {1.0, 3.0, 2.0}};
    const std::vector<double> half{0.5, 0.5};
    CHECK_THAT(holder_product_ratio(SpaceSpec::lp(2.0), same, lengths, half), WithinRel(1.0, 1e-9));
    // disjoint supports: the product vanishes
    const std::vector<std::vector<double>> disjoint{{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}};
    CHECK(holder_product_ratio(SpaceSpec::lp(1.0), disjoint, lengths, half) == 0.0);
    const std::vector<std::vector<double>> mixed{{1.0, 4.0, 0.5}, {2.0, 0.5, 3.0}};
    for (const char* s : {"lp:p=1", "lp:p=3", "lorentz:p=2,q=1", "gamma:p=2,w=1", "l1+linf"})
        CHECK(holder_product_ratio(SpaceSpec::parse(s), mixed, lengths, half) <= 1.0 + 1e-9);
    CHECK_THROWS_AS(holder_product_ratio(SpaceSpec::lp(1.0), mixed, lengths, std::vector<double>{1.0}),
                    std::invalid_argument);
}

TEST_CASE("factor-4 transfer check", "[space_catalog]") {
    const std::vector<double> h{1.0, 3.0, 0.0, 2.0};
    const std::vector<double> hstar{3.0, 2.0, 1.0, 0.0};
    CHECK_FALSE(transfer_check(h, h, 0.5).hypotheses);
    const auto same = transfer_check(hstar, h, 0.5);
    CHECK(same.hypotheses);
    CHECK_THAT(same.worst_ratio, WithinRel(1.0, 1e-12));
    // g = h** on the first interval, then nothing: g* = g and the ratio stays 1
    const std::vector<double> g{3.0, 0.0, 0.0, 0.0};
    CHECK(transfer_check(g, h, 1.0).hypotheses);
    const std::vector<double> big{4.0, 0.0, 0.0, 0.0};
    CHECK_FALSE(transfer_check(big, h, 1.0).hypotheses);
    // late mass: g below h** everywhere, running integral below that of h*, g* front-loads it
    const std::vector<double> hh{1.0, 1.0, 1.0, 1.0}, late{0.0, 1.0, 1.0, 1.0};
    const auto t = transfer_check(late, hh, 1.0);
    CHECK(t.hypotheses);
    CHECK_THAT(t.worst_ratio, WithinRel(1.0, 1e-12));
}
