#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "monosob/sobolev_terms.hpp"

using namespace monosob;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TestFunction make(Family f, std::size_t n, Parameters p = {}) { return instantiate(FamilySpec::defaults(f, n), p); }

}  // namespace

TEST_CASE("step cumulative integrates exactly", "[sobolev_terms]") {
    const std::vector<double> lv{3.0, 2.0, 2.0, 0.5, 0.0}, len{0.1, 0.2, 0.3, 0.4, 1.0};
    const auto c = StepCumulative::build(lv, len);
    CHECK(c.mass.size() == 4u);
    CHECK_THAT(c.total(), WithinRel(0.3 + 0.4 + 0.6 + 0.2, 1e-15));
    CHECK_THAT(c.at(0.05), WithinRel(0.15, 1e-15));
    CHECK_THAT(c.at(0.25), WithinRel(0.3 + 0.3, 1e-15));
    CHECK_THAT(c.at(5.0), WithinRel(c.total(), 1e-15));
    CHECK(c.at(0.0) == 0.0);
    const std::vector<double> bad{1.0, 2.0}, two{1.0, 1.0};
    CHECK_THROWS_AS(StepCumulative::build(bad, two), std::invalid_argument);
}

TEST_CASE("product exponents sum to one", "[sobolev_terms]") {
    const std::vector<double> A{1.0, 0.5, 0.0};
    const auto th = product_exponents(A);
    CHECK_THAT(th[0], WithinRel(2.0 / 4.5, 1e-15));
    CHECK_THAT(std::accumulate(th.begin(), th.end(), 0.0), WithinRel(1.0, 1e-15));
}

TEST_CASE("cone with weight x^2 has a unit tilde profile", "[sobolev_terms]") {
    const auto f = make(Family::cone, 1);
    const auto d = compute_sobolev_data(f, MonomialWeight({2}), 4096);
    CHECK(d.D == 3.0);
    CHECK_THAT(d.l1, WithinRel(1.0 / 6.0, 1e-5));
    CHECK_THAT(d.domain_mass, WithinRel(2.0 / 3.0, 1e-6));
    REQUIRE(d.tilde.size() == 1u);
    // g(s) = mu{|f| > f*(s)} = s since |f'| = 1
    CHECK_THAT(d.partial_l1[0], WithinRel(2.0 / 3.0, 1e-5));
    CHECK_THAT(d.tilde[0].total(), WithinRel(d.partial_l1[0], 1e-12));
    for (double t : {0.01, 0.2, 0.6}) CHECK_THAT(d.tilde[0].profile.value_at(t), WithinAbs(1.0, 1e-6));
}

TEST_CASE("planar cone: tilde rates are 2/pi", "[sobolev_terms]") {
    // the disc of area s carries int |cos| r dr dtheta = 2 s / pi
    const auto f = make(Family::cone, 2);
    const std::vector<double> A{0.0, 0.0};
    const auto d = compute_sobolev_data(f, MonomialWeight(A), 256);
    for (const auto& t : d.tilde) {
        CHECK_THAT(t.total(), WithinRel(2.0, 1e-2));
        for (double s : {0.5, 1.0, 2.0}) CHECK_THAT(t.profile.value_at(s), WithinRel(2.0 / std::numbers::pi, 3e-2));
    }
    // lattice noise in the band rates shrinks under refinement
    const auto fine = compute_sobolev_data(f, MonomialWeight(A), 512);
    const double exact = 2.0 / std::numbers::pi;
    CHECK(std::abs(fine.tilde[0].profile.value_at(0.1) - exact) < std::abs(d.tilde[0].profile.value_at(0.1) - exact));
    const auto rhs = multiplicative_rhs(d.tilde, A, 2.0, 1.0);
    CHECK_THAT(rhs.value_at(1.0), WithinRel(2.0 / std::numbers::pi, 3e-2));
    CHECK_THROWS_AS(multiplicative_rhs(d.tilde, std::vector<double>{0.0}, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("tilde profiles preserve the gradient L1 norm and dominate g", "[sobolev_terms]") {
    for (auto [fam, A, res] : {std::tuple{Family::plateau, std::vector<double>{1.0, 1.0}, 128u},
                               {Family::tensor_bump, std::vector<double>{0.0, 0.0}, 128u},
                               {Family::cone, std::vector<double>{2.0}, 4096u}}) {
        const auto f = make(fam, A.size());
        const auto d = compute_sobolev_data(f, MonomialWeight(A), res);
        for (std::size_t i = 0; i < A.size(); ++i) {
            const auto& t = d.tilde[i];
            INFO(f.label() << " axis " << i);
            CHECK_THAT(t.steps.total(), WithinRel(d.partial_l1[i], 1e-9));
            for (std::size_t k = 0; k < t.s_edges.size(); k += 7)
                CHECK(t.steps.at(t.s_edges[k]) >= t.g[k] * (1.0 - 1e-9) - 1e-14);
            for (std::size_t k = 1; k < t.g.size(); ++k) CHECK(t.g[k] >= t.g[k - 1]);
        }
    }
}

TEST_CASE("bands respect the minimum size and never split ties", "[sobolev_terms]") {
    const auto f = make(Family::plateau, 2);
    const auto d = compute_sobolev_data(f, MonomialWeight({0.0, 1.0}), 96);
    const auto& b = d.bands;
    REQUIRE(b.size() > 10u);
    std::size_t total = 0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        CHECK(b.length(k) > 0.0);
        if (k + 1 < b.size()) CHECK(b.cells[k] >= kMinBandCells);
        total += b.cells[k];
        CHECK(b.mass_squares[k] > 0.0);
        CHECK(b.fstar_left[k + 1] >= b.fstar_at_edge[k + 1]);
    }
    CHECK(total <= d.sorted.values.size());
    // a plateau is one band: f* is flat across it and the left value equals the sup
    CHECK(b.fstar_at_edge[0] == d.sorted.values.front());
    std::size_t start = 0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const std::size_t end = start + b.cells[k];
        if (end < d.sorted.values.size()) CHECK(d.sorted.values[end - 1] > d.sorted.values[end]);
        start = end;
    }
}
