#pragma once

// The gradient side of the anisotropic inequalities: rearranged partial
// derivatives and the tilde quantities
//
//   g_i(s) = int_{|f| > f*(s)} |f_{x_i}| dmu,   (f~_{x_i})*  = (d g_i / ds)*
//
// where the outer rearrangement is with respect to Lebesgue measure on
// (0, infinity).
//
// g_i is differentiated on bands of the sorted cell list: consecutive cells
// grouped until a band holds at least kMinBandCells cells and reaches the next
// point of the geometric t-grid. Bands never split cells of equal |f|, so a
// plateau of f (a jump of g_i) becomes a band whose rate carries the whole jump
// and the band rates integrate to ||f_{x_i}||_{L^1} exactly.

#include <cstddef>
#include <span>
#include <vector>

#include "monosob/profile.hpp"
#include "monosob/rearrangement.hpp"
#include "monosob/test_functions.hpp"
#include "monosob/weighted_measure.hpp"

namespace monosob {

inline constexpr std::size_t kMinBandCells = 8;

/// Running integral of a step function given by decreasing levels on
/// consecutive intervals; exact at every s.
struct StepCumulative {
    std::vector<double> mass;      // right end of step k
    std::vector<double> integral;  // int_0^{mass[k]}
    std::vector<double> levels;

    static StepCumulative build(std::span<const double> levels, std::span<const double> lengths);
    double at(double s) const;
    double total() const { return integral.empty() ? 0.0 : integral.back(); }
};

struct Bands {
    std::vector<double> edges;                 // s_0 = 0 < s_1 < ... (mu-mass)
    std::vector<double> fstar_at_edge;         // f*(s_b), right-continuous; 0 at the last edge
    std::vector<double> fstar_left;            // f*(s_b-), the last cell before the edge
    std::vector<double> running_integral;      // int_0^{s_b} f*
    std::vector<double> minus_fstar_rate;      // (f*(s_b) - f*(s_{b+1})) / length; 0 on a single tie group
    std::vector<std::size_t> cells;            // cells per band
    std::vector<double> mass_squares;          // sum of squared cell masses per band
    std::vector<std::vector<double>> g;        // g_i at every edge
    std::vector<std::vector<double>> g_rate;   // per coordinate, per band

    std::size_t size() const { return edges.empty() ? 0 : edges.size() - 1; }
    double length(std::size_t b) const { return edges[b + 1] - edges[b]; }
};

/// Bands over the sorted cells; `partials[i]` holds |f_{x_i}| at every cell.
Bands make_bands(const SortedCells& sorted, std::span<const std::vector<double>> partials, std::size_t grid_size);

struct TildeProfile {
    MonotoneProfile profile;      // (f~_{x_i})*
    std::vector<double> s_edges;  // band edges
    std::vector<double> g;        // g_i at the edges
    StepCumulative steps;         // int_0^t (f~_{x_i})*, exact
    double total() const { return g.empty() ? 0.0 : g.back(); }
};

/// Everything the verifier needs about one function at one resolution.
struct SobolevData {
    std::vector<double> A;
    double D = 1.0;
    std::size_t resolution = 0;
    std::size_t grid_size = MonotoneProfile::kDefaultGridSize;
    double domain_mass = 0.0;                      // mu of the support box
    double l1 = 0.0;                               // int |f| dmu
    MonotoneProfile f_star;
    SortedCells sorted;
    StepCumulative f_steps;
    std::vector<std::vector<double>> partials;     // |f_{x_i}| per cell, cell order
    std::vector<MonotoneProfile> partial_star;     // |f_{x_i}|*_mu
    std::vector<StepCumulative> partial_steps;
    std::vector<double> partial_l1;                // ||f_{x_i}||_{L^1_mu}
    MonotoneProfile gradient_star;                 // |grad f|*_mu
    StepCumulative gradient_steps;
    Bands bands;
    std::vector<TildeProfile> tilde;
};

SobolevData compute_sobolev_data(const TestFunction& f, const MonomialWeight& w, std::size_t resolution,
                                 std::size_t grid_size = MonotoneProfile::kDefaultGridSize);

std::vector<TildeProfile> tilde_profiles(const TestFunction& f, const MonomialWeight& w, std::size_t resolution,
                                         std::size_t grid_size = MonotoneProfile::kDefaultGridSize);

/// prod_i [(f~_{x_i})*]^{p (A_i + 1) / D} on a common geometric grid.
MonotoneProfile multiplicative_rhs(std::span<const TildeProfile> tilde, std::span<const double> A, double D, double p,
                                   std::size_t grid_size = MonotoneProfile::kDefaultGridSize);

/// (A_i + 1) / D
std::vector<double> product_exponents(std::span<const double> A);

}  // namespace monosob
