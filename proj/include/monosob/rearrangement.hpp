#pragma once

// Distribution functions, decreasing rearrangements, f**, the oscillation
// O(f,t) = f**(t) - f*(t) and level truncations.

#include <cstddef>
#include <span>
#include <vector>

#include "monosob/profile.hpp"
#include "monosob/weighted_measure.hpp"

namespace monosob {

/// Cells ordered by |f| descending; ties keep cell index order.
struct SortedCells {
    std::vector<std::size_t> order;
    std::vector<double> values;  // |f| at order[k]
    std::vector<double> masses;  // weighted mass of order[k]
};

SortedCells sort_cells(const CellDecomposition& cells, std::span<const double> samples);

struct DistributionFunction {
    std::vector<double> levels;  // s grid on [0, sup|f|]
    std::vector<double> masses;  // mu{|f| > s}
};

DistributionFunction distribution_function(const CellDecomposition& cells, std::span<const double> samples,
                                           std::size_t n_levels);

MonotoneProfile rearrange(const SortedCells& sorted, std::size_t grid_size = MonotoneProfile::kDefaultGridSize);
MonotoneProfile rearrange(const MonomialWeight& w, const ScalarField& f, const BoxDomain& box,
                          std::size_t resolution, std::size_t grid_size = MonotoneProfile::kDefaultGridSize);

/// Lebesgue rearrangement of a step function given as (value, length) pieces.
MonotoneProfile rearrange_pieces(std::span<const double> values, std::span<const double> lengths,
                                 std::size_t grid_size = MonotoneProfile::kDefaultGridSize, PowerTail tail = {});

/// Lebesgue rearrangement on (0, infinity) of a nonnegative curve, tail included.
/// Throws std::domain_error when the tail does not decay.
MonotoneProfile rearrange_curve(const SampledCurve& curve,
                                std::size_t grid_size = MonotoneProfile::kDefaultGridSize);

/// f**(t) = (1/t) int_0^t f*; beyond the grid the tail is c/t with c the total
/// integral (asymptotically, when the profile itself has a tail).
MonotoneProfile double_star(const MonotoneProfile& p);

/// f** - f*, sampled on the profile grid.
SampledCurve oscillation(const MonotoneProfile& p);

struct ProfileDerivative {
    SampledCurve derivative;       // (-f*)' >= 0
    bool absolutely_continuous = true;
    double jump_t = 0.0;           // location of the largest flagged jump
    double worst_jump_ratio = 0.0; // drop over the local scale at jump_t
};

/// Central differences of -f* on the grid, clamped to be nonnegative. Beyond
/// resolved_from() the grid is cut into windows of 16 intervals; a window whose
/// drop exceeds 10 times the mean drop of its neighbours is flagged as a jump.
ProfileDerivative profile_derivative(const MonotoneProfile& p);

/// (1/t) int_0^t s (-f*)'(s) ds from the sampled derivative.
SampledCurve oscillation_from_derivative(const MonotoneProfile& p);

/// t2 - t1 where |f| > t2, |f| - t1 where t1 < |f| <= t2, 0 otherwise.
ScalarField truncate(ScalarField f, double t1, double t2);
double truncate_value(double v, double t1, double t2);

}  // namespace monosob
