#pragma once

// Monomial weights x^A = |x_1|^{A_1} ... |x_n|^{A_n}, box domains and the
// tensor-midpoint quadrature every weighted integral in the library runs on.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace monosob {

using Point = std::span<const double>;
using ScalarField = std::function<double(Point)>;

inline constexpr std::size_t kMaxDimension = 3;

/// n + sum A_i. Throws std::invalid_argument on a negative or non-finite exponent.
double homogeneous_dimension(std::span<const double> exponents);

class MonomialWeight {
public:
    explicit MonomialWeight(std::vector<double> exponents);

    std::size_t dimension() const { return exponents_.size(); }
    double homogeneous_dimension() const { return D_; }
    std::span<const double> exponents() const { return exponents_; }
    bool is_unweighted() const;

    double operator()(Point x) const;

private:
    std::vector<double> exponents_;
    double D_;
};

double weight_at(const MonomialWeight& w, Point x);

struct BoxDomain {
    std::vector<double> lower;
    std::vector<double> upper;

    BoxDomain(std::vector<double> lo, std::vector<double> hi);
    static BoxDomain symmetric(std::size_t n, double half_width);

    std::size_t dimension() const { return lower.size(); }
    double volume() const;
    bool contains(Point x) const;
};

/// A sample that is NaN or infinite, with the cell it came from.
class NonFiniteSample : public std::runtime_error {
public:
    NonFiniteSample(std::size_t cell, std::vector<double> center);
    std::size_t cell() const { return cell_; }
    const std::vector<double>& center() const { return center_; }

private:
    std::size_t cell_;
    std::vector<double> center_;
};

/// Uniform tensor grid of `resolution` cells per axis. Cell k has axis-0 index
/// k % resolution, axis-1 index (k / resolution) % resolution, and so on.
class CellDecomposition {
public:
    static CellDecomposition build(const MonomialWeight& w, const BoxDomain& box, std::size_t resolution);

    std::size_t size() const { return masses_.size(); }
    std::size_t dimension() const { return dim_; }
    std::size_t resolution() const { return resolution_; }
    double cell_volume() const { return cell_volume_; }
    const BoxDomain& box() const { return box_; }

    Point center(std::size_t k) const { return {centers_.data() + k * dim_, dim_}; }
    std::span<const double> masses() const { return masses_; }
    double total_mass() const { return total_mass_; }

    /// f at every cell center. Throws NonFiniteSample on the first bad value.
    std::vector<double> sample(const ScalarField& f) const;

private:
    CellDecomposition(BoxDomain box) : box_(std::move(box)) {}

    BoxDomain box_;
    std::size_t dim_ = 0;
    std::size_t resolution_ = 0;
    double cell_volume_ = 0.0;
    double total_mass_ = 0.0;
    std::vector<double> centers_;
    std::vector<double> masses_;
};

/// sum_k f(center_k) * weighted_mass_k
double integrate(const MonomialWeight& w, const ScalarField& f, const BoxDomain& box, std::size_t resolution);
double integrate(const CellDecomposition& cells, std::span<const double> samples);

/// mu{|f| > s}, counting the cells whose center value exceeds s.
double measure_superlevel(const MonomialWeight& w, const ScalarField& f, double s, const BoxDomain& box,
                          std::size_t resolution);
double measure_superlevel(const CellDecomposition& cells, std::span<const double> abs_samples, double s);

/// Plain Monte Carlo estimate of the weighted integral. Cross-check only.
double monte_carlo_integrate(const MonomialWeight& w, const ScalarField& f, const BoxDomain& box,
                             std::size_t samples, std::uint64_t seed);

}  // namespace monosob
