#include "monosob/weighted_measure.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "monosob/simd/kernels.hpp"

namespace monosob {
namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 25;

void check_exponents(std::span<const double> a) {
    if (a.empty() || a.size() > kMaxDimension)
        throw std::invalid_argument("monomial weight dimension must be 1, 2 or 3");
    for (double ai : a)
        if (!std::isfinite(ai) || ai < 0.0)
            throw std::invalid_argument("monomial weight exponents must be finite and >= 0");
}

std::string describe_cell(std::size_t cell, const std::vector<double>& center) {
    std::ostringstream os;
    os << "non-finite sample in cell " << cell << " at (";
    for (std::size_t i = 0; i < center.size(); ++i) os << (i ? ", " : "") << center[i];
    os << ")";
    return os.str();
}

}  // namespace

double homogeneous_dimension(std::span<const double> exponents) {
    check_exponents(exponents);
    double d = static_cast<double>(exponents.size());
    for (double ai : exponents) d += ai;
    return d;
}

MonomialWeight::MonomialWeight(std::vector<double> exponents)
    : exponents_(std::move(exponents)), D_(monosob::homogeneous_dimension(exponents_)) {}

bool MonomialWeight::is_unweighted() const {
    for (double ai : exponents_)
        if (ai != 0.0) return false;
    return true;
}

double MonomialWeight::operator()(Point x) const {
    double value = 1.0;
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        if (exponents_[i] == 0.0) continue;
        value *= std::pow(std::abs(x[i]), exponents_[i]);
    }
    return value;
}

double weight_at(const MonomialWeight& w, Point x) { return w(x); }

BoxDomain::BoxDomain(std::vector<double> lo, std::vector<double> hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size() || lower.empty())
        throw std::invalid_argument("box bounds must be non-empty and of equal dimension");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i]))
            throw std::invalid_argument("box requires finite lower_i < upper_i on every axis");
}

BoxDomain BoxDomain::symmetric(std::size_t n, double half_width) {
    return BoxDomain(std::vector<double>(n, -half_width), std::vector<double>(n, half_width));
}

double BoxDomain::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
    return v;
}

bool BoxDomain::contains(Point x) const {
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (x[i] < lower[i] || x[i] > upper[i]) return false;
    return true;
}

NonFiniteSample::NonFiniteSample(std::size_t cell, std::vector<double> center)
    : std::runtime_error(describe_cell(cell, center)), cell_(cell), center_(std::move(center)) {}

CellDecomposition CellDecomposition::build(const MonomialWeight& w, const BoxDomain& box, std::size_t resolution) {
    const std::size_t n = w.dimension();
    if (box.dimension() != n) throw std::invalid_argument("box and weight dimensions differ");
    if (resolution == 0) throw std::invalid_argument("resolution must be positive");
    std::size_t count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (count > kMaxCells / resolution) throw std::invalid_argument("cell decomposition too large");
        count *= resolution;
    }

    CellDecomposition cells(box);
    cells.dim_ = n;
    cells.resolution_ = resolution;

    // Per-axis centers and weight factors; the monomial weight is separable.
    std::vector<std::vector<double>> axis_center(n), axis_factor(n);
    double volume = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = (box.upper[i] - box.lower[i]) / static_cast<double>(resolution);
        volume *= h;
        axis_center[i].resize(resolution);
        axis_factor[i].resize(resolution);
        for (std::size_t j = 0; j < resolution; ++j) {
            const double c = box.lower[i] + (static_cast<double>(j) + 0.5) * h;
            axis_center[i][j] = c;
            axis_factor[i][j] = w.exponents()[i] == 0.0 ? 1.0 : std::pow(std::abs(c), w.exponents()[i]);
        }
    }
    cells.cell_volume_ = volume;

    cells.centers_.resize(count * n);
    cells.masses_.resize(count);
    const std::size_t rows = count / resolution;
    std::vector<double> axis0_mass(resolution);
    simd::scale(axis0_mass, axis_factor[0], volume);
    for (std::size_t r = 0; r < rows; ++r) {
        double row_factor = 1.0;
        std::size_t rest = r;
        std::size_t idx[kMaxDimension] = {0, 0, 0};
        for (std::size_t i = 1; i < n; ++i) {
            idx[i] = rest % resolution;
            rest /= resolution;
            row_factor *= axis_factor[i][idx[i]];
        }
        std::span<double> row_mass(cells.masses_.data() + r * resolution, resolution);
        simd::scale(row_mass, axis0_mass, row_factor);
        for (std::size_t j = 0; j < resolution; ++j) {
            double* c = cells.centers_.data() + (r * resolution + j) * n;
            c[0] = axis_center[0][j];
            for (std::size_t i = 1; i < n; ++i) c[i] = axis_center[i][idx[i]];
        }
    }
    double total = 0.0;
    for (double m : cells.masses_) total += m;
    cells.total_mass_ = total;
    return cells;
}

std::vector<double> CellDecomposition::sample(const ScalarField& f) const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double v = f(center(k));
        if (!std::isfinite(v)) {
            Point c = center(k);
            throw NonFiniteSample(k, std::vector<double>(c.begin(), c.end()));
        }
        out[k] = v;
    }
    return out;
}

double integrate(const CellDecomposition& cells, std::span<const double> samples) {
    return simd::dot(samples, cells.masses());
}

double integrate(const MonomialWeight& w, const ScalarField& f, const BoxDomain& box, std::size_t resolution) {
    const auto cells = CellDecomposition::build(w, box, resolution);
    const auto samples = cells.sample(f);
    return integrate(cells, samples);
}

double measure_superlevel(const CellDecomposition& cells, std::span<const double> abs_samples, double s) {
    return simd::masked_sum_greater(abs_samples, cells.masses(), s);
}

double measure_superlevel(const MonomialWeight& w, const ScalarField& f, double s, const BoxDomain& box,
                          std::size_t resolution) {
    if (s < 0.0) throw std::invalid_argument("superlevel threshold must be >= 0");
    const auto cells = CellDecomposition::build(w, box, resolution);
    auto samples = cells.sample(f);
    for (double& v : samples) v = std::abs(v);
    return measure_superlevel(cells, samples, s);
}

double monte_carlo_integrate(const MonomialWeight& w, const ScalarField& f, const BoxDomain& box,
                             std::size_t samples, std::uint64_t seed) {
    if (box.dimension() != w.dimension()) throw std::invalid_argument("box and weight dimensions differ");
    if (samples == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
    std::mt19937_64 rng(seed);
    std::vector<std::uniform_real_distribution<double>> axis;
    for (std::size_t i = 0; i < box.dimension(); ++i) axis.emplace_back(box.lower[i], box.upper[i]);
    std::vector<double> x(box.dimension());
    double acc = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = axis[i](rng);
        acc += f(x) * w(x);
    }
    return acc / static_cast<double>(samples) * box.volume();
}

}  // namespace monosob
