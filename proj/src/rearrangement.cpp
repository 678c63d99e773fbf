#include "monosob/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "monosob/simd/kernels.hpp"

namespace monosob {
namespace {

constexpr double kJumpFactor = 10.0;
constexpr std::size_t kJumpWindow = 16;
constexpr int kTailPointsPerDecade = 100;

}  // namespace

SortedCells sort_cells(const CellDecomposition& cells, std::span<const double> samples) {
    if (samples.size() != cells.size()) throw std::invalid_argument("sample count differs from cell count");
    SortedCells s;
    s.order.resize(samples.size());
    std::iota(s.order.begin(), s.order.end(), std::size_t{0});
    std::vector<double> a(samples.size());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = std::abs(samples[k]);
    std::stable_sort(s.order.begin(), s.order.end(), [&](std::size_t x, std::size_t y) { return a[x] > a[y]; });
    s.values.resize(a.size());
    s.masses.resize(a.size());
    const auto m = cells.masses();
    for (std::size_t k = 0; k < a.size(); ++k) {
        s.values[k] = a[s.order[k]];
        s.masses[k] = m[s.order[k]];
    }
    return s;
}

DistributionFunction distribution_function(const CellDecomposition& cells, std::span<const double> samples,
                                           std::size_t n_levels) {
    if (n_levels < 2) throw std::invalid_argument("distribution function needs at least two levels");
    std::vector<double> a(samples.size());
    double sup = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] = std::abs(samples[k]);
        sup = std::max(sup, a[k]);
    }
    DistributionFunction d;
    d.levels.resize(n_levels);
    d.masses.resize(n_levels);
    for (std::size_t j = 0; j < n_levels; ++j) {
        d.levels[j] = sup * static_cast<double>(j) / static_cast<double>(n_levels - 1);
        d.masses[j] = measure_superlevel(cells, a, d.levels[j]);
    }
    return d;
}

MonotoneProfile rearrange(const SortedCells& sorted, std::size_t grid_size) {
    return MonotoneProfile::from_steps(sorted.values, sorted.masses, grid_size);
}

MonotoneProfile rearrange(const MonomialWeight& w, const ScalarField& f, const BoxDomain& box,
                          std::size_t resolution, std::size_t grid_size) {
    const auto cells = CellDecomposition::build(w, box, resolution);
    const auto samples = cells.sample(f);
    return rearrange(sort_cells(cells, samples), grid_size);
}

MonotoneProfile rearrange_pieces(std::span<const double> values, std::span<const double> lengths,
                                 std::size_t grid_size, PowerTail tail) {
    if (values.size() != lengths.size()) throw std::invalid_argument("values and lengths differ in length");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
    std::vector<double> v(order.size()), l(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        v[k] = values[order[k]];
        l[k] = lengths[order[k]];
    }
    return MonotoneProfile::from_steps(v, l, grid_size, tail);
}

MonotoneProfile rearrange_curve(const SampledCurve& curve, std::size_t grid_size) {
    const PowerTail& tail = curve.tail();
    if (!tail.zero() && !(tail.exponent > 0.0)) throw std::domain_error("curve does not decay at infinity");
    std::vector<double> values, lengths;
    const auto g = curve.grid();
    const auto v = curve.values();
    if (!g.empty()) {
        values.reserve(g.size() + 1);
        lengths.reserve(g.size() + 1);
        values.push_back(std::max(0.0, v[0]));
        lengths.push_back(g[0]);
        for (std::size_t j = 0; j + 1 < g.size(); ++j) {
            values.push_back(std::max(0.0, 0.5 * (v[j] + v[j + 1])));
            lengths.push_back(g[j + 1] - g[j]);
        }
    }
    PowerTail rest;
    if (!tail.zero()) {
        const double start = g.empty() ? 1.0 : g.back();
        if (g.empty()) {
            values.push_back(tail.integral(0.0, start) / start);
            lengths.push_back(start);
        }
        const double decades = std::min(12.0, 10.0 / tail.exponent);
        const int points = std::max(1, static_cast<int>(std::ceil(decades * kTailPointsPerDecade)));
        const double step = decades * std::log(10.0) / points;
        double a = start;
        for (int k = 1; k <= points; ++k) {
            const double b = start * std::exp(step * k);
            values.push_back(tail.integral(a, b) / (b - a));
            lengths.push_back(b - a);
            a = b;
        }
        rest = tail;
    }
    return rearrange_pieces(values, lengths, grid_size, rest);
}

MonotoneProfile double_star(const MonotoneProfile& p) {
    if (p.empty()) {
        const PowerTail& t = p.tail();
        if (t.zero()) return {};
        if (t.exponent < 1.0) return MonotoneProfile::from_samples({}, {}, {t.coefficient / (1.0 - t.exponent), t.exponent});
        throw std::domain_error("profile not integrable near zero");
    }
    const auto g = p.grid();
    const auto c = p.cumulative();
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) v[j] = c[j] / g[j];
    PowerTail tail{c.back(), 1.0};
    const PowerTail& pt = p.tail();
    if (!pt.zero()) {
        if (pt.exponent > 1.0) {
            tail.coefficient = c.back() + pt.integral(g.back(), std::numeric_limits<double>::infinity());
        } else {
            tail = {pt.coefficient / (1.0 - pt.exponent), pt.exponent};
        }
    }
    MonotoneProfile out = MonotoneProfile::from_samples(std::vector<double>(g.begin(), g.end()), std::move(v), tail);
    return out;
}

SampledCurve oscillation(const MonotoneProfile& p) {
    if (p.empty()) return {};
    const auto ds = double_star(p);
    const auto g = p.grid();
    const auto f = p.values();
    const auto F = ds.values();
    std::vector<double> o(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) o[j] = std::max(0.0, F[j] - f[j]);
    PowerTail tail = ds.tail();
    if (!p.tail().zero() && p.tail().exponent == tail.exponent)
        tail.coefficient = std::max(0.0, tail.coefficient - p.tail().coefficient);
    return {std::vector<double>(g.begin(), g.end()), std::move(o), tail};
}

ProfileDerivative profile_derivative(const MonotoneProfile& p) {
    ProfileDerivative out;
    if (p.empty()) return out;
    const auto g = p.grid();
    const auto v = p.values();
    const std::size_t n = g.size();
    std::vector<double> d(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t lo = j == 0 ? 0 : j - 1;
        const std::size_t hi = j + 1 < n ? j + 1 : n - 1;
        if (hi == lo) continue;
        d[j] = std::max(0.0, (v[lo] - v[hi]) / (g[hi] - g[lo]));
    }
    const double scale = std::max(v[0], 1e-300);
    std::size_t start = 0;
    while (start < n && g[start] < p.resolved_from()) ++start;
    std::vector<double> drops;
    std::vector<std::size_t> at;
    for (std::size_t j = start; j + kJumpWindow < n; j += kJumpWindow) {
        drops.push_back(v[j] - v[j + kJumpWindow]);
        at.push_back(j);
    }
    for (std::size_t k = 1; k + 1 < drops.size(); ++k) {
        const double drop = drops[k];
        const double local = 0.5 * (drops[k - 1] + drops[k + 1]);
        if (drop <= 1e-9 * scale) continue;
        const double ratio = local > 0.0 ? drop / local : std::numeric_limits<double>::infinity();
        if (ratio > kJumpFactor && ratio > out.worst_jump_ratio) {
            out.absolutely_continuous = false;
            out.worst_jump_ratio = ratio;
            out.jump_t = g[at[k]];
        }
    }
    out.derivative = SampledCurve(std::vector<double>(g.begin(), g.end()), std::move(d));
    return out;
}

SampledCurve oscillation_from_derivative(const MonotoneProfile& p) {
    if (p.empty()) return {};
    const auto pd = profile_derivative(p);
    const auto g = p.grid();
    const auto d = pd.derivative.values();
    const std::size_t n = g.size();
    std::vector<double> o(n);
    double acc = 0.5 * d[0] * g[0] * g[0];
    o[0] = acc / g[0];
    for (std::size_t j = 1; j < n; ++j) {
        acc += 0.5 * (g[j - 1] * d[j - 1] + g[j] * d[j]) * (g[j] - g[j - 1]);
        o[j] = acc / g[j];
    }
    const double total = p.integral_to(g.back());
    return {std::vector<double>(g.begin(), g.end()), std::move(o), PowerTail{total, 1.0}};
}

double truncate_value(double v, double t1, double t2) {
    const double a = std::abs(v);
    if (a > t2) return t2 - t1;
    if (a > t1) return a - t1;
    return 0.0;
}

ScalarField truncate(ScalarField f, double t1, double t2) {
    if (!(t1 >= 0.0) || !(t1 < t2)) throw std::invalid_argument("truncation requires 0 <= t1 < t2");
    return [f = std::move(f), t1, t2](Point x) { return truncate_value(f(x), t1, t2); };
}

}  // namespace monosob
