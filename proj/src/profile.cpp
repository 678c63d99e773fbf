#include "monosob/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace monosob {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t interval_index(std::span<const double> grid, double t) {
    auto it = std::upper_bound(grid.begin(), grid.end(), t);
    return static_cast<std::size_t>(it - grid.begin()) - 1;
}

double interpolate(std::span<const double> grid, std::span<const double> v, double t) {
    if (t <= grid.front()) return v.front();
    const std::size_t j = interval_index(grid, t);
    if (j + 1 >= grid.size()) return v.back();
    const double w = (t - grid[j]) / (grid[j + 1] - grid[j]);
    return v[j] + w * (v[j + 1] - v[j]);
}

void write_number(std::ostream& os, double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    os << buf;
}

}  // namespace

double PowerTail::operator()(double t) const {
    if (coefficient == 0.0) return 0.0;
    if (t <= 0.0) return exponent > 0.0 ? kInf : (exponent == 0.0 ? coefficient : 0.0);
    return coefficient * std::pow(t, -exponent);
}

double PowerTail::integral(double a, double b) const {
    if (coefficient == 0.0 || !(a < b)) return 0.0;
    const double e = 1.0 - exponent;
    if (e == 0.0) {
        if (a <= 0.0 || std::isinf(b)) return kInf;
        return coefficient * std::log(b / a);
    }
    if (std::isinf(b)) {
        if (e > 0.0) return kInf;
        return a <= 0.0 ? kInf : coefficient * std::pow(a, e) / -e;
    }
    if (a <= 0.0) return e < 0.0 ? kInf : coefficient * std::pow(b, e) / e;
    return coefficient * std::pow(a, e) * std::expm1(e * std::log(b / a)) / e;
}

SampledCurve::SampledCurve(std::vector<double> grid, std::vector<double> values, PowerTail tail)
    : grid_(std::move(grid)), values_(std::move(values)), tail_(tail) {
    if (grid_.size() != values_.size()) throw std::invalid_argument("curve grid and values differ in length");
    for (std::size_t j = 1; j < grid_.size(); ++j)
        if (!(grid_[j - 1] < grid_[j])) throw std::invalid_argument("curve grid must be strictly increasing");
    if (!grid_.empty() && !(grid_.front() > 0.0)) throw std::invalid_argument("curve grid must be positive");
}

double SampledCurve::value_at(double t) const {
    if (grid_.empty()) return tail_(t);
    if (t <= grid_.front()) return values_.front();
    if (t > grid_.back()) return tail_(t);
    return interpolate(grid_, values_, t);
}

double SampledCurve::sup() const {
    double s = 0.0;
    for (double v : values_) s = std::max(s, v);
    if (!tail_.zero() && tail_.exponent < 0.0) return kInf;
    if (!grid_.empty()) s = std::max(s, tail_(grid_.back()));
    return s;
}

SampledCurve SampledCurve::times_power(double beta) const {
    std::vector<double> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = values_[j] * std::pow(grid_[j], beta);
    return {grid_, std::move(v), {tail_.coefficient, tail_.exponent - beta}};
}

SampledCurve SampledCurve::pow(double r) const {
    std::vector<double> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::pow(values_[j], r);
    return {grid_, std::move(v), {std::pow(tail_.coefficient, r), tail_.exponent * r}};
}

void SampledCurve::write_csv(std::ostream& os) const {
    os << "t,value\n";
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        write_number(os, grid_[j]);
        os << ',';
        write_number(os, values_[j]);
        os << '\n';
    }
}

std::vector<double> MonotoneProfile::geometric_grid(double T, std::size_t n) {
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("grid end point must be positive and finite");
    if (n < 2) throw std::invalid_argument("grid needs at least two points");
    std::vector<double> g(n);
    const double lo = std::log(kGridSpan);
    for (std::size_t j = 0; j < n; ++j) {
        const double frac = static_cast<double>(j) / static_cast<double>(n - 1);
        g[j] = T * std::exp(lo * (1.0 - frac));
    }
    g.back() = T;
    return g;
}

MonotoneProfile MonotoneProfile::from_steps(std::span<const double> levels, std::span<const double> lengths,
                                            std::size_t grid_size, PowerTail tail) {
    if (levels.size() != lengths.size()) throw std::invalid_argument("levels and lengths differ in length");
    std::size_t K = 0;
    std::vector<double> ends;
    std::vector<double> cum;
    ends.reserve(levels.size());
    cum.reserve(levels.size());
    double M = 0.0, C = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (!(levels[k] > 0.0)) break;
        if (k > 0 && levels[k] > levels[k - 1]) throw std::invalid_argument("step levels must be nonincreasing");
        if (!(lengths[k] >= 0.0)) throw std::invalid_argument("step lengths must be nonnegative");
        if (lengths[k] == 0.0) continue;
        M += lengths[k];
        C += levels[k] * lengths[k];
        ends.push_back(M);
        cum.push_back(C);
        ++K;
    }
    MonotoneProfile p;
    p.tail_ = tail;
    if (K == 0) return p;

    std::vector<double> lv;
    lv.reserve(K);
    for (std::size_t k = 0, used = 0; used < K; ++k)
        if (lengths[k] > 0.0) lv.push_back(levels[k]), ++used;

    p.grid_ = geometric_grid(M, grid_size);
    const std::size_t n = p.grid_.size();
    p.values_.resize(n);
    p.cumulative_.resize(n);
    std::size_t k = 0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double t = p.grid_[j];
        while (k + 1 < K && ends[k] <= t) ++k;
        const double start = k == 0 ? 0.0 : ends[k - 1];
        const double before = k == 0 ? 0.0 : cum[k - 1];
        p.values_[j] = lv[k];
        p.cumulative_[j] = before + lv[k] * (t - start);
    }
    p.values_.back() = lv.back();
    p.cumulative_.back() = cum.back();

    std::vector<std::size_t> hits(n, 0);
    for (std::size_t b = 0; b + 1 < K; ++b) {
        if (ends[b] < p.grid_.front() || !(lv[b + 1] < lv[b])) continue;
        const std::size_t j = interval_index(p.grid_, ends[b]);
        if (j + 1 < n) ++hits[j];
    }
    p.resolved_from_ = p.grid_.front();
    for (std::size_t j = n - 1; j-- > 0;) {
        if (hits[j] == 0) {
            p.resolved_from_ = p.grid_[j + 1];
            break;
        }
    }
    return p;
}

MonotoneProfile MonotoneProfile::from_samples(std::vector<double> grid, std::vector<double> values, PowerTail tail) {
    if (grid.size() != values.size()) throw std::invalid_argument("profile grid and values differ in length");
    MonotoneProfile p;
    p.tail_ = tail;
    if (grid.empty()) return p;
    for (std::size_t j = 1; j < grid.size(); ++j)
        if (!(grid[j - 1] < grid[j])) throw std::invalid_argument("profile grid must be strictly increasing");
    if (!(grid.front() > 0.0)) throw std::invalid_argument("profile grid must be positive");
    double run = kInf;
    for (double& v : values) {
        if (std::isnan(v)) throw std::invalid_argument("profile sample is NaN");
        v = std::clamp(v, 0.0, run);
        run = v;
    }
    p.cumulative_.resize(grid.size());
    p.cumulative_[0] = values[0] * grid[0];
    for (std::size_t j = 1; j < grid.size(); ++j)
        p.cumulative_[j] = p.cumulative_[j - 1] + 0.5 * (values[j] + values[j - 1]) * (grid[j] - grid[j - 1]);
    p.resolved_from_ = grid.front();
    p.grid_ = std::move(grid);
    p.values_ = std::move(values);
    return p;
}

MonotoneProfile MonotoneProfile::step(double c, double a, std::size_t grid_size) {
    const double level[1] = {c};
    const double length[1] = {a};
    return from_steps(level, length, grid_size);
}

double MonotoneProfile::value_at(double t) const {
    if (grid_.empty()) return tail_(t);
    if (t <= grid_.front()) return values_.front();
    if (t > grid_.back()) return tail_(t);
    return interpolate(grid_, values_, t);
}

double MonotoneProfile::integral_to(double t) const {
    if (t <= 0.0) return 0.0;
    if (grid_.empty()) return tail_.integral(0.0, t);
    if (t <= grid_.front()) return values_.front() * t;
    if (t >= grid_.back()) return cumulative_.back() + tail_.integral(grid_.back(), t);
    return interpolate(grid_, cumulative_, t);
}

Integral MonotoneProfile::total_integral() const {
    const double T = support_mass();
    const double body = grid_.empty() ? 0.0 : cumulative_.back();
    const double rest = tail_.integral(T, kInf);
    if (std::isinf(rest)) return Integral::divergent("profile tail not integrable at infinity");
    return {body + rest, {}};
}

MonotoneProfile MonotoneProfile::dilate(double s) const {
    if (!(s > 0.0)) throw std::invalid_argument("dilation factor must be positive");
    MonotoneProfile p = *this;
    for (double& t : p.grid_) t *= s;
    for (double& c : p.cumulative_) c *= s;
    p.tail_.coefficient = tail_.coefficient * std::pow(s, tail_.exponent);
    p.resolved_from_ = resolved_from_ * s;
    return p;
}

MonotoneProfile MonotoneProfile::power(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("profile power must be positive");
    std::vector<double> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::pow(values_[j], r);
    MonotoneProfile p = from_samples(grid_, std::move(v),
                                     {std::pow(tail_.coefficient, r), tail_.exponent * r});
    p.resolved_from_ = resolved_from_;
    return p;
}

SampledCurve MonotoneProfile::as_curve() const { return {grid_, values_, tail_}; }

void MonotoneProfile::write_csv(std::ostream& os) const {
    os << "t,value\n";
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        write_number(os, grid_[j]);
        os << ',';
        write_number(os, values_[j]);
        os << '\n';
    }
}

}  // namespace monosob
