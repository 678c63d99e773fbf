#include "monosob/weights.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "monosob/profile.hpp"

namespace monosob {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEdgeTol = 1e-12;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double parse_number(std::string_view s, std::string_view what) {
    std::string str(s);
    char* end = nullptr;
    const double v = std::strtod(str.c_str(), &end);
    if (str.empty() || end != str.c_str() + str.size() || !std::isfinite(v))
        throw std::invalid_argument("bad number '" + str + "' in weight " + std::string(what));
    return v;
}

double power_segment(double a, double b, double e) { return PowerTail{1.0, -e}.integral(a, b); }

Decision decide(double e, double log_power, bool below) {
    // below: convergence needs e > -1 (at zero); otherwise e < -1 (at infinity)
    if (std::abs(e + 1.0) <= kEdgeTol) return log_power < -1.0 ? Decision::yes : Decision::no;
    if (below) return e > -1.0 ? Decision::yes : Decision::no;
    return e < -1.0 ? Decision::yes : Decision::no;
}

}  // namespace

WeightFunction WeightFunction::constant() { return WeightFunction(); }

WeightFunction WeightFunction::power(double beta) {
    if (!std::isfinite(beta)) throw std::invalid_argument("power weight exponent must be finite");
    WeightFunction w;
    w.kind_ = WeightKind::power;
    w.params_ = {beta};
    return w;
}

WeightFunction WeightFunction::logarithmic(double alpha) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("logarithmic weight exponent must be finite");
    WeightFunction w;
    w.kind_ = WeightKind::logarithmic;
    w.params_ = {alpha};
    return w;
}

WeightFunction WeightFunction::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("exponential weight rate must be positive");
    WeightFunction w;
    w.kind_ = WeightKind::exponential;
    w.params_ = {rate};
    return w;
}

WeightFunction WeightFunction::broken_power(double beta0, double beta1) {
    if (!std::isfinite(beta0) || !std::isfinite(beta1)) throw std::invalid_argument("broken power exponents must be finite");
    WeightFunction w;
    w.kind_ = WeightKind::broken_power;
    w.params_ = {beta0, beta1};
    return w;
}

WeightFunction WeightFunction::tabulated(std::vector<double> grid, std::vector<double> values,
                                         std::optional<double> power_at_zero, std::optional<double> power_at_infinity) {
    if (grid.size() < 2 || grid.size() != values.size())
        throw std::invalid_argument("tabulated weight needs at least two (t, w) pairs");
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (!(grid[j] > 0.0) || !(values[j] > 0.0) || !std::isfinite(values[j]))
            throw std::invalid_argument("tabulated weight needs positive t and w");
        if (j > 0 && !(grid[j - 1] < grid[j])) throw std::invalid_argument("tabulated weight grid must increase");
    }
    WeightFunction w;
    w.kind_ = WeightKind::tabulated;
    w.table_t_ = std::move(grid);
    w.table_w_ = std::move(values);
    w.table_p0_ = power_at_zero;
    w.table_pinf_ = power_at_infinity;
    return w;
}

WeightFunction WeightFunction::custom(std::string name, std::function<double(double)> fn,
                                      std::optional<Asymptote> at_zero, std::optional<Asymptote> at_infinity) {
    WeightFunction w;
    w.kind_ = WeightKind::custom;
    w.name_ = std::move(name);
    w.fn_ = std::move(fn);
    w.custom_zero_ = at_zero;
    w.custom_inf_ = at_infinity;
    return w;
}

WeightFunction WeightFunction::parse(std::string_view text) {
    if (text == "1" || text == "const" || text == "constant") return constant();
    if (text.substr(0, 2) == "t^") return power(parse_number(text.substr(2), text));
    if (text.substr(0, 4) == "log^") return logarithmic(parse_number(text.substr(4), text));
    if (text == "exp") return exponential(1.0);
    if (text.substr(0, 4) == "exp^") return exponential(parse_number(text.substr(4), text));
    if (text.substr(0, 7) == "broken:") {
        const auto rest = text.substr(7);
        const auto colon = rest.find(':');
        if (colon == std::string_view::npos) throw std::invalid_argument("broken weight needs broken:b0:b1");
        return broken_power(parse_number(rest.substr(0, colon), text), parse_number(rest.substr(colon + 1), text));
    }
    throw std::invalid_argument("unknown weight '" + std::string(text) +
                                "' (valid: 1, t^b, log^a, exp, exp^r, broken:b0:b1)");
}

std::string WeightFunction::to_string() const {
    std::string base;
    switch (kind_) {
        case WeightKind::constant: base = "1"; break;
        case WeightKind::power: base = "t^" + fmt(params_[0]); break;
        case WeightKind::logarithmic: base = "log^" + fmt(params_[0]); break;
        case WeightKind::exponential: base = params_[0] == 1.0 ? "exp" : "exp^" + fmt(params_[0]); break;
        case WeightKind::broken_power: base = "broken:" + fmt(params_[0]) + ":" + fmt(params_[1]); break;
        case WeightKind::tabulated: base = "table"; break;
        case WeightKind::custom: base = name_; break;
    }
    if (extra_power_ != 0.0) base += "*t^" + fmt(extra_power_);
    return base;
}

WeightFunction WeightFunction::times_power(double g) const {
    WeightFunction w = *this;
    w.extra_power_ += g;
    return w;
}

double WeightFunction::table_value(double t) const {
    const auto& T = table_t_;
    const auto& W = table_w_;
    if (t <= T.front()) return W.front() * std::pow(t / T.front(), table_p0_.value_or(0.0));
    if (t >= T.back()) return W.back() * std::pow(t / T.back(), table_pinf_.value_or(0.0));
    const std::size_t j = static_cast<std::size_t>(std::upper_bound(T.begin(), T.end(), t) - T.begin()) - 1;
    const double x = std::log(t / T[j]) / std::log(T[j + 1] / T[j]);
    return std::exp((1.0 - x) * std::log(W[j]) + x * std::log(W[j + 1]));
}

double WeightFunction::operator()(double t) const {
    double base = 1.0;
    switch (kind_) {
        case WeightKind::constant: break;
        case WeightKind::power: base = std::pow(t, params_[0]); break;
        case WeightKind::logarithmic: base = std::pow(1.0 + std::abs(std::log(t)), params_[0]); break;
        case WeightKind::exponential: base = std::exp(-params_[0] * t); break;
        case WeightKind::broken_power: base = std::pow(t, t <= 1.0 ? params_[0] : params_[1]); break;
        case WeightKind::tabulated: base = table_value(t); break;
        case WeightKind::custom: base = fn_(t); break;
    }
    return extra_power_ == 0.0 ? base : base * std::pow(t, extra_power_);
}

std::optional<Asymptote> WeightFunction::at_zero() const {
    Asymptote a;
    switch (kind_) {
        case WeightKind::constant:
        case WeightKind::exponential: break;
        case WeightKind::power: a.power = params_[0]; break;
        case WeightKind::logarithmic: a.log_power = params_[0]; break;
        case WeightKind::broken_power: a.power = params_[0]; break;
        case WeightKind::tabulated:
            if (!table_p0_) return std::nullopt;
            a.power = *table_p0_;
            break;
        case WeightKind::custom:
            if (!custom_zero_) return std::nullopt;
            a = *custom_zero_;
            break;
    }
    a.power += extra_power_;
    return a;
}

std::optional<Asymptote> WeightFunction::at_infinity() const {
    Asymptote a;
    switch (kind_) {
        case WeightKind::constant: break;
        case WeightKind::exponential: a.exponential_decay = true; break;
        case WeightKind::power: a.power = params_[0]; break;
        case WeightKind::logarithmic: a.log_power = params_[0]; break;
        case WeightKind::broken_power: a.power = params_[1]; break;
        case WeightKind::tabulated:
            if (!table_pinf_) return std::nullopt;
            a.power = *table_pinf_;
            break;
        case WeightKind::custom:
            if (!custom_inf_) return std::nullopt;
            a = *custom_inf_;
            break;
    }
    a.power += extra_power_;
    return a;
}

std::optional<double> WeightFunction::pure_power() const {
    if (kind_ == WeightKind::constant) return extra_power_;
    if (kind_ == WeightKind::power) return params_[0] + extra_power_;
    return std::nullopt;
}

std::optional<std::pair<double, double>> WeightFunction::end_exponents() const {
    const auto z = at_zero();
    const auto i = at_infinity();
    if (!z || !i || i->exponential_decay) return std::nullopt;
    return std::make_pair(z->power, i->power);
}

Decision WeightFunction::integrable_at_zero(double c) const {
    const auto a = at_zero();
    if (!a) return Decision::undecidable;
    return decide(a->power + c, a->log_power, true);
}

Decision WeightFunction::integrable_at_infinity(double c) const {
    const auto a = at_infinity();
    if (!a) return Decision::undecidable;
    if (a->exponential_decay) return Decision::yes;
    return decide(a->power + c, a->log_power, false);
}

bool WeightFunction::piecewise_power() const {
    return kind_ == WeightKind::constant || kind_ == WeightKind::power || kind_ == WeightKind::broken_power;
}

Integral WeightFunction::moment(double a, double b, double c) const {
    if (!(a < b)) return {};
    if (a < 0.0) throw std::invalid_argument("weight moments live on (0, infinity)");
    if (a == 0.0) {
        const Decision d = integrable_at_zero(c);
        if (d == Decision::undecidable) return Integral::divergent("undecidable: weight has no behaviour at 0");
        if (d == Decision::no) return Integral::divergent("weight moment diverges at 0");
    }
    if (std::isinf(b)) {
        const Decision d = integrable_at_infinity(c);
        if (d == Decision::undecidable) return Integral::divergent("undecidable: weight has no tail metadata");
        if (d == Decision::no) return Integral::divergent("weight moment diverges at infinity");
    }
    if (piecewise_power()) {
        const double g = extra_power_ + c;
        double v = 0.0;
        if (kind_ == WeightKind::broken_power) {
            if (a < 1.0) v += power_segment(a, std::min(b, 1.0), params_[0] + g);
            if (b > 1.0) v += power_segment(std::max(a, 1.0), b, params_[1] + g);
        } else {
            v = power_segment(a, b, (kind_ == WeightKind::power ? params_[0] : 0.0) + g);
        }
        return {v, {}};
    }
    auto h = [&](double u) {
        const double t = std::exp(u);
        const double val = (*this)(t) * std::pow(t, c) * t;
        return std::isfinite(val) ? val : 0.0;
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double ua = a == 0.0 ? -kInf : std::log(a);
    const double ub = std::isinf(b) ? kInf : std::log(b);
    std::vector<double> cuts = {ua};
    if (kind_ == WeightKind::logarithmic && ua < 0.0 && ub > 0.0) cuts.push_back(0.0);
    if (kind_ == WeightKind::tabulated)
        for (double t : table_t_) {
            const double u = std::log(t);
            if (u > ua && u < ub) cuts.push_back(u);
        }
    cuts.push_back(ub);
    std::sort(cuts.begin() + 1, cuts.end() - 1);
    double v = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) v += GK::integrate(h, cuts[k], cuts[k + 1], 15, 1e-12);
    return {v, {}};
}

Integral WeightFunction::tail_moment(double t, double p) const { return moment(t, kInf, -p); }

std::vector<double> WeightFunction::grid_moments(std::span<const double> grid, double c) const {
    if (grid.size() < 2) return {};
    if (kind_ == WeightKind::constant || kind_ == WeightKind::power)
        return power_increments(grid, *pure_power() + c);
    std::vector<double> out(grid.size() - 1);
    if (kind_ == WeightKind::broken_power) {
        for (std::size_t j = 0; j + 1 < grid.size(); ++j) out[j] = moment(grid[j], grid[j + 1], c).value;
        return out;
    }
    const auto inc = power_increments(grid, extra_power_ + c);
    WeightFunction base = *this;
    base.extra_power_ = 0.0;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) out[j] = base(std::sqrt(grid[j] * grid[j + 1])) * inc[j];
    return out;
}

}  // namespace monosob
