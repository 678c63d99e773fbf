#include "monosob/space_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "monosob/rearrangement.hpp"
#include "monosob/simd/kernels.hpp"
#include "monosob/weighted_measure.hpp"

namespace monosob {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
    if (std::isinf(x)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double parse_value(const std::string& s, const std::string& key) {
    if (s == "inf" || s == "infinity") return kInf;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || std::isnan(v))
        throw std::invalid_argument("bad value '" + s + "' for space parameter " + key);
    return v;
}

Integral root(const Integral& x, double q) {
    if (!x.finite()) return x;
    return {std::pow(std::max(0.0, x.value), 1.0 / q), {}};
}

/// sup_t t^a * v(t) * L(t) over the grid and the tail.
Integral sup_weighted(const MonotoneProfile& f, double a, double alpha) {
    auto factor = [&](double t) { return std::pow(t, a) * (alpha == 0.0 ? 1.0 : std::pow(1.0 + std::abs(std::log(t)), alpha)); };
    double s = 0.0;
    const auto g = f.grid();
    const auto v = f.values();
    for (std::size_t j = 0; j < g.size(); ++j) s = std::max(s, factor(g[j]) * v[j]);
    const PowerTail& tail = f.tail();
    if (!tail.zero()) {
        if (tail.exponent < a) return Integral::divergent("t^(1/p) f(t) unbounded at infinity");
        const double T = g.empty() ? 1.0 : g.back();
        for (int k = 0; k <= 400; ++k) {
            const double t = T * std::pow(10.0, k * 0.02);
            s = std::max(s, factor(t) * tail(t));
        }
    }
    if (!g.empty() && a == 0.0 && alpha == 0.0) s = std::max(s, v.front());
    return {s, {}};
}

Integral ggamma_norm(const MonotoneProfile& f, double p, double m, const WeightFunction& w) {
    if (f.empty() && f.tail().zero()) return {};
    if (f.empty()) return Integral::divergent("GGamma norm of a pure tail is not supported");
    const auto fp = f.power(p);
    const auto g = fp.grid();
    const auto G = fp.cumulative();
    std::vector<double> phi(G.size());
    for (std::size_t j = 0; j < G.size(); ++j) phi[j] = std::pow(G[j], m / p);
    Integral total{simd::trapezoid_dot(phi, w.grid_moments(g, 0.0)), {}};
    const double f0 = fp.values().front();
    if (f0 > 0.0) {
        Integral head = w.moment(0.0, g.front(), m / p);
        if (!head.finite()) return head;
        total = total + Integral{std::pow(f0, m / p) * head.value, {}};
    }
    const double T = g.back();
    const PowerTail& tail = fp.tail();
    if (tail.zero()) {
        Integral rest = w.moment(T, kInf, 0.0);
        if (!rest.finite()) return rest;
        total = total + Integral{phi.back() * rest.value, {}};
    } else {
        const double GT = G.back();
        total = total + tail_integral([&](double t) { return std::pow(GT + tail.integral(T, t), m / p) * w(t); }, T);
    }
    return root(total, m);
}

MonotoneProfile sampled_profile(std::size_t n, double T, double (*fn)(double)) {
    auto grid = MonotoneProfile::geometric_grid(T, n);
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) v[j] = fn(grid[j]);
    return MonotoneProfile::from_samples(std::move(grid), std::move(v));
}

}  // namespace

SpaceSpec SpaceSpec::lp(double p) {
    SpaceSpec s;
    s.kind = SpaceKind::Lp;
    s.p = p;
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::lorentz(double p, double q, bool ds) {
    SpaceSpec s;
    s.kind = SpaceKind::LorentzPQ;
    s.p = p;
    s.q = q;
    s.double_star_form = ds;
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::lorentz_zygmund(double p, double q, double alpha, bool ds) {
    SpaceSpec s;
    s.kind = SpaceKind::LorentzZygmund;
    s.p = p;
    s.q = q;
    s.alpha = alpha;
    s.double_star_form = ds;
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::generalized_lorentz(double p, double q, WeightFunction w) {
    SpaceSpec s;
    s.kind = SpaceKind::GeneralizedLorentz;
    s.p = p;
    s.q = q;
    s.weight = std::move(w);
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::gamma(double p, WeightFunction w) {
    SpaceSpec s;
    s.kind = SpaceKind::Gamma;
    s.p = p;
    s.weight = std::move(w);
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::ggamma(double p, double m, WeightFunction w) {
    SpaceSpec s;
    s.kind = SpaceKind::GGamma;
    s.p = p;
    s.m = m;
    s.weight = std::move(w);
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::convexified(SpaceSpec inner, double r) {
    SpaceSpec s;
    s.kind = SpaceKind::Convexified;
    s.r = r;
    s.inner = std::make_shared<const SpaceSpec>(std::move(inner));
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::angle_convexified(SpaceSpec inner, double r) {
    SpaceSpec s;
    s.kind = SpaceKind::AngleConvexified;
    s.r = r;
    s.inner = std::make_shared<const SpaceSpec>(std::move(inner));
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::l1_plus_linf() {
    SpaceSpec s;
    s.kind = SpaceKind::L1plusLinf;
    return s;
}

SpaceSpec SpaceSpec::linf() {
    SpaceSpec s;
    s.kind = SpaceKind::Linf;
    return s;
}

void SpaceSpec::validate() const {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw std::invalid_argument(msg);
    };
    switch (kind) {
        case SpaceKind::Lp: need(p >= 1.0, "lp requires p >= 1"); break;
        case SpaceKind::LorentzPQ:
            need(p >= 1.0 && std::isfinite(p), "lorentz requires 1 <= p < inf");
            need(q >= 1.0, "lorentz requires q >= 1");
            break;
        case SpaceKind::LorentzZygmund:
            need(p > 1.0 && std::isfinite(p), "lz requires 1 < p < inf");
            need(q >= 1.0, "lz requires 1 <= q <= inf");
            need(std::isfinite(alpha), "lz requires a finite alpha");
            break;
        case SpaceKind::GeneralizedLorentz:
            need(p >= 1.0 && std::isfinite(p) && q >= 1.0 && std::isfinite(q), "glorentz requires 1 <= p, q < inf");
            break;
        case SpaceKind::Gamma: need(p >= 1.0 && std::isfinite(p), "gamma requires 1 <= p < inf"); break;
        case SpaceKind::GGamma:
            need(p >= 1.0 && std::isfinite(p) && m >= 1.0 && std::isfinite(m), "ggamma requires 1 <= p, m < inf");
            break;
        case SpaceKind::Convexified:
        case SpaceKind::AngleConvexified:
            need(inner != nullptr, "convexification requires an inner space");
            need(r >= 1.0 && std::isfinite(r), "convexification order r must satisfy 1 <= r < inf");
            inner->validate();
            break;
        case SpaceKind::L1plusLinf:
        case SpaceKind::Linf: break;
    }
}

SpaceSpec SpaceSpec::parse(std::string_view text) {
    const std::string t(text);
    const auto colon = t.find(':');
    const std::string head = t.substr(0, colon);
    std::string body = colon == std::string::npos ? "" : t.substr(colon + 1);
    static const char* kValid = "lp, lorentz, lz, glorentz, gamma, ggamma, convex, angle, l1+linf, linf";

    if (head == "l1+linf" || head == "linf") {
        if (!body.empty()) throw std::invalid_argument(head + " takes no parameters");
        return head == "linf" ? linf() : l1_plus_linf();
    }

    static const std::set<std::string> kKinds = {"lp",    "lorentz", "lz",    "glorentz", "gamma",
                                                 "ggamma", "convex", "angle"};
    if (!kKinds.count(head)) throw std::invalid_argument("unknown space kind '" + head + "' (valid: " + kValid + ")");

    std::string inner_text;
    if (head == "convex" || head == "angle") {
        const auto slash = body.find('/');
        if (slash == std::string::npos) throw std::invalid_argument(head + " needs '<params>/<inner space>'");
        inner_text = body.substr(slash + 1);
        body = body.substr(0, slash);
    }

    std::map<std::string, std::string> kv;
    std::size_t pos = 0;
    while (pos < body.size()) {
        const auto comma = body.find(',', pos);
        const std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("space parameter '" + item + "' is not key=value");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    auto take = [&](const std::string& key, std::optional<double> fallback = std::nullopt) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (fallback) return *fallback;
            throw std::invalid_argument("space '" + head + "' needs parameter " + key);
        }
        const double v = parse_value(it->second, key);
        kv.erase(it);
        return v;
    };
    auto take_weight = [&]() {
        auto it = kv.find("w");
        if (it == kv.end()) return WeightFunction::constant();
        auto w = WeightFunction::parse(it->second);
        kv.erase(it);
        return w;
    };
    auto take_form = [&]() {
        auto it = kv.find("form");
        if (it == kv.end()) return false;
        const std::string f = it->second;
        kv.erase(it);
        if (f == "star") return false;
        if (f == "ss") return true;
        throw std::invalid_argument("form must be 'star' or 'ss'");
    };

    SpaceSpec s;
    if (head == "lp") {
        s = lp(take("p"));
    } else if (head == "lorentz") {
        const double p = take("p"), q = take("q");
        s = lorentz(p, q, take_form());
    } else if (head == "lz") {
        const double p = take("p"), q = take("q"), a = take("alpha", 0.0);
        s = lorentz_zygmund(p, q, a, take_form());
    } else if (head == "glorentz") {
        const double p = take("p"), q = take("q");
        s = generalized_lorentz(p, q, take_weight());
    } else if (head == "gamma") {
        const double p = take("p");
        s = gamma(p, take_weight());
    } else if (head == "ggamma") {
        const double p = take("p"), m = take("m");
        s = ggamma(p, m, take_weight());
    } else if (head == "convex" || head == "angle") {
        const double r = take("r");
        auto inner = parse(inner_text);
        s = head == "convex" ? convexified(std::move(inner), r) : angle_convexified(std::move(inner), r);
    } else {
        throw std::invalid_argument("unknown space kind '" + head + "' (valid: " + kValid + ")");
    }
    if (!kv.empty()) throw std::invalid_argument("unknown parameter '" + kv.begin()->first + "' for space " + head);
    return s;
}

std::string SpaceSpec::to_string() const {
    const std::string form = double_star_form ? ",form=ss" : "";
    switch (kind) {
        case SpaceKind::Lp: return "lp:p=" + fmt(p);
        case SpaceKind::LorentzPQ: return "lorentz:p=" + fmt(p) + ",q=" + fmt(q) + form;
        case SpaceKind::LorentzZygmund: return "lz:p=" + fmt(p) + ",q=" + fmt(q) + ",alpha=" + fmt(alpha) + form;
        case SpaceKind::GeneralizedLorentz:
            return "glorentz:p=" + fmt(p) + ",q=" + fmt(q) + ",w=" + weight.to_string();
        case SpaceKind::Gamma: return "gamma:p=" + fmt(p) + ",w=" + weight.to_string();
        case SpaceKind::GGamma: return "ggamma:p=" + fmt(p) + ",m=" + fmt(m) + ",w=" + weight.to_string();
        case SpaceKind::Convexified: return "convex:r=" + fmt(r) + "/" + inner->to_string();
        case SpaceKind::AngleConvexified: return "angle:r=" + fmt(r) + "/" + inner->to_string();
        case SpaceKind::L1plusLinf: return "l1+linf";
        case SpaceKind::Linf: return "linf";
    }
    return "?";
}

Integral power_weighted_integral(const MonotoneProfile& f, double q, double e, const WeightFunction& w) {
    const PowerTail& tail = f.tail();
    if (f.empty()) {
        if (tail.zero()) return {};
        Integral all = w.moment(0.0, kInf, e - tail.exponent * q);
        if (!all.finite()) return all;
        return {std::pow(tail.coefficient, q) * all.value, {}};
    }
    const auto g = f.grid();
    const auto v = f.values();
    std::vector<double> phi(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) phi[j] = std::pow(v[j], q);
    Integral total{simd::trapezoid_dot(phi, w.grid_moments(g, e)), {}};
    if (phi.front() > 0.0) {
        Integral head = w.moment(0.0, g.front(), e);
        if (!head.finite()) return head;
        total = total + Integral{phi.front() * head.value, {}};
    }
    if (!tail.zero()) {
        Integral rest = w.moment(g.back(), kInf, e - tail.exponent * q);
        if (!rest.finite()) return rest;
        total = total + Integral{std::pow(tail.coefficient, q) * rest.value, {}};
    }
    return total;
}

Integral norm(const SpaceSpec& spec, const MonotoneProfile& f) {
    static const WeightFunction one;
    switch (spec.kind) {
        case SpaceKind::Lp:
            if (std::isinf(spec.p)) return sup_weighted(f, 0.0, 0.0);
            return root(power_weighted_integral(f, spec.p, 0.0, one), spec.p);
        case SpaceKind::LorentzPQ:
        case SpaceKind::LorentzZygmund: {
            const MonotoneProfile g = spec.double_star_form ? double_star(f) : f;
            const double alpha = spec.kind == SpaceKind::LorentzZygmund ? spec.alpha : 0.0;
            if (std::isinf(spec.q)) return sup_weighted(g, 1.0 / spec.p, alpha);
            const WeightFunction w = alpha == 0.0 ? one : WeightFunction::logarithmic(alpha);
            return root(power_weighted_integral(g, spec.q, spec.q / spec.p - 1.0, w), spec.q);
        }
        case SpaceKind::GeneralizedLorentz:
            return root(power_weighted_integral(f, spec.q, spec.q / spec.p - 1.0, spec.weight), spec.q);
        case SpaceKind::Gamma: return root(power_weighted_integral(double_star(f), spec.p, 0.0, spec.weight), spec.p);
        case SpaceKind::GGamma: return ggamma_norm(f, spec.p, spec.m, spec.weight);
        case SpaceKind::Convexified: {
            if (f.empty() && f.tail().zero()) return {};
            return root(norm(*spec.inner, f.power(spec.r)), spec.r);
        }
        case SpaceKind::AngleConvexified: {
            if (f.empty() && f.tail().zero()) return {};
            return norm(*spec.inner, double_star(f.power(spec.r)).power(1.0 / spec.r));
        }
        case SpaceKind::L1plusLinf: return {f.integral_to(1.0), {}};
        case SpaceKind::Linf: return {f.empty() ? f.tail()(0.0) : f.sup(), {}};
    }
    return {};
}

Integral norm_of_curve(const SpaceSpec& spec, const SampledCurve& curve, std::size_t grid_size) {
    return norm(spec, rearrange_curve(curve, grid_size));
}

MonotoneProfile hardy_P(const MonotoneProfile& f) { return double_star(f); }

MonotoneProfile hardy_Q(double a, const MonotoneProfile& f) {
    if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("Q_a requires 0 <= a < 1");
    if (f.empty()) return {};
    const auto g = f.grid();
    const auto v = f.values();
    const PowerTail& tail = f.tail();
    if (!tail.zero() && !(tail.exponent > a)) throw std::domain_error("Q_a f diverges: tail decays too slowly");
    const auto inc = power_increments(g, a - 1.0);
    const double beyond = tail.zero() ? 0.0 : PowerTail{tail.coefficient, tail.exponent + 1.0 - a}.integral(g.back(), kInf);
    std::vector<double> out(g.size());
    double acc = beyond;
    out.back() = std::pow(g.back(), -a) * acc;
    for (std::size_t j = g.size() - 1; j-- > 0;) {
        acc += 0.5 * (v[j] + v[j + 1]) * inc[j];
        out[j] = std::pow(g[j], -a) * acc;
    }
    PowerTail qt;
    if (!tail.zero()) qt = {tail.coefficient / (tail.exponent - a), tail.exponent};
    return MonotoneProfile::from_samples(std::vector<double>(g.begin(), g.end()), std::move(out), qt);
}

std::optional<std::pair<double, double>> closed_form_boyd(const SpaceSpec& spec) {
    switch (spec.kind) {
        case SpaceKind::Lp: {
            const double a = std::isinf(spec.p) ? 0.0 : 1.0 / spec.p;
            return std::make_pair(a, a);
        }
        case SpaceKind::LorentzPQ:
        case SpaceKind::LorentzZygmund: return std::make_pair(1.0 / spec.p, 1.0 / spec.p);
        case SpaceKind::GeneralizedLorentz: {
            const auto e = spec.weight.end_exponents();
            if (!e) return std::nullopt;
            const double hi = std::max(e->first, e->second), lo = std::min(e->first, e->second);
            return std::make_pair(1.0 / spec.p + hi / spec.q, 1.0 / spec.p + lo / spec.q);
        }
        case SpaceKind::Gamma: {
            const auto e = spec.weight.end_exponents();
            if (!e) return std::nullopt;
            const double hi = std::max(e->first, e->second), lo = std::min(e->first, e->second);
            return std::make_pair((hi + 1.0) / spec.p, (lo + 1.0) / spec.p);
        }
        case SpaceKind::GGamma: {
            const auto e = spec.weight.end_exponents();
            if (!e) return std::nullopt;
            const double hi = std::max(e->first, e->second), lo = std::min(e->first, e->second);
            return std::make_pair(1.0 / spec.p + (hi + 1.0) / spec.m, 1.0 / spec.p + (lo + 1.0) / spec.m);
        }
        case SpaceKind::Convexified: {
            const auto in = closed_form_boyd(*spec.inner);
            if (!in) return std::nullopt;
            return std::make_pair(in->first / spec.r, in->second / spec.r);
        }
        case SpaceKind::AngleConvexified: return closed_form_boyd(*spec.inner);
        case SpaceKind::L1plusLinf: return std::make_pair(1.0, 0.0);
        case SpaceKind::Linf: return std::make_pair(0.0, 0.0);
    }
    return std::nullopt;
}

double dilation_norm(const SpaceSpec& spec, double s, std::span<const MonotoneProfile> probes) {
    if (probes.empty()) throw std::invalid_argument("dilation norm needs at least one probe");
    double h = 0.0;
    for (const auto& f : probes) {
        const Integral base = norm(spec, f);
        if (!base.finite() || base.value <= 0.0) continue;
        const Integral d = norm(spec, f.dilate(s));
        if (!d.finite()) return kInf;
        h = std::max(h, d.value / base.value);
    }
    return h;
}

BoydIndices boyd_indices(const SpaceSpec& spec, std::span<const MonotoneProfile> probes) {
    if (probes.size() < 3) throw std::invalid_argument("Boyd index estimate needs at least three probes");
    BoydIndices b;
    b.upper = kInf;
    b.lower = -kInf;
    for (int k = 1; k <= 6; ++k) {
        const double s = std::ldexp(1.0, k);
        b.upper = std::min(b.upper, std::log(dilation_norm(spec, s, probes)) / std::log(s));
        const double si = std::ldexp(1.0, -k);
        b.lower = std::max(b.lower, std::log(dilation_norm(spec, si, probes)) / std::log(si));
    }
    if (auto c = closed_form_boyd(spec)) {
        b.closed_upper = c->first;
        b.closed_lower = c->second;
    }
    return b;
}

std::vector<MonotoneProfile> default_probes(std::size_t grid_size) {
    std::vector<MonotoneProfile> out;
    out.push_back(MonotoneProfile::step(1.0, 1.0, grid_size));
    out.push_back(sampled_profile(grid_size, 1.0, [](double t) { return 1.0 - t; }));
    out.push_back(sampled_profile(grid_size, 1.0, [](double t) { return 1.0 - std::cbrt(t); }));
    out.push_back(sampled_profile(grid_size, 1.0, [](double t) { return (1.0 - t) * (1.0 - t) * (1.0 - t); }));
    out.push_back(sampled_profile(grid_size, 40.0, [](double t) { return std::exp(-t); }));
    return out;
}

std::vector<double> default_weight_grid() {
    std::vector<double> g;
    for (int k = -60; k <= 60; ++k) g.push_back(std::pow(10.0, k / 10.0));
    return g;
}

BpResult is_Bp_weight(const WeightFunction& w, double p, std::span<const double> grid) {
    if (!(p >= 1.0)) throw std::invalid_argument("B_p test requires p >= 1");
    if (grid.empty()) throw std::invalid_argument("B_p test needs a grid");
    BpResult r;
    std::vector<double> ratio(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double t = grid[j];
        const Integral tail = w.tail_moment(t, p);
        if (!tail.finite()) {
            r.reason = "int_t^inf w(s) s^-p ds: " + tail.divergence;
            r.constant = kInf;
            return r;
        }
        const Integral W = w.primitive(t);
        if (!W.finite()) {
            r.reason = "W(t): " + W.divergence;
            r.constant = kInf;
            return r;
        }
        ratio[j] = std::pow(t, p) * tail.value / W.value;
    }
    const auto it = std::max_element(ratio.begin(), ratio.end());
    r.constant = *it;
    const std::size_t j = static_cast<std::size_t>(it - ratio.begin());
    const std::size_t n = ratio.size();
    if (n > 10 && (j == 0 || j == n - 1)) {
        const double other = j == 0 ? ratio[10] : ratio[n - 11];
        if (*it > other * (1.0 + 1e-3)) {
            r.reason = "ratio still growing at the end of the grid";
            return r;
        }
    }
    r.member = true;
    return r;
}

WeightCheck check_admissible(const WeightFunction& w, double p) {
    const Decision zero = w.integrable_at_zero(0.0);
    const Decision inf = w.integrable_at_infinity(-p);
    if (zero == Decision::no) return {Decision::no, "int_0^t w diverges"};
    if (inf == Decision::no) return {Decision::no, "int_t^inf w(s) s^-p ds diverges"};
    if (zero == Decision::undecidable || inf == Decision::undecidable)
        return {Decision::undecidable, "weight lacks end-point behaviour (tabulated without tail metadata)"};
    return {Decision::yes, {}};
}

WeightCheck check_ggamma_weight(const WeightFunction& w, double m, double p) {
    const Decision zero = w.integrable_at_zero(m / p);
    const Decision inf = w.integrable_at_infinity(0.0);
    if (zero == Decision::no) return {Decision::no, "int_0 t^(m/p) w(t) dt diverges"};
    if (inf == Decision::no) return {Decision::no, "int^inf w(t) dt diverges"};
    if (zero == Decision::undecidable || inf == Decision::undecidable)
        return {Decision::undecidable, "weight lacks end-point behaviour (tabulated without tail metadata)"};
    return {Decision::yes, {}};
}

double lambda_weight_identity_check(const WeightFunction& w, double p, double q,
                                    std::span<const MonotoneProfile> probes) {
    const double k = q / p - 1.0;
    std::optional<Asymptote> z = w.at_zero(), i = w.at_infinity();
    if (z) {
        z->power = z->power * (k + 1.0) + k;
        z->log_power *= k + 1.0;
    }
    if (i && !i->exponential_decay && i->power > -1.0) {
        i->power = i->power * (k + 1.0) + k;
        i->log_power *= k + 1.0;
    }
    const WeightFunction v = WeightFunction::custom(
        "W^(q/p-1)w", [w, k](double t) { return std::pow(w.primitive(t).value, k) * w(t); }, z, i);
    const SpaceSpec lhs_spec = SpaceSpec::generalized_lorentz(p, q, w);
    double worst = 0.0;
    for (const auto& f : probes) {
        const Integral lhs = norm(lhs_spec, f);
        const Integral rhs = root(power_weighted_integral(f, q, 0.0, v), q);
        if (!lhs.finite() || !rhs.finite()) {
            if (lhs.finite() != rhs.finite()) return kInf;
            continue;
        }
        if (lhs.value == 0.0) continue;
        worst = std::max(worst, std::abs(lhs.value - rhs.value) / lhs.value);
    }
    return worst;
}

double holder_product_ratio(const SpaceSpec& spec, std::span<const std::vector<double>> values,
                            std::span<const double> lengths, std::span<const double> theta) {
    if (values.size() != theta.size()) throw std::invalid_argument("one exponent per factor is required");
    const std::size_t K = lengths.size();
    std::vector<double> prod(K, 1.0);
    double rhs = 1.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != K) throw std::invalid_argument("factor " + std::to_string(i) + " has the wrong length");
        if (!(theta[i] >= 0.0)) throw std::invalid_argument("exponents must be nonnegative");
        for (std::size_t k = 0; k < K; ++k) prod[k] *= std::pow(std::abs(values[i][k]), theta[i]);
        const Integral n = norm(spec, rearrange_pieces(values[i], lengths));
        if (!n.finite()) return std::numeric_limits<double>::quiet_NaN();
        rhs *= std::pow(n.value, theta[i]);
    }
    const Integral lhs = norm(spec, rearrange_pieces(prod, lengths));
    if (!lhs.finite()) return kInf;
    if (lhs.value == 0.0) return 0.0;
    return lhs.value / rhs;
}

TransferCheck transfer_check(std::span<const double> g, std::span<const double> h, double width) {
    if (g.size() != h.size()) throw std::invalid_argument("g and h need the same number of intervals");
    if (!(width > 0.0)) throw std::invalid_argument("interval width must be positive");
    auto sorted = [](std::span<const double> v) {
        std::vector<double> s(v.begin(), v.end());
        std::sort(s.begin(), s.end(), std::greater<>());
        return s;
    };
    const auto hs = sorted(h), gs = sorted(g);
    TransferCheck out;
    out.hypotheses = true;
    const double slack = 1e-12;
    double H = 0.0, G = 0.0, Gs = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double t0 = width * static_cast<double>(k);
        const double t1 = t0 + width;
        const double h_ss_end = (H + hs[k] * width) / t1;
        H += hs[k] * width;
        G += g[k] * width;
        Gs += gs[k] * width;
        if (g[k] > h_ss_end * (1.0 + slack) || G > H * (1.0 + slack)) out.hypotheses = false;
        if (H > 0.0 && Gs / H > out.worst_ratio) {
            out.worst_ratio = Gs / H;
            out.worst_t = t1;
        }
    }
    return out;
}

double harmonic_mean_exponent(std::span<const double> A, std::span<const double> p) {
    if (A.size() != p.size()) throw std::invalid_argument("exponent vectors A and p differ in length");
    const double D = homogeneous_dimension(A);
    double s = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (!(p[i] >= 1.0)) throw std::invalid_argument("every p_i must be >= 1");
        s += (A[i] + 1.0) / p[i];
    }
    return D / s;
}

std::optional<double> sobolev_exponent(double pbar, double D) {
    if (pbar >= D) return std::nullopt;
    return D * pbar / (D - pbar);
}

}  // namespace monosob
