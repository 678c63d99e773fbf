#include "monosob/inequality_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "monosob/rearrangement.hpp"

namespace monosob {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kChainTolerance = 1e-9;
struct WindowRule {
    double growth;
    std::size_t min_cells;
};
constexpr WindowRule kLineWindow{1.25, 128};
constexpr WindowRule kLatticeWindow{2.0, 1024};
constexpr double kHeadDecades = 24.0;
constexpr std::size_t kHeadPointsPerDecade = 16;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Evaluation refused(std::string why) {
    Evaluation e;
    e.status = Status::refused;
    e.note = std::move(why);
    e.lhs = e.rhs = e.ratio = std::numeric_limits<double>::quiet_NaN();
    return e;
}

/// An infinite right-hand side means f lies outside the space of the
/// hypothesis, so the row is refused rather than failed.
Evaluation from_integrals(const Integral& lhs, const Integral& rhs, double worst_t = 0.0) {
    if (!rhs.finite())
        return refused("right-hand side infinite, f is outside the hypothesis space: " + rhs.divergence);
    Evaluation e = make_evaluation(lhs.value, rhs.value, worst_t);
    if (!lhs.finite()) e.note = "lhs diverges: " + lhs.divergence;
    return e;
}

double homogeneous(const SobolevData& d) { return d.D; }

std::vector<double> exponents_or_ones(const SobolevData& d, std::span<const double> p) {
    if (p.empty()) return std::vector<double>(d.A.size(), 1.0);
    if (p.size() != d.A.size()) throw std::invalid_argument("one exponent per coordinate is required");
    for (double x : p)
        if (!(x >= 1.0) || !std::isfinite(x)) throw std::invalid_argument("gradient exponents must satisfy 1 <= p_i < inf");
    return {p.begin(), p.end()};
}

/// prod_i x_i^{(A_i+1)/D}; +inf if some factor is.
Integral weighted_product(const SobolevData& d, const std::vector<Integral>& x) {
    const auto theta = product_exponents(d.A);
    double v = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x[i].finite()) return x[i];
        v *= std::pow(x[i].value, theta[i]);
    }
    return {v, {}};
}

Integral partial_product(const SobolevData& d, const std::vector<SpaceSpec>& specs) {
    std::vector<Integral> n;
    for (std::size_t i = 0; i < specs.size(); ++i) n.push_back(norm(specs[i], d.partial_star[i]));
    return weighted_product(d, n);
}

double sup_norm(const SobolevData& d) { return d.sorted.values.empty() ? 0.0 : d.sorted.values.front(); }
double l1_plus_linf(const SobolevData& d) { return d.f_steps.at(1.0); }

/// t^beta g(t) for beta < 0 on a grid extended far below the first sample,
/// where g is constant.
MonotoneProfile scaled_profile(const MonotoneProfile& g, double beta) {
    if (g.empty()) return {};
    const auto grid = g.grid();
    const auto vals = g.values();
    const std::size_t head = static_cast<std::size_t>(kHeadDecades * kHeadPointsPerDecade);
    std::vector<double> t, v;
    t.reserve(head + grid.size());
    v.reserve(head + grid.size());
    for (std::size_t k = head; k >= 1; --k) {
        const double x = grid.front() * std::pow(10.0, -static_cast<double>(k) / kHeadPointsPerDecade);
        t.push_back(x);
        v.push_back(vals.front() * std::pow(x, beta));
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
        t.push_back(grid[j]);
        v.push_back(vals[j] * std::pow(grid[j], beta));
    }
    PowerTail tail = g.tail();
    tail.exponent -= beta;
    return MonotoneProfile::from_samples(std::move(t), std::move(v), tail);
}

/// f* at band edge j: the left limit after a band without gradient (a true
/// plateau of |f|), otherwise the midpoint of the one-sided limits.
double edge_value(const Bands& b, std::size_t j) {
    if (j == 0) return b.fstar_at_edge[0];
    bool flat = true;
    for (const auto& g : b.g)
        if (g[j] != g[j - 1]) flat = false;
    return flat ? b.fstar_left[j] : 0.5 * (b.fstar_left[j] + b.fstar_at_edge[j]);
}

/// Band indices closing windows of at least `min_cells` effective cells,
/// (sum mu)^2 / sum mu^2, whose mass grows by `growth`; a short tail joins
/// the last window. Lattice level sets in n >= 2 need the wider rule.
std::vector<std::size_t> window_cuts(const Bands& b, std::size_t n) {
    const WindowRule rule = n == 1 ? kLineWindow : kLatticeWindow;
    std::vector<std::size_t> cuts{0};
    double sq = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
        sq += b.mass_squares[j];
        const double m = b.edges[j + 1] - b.edges[cuts.back()];
        const bool wide = b.edges[j + 1] >= rule.growth * b.edges[cuts.back()];
        if (sq > 0.0 && m * m >= static_cast<double>(rule.min_cells) * sq && wide) {
            cuts.push_back(j + 1);
            sq = 0.0;
        }
    }
    if (cuts.back() != b.size()) {
        if (cuts.size() > 1) cuts.back() = b.size();
        else cuts.push_back(b.size());
    }
    return cuts;
}

/// t^{-1/D} (f** - f*)(t) sampled at the band edges with edge_value for f*,
/// which is exact on linear stretches of f*; beyond the support f** = F/t.
SampledCurve oscillation_curve(const SobolevData& d) {
    const Bands& b = d.bands;
    if (b.size() == 0) return {};
    std::vector<double> t, o;
    for (std::size_t j = 1; j <= b.size(); ++j) {
        const double s = b.edges[j];
        if (!t.empty() && !(s > t.back())) continue;
        t.push_back(s);
        o.push_back(std::max(0.0, b.running_integral[j] / s - edge_value(b, j)));
    }
    return SampledCurve(std::move(t), std::move(o), {b.running_integral.back(), 1.0}).times_power(-1.0 / d.D);
}

bool contains_constants(const SpaceSpec& s) {
    switch (s.kind) {
        case SpaceKind::Lp: return std::isinf(s.p);
        case SpaceKind::LorentzPQ:
        case SpaceKind::LorentzZygmund: return false;
        case SpaceKind::GeneralizedLorentz: return s.weight.moment(0.0, kInf, s.q / s.p - 1.0).finite();
        case SpaceKind::Gamma: return s.weight.moment(0.0, kInf, 0.0).finite();
        case SpaceKind::GGamma: return s.weight.moment(0.0, kInf, s.m / s.p).finite();
        case SpaceKind::Convexified:
        case SpaceKind::AngleConvexified: return contains_constants(*s.inner);
        case SpaceKind::L1plusLinf:
        case SpaceKind::Linf: return true;
    }
    return false;
}

/// int_0^1 g^q dU for a primitive U with U(0+) = 0, on a geometric grid.
Integral integrate_against(const MonotoneProfile& g, double q, const std::function<Integral(double)>& U) {
    const double lo = std::min(1e-6, g.empty() ? 1e-6 : g.grid().front());
    const auto grid = MonotoneProfile::geometric_grid(1.0, 4096);
    std::vector<double> t;
    if (lo < grid.front()) t.push_back(lo);
    t.insert(t.end(), grid.begin(), grid.end());
    Integral prev = U(t.front());
    if (!prev.finite()) return prev;
    double gp = std::pow(g.value_at(t.front()), q);
    double total = gp * prev.value;
    for (std::size_t j = 1; j < t.size(); ++j) {
        const Integral cur = U(t[j]);
        if (!cur.finite()) return cur;
        const double gc = std::pow(g.value_at(t[j]), q);
        total += 0.5 * (gp + gc) * (cur.value - prev.value);
        prev = cur;
        gp = gc;
    }
    return {total, {}};
}

Evaluation combine_status(Evaluation e) {
    if (e.status == Status::pass && !std::isfinite(e.ratio)) e.status = Status::fail;
    return e;
}

struct Index {
    double upper, lower;
};

std::optional<Index> closed_index(const SpaceSpec& s) {
    auto c = closed_form_boyd(s);
    if (!c) return std::nullopt;
    return Index{c->first, c->second};
}

std::string index_text(const Index& i) { return "indices (" + fmt(i.lower) + ", " + fmt(i.upper) + ")"; }

}  // namespace

std::string to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::refused: return "refused";
        case Status::unstable: return "unstable";
        case Status::anomaly: return "anomaly";
    }
    return "?";
}

const std::vector<std::string>& case_ids() {
    static const std::vector<std::string> ids = {
        "T32.i",  "T32.ii",    "T32.iii",   "T32.iv",    "T32.v",           "R99.pointwise",   "R77.gradient",
        "T23.i",  "T23.ii",    "T43.Xq",    "T43.emb1",  "T43.emb2",        "P44.i",           "P44.ii",
        "P44.iii", "Trudinger", "T46.angle", "T47.lorentz.i", "T47.lorentz.ii", "T47.lorentz.iii", "Gamma.i",
        "Gamma.ii", "Gamma.iii", "GGamma.i", "GGamma.ii", "GGamma.iii"};
    return ids;
}

bool is_case_id(const std::string& id) {
    const auto& ids = case_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::string case_anchor(const std::string& id) {
    static const std::map<std::string, std::string> anchors = {
        {"T32.i", "Thm 3.2 i, Eq. (un)"},
        {"T32.ii", "Thm 3.2 ii, Eq. (dos)"},
        {"T32.iii", "Thm 3.2 iii, Eq. (tres)"},
        {"T32.iv", "Thm 3.2 iv, Eq. (O)"},
        {"T32.v", "Thm 3.2 v"},
        {"R99.pointwise", "Remark, Eq. (99)"},
        {"R77.gradient", "Remark, Eq. (77)"},
        {"T23.i", "Thm 2.3 i"},
        {"T23.ii", "Thm 2.3 ii"},
        {"T43.Xq", "Thm 4.3, Eq. (Xq)"},
        {"T43.emb1", "Thm 4.3, Eq. (emb1)"},
        {"T43.emb2", "Thm 4.3, Eq. (emb2)"},
        {"P44.i", "Prop 4.4 i"},
        {"P44.ii", "Prop 4.4 ii"},
        {"P44.iii", "Prop 4.4 iii"},
        {"Trudinger", "Remark after Prop 4.4"},
        {"T46.angle", "Thm 4.6"},
        {"T47.lorentz.i", "Thm 4.7 i"},
        {"T47.lorentz.ii", "Thm 4.7 ii"},
        {"T47.lorentz.iii", "Thm 4.7 iii"},
        {"Gamma.i", "Gamma theorem i"},
        {"Gamma.ii", "Gamma theorem ii"},
        {"Gamma.iii", "Gamma theorem iii"},
        {"GGamma.i", "GGamma theorem i"},
        {"GGamma.ii", "GGamma theorem ii"},
        {"GGamma.iii", "GGamma theorem iii"},
    };
    auto it = anchors.find(id);
    return it == anchors.end() ? std::string() : it->second;
}

Evaluation make_evaluation(double lhs, double rhs, double worst_t) {
    Evaluation e;
    e.lhs = lhs;
    e.rhs = rhs;
    e.worst_t = worst_t;
    if (lhs == 0.0) {
        e.ratio = 0.0;
    } else if (rhs == 0.0) {
        e.ratio = kInf;
        e.status = Status::anomaly;
        e.note = "zero right side with nonzero left side";
    } else {
        e.ratio = lhs / rhs;
    }
    return e;
}

double oscillation_lorentz_integral(const MonotoneProfile& f_star, double D) {
    if (!(D > 1.0)) throw std::invalid_argument("the L^{D/(D-1),1} identity needs D > 1");
    if (f_star.empty()) return 0.0;
    const SampledCurve O = oscillation(f_star);
    const auto g = O.grid();
    const auto v = O.values();
    const double beta = -1.0 / D;
    const auto inc = power_increments(g, beta);
    double total = v.front() * std::pow(g.front(), 1.0 + beta) / (1.0 + beta);
    for (std::size_t j = 0; j + 1 < g.size(); ++j) total += 0.5 * (v[j] + v[j + 1]) * inc[j];
    const PowerTail& tail = O.tail();
    if (!tail.zero()) total += PowerTail{tail.coefficient, tail.exponent - beta}.integral(g.back(), kInf);
    return D / (D - 1.0) * total;
}

Evaluation verify_T32(const SobolevData& d, const std::string& item, double p) {
    const double D = homogeneous(d);
    const auto theta = product_exponents(d.A);
    std::vector<Integral> l1;
    for (double x : d.partial_l1) l1.push_back({x, {}});

    if (item == "i" || item == "ii") {
        const Integral lhs = D == 1.0 ? Integral{sup_norm(d), {}} : norm(SpaceSpec::lp(D / (D - 1.0)), d.f_star);
        Integral rhs{0.0, {}};
        if (item == "i") {
            for (double x : d.partial_l1) rhs.value += x;
        } else {
            rhs = weighted_product(d, l1);
        }
        return combine_status(from_integrals(lhs, rhs));
    }
    if (item == "iii") {
        const auto pd = profile_derivative(d.f_star);
        if (!pd.absolutely_continuous)
            return refused("f* has a jump near t=" + fmt(pd.jump_t) + "; not locally absolutely continuous");
        const Bands& b = d.bands;
        Evaluation worst = make_evaluation(0.0, 0.0);
        const std::vector<std::size_t> cuts = window_cuts(b, d.A.size());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const std::size_t lo = cuts[k], hi = cuts[k + 1];
            const double a = b.edges[lo], c = b.edges[hi];
            const double drop = edge_value(b, lo) - edge_value(b, hi);
            const double lhs = drop / (D * (std::pow(c, 1.0 / D) - std::pow(a, 1.0 / D)));
            if (lhs == 0.0) continue;
            double rhs = 1.0;
            for (std::size_t i = 0; i < theta.size(); ++i) rhs *= std::pow((b.g[i][hi] - b.g[i][lo]) / (c - a), theta[i]);
            Evaluation e = make_evaluation(lhs, rhs, 0.5 * (a + c));
            if (e.ratio > worst.ratio || worst.lhs == 0.0) worst = e;
        }
        return combine_status(worst);
    }
    if (item == "iv") {
        if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("T32.iv needs 1 <= p < inf");
        if (d.f_star.empty()) return make_evaluation(0.0, 0.0);
        const MonotoneProfile lhs_prof = rearrange_curve(oscillation_curve(d).pow(p), d.grid_size);
        const MonotoneProfile rhs_prof = multiplicative_rhs(d.tilde, d.A, D, p, d.grid_size);
        const double T = d.f_star.support_mass();
        std::vector<double> ts = MonotoneProfile::geometric_grid(T, d.grid_size);
        for (int k = 1; k <= 300; ++k) ts.push_back(T * std::pow(10.0, k / 100.0));
        Evaluation worst = make_evaluation(0.0, 0.0);
        for (double t : ts) {
            Evaluation e = make_evaluation(lhs_prof.integral_to(t), rhs_prof.integral_to(t), t);
            if (e.ratio > worst.ratio) worst = e;
        }
        return combine_status(worst);
    }
    if (item == "v") {
        if (D == 1.0) {
            Evaluation e = from_integrals({sup_norm(d), {}}, weighted_product(d, l1));
            e.note = "D = 1: L^{D/(D-1),1} read as L^inf";
            return combine_status(e);
        }
        const Integral lhs = norm(SpaceSpec::lorentz(D / (D - 1.0), 1.0, true), d.f_star);
        Evaluation e = combine_status(from_integrals(lhs, weighted_product(d, l1)));
        const double other = oscillation_lorentz_integral(d.f_star, D);
        if (lhs.finite() && lhs.value > 0.0)
            e.note = "oscillation identity gap " + fmt(std::abs(other - lhs.value) / lhs.value);
        return e;
    }
    throw std::invalid_argument("unknown item '" + item + "' of T32");
}

Evaluation verify_pointwise_oscillation(const SobolevData& d) {
    const double D = homogeneous(d);
    const auto theta = product_exponents(d.A);
    const Bands& b = d.bands;
    Evaluation worst = make_evaluation(0.0, 0.0);
    const std::vector<std::size_t> cuts = window_cuts(b, d.A.size());
    double acc = 0.0;
    std::size_t next = 1;
    for (std::size_t j = 1; j <= b.size(); ++j) {
        double prod = 1.0;
        for (std::size_t i = 0; i < theta.size(); ++i) prod *= std::pow(b.g_rate[i][j - 1], theta[i]);
        acc += prod * b.length(j - 1);
        if (next >= cuts.size() || cuts[next] != j) continue;
        ++next;
        const double s = b.edges[j];
        const double O = std::max(0.0, b.running_integral[j] / s - edge_value(b, j));
        Evaluation e = make_evaluation(std::pow(s, -1.0 / D) * O, acc / s, s);
        if (e.ratio > worst.ratio) worst = e;
    }
    return combine_status(worst);
}

Evaluation verify_gradient_chain(const SobolevData& d) {
    const auto theta = product_exponents(d.A);
    const Bands& b = d.bands;
    Evaluation worst = make_evaluation(0.0, 0.0);
    double acc = 0.0;
    std::size_t violations = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
        double prod = 1.0;
        for (std::size_t i = 0; i < theta.size(); ++i) prod *= std::pow(b.g_rate[i][j - 1], theta[i]);
        acc += prod * b.length(j - 1);
        const double s = b.edges[j];
        const double I = acc / s;
        double mid = 1.0, top = 1.0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            mid *= std::pow(b.g[i][j] / s, theta[i]);
            top *= std::pow(d.partial_steps[i].at(s) / s, theta[i]);
        }
        if (I > mid * (1.0 + kChainTolerance) + 1e-300 || mid > top * (1.0 + kChainTolerance) + 1e-300) ++violations;
        Evaluation e = make_evaluation(I, d.gradient_steps.at(s) / s, s);
        if (e.ratio > worst.ratio) worst = e;
    }
    worst = combine_status(worst);
    if (violations > 0) {
        worst.status = Status::fail;
        worst.note = std::to_string(violations) + " violations of the Holder/Hardy-Littlewood chain";
    }
    return worst;
}

Evaluation verify_T23(const SobolevData& d, const SpaceSpec& X, const std::string& item) {
    if (contains_constants(X)) return refused(X.to_string() + " contains constant functions");
    const auto idx = closed_index(X);
    if (!idx) return refused("no closed-form Boyd indices for " + X.to_string());
    const double D = homogeneous(d);
    const SampledCurve osc = oscillation_curve(d);
    const Integral osc_norm = norm_of_curve(X, osc, d.grid_size);
    if (item == "i") {
        if (!(idx->lower > 1.0 / D)) return refused("needs lower index > 1/D; " + index_text(*idx));
        const Integral lhs = norm(X, scaled_profile(double_star(d.f_star), -1.0 / D));
        return combine_status(from_integrals(lhs, osc_norm));
    }
    if (item == "ii") {
        if (!(idx->upper < 1.0 / D)) return refused("needs upper index < 1/D; " + index_text(*idx));
        Integral rhs = osc_norm;
        if (rhs.finite()) rhs.value += l1_plus_linf(d);
        return combine_status(from_integrals({sup_norm(d), {}}, rhs));
    }
    throw std::invalid_argument("unknown item '" + item + "' of T23");
}

Evaluation verify_T43(const SobolevData& d, const SpaceSpec& X, std::span<const double> p_in, const std::string& item) {
    const auto p = exponents_or_ones(d, p_in);
    const double D = homogeneous(d);
    const double pbar = harmonic_mean_exponent(d.A, p);
    const SpaceSpec Xp = SpaceSpec::convexified(X, pbar);
    std::vector<SpaceSpec> specs;
    for (double pi : p) specs.push_back(SpaceSpec::convexified(X, pi));
    const Integral prod = partial_product(d, specs);

    if (item == "Xq") {
        const Integral lhs = norm_of_curve(Xp, oscillation_curve(d), d.grid_size);
        return combine_status(from_integrals(lhs, prod));
    }
    const auto idx = closed_index(X);
    if (!idx) return refused("no closed-form Boyd indices for " + X.to_string());
    if (item == "emb1") {
        if (!(idx->lower > pbar / D))
            return refused("needs lower index of X > pbar/D = " + fmt(pbar / D) + "; " + index_text(*idx));
        const Integral lhs = norm(Xp, scaled_profile(double_star(d.f_star), -1.0 / D));
        return combine_status(from_integrals(lhs, prod));
    }
    if (item == "emb2") {
        if (!(idx->upper < pbar / D))
            return refused("needs upper index of X < pbar/D = " + fmt(pbar / D) + "; " + index_text(*idx));
        Integral rhs = prod;
        if (rhs.finite()) rhs.value += l1_plus_linf(d);
        return combine_status(from_integrals({sup_norm(d), {}}, rhs));
    }
    throw std::invalid_argument("unknown item '" + item + "' of T43");
}

Evaluation verify_P44(const SobolevData& d, std::span<const double> p_in, const std::string& item) {
    const auto p = exponents_or_ones(d, p_in);
    const double D = homogeneous(d);
    const double pbar = harmonic_mean_exponent(d.A, p);
    std::vector<SpaceSpec> specs;
    for (double pi : p) specs.push_back(SpaceSpec::lp(pi));
    const Integral prod = partial_product(d, specs);
    const double rel = std::abs(pbar - D) / D;
    const bool equal = rel < 1e-12;

    if (item == "i") {
        if (equal || pbar > D) return refused("needs pbar < D; pbar = " + fmt(pbar) + ", D = " + fmt(D));
        const double pstar = *sobolev_exponent(pbar, D);
        const Integral lhs = norm(SpaceSpec::lorentz(pstar, pbar), d.f_star);
        return combine_status(from_integrals(lhs, prod));
    }
    Integral rhs = prod;
    if (rhs.finite()) rhs.value += l1_plus_linf(d);
    if (item == "ii") {
        if (!equal) return refused("needs pbar = D; pbar = " + fmt(pbar) + ", D = " + fmt(D));
        if (!(D > 1.0)) return refused("the logarithmic branch needs D > 1");
        const MonotoneProfile fss = double_star(d.f_star);
        const Integral I = integrate_against(fss, D, [D](double t) {
            return Integral{std::pow(1.0 + std::log(1.0 / t), 1.0 - D) / (D - 1.0), {}};
        });
        Integral lhs = I;
        if (lhs.finite()) lhs.value = std::pow(lhs.value, 1.0 / D);
        return combine_status(from_integrals(lhs, rhs));
    }
    if (item == "iii") {
        if (equal || pbar < D) return refused("needs pbar > D; pbar = " + fmt(pbar) + ", D = " + fmt(D));
        return combine_status(from_integrals({sup_norm(d), {}}, rhs));
    }
    throw std::invalid_argument("unknown item '" + item + "' of P44");
}

Evaluation verify_trudinger(const SobolevData& d, std::span<const double> p_in) {
    const auto p = exponents_or_ones(d, p_in);
    const double D = homogeneous(d);
    const double pbar = harmonic_mean_exponent(d.A, p);
    if (std::abs(pbar - D) / D >= 1e-12) return refused("needs pbar = D; pbar = " + fmt(pbar) + ", D = " + fmt(D));
    std::vector<SpaceSpec> specs;
    for (double pi : p) specs.push_back(SpaceSpec::lp(pi));
    Integral rhs = partial_product(d, specs);
    const double M = d.domain_mass;
    if (rhs.finite()) rhs.value += d.l1 / M;
    const MonotoneProfile fss = double_star(d.f_star);
    const auto ts = MonotoneProfile::geometric_grid(M, d.grid_size);
    double sup = 0.0, at = 0.0;
    for (double t : ts) {
        if (t >= M) break;
        const double v = fss.value_at(t) / std::pow(1.0 + std::log(M / t), (D - 1.0) / D);
        if (v > sup) {
            sup = v;
            at = t;
        }
    }
    return combine_status(from_integrals({sup, {}}, rhs, at));
}

Evaluation verify_T46(const SobolevData& d, const SpaceSpec& X, std::span<const double> p_in) {
    const auto p = exponents_or_ones(d, p_in);
    const double pbar = harmonic_mean_exponent(d.A, p);
    std::vector<SpaceSpec> specs;
    for (double pi : p) specs.push_back(SpaceSpec::angle_convexified(X, pi));
    const Integral prod = partial_product(d, specs);
    const Integral lhs = norm_of_curve(SpaceSpec::angle_convexified(X, pbar), oscillation_curve(d), d.grid_size);
    return combine_status(from_integrals(lhs, prod));
}

Evaluation verify_T47(const SobolevData& d, const WeightFunction& w, std::span<const double> p_in,
                      std::span<const double> q_in, const std::string& item) {
    const auto p = exponents_or_ones(d, p_in);
    const auto q = exponents_or_ones(d, q_in);
    const double D = homogeneous(d);
    const double pmin = *std::min_element(p.begin(), p.end());
    const BpResult bp = is_Bp_weight(w, pmin, default_weight_grid());
    if (!bp.member) return refused("weight " + w.to_string() + " is not in B_" + fmt(pmin) + ": " + bp.reason);
    const double pbar = harmonic_mean_exponent(d.A, p);
    const double qbar = harmonic_mean_exponent(d.A, q);
    const auto idx = closed_index(SpaceSpec::generalized_lorentz(pbar, qbar, w));
    if (!idx) return refused("no closed-form Boyd indices for the weight " + w.to_string());
    std::vector<SpaceSpec> specs;
    for (std::size_t i = 0; i < p.size(); ++i) specs.push_back(SpaceSpec::generalized_lorentz(p[i], q[i], w));
    const Integral prod = partial_product(d, specs);
    Integral plus = prod;
    if (plus.finite()) plus.value += l1_plus_linf(d);
    const bool first = idx->lower > 1.0 / D;
    const bool second = idx->upper < 1.0 / D;

    if (item == "i") {
        if (!first) return refused("needs lower index > 1/D; " + index_text(*idx));
        const auto pstar = sobolev_exponent(pbar, D);
        if (!pstar) return refused("pbar >= D leaves pbar* undefined");
        const Integral lhs = norm(SpaceSpec::generalized_lorentz(*pstar, qbar, w), d.f_star);
        return combine_status(from_integrals(lhs, prod));
    }
    if (item == "ii") {
        if (!second) return refused("needs upper index < 1/D; " + index_text(*idx));
        return combine_status(from_integrals({sup_norm(d), {}}, plus));
    }
    if (item == "iii") {
        if (first || second) return refused("branch i or ii applies; " + index_text(*idx));
        if (!(qbar > 1.0)) return refused("the weight u needs qbar > 1");
        const Lemma41Weight u(w.times_power(qbar / pbar - qbar / D - 1.0), qbar);
        return combine_status(from_integrals(u.weighted_norm(double_star(d.f_star), qbar), plus));
    }
    throw std::invalid_argument("unknown item '" + item + "' of T47");
}

Evaluation verify_Gamma(const SobolevData& d, const WeightFunction& w, std::span<const double> p_in,
                        const std::string& item) {
    const auto p = exponents_or_ones(d, p_in);
    const double D = homogeneous(d);
    const double pbar = harmonic_mean_exponent(d.A, p);
    const auto pstar = sobolev_exponent(pbar, D);
    if (!pstar) return refused("needs pbar < D; pbar = " + fmt(pbar));
    const double pmin = std::min(*std::min_element(p.begin(), p.end()), *pstar);
    const WeightCheck adm = check_admissible(w, pmin);
    if (adm.verdict != Decision::yes) return refused("weight " + w.to_string() + " not admissible: " + adm.reason);
    const SpaceSpec target = SpaceSpec::gamma(*pstar, w);
    const auto idx = closed_index(target);
    if (!idx) return refused("no closed-form Boyd indices for the weight " + w.to_string());
    std::vector<SpaceSpec> specs;
    for (double pi : p) specs.push_back(SpaceSpec::gamma(pi, w));
    const Integral prod = partial_product(d, specs);
    Integral plus = prod;
    if (plus.finite()) plus.value += l1_plus_linf(d);
    const bool first = idx->lower > 1.0 / D;
    const bool second = idx->upper < 1.0 / D;

    if (item == "i") {
        if (!first) return refused("needs lower index > 1/D; " + index_text(*idx));
        return combine_status(from_integrals(norm(target, scaled_profile(d.f_star, -1.0 / D)), prod));
    }
    if (item == "ii") {
        if (!second) return refused("needs upper index < 1/D; " + index_text(*idx));
        return combine_status(from_integrals({sup_norm(d), {}}, plus));
    }
    if (item == "iii") {
        if (first || second) return refused("branch i or ii applies; " + index_text(*idx));
        const Lemma41Weight u(w.times_power(-*pstar / D), *pstar);
        return combine_status(from_integrals(u.weighted_norm(double_star(d.f_star), *pstar), plus));
    }
    throw std::invalid_argument("unknown item '" + item + "' of Gamma");
}

Evaluation verify_GGamma(const SobolevData& d, const WeightFunction& w, std::span<const double> p_in, double m,
                         const std::string& item) {
    const auto p = exponents_or_ones(d, p_in);
    const double D = homogeneous(d);
    if (!(m >= 1.0) || !std::isfinite(m)) throw std::invalid_argument("GGamma needs 1 <= m < inf");
    const double pbar = harmonic_mean_exponent(d.A, p);
    const auto pstar = sobolev_exponent(pbar, D);
    if (!pstar) return refused("needs pbar < D; pbar = " + fmt(pbar));
    const double pmin = std::min(*std::min_element(p.begin(), p.end()), *pstar);
    const WeightCheck ok = check_ggamma_weight(w, m, pmin);
    if (ok.verdict != Decision::yes) return refused("weight " + w.to_string() + " fails the GGamma condition: " + ok.reason);
    const SpaceSpec target = SpaceSpec::ggamma(*pstar, m, w);
    const auto idx = closed_index(target);
    if (!idx) return refused("no closed-form Boyd indices for the weight " + w.to_string());
    std::vector<SpaceSpec> specs;
    for (double pi : p) specs.push_back(SpaceSpec::ggamma(pi, m, w));
    const Integral prod = partial_product(d, specs);
    Integral plus = prod;
    if (plus.finite()) plus.value += l1_plus_linf(d);
    const bool first = idx->lower > 1.0 / D;
    const bool second = idx->upper < 1.0 / D;

    if (item == "i") {
        if (!first) return refused("needs lower index > 1/D; " + index_text(*idx));
        return combine_status(from_integrals(norm(target, scaled_profile(d.f_star, -1.0 / D)), prod));
    }
    if (item == "ii") {
        if (!second) return refused("needs upper index < 1/D; " + index_text(*idx));
        return combine_status(from_integrals({sup_norm(d), {}}, plus));
    }
    if (item == "iii") {
        if (first || second) return refused("branch i or ii applies; " + index_text(*idx));
        if (!(m > 1.0)) return refused("the weight u needs m > 1");
        const Lemma41Weight u(w.times_power(-m / D), m);
        return combine_status(from_integrals(u.weighted_norm(double_star(d.f_star), m), plus));
    }
    throw std::invalid_argument("unknown item '" + item + "' of GGamma");
}

Evaluation evaluate_case(const std::string& id, const SobolevData& d, const CaseParams& c) {
    auto need_space = [&]() -> const SpaceSpec& {
        if (!c.space) throw std::invalid_argument("case " + id + " needs a base space");
        return *c.space;
    };
    auto tail_of = [&](const std::string& prefix) { return id.substr(prefix.size()); };
    if (id.rfind("T32.", 0) == 0) return verify_T32(d, tail_of("T32."), c.p_scalar);
    if (id == "R99.pointwise") return verify_pointwise_oscillation(d);
    if (id == "R77.gradient") return verify_gradient_chain(d);
    if (id.rfind("T23.", 0) == 0) return verify_T23(d, need_space(), tail_of("T23."));
    if (id.rfind("T43.", 0) == 0) return verify_T43(d, need_space(), c.p, tail_of("T43."));
    if (id.rfind("P44.", 0) == 0) return verify_P44(d, c.p, tail_of("P44."));
    if (id == "Trudinger") return verify_trudinger(d, c.p);
    if (id == "T46.angle") return verify_T46(d, need_space(), c.p);
    if (id.rfind("T47.lorentz.", 0) == 0) return verify_T47(d, c.weight, c.p, c.q, tail_of("T47.lorentz."));
    if (id.rfind("GGamma.", 0) == 0) return verify_GGamma(d, c.weight, c.p, c.m, tail_of("GGamma."));
    if (id.rfind("Gamma.", 0) == 0) return verify_Gamma(d, c.weight, c.p, tail_of("Gamma."));
    std::string valid;
    for (const auto& s : case_ids()) valid += (valid.empty() ? "" : ", ") + s;
    throw std::invalid_argument("unknown case id '" + id + "' (valid: " + valid + ")");
}

VerificationReport verify_case(const std::string& id, const std::string& family, const SobolevData& coarse,
                               const SobolevData& fine, const CaseParams& params) {
    VerificationReport r;
    r.case_id = id;
    r.anchor = case_anchor(id);
    r.family = family;
    r.resolution = coarse.resolution;
    r.resolution_fine = fine.resolution;
    const Evaluation a = evaluate_case(id, coarse, params);
    const Evaluation b = evaluate_case(id, fine, params);
    r.lhs = a.lhs;
    r.rhs = a.rhs;
    r.ratio = a.ratio;
    r.worst_t = a.worst_t;
    r.note = a.note;
    if (a.status == Status::refused || b.status == Status::refused) {
        r.status = Status::refused;
        r.stability = std::numeric_limits<double>::quiet_NaN();
        if (r.note.empty()) r.note = b.note;
        return r;
    }
    if (a.ratio == b.ratio) {
        r.stability = 0.0;
    } else if (std::isfinite(a.ratio) && std::isfinite(b.ratio)) {
        r.stability = std::abs(b.ratio - a.ratio) / std::max(std::abs(a.ratio), 1e-300);
    } else {
        r.stability = kInf;
    }
    if (a.status != Status::pass) {
        r.status = a.status;
    } else if (b.status != Status::pass) {
        r.status = b.status;
        if (r.note.empty()) r.note = b.note;
    } else if (!(r.stability < kStabilityTolerance)) {
        r.status = Status::unstable;
        const std::string hint = "ratio " + fmt(b.ratio) + " at " + std::to_string(fine.resolution) +
                                 " cells per axis; raise the resolution";
        r.note = r.note.empty() ? hint : r.note + "; " + hint;
    } else {
        r.status = Status::pass;
    }
    return r;
}

VerificationReport verify_case(const std::string& id, const TestFunction& f, const MonomialWeight& w,
                               const CaseParams& params, std::size_t resolution, std::size_t grid_size) {
    if (!is_case_id(id)) evaluate_case(id, SobolevData{}, params);
    const SobolevData coarse = compute_sobolev_data(f, w, resolution, grid_size);
    const SobolevData fine = compute_sobolev_data(f, w, 2 * resolution, grid_size);
    return verify_case(id, f.label(), coarse, fine, params);
}

Lemma41Weight::Lemma41Weight(WeightFunction v, double p) : v_(std::move(v)), p_(p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("the weight u needs 1 < p < inf");
    const double k = -1.0 / (p - 1.0);
    if (auto b = v_.pure_power(); b && v_.kind() != WeightKind::custom) {
        h_ = WeightFunction::power(*b * k);
    } else {
        std::optional<Asymptote> z = v_.at_zero();
        if (z) {
            z->power *= k;
            z->log_power *= k;
            z->exponential_decay = false;
        }
        h_ = WeightFunction::custom(
            "v^(-1/(p-1))", [v = v_, k](double t) { return std::pow(v(t), k); }, z, std::nullopt);
    }
    const Integral J0 = h_.moment(0.0, 1.0, -p_ / (p_ - 1.0));
    limit_ = J0.finite() ? std::pow(1.0 + J0.value, 1.0 - p_) : 0.0;
}

Integral Lemma41Weight::inner(double t) const {
    if (!(t > 0.0)) return Integral::divergent("J(0) is the limit at zero");
    if (t >= 1.0) return {0.0, {}};
    return h_.moment(t, 1.0, -p_ / (p_ - 1.0));
}

double Lemma41Weight::operator()(double t) const {
    if (t > 1.0) return 0.0;
    const Integral J = inner(t);
    if (!J.finite()) return kInf;
    return (p_ - 1.0) * std::pow(1.0 + J.value, -p_) * h_(t) * std::pow(t, -p_ / (p_ - 1.0));
}

Integral Lemma41Weight::primitive(double t) const {
    if (!(t > 0.0)) return {0.0, {}};
    const Integral J = inner(std::min(t, 1.0));
    if (!J.finite()) return J;
    return {std::pow(1.0 + J.value, 1.0 - p_) - limit_, {}};
}

double Lemma41Weight::lemma_bound(double t) const {
    const Integral U = primitive(t);
    const Integral J = inner(t);
    if (!U.finite() || !J.finite()) return kInf;
    return std::pow(U.value, 1.0 / p_) * std::pow(J.value, (p_ - 1.0) / p_);
}

Integral Lemma41Weight::weighted_norm(const MonotoneProfile& g, double q) const {
    Integral I = integrate_against(g, q, [this](double t) { return primitive(t); });
    if (I.finite()) I.value = std::pow(I.value, 1.0 / q);
    return I;
}

Lemma41Weight weight_u_from_v(const WeightFunction& v, double p) { return Lemma41Weight(v, p); }

Evaluation truncation_ratio(const SobolevData& d, double t1, double t2) {
    if (!(t1 >= 0.0) || !(t1 < t2)) throw std::invalid_argument("truncation requires 0 <= t1 < t2");
    const double D = homogeneous(d);
    const auto theta = product_exponents(d.A);
    double top = 0.0;
    std::vector<double> band(theta.size(), 0.0);
    for (std::size_t k = 0; k < d.sorted.values.size(); ++k) {
        const double v = d.sorted.values[k];
        const double m = d.sorted.masses[k];
        if (v >= t2) top += m;
        if (v > t1 && v <= t2)
            for (std::size_t i = 0; i < theta.size(); ++i) band[i] += d.partials[i][d.sorted.order[k]] * m;
    }
    double rhs = 1.0;
    for (std::size_t i = 0; i < theta.size(); ++i) rhs *= std::pow(band[i], theta[i]);
    return make_evaluation((t2 - t1) * std::pow(top, 1.0 - 1.0 / D), rhs);
}

}  // namespace monosob
