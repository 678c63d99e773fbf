// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "monosob/inequality_verifier.hpp"
#include "monosob/rearrangement.hpp"
#include "monosob/run_config.hpp"
#include "monosob/sharpness.hpp"
#include "monosob/space_catalog.hpp"
#include "monosob/sobolev_terms.hpp"
#include "monosob/test_functions.hpp"

using namespace monosob;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct Instance {
    Family family;
    std::vector<double> A;
    Parameters params;
};

TestFunction make(const Instance& i) { return instantiate(FamilySpec::defaults(i.family, i.A.size()), i.params); }

std::string label(const Instance& i) {
    std::string s = to_string(i.family) + " A=(";
    for (std::size_t k = 0; k < i.A.size(); ++k) s += (k ? "," : "") + fmt(i.A[k]);
    return s + ")";
}

const std::vector<Instance>& oracle_instances() {
    static const std::vector<Instance> v{
        {Family::cone, {2.0}, {}},
        {Family::cone, {1.0, 1.0}, {}},
        {Family::cone, {0.0, 0.0, 0.0}, {}},
        {Family::tensor_bump, {0.0}, {{"k", 3.0}}},
        {Family::radial_power, {0.0, 0.0}, {}},
        {Family::double_revolution, {1.0, 0.0}, {{"b", 2.0}}},
        {Family::plateau, {0.0, 1.0}, {{"a", 0.3}}},
        {Family::plateau, {2.0}, {}},
    };
    return v;
}

// --- 1 ---------------------------------------------------------------------

Outcome cone_oracle() {
    // mu{|f| > s} = (2/3)(1-s)^3 for the cone on [-1,1] with weight x^2
    auto exact = [](double t) { return t >= 2.0 / 3.0 ? 0.0 : 1.0 - std::cbrt(1.5 * t); };
    auto cone = [](Point x) { return std::max(0.0, 1.0 - std::abs(x[0])); };
    const auto p = rearrange(MonomialWeight({2.0}), cone, BoxDomain::symmetric(1, 1.0), 10000, 4096);
    double err = 0.0;
    for (double t : p.grid())
        if (t <= 2.0 / 3.0) err = std::max(err, std::abs(p.value_at(t) - exact(t)));
    return {err < 1e-3, "sup-relative error " + fmt(err)};
}

// --- 2 ---------------------------------------------------------------------

double mass_above(const MonotoneProfile& p, double s) {
    double lo = 0.0, hi = p.support_mass();
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (p.value_at(mid) > s ? lo : hi) = mid;
    }
    return lo;
}

Outcome mass_identities() {
    Outcome o;
    double worst_eq = 0.0, worst_55 = 0.0;
    for (const auto& inst : oracle_instances()) {
        const auto f = make(inst);
        const MonomialWeight w(inst.A);
        const std::size_t res = default_resolution(inst.A.size());
        const auto d = compute_sobolev_data(f, w, res);
        const double sup = d.f_star.sup();
        for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double s = frac * sup;
            const double direct = measure_superlevel(w, f.value, s, f.support, res);
            const double from_star = mass_above(d.f_star, s);
            if (direct <= 0.0) continue;
            const double e = std::abs(from_star - direct) / direct;
            worst_eq = std::max(worst_eq, e);
            if (e > 0.01) {
                o.pass = false;
                o.detail += " equimeasurability " + label(inst) + " s=" + fmt(s) + ";";
            }
        }
        for (std::size_t i = 0; i < inst.A.size(); ++i) {
            const double direct = integrate(w, f.partial_abs(i), f.support, res);
            const double tilde = d.tilde[i].steps.total();
            const double e = std::abs(tilde - direct) / direct;
            worst_55 = std::max(worst_55, e);
            if (e > 0.01) {
                o.pass = false;
                o.detail += " gradient mass " + label(inst) + " axis " + std::to_string(i) + ";";
            }
        }
    }
    o.detail = "worst equimeasurability " + fmt(worst_eq) + ", worst gradient mass " + fmt(worst_55) + o.detail;
    return o;
}

// --- 3 ---------------------------------------------------------------------

Outcome monotonicity() {
    std::vector<Instance> all = oracle_instances();
    all.push_back({Family::tensor_bump, {1.0, 1.0}, {}});
    all.push_back({Family::tensor_bump, {0.5, 0.0, 1.0}, {}});
    std::size_t violations = 0, checks = 0;
    std::string where;
    auto flag = [&](bool bad, const std::string& what) {
        ++checks;
        if (bad) {
            if (violations++ == 0) where = " first: " + what;
        }
    };
    for (const auto& inst : all) {
        const auto f = make(inst);
        const auto d = compute_sobolev_data(f, MonomialWeight(inst.A), default_resolution(inst.A.size()));
        const auto v = d.f_star.values();
        for (std::size_t j = 1; j < v.size(); ++j) flag(v[j] > v[j - 1], label(inst) + " f* increases");
        const auto ss = double_star(d.f_star);
        for (double t : d.f_star.grid())
            flag(d.f_star.value_at(t) > ss.value_at(t) * (1.0 + 1e-12), label(inst) + " f* > f**");
        const auto osc = oscillation(d.f_star);
        double prev = 0.0;
        for (std::size_t j = 0; j < osc.grid().size(); ++j) {
            const double tO = osc.grid()[j] * osc.values()[j];
            flag(tO < prev - 1e-12 * std::max(1.0, prev), label(inst) + " t O decreases");
            prev = std::max(prev, tO);
        }
        for (std::size_t i = 0; i < inst.A.size(); ++i) {
            const auto& tilde = d.tilde[i].steps;
            const auto& part = d.partial_steps[i];
            for (double t : d.f_star.grid()) {
                const double a = tilde.at(t), b = part.at(t);
                flag(a > b * (1.0 + 1e-9) + 1e-15, label(inst) + " cumulative dominance axis " + std::to_string(i));
            }
        }
    }
    return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(checks) + " checks" + where};
}

// --- 4 ---------------------------------------------------------------------

Outcome chain_sweep() {
    const std::vector<std::vector<double>> weights{{0.0}, {0.0, 0.0}, {0.0, 0.0, 0.0}, {1.0, 1.0}, {2.0}};
    const std::vector<std::pair<Family, Parameters>> families{{Family::cone, {}},
                                                              {Family::tensor_bump, {}},
                                                              {Family::tensor_bump, {{"k", 3.0}, {"s1", 2.0}}},
                                                              {Family::plateau, {}}};
    struct Item {
        std::string id;
        double p;
    };
    const std::vector<Item> items{{"T32.i", 1.0},  {"T32.ii", 1.0}, {"T32.iii", 1.0},
                                  {"T32.iv", 1.0}, {"T32.iv", 2.0}, {"T32.v", 1.0}};
    Outcome o;
    std::size_t instances = 0, rows = 0;
    double worst = 0.0;
    for (const auto& A : weights) {
        for (const auto& [fam, params] : families) {
            const Instance inst{fam, A, params};
            const auto f = make(inst);
            const MonomialWeight w(A);
            const std::size_t res = default_resolution(A.size());
            const auto coarse = compute_sobolev_data(f, w, res);
            const auto fine = compute_sobolev_data(f, w, 2 * res);
            ++instances;
            for (const auto& it : items) {
                CaseParams c;
                c.p_scalar = it.p;
                const auto r = verify_case(it.id, f.label(), coarse, fine, c);
                ++rows;
                worst = std::max(worst, r.stability);
                if (r.status != Status::pass || !std::isfinite(r.ratio) || !(r.stability < kStabilityTolerance)) {
                    o.pass = false;
                    o.detail += " " + it.id + "(p=" + fmt(it.p) + ") " + label(inst) + " " + to_string(r.status) +
                                " stability " + fmt(r.stability) + ";";
                }
            }
        }
    }
    o.detail = std::to_string(instances) + " instances, " + std::to_string(rows) + " rows, worst stability " +
               fmt(worst) + o.detail;
    return o;
}

// --- 5 ---------------------------------------------------------------------

Outcome lorentz_identity() {
    Outcome o;
    double worst = 0.0;
    for (const auto& inst : oracle_instances()) {
        const MonomialWeight w(inst.A);
        const double D = w.homogeneous_dimension();
        if (D <= 1.0) continue;
        const auto f = make(inst);
        const auto star = rearrange(w, f.value, f.support, default_resolution(inst.A.size()));
        const double direct = norm(SpaceSpec::lorentz(D / (D - 1.0), 1.0, true), star).value;
        const double via_osc = oscillation_lorentz_integral(star, D);
        const double e = std::abs(via_osc - direct) / direct;
        worst = std::max(worst, e);
        if (e >= 1e-2) {
            o.pass = false;
            o.detail += " " + label(inst) + " gap " + fmt(e) + ";";
        }
    }
    o.detail = "worst relative gap " + fmt(worst) + o.detail;
    return o;
}

// --- 6 ---------------------------------------------------------------------

Outcome scaling() {
    // A = (2), p = 1: D = 3, pbar = 1, pbar* = 3/2
    const double D = 3.0, pstar = 1.5;
    const Instance inst{Family::cone, {2.0}, {}};
    const std::vector<double> p{1.0}, qs{0.9 * pstar, pstar, 1.1 * pstar};
    const auto r = scaling_exponent_test(make(inst), MonomialWeight(inst.A), p, qs, default_lambda_grid(), 4096);
    Outcome o;
    if (!r.pstar || std::abs(*r.pstar - pstar) > 1e-12) return {false, "pbar* not found"};
    for (const auto& c : r.candidates) {
        const double oracle = D * (1.0 / pstar - 1.0 / c.q);
        const bool is_star = c.q == pstar;
        const bool ok = std::abs(c.isotropic_slope - oracle) < 0.01 && c.invariant == is_star &&
                        (is_star ? std::abs(c.isotropic_slope) < 0.02 : std::abs(c.isotropic_slope) > 0.05);
        o.detail += (o.detail.empty() ? "" : ", ") + std::string("q=") + fmt(c.q) + " slope " + fmt(c.isotropic_slope) +
                    " (oracle " + fmt(oracle) + ")";
        if (!ok) o.pass = false;
    }
    return o;
}

// --- 7 ---------------------------------------------------------------------

Outcome lemma41() {
    Outcome o;
    double worst = 0.0;
    for (const double D : {2.0, 3.0, 4.5}) {
        const auto u = weight_u_from_v(WeightFunction::power(-1.0), D);
        for (int k = 0; k <= 400; ++k) {
            const double t = std::pow(10.0, -4.0 + 4.0 * k / 400.0);
            if (t <= 1e-4) continue;
            const double L = 1.0 + std::log(1.0 / t);
            const double exact = (D - 1.0) * std::pow(L, -D) / t;
            worst = std::max(worst, std::abs(u(t) - exact) / exact);
        }
    }
    o.pass = worst < 1e-6;
    o.detail = "worst relative error " + fmt(worst);
    return o;
}

// --- 8 ---------------------------------------------------------------------

Outcome catalog() {
    Outcome o;
    const auto probes = default_probes();
    const double gap = lambda_weight_identity_check(WeightFunction::constant(), 3.0, 2.0, probes);
    const double gap2 = lambda_weight_identity_check(WeightFunction::constant(), 1.5, 4.0, probes);
    if (!(std::max(gap, gap2) < 1e-3)) o.pass = false;
    o.detail = "Lambda identity gap " + fmt(std::max(gap, gap2));
    const auto grid = default_weight_grid();
    double bp_worst = 0.0;
    for (double p : {1.25, 2.0, 3.0, 5.0}) {
        const auto one = is_Bp_weight(WeightFunction::constant(), p, grid);
        const auto bad = is_Bp_weight(WeightFunction::power(p - 1.0), p, grid);
        const double e = std::abs(one.constant * (p - 1.0) - 1.0);
        bp_worst = std::max(bp_worst, e);
        if (!one.member || e > 1e-6 || bad.member) o.pass = false;
    }
    o.detail += ", B_p constant error " + fmt(bp_worst);
    double step_worst = 0.0;
    for (auto [p, q] : {std::pair{2.0, 1.0}, {3.0, 2.0}, {1.5, 4.0}, {4.0, 4.0}}) {
        for (auto [c, a] : {std::pair{1.0, 1.0}, {2.5, 0.3}, {0.4, 7.0}}) {
            const double exact = c * std::pow(p / q, 1.0 / q) * std::pow(a, 1.0 / p);
            const double got = norm(SpaceSpec::lorentz(p, q), MonotoneProfile::step(c, a)).value;
            step_worst = std::max(step_worst, std::abs(got - exact) / exact);
        }
    }
    if (!(step_worst < 1e-6)) o.pass = false;
    o.detail += ", step Lorentz error " + fmt(step_worst);
    return o;
}

// --- 9 ---------------------------------------------------------------------

Outcome holder_and_transfer() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const std::vector<SpaceSpec> specs{
        SpaceSpec::lp(1.0),
        SpaceSpec::lp(2.5),
        SpaceSpec::linf(),
        SpaceSpec::l1_plus_linf(),
        SpaceSpec::lorentz(3.0, 1.5),
        SpaceSpec::lorentz(2.0, 4.0, true),
        SpaceSpec::lorentz_zygmund(2.0, 2.0, 1.0, true),
        SpaceSpec::gamma(2.0, WeightFunction::power(0.5)),
        SpaceSpec::generalized_lorentz(2.0, 2.0, WeightFunction::constant()),
        SpaceSpec::convexified(SpaceSpec::lp(1.5), 2.0),
    };
    std::size_t holder_bad = 0, transfer_bad = 0, hypothesis_bad = 0;
    double holder_worst = 0.0, transfer_worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto& spec = specs[trial % specs.size()];
        const std::size_t n = 2 + static_cast<std::size_t>(U(rng) * 3.0);
        const std::size_t K = 5 + static_cast<std::size_t>(U(rng) * 36.0);
        std::vector<double> lengths(K);
        for (auto& l : lengths) l = 0.05 + U(rng);
        std::vector<std::vector<double>> values(n, std::vector<double>(K));
        for (auto& v : values)
            for (auto& x : v) x = U(rng) < 0.15 ? 0.0 : std::exp(3.0 * (U(rng) - 0.5));
        std::vector<double> theta(n);
        double sum = 0.0;
        for (auto& t : theta) sum += (t = -std::log(1.0 - U(rng)));
        for (auto& t : theta) t /= sum;
        const double r = holder_product_ratio(spec, values, lengths, theta);
        holder_worst = std::max(holder_worst, r);
        if (!(r <= 1.0 + 1e-9)) ++holder_bad;

        // h random; g below h** with running integral below that of h*
        const std::size_t M = 8 + static_cast<std::size_t>(U(rng) * 120.0);
        const double width = 0.01 + U(rng);
        std::vector<double> h(M), g(M);
        for (auto& x : h) x = U(rng) < 0.2 ? 0.0 : std::exp(4.0 * (U(rng) - 0.5));
        std::vector<double> hs = h;
        std::sort(hs.begin(), hs.end(), std::greater<>());
        double H = 0.0, G = 0.0;
        for (std::size_t k = 0; k < M; ++k) {
            const double H1 = H + hs[k] * width;
            const double hss = H1 / (width * static_cast<double>(k + 1));
            const double want = U(rng) < 0.4 ? hss : U(rng) * hss;
            g[k] = std::max(0.0, std::min(want, (H1 - G) / width));
            H = H1;
            G += g[k] * width;
        }
        const auto tc = transfer_check(g, h, width);
        if (!tc.hypotheses) ++hypothesis_bad;
        transfer_worst = std::max(transfer_worst, tc.worst_ratio);
        if (!(tc.worst_ratio <= 4.0 * (1.0 + 1e-12))) ++transfer_bad;
    }
    Outcome o;
    o.pass = holder_bad == 0 && transfer_bad == 0 && hypothesis_bad == 0;
    o.detail = "Holder violations " + std::to_string(holder_bad) + " (max ratio " + fmt(holder_worst) +
               "), transfer violations " + std::to_string(transfer_bad) + " (max ratio " + fmt(transfer_worst) +
               "), invalid pairs " + std::to_string(hypothesis_bad);
    return o;
}

// --- 10 --------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const char* cli = std::getenv("MONOSOB_CLI");
    if (!cli || !fs::exists(cli)) return {false, "MONOSOB_CLI does not name the monosob executable"};
    const fs::path dir = fs::temp_directory_path() / "monosob_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "run.yaml";
    std::ofstream(cfg) << "A: [1, 1]\ngrid: 1024\nseed: 7\n"
                          "cases: [T32.i, T32.iii, T32.iv, R99.pointwise, T43.Xq]\n"
                          "spaces: [\"lorentz:p=3,q=2\"]\n"
                          "families:\n  - tag: cone\n  - tag: plateau\n    params: {a: [0.4]}\n";
    std::string outputs[2][2];
    for (int k = 0; k < 2; ++k) {
        const fs::path out = dir / ("out" + std::to_string(k));
        const std::string cmd = "\"" + std::string(cli) + "\" run --config \"" + cfg.string() + "\" --out \"" +
                                out.string() + "\" > \"" + (dir / "log.txt").string() + "\" 2>&1";
        const int raw = std::system(cmd.c_str());
        const int rc = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        if (rc != 0 && rc != 1) return {false, "run exited with status " + std::to_string(rc)};
        outputs[k][0] = slurp(out / "report.csv");
        outputs[k][1] = slurp(out / "report.json");
    }
    const bool same = outputs[0][0] == outputs[1][0] && outputs[0][1] == outputs[1][1] && !outputs[0][0].empty();
    fs::remove_all(dir);
    return {same, same ? "report.csv and report.json byte-identical" : "reports differ between runs"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"rearrangement oracle (cone, A=(2))", cone_oracle},
        {"mass identities", mass_identities},
        {"monotonicity battery", monotonicity},
        {"Sobolev chain sweep", chain_sweep},
        {"oscillation Lorentz identity", lorentz_identity},
        {"scaling sharpness", scaling},
        {"Lemma 4.1 weight", lemma41},
        {"catalog self-consistency", catalog},
        {"Holder product and factor-4 transfer", holder_and_transfer},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
