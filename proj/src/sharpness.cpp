#include "monosob/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "monosob/space_catalog.hpp"
#include "monosob/sobolev_terms.hpp"

namespace monosob {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Norms {
    std::vector<double> lq;       // one per candidate q
    std::vector<double> partial;  // ||d_i f||_{L^{p_i}}
};

Norms scaled_norms(const TestFunction& f, const MonomialWeight& w, std::span<const double> p,
                   std::span<const double> qs, std::size_t resolution, std::size_t grid_size) {
    const SobolevData d = compute_sobolev_data(f, w, resolution, grid_size);
    Norms n;
    for (double q : qs) n.lq.push_back(norm(SpaceSpec::lp(q), d.f_star).value);
    for (std::size_t i = 0; i < p.size(); ++i) n.partial.push_back(norm(SpaceSpec::lp(p[i]), d.partial_star[i]).value);
    return n;
}

double log_ratio(const Norms& n, std::size_t qi, std::span<const double> theta) {
    double r = std::log(n.lq[qi]);
    for (std::size_t i = 0; i < theta.size(); ++i) r -= theta[i] * std::log(n.partial[i]);
    return r;
}

struct Coordinate {
    std::string name;
    double lo, hi;
    bool log_scale;
    double to_value(double u) const {
        u = std::clamp(u, 0.0, 1.0);
        return log_scale ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u;
    }
};

}  // namespace

std::vector<double> default_lambda_grid(double lo_decade, double hi_decade, std::size_t samples) {
    if (samples < 2 || !(hi_decade > lo_decade)) throw std::invalid_argument("lambda grid needs two distinct decades");
    std::vector<double> g(samples);
    for (std::size_t k = 0; k < samples; ++k)
        g[k] = std::pow(10.0, lo_decade + (hi_decade - lo_decade) * static_cast<double>(k) / (samples - 1));
    return g;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two matching samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxy / sxx;
}

double oracle_isotropic_slope(double D, double pstar, double q) { return D * (1.0 / pstar - 1.0 / q); }
double oracle_axis_slope(double A_k, double pstar, double q) { return (A_k + 1.0) * (1.0 / pstar - 1.0 / q); }

ScalingResult scaling_exponent_test(const TestFunction& f, const MonomialWeight& w, std::span<const double> p_in,
                                    std::span<const double> q_candidates, std::span<const double> lambda_grid,
                                    std::size_t resolution, std::size_t grid_size) {
    const std::size_t n = f.dimension;
    std::vector<double> p(p_in.begin(), p_in.end());
    if (p.empty()) p.assign(n, 1.0);
    if (p.size() != n) throw std::invalid_argument("one gradient exponent per coordinate is required");
    if (lambda_grid.size() < kMinScalingSamples)
        throw std::invalid_argument("scaling fit needs at least " + std::to_string(kMinScalingSamples) + " lambda samples");
    const auto [lmin, lmax] = std::minmax_element(lambda_grid.begin(), lambda_grid.end());
    if (!(*lmin > 0.0) || std::log10(*lmax / *lmin) < 2.0 - 1e-12)
        throw std::invalid_argument("lambda grid must be positive and span at least two decades");

    const auto A = w.exponents();
    const double D = w.homogeneous_dimension();
    const auto theta = product_exponents(A);

    ScalingResult res;
    res.pbar = harmonic_mean_exponent(A, p);
    res.pstar = sobolev_exponent(res.pbar, D);

    std::vector<double> qs;
    for (double q : q_candidates) {
        CandidateVerdict v;
        v.q = q;
        if (!res.pstar) {
            v.skipped = true;
            v.note = "pbar >= D: no Sobolev exponent";
        } else if (!(q >= 1.0) || !std::isfinite(q)) {
            v.skipped = true;
            v.note = "q outside [1, inf)";
        } else {
            qs.push_back(q);
        }
        res.candidates.push_back(std::move(v));
    }
    if (qs.empty()) return res;

    // sweeps[0] is isotropic, sweeps[1 + k] scales axis k only.
    const std::size_t sweeps = n == 1 ? 1 : n + 1;
    std::vector<std::vector<std::vector<double>>> lambdas(sweeps);
    std::vector<std::vector<Norms>> norms(sweeps);
    for (std::size_t s = 0; s < sweeps; ++s) {
        for (double l : lambda_grid) {
            std::vector<double> lam(n, 1.0);
            if (s == 0) {
                std::fill(lam.begin(), lam.end(), l);
            } else {
                lam[s - 1] = l;
            }
            norms[s].push_back(scaled_norms(f.scaled(lam), w, p, qs, resolution, grid_size));
            lambdas[s].push_back(std::move(lam));
        }
    }

    std::size_t qi = 0;
    for (auto& v : res.candidates) {
        if (v.skipped) continue;
        for (std::size_t s = 0; s < sweeps; ++s) {
            ScalingExperiment e;
            e.base = f.label();
            e.lambda = lambdas[s];
            e.q = v.q;
            e.axis = s == 0 ? -1 : static_cast<int>(s - 1);
            for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
                e.log_lambda.push_back(std::log(lambda_grid[k]));
                e.log_ratio.push_back(log_ratio(norms[s][k], qi, theta));
            }
            const double slope = least_squares_slope(e.log_lambda, e.log_ratio);
            if (s == 0) {
                v.isotropic_slope = slope;
                v.isotropic_oracle = oracle_isotropic_slope(D, *res.pstar, v.q);
            } else {
                v.axis_slopes.push_back(slope);
                v.axis_oracles.push_back(oracle_axis_slope(A[s - 1], *res.pstar, v.q));
            }
            v.experiments.push_back(std::move(e));
        }
        if (n == 1) {
            v.axis_slopes = {v.isotropic_slope};
            v.axis_oracles = {v.isotropic_oracle};
        }
        v.invariant = std::abs(v.isotropic_slope) < kSlopeTolerance &&
                      std::all_of(v.axis_slopes.begin(), v.axis_slopes.end(),
                                  [](double s) { return std::abs(s) < kSlopeTolerance; });
        ++qi;
    }
    return res;
}

BalanceResult lambda_balance(const TestFunction& f, const MonomialWeight& w, std::size_t resolution) {
    BalanceResult r;
    const std::size_t n = f.dimension;
    const SobolevData d = compute_sobolev_data(f, w, resolution);
    r.pre_norms = d.partial_l1;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(r.pre_norms[i] > 0.0)) {
            r.refused = true;
            r.note = "partial derivative " + std::to_string(i + 1) + " vanishes: degenerate direction";
            return r;
        }
    }
    r.lambda.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) r.lambda[i] *= r.pre_norms[j];
    r.post_norms = compute_sobolev_data(f.scaled(r.lambda), w, resolution).partial_l1;
    const auto [mn, mx] = std::minmax_element(r.post_norms.begin(), r.post_norms.end());
    r.spread = *mx / *mn - 1.0;
    return r;
}

ConstantEstimate estimate_best_constant(const std::string& case_id, const FamilySpec& family,
                                        const MonomialWeight& w, const CaseParams& params,
                                        const EstimateBudget& budget, const Parameters& fixed) {
    if (!is_case_id(case_id)) evaluate_case(case_id, SobolevData{}, params);
    if (family.dimension != w.dimension()) throw std::invalid_argument("family and weight dimensions differ");

    ConstantEstimate est;
    est.case_id = case_id;
    est.family = to_string(family.tag);

    Parameters base = family.default_parameters();
    for (const auto& [k, v] : fixed) base[k] = v;
    std::vector<Coordinate> coords;
    for (const auto& r : family.box) {
        if (r.name == "c" || fixed.count(r.name)) continue;
        coords.push_back({r.name, r.lo, r.hi, r.lo > 0.0 && r.hi / r.lo >= 4.0});
    }
    const std::size_t m = coords.size();

    auto params_at = [&](const std::vector<double>& u) {
        Parameters p = base;
        for (std::size_t i = 0; i < m; ++i) p[coords[i].name] = coords[i].to_value(u[i]);
        return p;
    };
    auto objective = [&](const std::vector<double>& u) {
        double ratio = kNegInf;
        try {
            const TestFunction f = instantiate(family, params_at(u));
            const SobolevData d = compute_sobolev_data(f, w, budget.resolution, budget.grid_size);
            const Evaluation e = evaluate_case(case_id, d, params);
            if (e.status != Status::refused && !std::isnan(e.ratio)) ratio = e.ratio;
        } catch (const NonFiniteSample&) {
        }
        est.trace.push_back(ratio);
        return ratio;
    };

    std::vector<std::vector<double>> nodes;
    const std::size_t g = std::max<std::size_t>(budget.grid_points, 1);
    double total = 1.0;
    for (std::size_t i = 0; i < m; ++i) total *= static_cast<double>(g);
    auto node_of = [&](std::size_t index) {
        std::vector<double> u(m);
        for (std::size_t i = 0; i < m; ++i) {
            u[i] = g == 1 ? 0.5 : static_cast<double>(index % g) / static_cast<double>(g - 1);
            index /= g;
        }
        return u;
    };
    if (total <= static_cast<double>(budget.grid_cap)) {
        for (std::size_t k = 0; k < static_cast<std::size_t>(total); ++k) nodes.push_back(node_of(k));
    } else {
        std::mt19937_64 rng(budget.seed);
        std::uniform_int_distribution<std::size_t> pick(0, g - 1);
        for (std::size_t k = 0; k < budget.grid_cap; ++k) {
            std::vector<double> u(m);
            for (auto& x : u) x = g == 1 ? 0.5 : static_cast<double>(pick(rng)) / static_cast<double>(g - 1);
            nodes.push_back(std::move(u));
        }
    }

    std::vector<double> best_u = nodes.front();
    double best = kNegInf;
    for (const auto& u : nodes) {
        const double r = objective(u);
        if (r > best) {
            best = r;
            best_u = u;
        }
    }
    est.grid_best = best;

    bool improved = false;
    if (m > 0 && budget.refine_evaluations > 0 && std::isfinite(best)) {
        // Nelder-Mead maximization on the unit cube around the best grid node.
        std::mt19937_64 rng(budget.seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> jitter(0.8, 1.2);
        std::vector<std::vector<double>> simplex{best_u};
        std::vector<double> vals{best};
        std::size_t evals = 0;
        for (std::size_t i = 0; i < m && evals < budget.refine_evaluations; ++i) {
            auto u = best_u;
            const double step = 0.15 * jitter(rng);
            u[i] = u[i] + step <= 1.0 ? u[i] + step : u[i] - step;
            simplex.push_back(u);
            vals.push_back(objective(u));
            ++evals;
        }
        auto clamp01 = [](std::vector<double> u) {
            for (auto& x : u) x = std::clamp(x, 0.0, 1.0);
            return u;
        };
        auto along = [&](const std::vector<double>& c, const std::vector<double>& x, double t) {
            std::vector<double> u(m);
            for (std::size_t i = 0; i < m; ++i) u[i] = c[i] + t * (x[i] - c[i]);
            return clamp01(u);
        };
        while (simplex.size() == m + 1 && evals < budget.refine_evaluations) {
            std::vector<std::size_t> order(m + 1);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
            const std::size_t worst = order.back();
            std::vector<double> centroid(m, 0.0);
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t i = 0; i < m; ++i) centroid[i] += simplex[order[k]][i] / static_cast<double>(m);

            const auto xr = along(centroid, simplex[worst], -1.0);
            const double fr = objective(xr);
            ++evals;
            if (fr > vals[order.front()]) {
                if (evals >= budget.refine_evaluations) {
                    simplex[worst] = xr;
                    vals[worst] = fr;
                    break;
                }
                const auto xe = along(centroid, simplex[worst], -2.0);
                const double fe = objective(xe);
                ++evals;
                simplex[worst] = fe > fr ? xe : xr;
                vals[worst] = std::max(fe, fr);
            } else if (fr > vals[order[m - 1]]) {
                simplex[worst] = xr;
                vals[worst] = fr;
            } else {
                if (evals >= budget.refine_evaluations) break;
                const auto xc = along(centroid, simplex[worst], 0.5);
                const double fc = objective(xc);
                ++evals;
                if (fc > vals[worst]) {
                    simplex[worst] = xc;
                    vals[worst] = fc;
                } else {
                    const auto& top = simplex[order.front()];
                    for (std::size_t k = 1; k <= m && evals < budget.refine_evaluations; ++k) {
                        auto& x = simplex[order[k]];
                        x = along(top, x, 0.5);
                        vals[order[k]] = objective(x);
                        ++evals;
                    }
                }
            }
        }
        for (std::size_t k = 0; k < simplex.size(); ++k) {
            if (vals[k] > best) {
                best = vals[k];
                best_u = simplex[k];
                improved = true;
            }
        }
    }

    est.best_ratio = best;
    est.best_params = params_at(best_u);
    est.trace_length = est.trace.size();
    est.flagged = !improved;
    if (est.best_ratio < est.grid_best) throw std::logic_error("refinement lost the grid maximum");
    return est;
}

}  // namespace monosob
