#include "monosob/sobolev_terms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monosob {

std::vector<double> product_exponents(std::span<const double> A) {
    const double D = homogeneous_dimension(A);
    std::vector<double> theta(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) theta[i] = (A[i] + 1.0) / D;
    return theta;
}

StepCumulative StepCumulative::build(std::span<const double> levels, std::span<const double> lengths) {
    if (levels.size() != lengths.size()) throw std::invalid_argument("levels and lengths differ in length");
    StepCumulative c;
    double m = 0.0, I = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (!(levels[k] > 0.0)) break;
        if (k > 0 && levels[k] > levels[k - 1]) throw std::invalid_argument("step levels must be nonincreasing");
        m += lengths[k];
        I += levels[k] * lengths[k];
        c.mass.push_back(m);
        c.integral.push_back(I);
        c.levels.push_back(levels[k]);
    }
    return c;
}

double StepCumulative::at(double s) const {
    if (mass.empty() || s <= 0.0) return 0.0;
    const auto it = std::lower_bound(mass.begin(), mass.end(), s);
    if (it == mass.end()) return integral.back();
    const std::size_t k = static_cast<std::size_t>(it - mass.begin());
    const double before = k == 0 ? 0.0 : integral[k - 1];
    const double start = k == 0 ? 0.0 : mass[k - 1];
    return before + levels[k] * (s - start);
}

Bands make_bands(const SortedCells& sorted, std::span<const std::vector<double>> partials, std::size_t grid_size) {
    const auto& v = sorted.values;
    const auto& m = sorted.masses;
    std::size_t K = 0;
    double T = 0.0;
    while (K < v.size() && v[K] > 0.0) T += m[K++];

    Bands b;
    const std::size_t n = partials.size();
    b.g.assign(n, {});
    b.g_rate.assign(n, {});
    if (K == 0) return b;
    for (const auto& p : partials)
        if (p.size() != v.size()) throw std::invalid_argument("partial samples differ in length from the cells");

    const auto grid = MonotoneProfile::geometric_grid(T, grid_size);
    auto target_after = [&](double s0) {
        auto it = std::upper_bound(grid.begin(), grid.end(), s0);
        return it == grid.end() ? T : *it;
    };
    double mass = 0.0, F = 0.0, mass_sq = 0.0;
    std::vector<double> gi(n, 0.0);
    std::vector<char> constant;
    std::size_t band_first = 0;
    auto push_edge = [&](double f_at, double f_left) {
        b.edges.push_back(mass);
        b.fstar_at_edge.push_back(f_at);
        b.fstar_left.push_back(f_left);
        b.running_integral.push_back(F);
        for (std::size_t i = 0; i < n; ++i) b.g[i].push_back(gi[i]);
    };
    push_edge(v[0], v[0]);

    std::size_t count = 0;
    double target = target_after(0.0);
    for (std::size_t k = 0; k < K; ++k) {
        mass += m[k];
        mass_sq += m[k] * m[k];
        F += v[k] * m[k];
        for (std::size_t i = 0; i < n; ++i) gi[i] += partials[i][sorted.order[k]] * m[k];
        ++count;
        const bool last = k + 1 == K;
        const bool tie = !last && v[k + 1] == v[k];
        if (last || (!tie && count >= kMinBandCells && mass >= target)) {
            push_edge(last ? 0.0 : v[k + 1], v[k]);
            constant.push_back(v[band_first] == v[k]);
            b.cells.push_back(count);
            b.mass_squares.push_back(mass_sq);
            mass_sq = 0.0;
            band_first = k + 1;
            count = 0;
            target = target_after(mass);
        }
    }

    const std::size_t nb = b.size();
    b.minus_fstar_rate.resize(nb);
    for (std::size_t i = 0; i < n; ++i) b.g_rate[i].resize(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        const double len = b.length(j);
        b.minus_fstar_rate[j] =
            len > 0.0 && !constant[j] ? (b.fstar_at_edge[j] - b.fstar_at_edge[j + 1]) / len : 0.0;
        for (std::size_t i = 0; i < n; ++i) b.g_rate[i][j] = len > 0.0 ? (b.g[i][j + 1] - b.g[i][j]) / len : 0.0;
    }
    return b;
}

namespace {

std::vector<TildeProfile> tilde_from_bands(const Bands& bands, std::size_t grid_size) {
    std::vector<double> lengths(bands.size());
    for (std::size_t j = 0; j < bands.size(); ++j) lengths[j] = bands.length(j);
    std::vector<TildeProfile> out(bands.g.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].profile = rearrange_pieces(bands.g_rate[i], lengths, grid_size);
        out[i].s_edges = bands.edges;
        out[i].g = bands.g[i];
        std::vector<double> rates = bands.g_rate[i], lens = lengths;
        std::vector<std::size_t> order(rates.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return rates[x] > rates[y]; });
        std::vector<double> sr(order.size()), sl(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            sr[k] = rates[order[k]];
            sl[k] = lens[order[k]];
        }
        out[i].steps = StepCumulative::build(sr, sl);
    }
    return out;
}

}  // namespace

SobolevData compute_sobolev_data(const TestFunction& f, const MonomialWeight& w, std::size_t resolution,
                                 std::size_t grid_size) {
    if (w.dimension() != f.dimension) throw std::invalid_argument("weight and function dimensions differ");
    SobolevData d;
    d.A.assign(w.exponents().begin(), w.exponents().end());
    d.D = w.homogeneous_dimension();
    d.resolution = resolution;
    d.grid_size = grid_size;

    const auto cells = CellDecomposition::build(w, f.support, resolution);
    d.domain_mass = cells.total_mass();
    auto samples = cells.sample(f.value);
    for (double& s : samples) s = std::abs(s);
    d.l1 = integrate(cells, samples);
    d.sorted = sort_cells(cells, samples);
    d.f_star = rearrange(d.sorted, grid_size);
    d.f_steps = StepCumulative::build(d.sorted.values, d.sorted.masses);

    const std::size_t n = f.dimension;
    std::vector<std::vector<double>> partials(n, std::vector<double>(cells.size()));
    std::vector<double> gnorm(cells.size());
    double buf[kMaxDimension];
    for (std::size_t k = 0; k < cells.size(); ++k) {
        f.gradient_into(cells.center(k), std::span<double>(buf, n));
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(buf[i])) {
                const auto c = cells.center(k);
                throw NonFiniteSample(k, std::vector<double>(c.begin(), c.end()));
            }
            partials[i][k] = std::abs(buf[i]);
            s += buf[i] * buf[i];
        }
        gnorm[k] = std::sqrt(s);
    }
    for (std::size_t i = 0; i < n; ++i) {
        d.partial_l1.push_back(integrate(cells, partials[i]));
        const auto sp = sort_cells(cells, partials[i]);
        d.partial_star.push_back(rearrange(sp, grid_size));
        d.partial_steps.push_back(StepCumulative::build(sp.values, sp.masses));
    }
    const auto sg = sort_cells(cells, gnorm);
    d.gradient_star = rearrange(sg, grid_size);
    d.gradient_steps = StepCumulative::build(sg.values, sg.masses);
    d.bands = make_bands(d.sorted, partials, grid_size);
    d.tilde = tilde_from_bands(d.bands, grid_size);
    d.partials = std::move(partials);
    return d;
}

std::vector<TildeProfile> tilde_profiles(const TestFunction& f, const MonomialWeight& w, std::size_t resolution,
                                         std::size_t grid_size) {
    return compute_sobolev_data(f, w, resolution, grid_size).tilde;
}

MonotoneProfile multiplicative_rhs(std::span<const TildeProfile> tilde, std::span<const double> A, double D, double p,
                                   std::size_t grid_size) {
    if (tilde.size() != A.size()) throw std::invalid_argument("one tilde profile per coordinate is required");
    double T = 0.0;
    for (const auto& t : tilde) T = std::max(T, t.profile.support_mass());
    if (T == 0.0) return {};
    auto grid = MonotoneProfile::geometric_grid(T, grid_size);
    std::vector<double> v(grid.size(), 1.0);
    for (std::size_t i = 0; i < tilde.size(); ++i) {
        const double e = p * (A[i] + 1.0) / D;
        for (std::size_t j = 0; j < grid.size(); ++j) v[j] *= std::pow(tilde[i].profile.value_at(grid[j]), e);
    }
    return MonotoneProfile::from_samples(std::move(grid), std::move(v));
}

}  // namespace monosob
