#pragma once

// Rearrangement-invariant norms computed from decreasing profiles, the Hardy
// operators P and Q_a, Boyd indices, and the weight-class tests (B_p,
// admissibility, the GGamma condition).
//
// Text encoding of a space: "<kind>:<key>=<value>,..." with kinds
//   lp:p=P                      Lebesgue (p may be inf)
//   lorentz:p=P,q=Q[,form=ss]   L^{p,q}; form=ss uses f** instead of f*
//   lz:p=P,q=Q,alpha=A[,form=ss]  Lorentz-Zygmund
//   glorentz:p=P,q=Q,w=W        Lambda^{p,q}(w)
//   gamma:p=P,w=W               Gamma^p(w)
//   ggamma:p=P,m=M,w=W          GGamma(p,m,w)
//   convex:r=R/<inner>          X^{(r)}
//   angle:r=R/<inner>           X^<r>
//   l1+linf, linf
// Weights use the WeightFunction encoding ("1", "t^b", "log^a", "exp", ...).

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "monosob/profile.hpp"
#include "monosob/quadrature.hpp"
#include "monosob/weights.hpp"

namespace monosob {

enum class SpaceKind {
    Lp,
    LorentzPQ,
    LorentzZygmund,
    GeneralizedLorentz,
    Gamma,
    GGamma,
    Convexified,
    AngleConvexified,
    L1plusLinf,
    Linf
};

struct SpaceSpec {
    SpaceKind kind = SpaceKind::Lp;
    double p = 1.0;
    double q = 1.0;
    double alpha = 0.0;
    double m = 1.0;
    double r = 1.0;
    WeightFunction weight;
    std::shared_ptr<const SpaceSpec> inner;
    bool double_star_form = false;

    static SpaceSpec lp(double p);
    static SpaceSpec lorentz(double p, double q, bool double_star_form = false);
    static SpaceSpec lorentz_zygmund(double p, double q, double alpha, bool double_star_form = false);
    static SpaceSpec generalized_lorentz(double p, double q, WeightFunction w);
    static SpaceSpec gamma(double p, WeightFunction w);
    static SpaceSpec ggamma(double p, double m, WeightFunction w);
    static SpaceSpec convexified(SpaceSpec inner, double r);
    static SpaceSpec angle_convexified(SpaceSpec inner, double r);
    static SpaceSpec l1_plus_linf();
    static SpaceSpec linf();

    /// Throws std::invalid_argument naming the offending parameter.
    static SpaceSpec parse(std::string_view text);
    std::string to_string() const;
    void validate() const;
};

/// int_0^infinity f(t)^q t^e w(t) dt over the grid, the constant head below it
/// and the power tail above it.
Integral power_weighted_integral(const MonotoneProfile& f, double q, double e, const WeightFunction& w);

/// The norm of the space applied to a decreasing profile. Divergence is a
/// result (value +inf with a reason), not an exception.
Integral norm(const SpaceSpec& spec, const MonotoneProfile& f);
/// The norm of a non-monotone curve on (0, infinity), via its Lebesgue rearrangement.
Integral norm_of_curve(const SpaceSpec& spec, const SampledCurve& curve,
                       std::size_t grid_size = MonotoneProfile::kDefaultGridSize);

/// P f(t) = (1/t) int_0^t f
MonotoneProfile hardy_P(const MonotoneProfile& f);
/// Q_a f(t) = t^-a int_t^infinity s^a f(s) ds/s, 0 <= a < 1
MonotoneProfile hardy_Q(double a, const MonotoneProfile& f);

struct BoydIndices {
    double upper = 0.0;
    double lower = 0.0;
    std::optional<double> closed_upper;
    std::optional<double> closed_lower;
};

/// (upper, lower) for the catalog kinds with a known closed form.
std::optional<std::pair<double, double>> closed_form_boyd(const SpaceSpec& spec);

/// max over probes of ||E_s f|| / ||f|| with E_s f(t) = f(t/s).
double dilation_norm(const SpaceSpec& spec, double s, std::span<const MonotoneProfile> probes);
/// Estimated from dilations s = 2^k, k = +-1..6; needs at least three probes.
BoydIndices boyd_indices(const SpaceSpec& spec, std::span<const MonotoneProfile> probes);
std::vector<MonotoneProfile> default_probes(std::size_t grid_size = MonotoneProfile::kDefaultGridSize);

struct BpResult {
    bool member = false;
    double constant = 0.0;
    std::string reason;
};

std::vector<double> default_weight_grid();
BpResult is_Bp_weight(const WeightFunction& w, double p, std::span<const double> grid);

struct WeightCheck {
    Decision verdict = Decision::undecidable;
    std::string reason;
};

WeightCheck check_admissible(const WeightFunction& w, double p);
WeightCheck check_ggamma_weight(const WeightFunction& w, double m, double p);

/// Worst relative gap between ||f||_{Lambda^{p,q}(w)} and ||f||_{Lambda^q(W^{q/p-1} w)}.
double lambda_weight_identity_check(const WeightFunction& w, double p, double q,
                                    std::span<const MonotoneProfile> probes);

/// ||prod |f_i|^theta_i||_X / prod ||f_i||_X^theta_i for step functions on a
/// shared partition: values[i][k] is f_i on the interval of length lengths[k].
/// At most 1 on every r.i. norm.
double holder_product_ratio(const SpaceSpec& spec, std::span<const std::vector<double>> values,
                            std::span<const double> lengths, std::span<const double> theta);

struct TransferCheck {
    bool hypotheses = false;  // g <= h** and int_0^t g <= int_0^t h* for all t
    double worst_ratio = 0.0; // max_t int_0^t g* / int_0^t h*
    double worst_t = 0.0;
};

/// The factor-4 transfer lemma for nonnegative step functions g, h on
/// consecutive intervals of length `width`, compared at the interval ends.
TransferCheck transfer_check(std::span<const double> g, std::span<const double> h, double width);

/// 1/pbar = (1/D) sum (A_i + 1) / p_i
double harmonic_mean_exponent(std::span<const double> A, std::span<const double> p);
/// D pbar / (D - pbar), absent when pbar >= D.
std::optional<double> sobolev_exponent(double pbar, double D);

}  // namespace monosob
