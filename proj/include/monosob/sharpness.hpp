#pragma once

// Scaling experiments that pin the Sobolev exponent, the lambda balancing of
// the anisotropic Sobolev proof, and best-constant estimation by grid search
// plus Nelder-Mead refinement.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monosob/inequality_verifier.hpp"
#include "monosob/test_functions.hpp"
#include "monosob/weighted_measure.hpp"

namespace monosob {

inline constexpr double kSlopeTolerance = 0.02;
inline constexpr std::size_t kMinScalingSamples = 8;
inline constexpr std::size_t kNelderMeadBudget = 200;

struct ScalingExperiment {
    std::string base;                        // label of the unscaled function
    std::vector<std::vector<double>> lambda; // per-sample scale vector
    double q = 1.0;
    int axis = -1;                           // -1: isotropic sweep
    std::vector<double> log_lambda;
    std::vector<double> log_ratio;
};

struct CandidateVerdict {
    double q = 1.0;
    bool skipped = false;
    std::string note;
    double isotropic_slope = 0.0;
    double isotropic_oracle = 0.0;
    std::vector<double> axis_slopes;
    std::vector<double> axis_oracles;
    bool invariant = false;
    std::vector<ScalingExperiment> experiments;
};

struct ScalingResult {
    double pbar = 1.0;
    std::optional<double> pstar;
    std::vector<CandidateVerdict> candidates;
};

/// log10-uniform isotropic factors over [10^lo, 10^hi].
std::vector<double> default_lambda_grid(double lo_decade = -1.0, double hi_decade = 1.0,
                                        std::size_t samples = 9);

/// R(lambda) = ||f(lambda .)||_{L^q} / prod_i ||d_i f(lambda .)||_{L^{p_i}}^{(A_i+1)/D}
/// fitted against log lambda, isotropically and along every axis.
ScalingResult scaling_exponent_test(const TestFunction& f, const MonomialWeight& w, std::span<const double> p,
                                    std::span<const double> q_candidates, std::span<const double> lambda_grid,
                                    std::size_t resolution, std::size_t grid_size = MonotoneProfile::kDefaultGridSize);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// D (1/pbar* - 1/q) and, along axis k, (A_k + 1)(1/pbar* - 1/q).
double oracle_isotropic_slope(double D, double pstar, double q);
double oracle_axis_slope(double A_k, double pstar, double q);

struct BalanceResult {
    bool refused = false;
    std::string note;
    std::vector<double> lambda;      // lambda_i = prod_{j != i} ||f_{x_j}||_1
    std::vector<double> pre_norms;   // ||f_{x_i}||_1
    std::vector<double> post_norms;  // ||d_i [f(lambda .)]||_1, computed on the rescaled function
    double spread = 0.0;             // max/min - 1 of post_norms
};

BalanceResult lambda_balance(const TestFunction& f, const MonomialWeight& w, std::size_t resolution);

struct ConstantEstimate {
    std::string case_id;
    std::string family;
    double best_ratio = 0.0;
    Parameters best_params;
    std::size_t trace_length = 0;
    bool flagged = false;           // refinement did not improve on the grid
    double grid_best = 0.0;
    std::vector<double> trace;      // every sampled ratio, in evaluation order
};

struct EstimateBudget {
    std::size_t grid_points = 3;    // per free parameter
    std::size_t grid_cap = 81;      // random subset of the grid beyond this
    std::size_t refine_evaluations = kNelderMeadBudget;
    std::size_t resolution = 256;
    std::size_t grid_size = 1024;
    std::uint64_t seed = 1;
};

/// Sup of lhs/rhs over the family box. The amplitude c and parameters listed in
/// `fixed` stay at their defaults (or the given values).
ConstantEstimate estimate_best_constant(const std::string& case_id, const FamilySpec& family,
                                        const MonomialWeight& w, const CaseParams& params,
                                        const EstimateBudget& budget, const Parameters& fixed = {});

}  // namespace monosob
