#pragma once

// First-order asymptotics for the tail estimators: per-estimator variance and
// bias constants, the AMSE decomposition sigma^2/k + (b * A(n/k))^2, the
// AMSE-optimal level k0, the minimal scaled MSE, and asymptotic relative
// efficiencies (AREFF) between estimators, including the closed form for
// PLPWM vs Hill.
//
// Conventions: gamma > 0 is the extreme value index; second-order behaviour
// is A(t) = gamma * beta * t^rho with rho < 0 and beta != 0. AREFF of
// estimator 1 over estimator 2 is > 1 when estimator 1 is more efficient at
// its own optimal level.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "types.hpp"

namespace tailest {

struct SecondOrderParams {
    double rho;
    double beta;
};

namespace detail {

inline void check_second_order(const SecondOrderParams& so) {
    if (!(so.rho < 0.0))
        throw param_error("second-order rho=" + format_full(so.rho) +
                          " must be negative");
    if (so.beta == 0.0)
        throw param_error("second-order beta must be non-zero");
}

inline void check_gamma(EstimatorKind kind, double gamma) {
    if (!(gamma > 0.0))
        throw param_error("gamma=" + format_full(gamma) + " must be positive");
    if (kind == EstimatorKind::ppwm && !(gamma < 0.5))
        throw param_error("ppwm constants require gamma in (0, 0.5), got " +
                          format_full(gamma));
}

// (sigma/gamma)^2 for each estimator. Hill and PLPWM are gamma-free
// constants; keeping the ratio (rather than sigma itself) lets optimal_k0
// cancel gamma exactly, so k0 is bit-identical across gamma for those two.
inline double variance_ratio_sq(EstimatorKind kind, double gamma) {
    switch (kind) {
        case EstimatorKind::hill:
            return 1.0;
        case EstimatorKind::plpwm:
            return 4.0 / 3.0;
        case EstimatorKind::ppwm:
            return (1.0 - gamma) * (2.0 - gamma) * (2.0 - gamma) /
                   ((1.0 - 2.0 * gamma) * (3.0 - 2.0 * gamma));
    }
    return 0.0;
}

inline double bias_constant(EstimatorKind kind, double gamma, double rho) {
    switch (kind) {
        case EstimatorKind::hill:
            return 1.0 / (1.0 - rho);
        case EstimatorKind::plpwm:
            return 2.0 / ((1.0 - rho) * (2.0 - rho));
        case EstimatorKind::ppwm:
            return (1.0 - gamma) * (2.0 - gamma) /
                   ((1.0 - gamma - rho) * (2.0 - gamma - rho));
    }
    return 0.0;
}

}  // namespace detail

// Asymptotic standard deviation sigma and bias multiplier b of an estimator:
// sqrt(k) * (estimate - gamma) -> N(lambda * b, sigma^2) along k with
// sqrt(k) * A(n/k) -> lambda.
struct AsymptoticConstants {
    EstimatorKind kind;
    double sigma;
    double b;
};

inline AsymptoticConstants constants_for(EstimatorKind kind, double gamma,
                                         const SecondOrderParams& so) {
    detail::check_gamma(kind, gamma);
    detail::check_second_order(so);
    const double sigma =
        gamma * std::sqrt(detail::variance_ratio_sq(kind, gamma));
    return {kind, sigma, detail::bias_constant(kind, gamma, so.rho)};
}

// Second-order auxiliary function A(t) = gamma * beta * t^rho, t > 0.
inline double a_function(double t, double gamma, const SecondOrderParams& so) {
    detail::check_second_order(so);
    if (!(gamma > 0.0))
        throw param_error("gamma=" + format_full(gamma) + " must be positive");
    if (!(t > 0.0))
        throw param_error("a_function needs t > 0, got " + format_full(t));
    return gamma * so.beta * std::pow(t, so.rho);
}

struct AmseParts {
    double variance;  // sigma^2 / k
    double bias_sq;   // (b * a_value)^2
    double total;     // sum of the two
};

// Asymptotic MSE at level k given the estimator constants and A(n/k).
inline AmseParts amse(const AsymptoticConstants& c, std::size_t k,
                      double a_value) {
    if (k < 1) throw level_error("amse needs k >= 1");
    const double variance = c.sigma * c.sigma / static_cast<double>(k);
    const double bias = c.b * a_value;
    return {variance, bias * bias, variance + bias * bias};
}

struct OptimalLevel {
    std::size_t k;   // floor of the real minimizer, clamped to the top
    double k_real;   // the un-floored minimizer of the AMSE in k
    bool clamped;    // true when k_real exceeded the largest admissible level
};

// AMSE-minimizing level: k0 = (sigma^2 n^{-2 rho} / (-2 rho b^2 gamma^2
// beta^2))^{1/(1-2 rho)}, floored. Computed through (sigma/gamma)^2 so the
// gamma^2 factors cancel exactly and Hill/PLPWM results are bit-identical in
// gamma. Below the estimator's minimum admissible level the request is
// refused; above its maximum the result clamps and says so.
inline OptimalLevel optimal_k0(std::size_t n, double gamma,
                               const SecondOrderParams& so,
                               EstimatorKind kind) {
    detail::check_gamma(kind, gamma);
    detail::check_second_order(so);
    if (n < 4)
        throw param_error("optimal_k0 needs n >= 4, got " + std::to_string(n));
    const double ratio_sq = detail::variance_ratio_sq(kind, gamma);
    const double b = detail::bias_constant(kind, gamma, so.rho);
    const double rho = so.rho;
    const double num = ratio_sq * std::pow(static_cast<double>(n), -2.0 * rho);
    const double den = -2.0 * rho * b * b * so.beta * so.beta;
    const double k_real = std::pow(num / den, 1.0 / (1.0 - 2.0 * rho));

    const std::size_t k_min = (kind == EstimatorKind::plpwm) ? 2 : 1;
    const std::size_t k_max =
        (kind == EstimatorKind::plpwm) ? n : n - 1;
    const double floored = std::floor(k_real);
    if (!(floored >= static_cast<double>(k_min)))
        throw level_error("optimal level " + format_full(k_real) +
                          " falls below the minimum admissible k=" +
                          std::to_string(k_min) +
                          " (second-order bias dominates at this n)");
    if (floored > static_cast<double>(k_max))
        return {k_max, k_real, true};
    return {static_cast<std::size_t>(floored), k_real, false};
}

// Minimal scaled MSE: the limit of k0 * AMSE(k0) expressed through the
// constants, (sigma^2)^{-2 rho/(1-2 rho)} * (b^2)^{1/(1-2 rho)}. Smaller is
// better; ratios of this quantity give AREFF^(-2).
inline double lmse(const AsymptoticConstants& c, double rho) {
    if (!(rho < 0.0))
        throw param_error("lmse needs rho < 0, got " + format_full(rho));
    const double s2 = c.sigma * c.sigma;
    const double b2 = c.b * c.b;
    const double inv = 1.0 / (1.0 - 2.0 * rho);
    // Log space: immune to overflow for extreme rho and keeps the
    // reciprocity identity of areff() at round-off level.
    return std::exp(-2.0 * rho * inv * std::log(s2) + inv * std::log(b2));
}

// Asymptotic relative efficiency of estimator 1 over estimator 2:
// ((sigma2/sigma1)^{-2 rho} * |b2/b1|)^{1/(1-2 rho)}. Values > 1 favour
// estimator 1. Evaluated in log space for the same reasons as lmse.
inline double areff(const AsymptoticConstants& c1, const AsymptoticConstants& c2,
                    double rho) {
    if (!(rho < 0.0))
        throw param_error("areff needs rho < 0, got " + format_full(rho));
    if (c1.b == 0.0 || c2.b == 0.0)
        throw param_error("areff undefined for a vanishing bias constant");
    const double inv = 1.0 / (1.0 - 2.0 * rho);
    const double log_sigma_ratio = std::log(c2.sigma) - std::log(c1.sigma);
    const double log_b_ratio = std::log(std::abs(c2.b)) - std::log(std::abs(c1.b));
    return std::exp(inv * (-2.0 * rho * log_sigma_ratio + log_b_ratio));
}

// Closed form of areff(plpwm, hill) as a function of rho alone:
// ((3/4)^{-rho} * (1 - rho/2))^{1/(1-2 rho)}. The gamma dependence cancels.
inline double areff_plpwm_hill(double rho) {
    if (!(rho < 0.0))
        throw param_error("areff_plpwm_hill needs rho < 0, got " +
                          format_full(rho) +
                          " (limits are the documented constants)");
    const double inv = 1.0 / (1.0 - 2.0 * rho);
    return std::exp(inv * (-rho * std::log(0.75) + std::log1p(-rho / 2.0)));
}

// Limits of areff_plpwm_hill at the ends of its domain; the function is not
// evaluated at sentinel inputs, these are its documented boundary constants.
inline constexpr double kAreffPlpwmHillAtZero = 1.0;
inline const double kAreffPlpwmHillAtMinusInf = std::sqrt(3.0) / 2.0;

// Scaled convergence-rate factor sqrt(k)/ln(c_n) of the quantile estimators;
// requires genuine extrapolation, c_n > 1.
inline double quantile_rate_factor(std::size_t k, double c_n) {
    if (k < 1) throw level_error("quantile_rate_factor needs k >= 1");
    if (!(c_n > 1.0))
        throw param_error("quantile rate needs c_n > 1, got " +
                          format_full(c_n));
    return std::sqrt(static_cast<double>(k)) / std::log(c_n);
}

// --- AREFF grids ----------------------------------------------------------

struct GridSpec {
    double min;
    double max;
    double step;
};

struct AreffPoint {
    double gamma;
    double rho;
    double value;
};

namespace detail {

// Number of points min, min+step, ... not exceeding max (with a 1e-9
// relative allowance so ranges whose width is an intended multiple of step
// keep their endpoint despite representation error).
inline std::size_t grid_count(const GridSpec& g) {
    if (!(g.step > 0.0))
        throw param_error("grid step must be positive");
    if (g.max < g.min)
        throw param_error("grid range is empty: max < min");
    const double span = (g.max - g.min) / g.step;
    return static_cast<std::size_t>(std::floor(span * (1.0 + 1e-9))) + 1;
}

}  // namespace detail

// AREFF of `first` over `second` on a lexicographic (gamma outer, rho inner)
// grid, both ascending. Each point equals the corresponding single
// constants_for + areff evaluation. Grids touching a constants singularity
// (gamma >= 0.5 with PPWM in the pair, rho >= 0) are rejected up front.
inline std::vector<AreffPoint> areff_grid(EstimatorKind first,
                                          EstimatorKind second,
                                          const GridSpec& gamma_grid,
                                          const GridSpec& rho_grid) {
    const std::size_t n_gamma = detail::grid_count(gamma_grid);
    const std::size_t n_rho = detail::grid_count(rho_grid);
    if (!(rho_grid.max < 0.0))
        throw param_error("rho grid must stay below 0");
    const bool has_ppwm =
        first == EstimatorKind::ppwm || second == EstimatorKind::ppwm;
    std::vector<AreffPoint> out;
    out.reserve(n_gamma * n_rho);
    for (std::size_t gi = 0; gi < n_gamma; ++gi) {
        const double gamma = gamma_grid.min + static_cast<double>(gi) * gamma_grid.step;
        if (!(gamma > 0.0))
            throw param_error("gamma grid must stay above 0");
        if (has_ppwm && !(gamma < 0.5))
            throw param_error(
                "gamma grid touches the ppwm singularity at 0.5");
        for (std::size_t ri = 0; ri < n_rho; ++ri) {
            const double rho = rho_grid.min + static_cast<double>(ri) * rho_grid.step;
            const SecondOrderParams so{rho, 1.0};
            const AsymptoticConstants c1 = constants_for(first, gamma, so);
            const AsymptoticConstants c2 = constants_for(second, gamma, so);
            out.push_back({gamma, rho, areff(c1, c2, rho)});
        }
    }
    return out;
}

}  // namespace tailest
