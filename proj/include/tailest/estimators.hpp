#pragma once

// Point estimators for heavy right tails, all driven by the top-k order
// statistics of a positive sample:
//
//   hill_evi            - Hill's log-excess mean for the extreme value index
//   hill_scale          - tail-scale constant paired with Hill
//   weissman_hill_quantile - Weissman extrapolation built on the two above
//   plpwm_evi           - pairwise-contrast L-moment estimator of the index
//                         (weighted mean of top-k log order statistics with
//                         antisymmetric weights 2 - 4(i-1)/(k-1))
//   plpwm_log_term      - companion location term D used by the PLPWM scale
//   plpwm_scale / plpwm_quantile - scale and quantile from the two above
//   log_moment          - probability-weighted moment of the log sample
//   estimate_path       - any of the above swept over a k range
//
// The index estimators are scale-invariant and the scale/quantile estimators
// scale-equivariant; tests pin both properties.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sample.hpp"
#include "types.hpp"

namespace tailest {

// Tail probability p for quantile estimation, 0 < p < 1. Extrapolation
// strength at level k is c_n = k/(n p); c_n >= 1 means the target quantile is
// at or beyond the sample threshold (the usual regime). c_n < 1 is allowed
// but flagged so callers can warn.
struct QuantileSpec {
    double p;

    explicit QuantileSpec(double tail_p) : p(tail_p) {
        if (!(p > 0.0) || !(p < 1.0))
            throw param_error("tail probability p=" + format_full(tail_p) +
                              " outside (0, 1)");
    }

    // Evaluated as (k/n)/p so that p given as k/n yields exactly 1.0.
    double c_n(std::size_t k, std::size_t n) const {
        return (static_cast<double>(k) / static_cast<double>(n)) / p;
    }
};

struct QuantileEstimate {
    double value;
    // True when c_n < 1: the requested quantile sits inside the sample range,
    // where tail extrapolation is not the natural tool.
    bool interpolates;
};

namespace detail {

// Kernels over a descending-sorted prefix. `top` must hold at least the
// first k (Hill: k+1) largest observations of a sample of size n; they are
// the single implementation shared by the Sample API and the Monte Carlo
// harness, so both produce bit-identical values.

inline double hill_evi_desc(std::span<const double> top, std::size_t k) {
    const double log_threshold = std::log(top[k]);
    CompensatedSum sum;
    for (std::size_t i = 0; i < k; ++i)
        sum.add(std::log(top[i]) - log_threshold);
    return sum.value() / static_cast<double>(k);
}

inline double hill_scale_desc(std::span<const double> top, std::size_t k,
                              std::size_t n, double gamma) {
    const double ratio = static_cast<double>(k) / static_cast<double>(n);
    return top[k] * std::pow(ratio, gamma);
}

// Antisymmetric weight for the (i+1)-th largest log observation, 0-based i:
// 2 - 4i/(k-1), computed with an exact integer numerator so the weight list
// is exactly antisymmetric in floating point (mirror pairs cancel bit for
// bit).
inline double plpwm_weight(std::size_t i, std::size_t k) {
    const double num = 2.0 * (static_cast<double>(k) - 2.0 * static_cast<double>(i) - 1.0);
    return num / static_cast<double>(k - 1);
}

inline double plpwm_evi_desc(std::span<const double> top, std::size_t k) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < k; ++i)
        sum.add(plpwm_weight(i, k) * std::log(top[i]));
    return sum.value() / static_cast<double>(k);
}

// D term: mean of (4i/(k-1) - 1) * log X over the top k, 0-based i. The
// coefficients are 1 minus the EVI weights, so D equals (mean top-k log) -
// plpwm_evi; kept as its own loop for the same exact-numerator treatment.
inline double plpwm_log_term_desc(std::span<const double> top, std::size_t k) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < k; ++i) {
        const double coeff = (4.0 * static_cast<double>(i) -
                              static_cast<double>(k - 1)) /
                             static_cast<double>(k - 1);
        sum.add(coeff * std::log(top[i]));
    }
    return sum.value() / static_cast<double>(k);
}

inline double plpwm_scale_desc(std::span<const double> top, std::size_t k,
                               std::size_t n) {
    const double gamma = plpwm_evi_desc(top, k);
    const double d = plpwm_log_term_desc(top, k);
    const double ratio = static_cast<double>(k) / static_cast<double>(n);
    return std::pow(ratio, gamma) * std::exp(d);
}

inline std::size_t effective_plpwm_level(std::size_t k, Convention conv) {
    return conv == Convention::topk_plus_1 ? k + 1 : k;
}

}  // namespace detail

// --- Hill family ---------------------------------------------------------

// Mean log-excess of the top k observations over the (k+1)-th largest.
// Non-negative by construction; 1 <= k <= n-1.
inline double hill_evi(const Sample& s, std::size_t k) {
    detail::check_hill_level(k, s.size());
    return detail::hill_evi_desc(s.values(), k);
}

// Tail-scale constant X_{n-k:n} * (k/n)^gamma_hat paired with hill_evi.
inline double hill_scale(const Sample& s, std::size_t k) {
    detail::check_hill_level(k, s.size());
    const double gamma = detail::hill_evi_desc(s.values(), k);
    return detail::hill_scale_desc(s.values(), k, s.size(), gamma);
}

// Weissman extrapolation: threshold * c_n^gamma_hat. For p exactly k/n the
// result is exactly the threshold (c_n == 1 by construction).
inline QuantileEstimate weissman_hill_quantile(const Sample& s, std::size_t k,
                                               const QuantileSpec& spec) {
    detail::check_hill_level(k, s.size());
    const double gamma = detail::hill_evi_desc(s.values(), k);
    const double cn = spec.c_n(k, s.size());
    return {s[k] * std::pow(cn, gamma), cn < 1.0};
}

// --- PLPWM family --------------------------------------------------------

// Weights applied to the descending top-k log observations: linearly
// decreasing from +2 to -2, exactly antisymmetric (and therefore zero-sum
// up to the rounding of the summation order). k >= 2.
inline std::vector<double> plpwm_weights(std::size_t k) {
    if (k < 2)
        throw level_error("plpwm weights need k >= 2, got " + std::to_string(k));
    std::vector<double> w(k);
    for (std::size_t i = 0; i < k; ++i) w[i] = detail::plpwm_weight(i, k);
    return w;
}

// Weighted mean of the top-k log observations; equals twice the contrast
// l0 - 2*l1 of the log probability-weighted moments of that subsample.
// Admissible nominal levels: 2 <= k <= n (topk), 1 <= k <= n-1 (topk_plus_1).
inline double plpwm_evi(const Sample& s, std::size_t k,
                        Convention conv = Convention::topk) {
    const std::size_t ke = detail::effective_plpwm_level(k, conv);
    detail::check_plpwm_level(ke, s.size());
    return detail::plpwm_evi_desc(s.values(), ke);
}

// Location companion D of the PLPWM scale: mean of (4(i-1)/(k-1) - 1) times
// the descending top-k logs (1-based i). Equals mean(top-k logs) - plpwm_evi.
inline double plpwm_log_term(const Sample& s, std::size_t k,
                             Convention conv = Convention::topk) {
    const std::size_t ke = detail::effective_plpwm_level(k, conv);
    detail::check_plpwm_level(ke, s.size());
    return detail::plpwm_log_term_desc(s.values(), ke);
}

// Tail-scale (k/n)^gamma_hat * exp(D). Under topk_plus_1 every occurrence of
// the level in the formula -- weights, D, and the k/n factor -- uses k+1.
inline double plpwm_scale(const Sample& s, std::size_t k,
                          Convention conv = Convention::topk) {
    const std::size_t ke = detail::effective_plpwm_level(k, conv);
    detail::check_plpwm_level(ke, s.size());
    return detail::plpwm_scale_desc(s.values(), ke, s.size());
}

// Quantile (k/(n p))^gamma_hat * exp(D); for p exactly k/n this is exactly
// exp(D). Same convention handling as plpwm_scale.
inline QuantileEstimate plpwm_quantile(const Sample& s, std::size_t k,
                                       const QuantileSpec& spec,
                                       Convention conv = Convention::topk) {
    const std::size_t ke = detail::effective_plpwm_level(k, conv);
    detail::check_plpwm_level(ke, s.size());
    const double gamma = detail::plpwm_evi_desc(s.values(), ke);
    const double d = detail::plpwm_log_term_desc(s.values(), ke);
    const double cn = spec.c_n(ke, s.size());
    return {std::pow(cn, gamma) * std::exp(d), cn < 1.0};
}

// --- Log probability-weighted moments ------------------------------------

struct LogMoment {
    std::size_t r;
    double value;
};

// r-th probability-weighted moment of the log sample:
//   (1/n) * sum_{i=1..n-r} [C(n-i, r) / C(n-1, r)] * ln X_{i:n}
// with X_{1:n} <= ... <= X_{n:n}. The binomial ratio is evaluated as a
// product of r factors (n-i-j)/(n-1-j), each in (0, 1], so no intermediate
// overflows regardless of n or r. 0 <= r <= n-1.
inline LogMoment log_moment(const Sample& s, std::size_t r) {
    const std::size_t n = s.size();
    if (r > n - 1)
        throw param_error("log moment order r=" + std::to_string(r) +
                          " outside [0, n-1] for n=" + std::to_string(n));
    CompensatedSum sum;
    for (std::size_t i = 1; i + r <= n; ++i) {
        double w = 1.0;
        for (std::size_t j = 0; j < r; ++j)
            w *= static_cast<double>(n - i - j) / static_cast<double>(n - 1 - j);
        // Ascending X_{i:n} is the (n-i)-th entry of the descending store.
        sum.add(w * std::log(s[n - i]));
    }
    return {r, sum.value() / static_cast<double>(n)};
}

// --- k-sweeps ------------------------------------------------------------

struct PathPoint {
    std::size_t k;
    double estimate;                         // EVI estimate at this k
    std::optional<double> quantile;          // present when a spec was given
    bool interpolates = false;               // c_n < 1 at this k
};

struct EstimatePath {
    EstimatorKind kind;
    Convention convention;
    std::vector<PathPoint> points;
};

// EVI (and optionally quantile) estimates for every k in [k_min, k_max].
// Endpoints must be admissible for the estimator under the convention, and
// the range non-empty. Each point is exactly the corresponding single-k call.
inline EstimatePath estimate_path(const Sample& s, EstimatorKind kind,
                                  std::size_t k_min, std::size_t k_max,
                                  const std::optional<QuantileSpec>& spec = {},
                                  Convention conv = Convention::topk) {
    if (kind == EstimatorKind::ppwm)
        throw param_error("estimate_path supports hill and plpwm only");
    if (k_min > k_max)
        throw level_error("empty level range [" + std::to_string(k_min) + ", " +
                          std::to_string(k_max) + "]");
    EstimatePath path{kind, conv, {}};
    path.points.reserve(k_max - k_min + 1);
    for (std::size_t k = k_min; k <= k_max; ++k) {
        PathPoint pt{k, 0.0, std::nullopt, false};
        if (kind == EstimatorKind::hill) {
            pt.estimate = hill_evi(s, k);
            if (spec) {
                const QuantileEstimate q = weissman_hill_quantile(s, k, *spec);
                pt.quantile = q.value;
                pt.interpolates = q.interpolates;
            }
        } else {
            pt.estimate = plpwm_evi(s, k, conv);
            if (spec) {
                const QuantileEstimate q = plpwm_quantile(s, k, *spec, conv);
                pt.quantile = q.value;
                pt.interpolates = q.interpolates;
            }
        }
        path.points.push_back(pt);
    }
    return path;
}

}  // namespace tailest
