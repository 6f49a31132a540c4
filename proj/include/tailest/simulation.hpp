#pragma once

// Seeded Monte Carlo harness for the tail estimators.
//
// Sampling is inverse-survival: X = S^{-1}(U) with U uniform on (0, 1), so
// each family's quantile_of_survival is also the exact truth for extreme
// quantiles. Families and their second-order behaviour A(t) = gamma beta
// t^rho (derivations in the README appendix):
//
//   strict_pareto  S(x) = (x/C)^{-1/gamma}          A == 0 (pure power law)
//   burr           S(x) = (1 + x^{-rho_B/gamma})^{1/rho_B}   rho = rho_B, beta = 1
//   frechet        S(x) = 1 - exp(-x^{-1/gamma})    rho = -1, beta = 1/2
//   gpd            S(x) = (1 + x)^{-1/gamma}        rho = -gamma, beta = 1
//
// Replicate r draws from the counter stream seeded replicate_seed(base, r),
// so results are a pure function of the config: independent of thread count,
// scheduling, and of which other (estimator, k) cells are requested.
// Estimator evaluation reuses the exact kernels behind the public Sample API.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "asymptotics.hpp"
#include "estimators.hpp"
#include "rng.hpp"
#include "sample.hpp"
#include "types.hpp"

namespace tailest {

enum class Family { strict_pareto, burr, frechet, gpd };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::strict_pareto: return "strict_pareto";
        case Family::burr: return "burr";
        case Family::frechet: return "frechet";
        case Family::gpd: return "gpd";
    }
    return "?";
}

struct ModelSpec {
    Family family = Family::strict_pareto;
    double gamma = 1.0;
    double scale = 1.0;     // strict_pareto only
    double burr_rho = 0.0;  // burr only, must be < 0

    void validate() const {
        if (!(gamma > 0.0))
            throw param_error("model gamma=" + format_full(gamma) +
                              " must be positive");
        if (family == Family::strict_pareto && !(scale > 0.0))
            throw param_error("pareto scale=" + format_full(scale) +
                              " must be positive");
        if (family == Family::burr && !(burr_rho < 0.0))
            throw param_error("burr rho=" + format_full(burr_rho) +
                              " must be negative");
    }

    // x with S(x) = u, for u in (0, 1). expm1/log1p forms keep accuracy when
    // u is close to 0 or 1.
    double quantile_of_survival(double u) const {
        switch (family) {
            case Family::strict_pareto:
                return scale * std::pow(u, -gamma);
            case Family::burr:
                return std::pow(std::expm1(burr_rho * std::log(u)),
                                -gamma / burr_rho);
            case Family::frechet:
                return std::pow(-std::log1p(-u), -gamma);
            case Family::gpd:
                return std::expm1(-gamma * std::log(u));
        }
        return 0.0;
    }

    // Second-order parameters of the family, if it has a non-degenerate
    // second order (the strict Pareto tail is exactly a power law: A == 0).
    std::optional<SecondOrderParams> second_order() const {
        switch (family) {
            case Family::strict_pareto: return std::nullopt;
            case Family::burr: return SecondOrderParams{burr_rho, 1.0};
            case Family::frechet: return SecondOrderParams{-1.0, 0.5};
            case Family::gpd: return SecondOrderParams{-gamma, 1.0};
        }
        return std::nullopt;
    }
};

// One simulated sample of size n from the replicate stream seeded `seed`.
inline Sample sample_model(const ModelSpec& model, std::size_t n,
                           std::uint64_t seed) {
    model.validate();
    if (n < 2)
        throw sample_error("sample_model needs n >= 2, got " + std::to_string(n));
    rng::CounterRng g(seed);
    std::vector<double> values(n);
    for (std::size_t j = 0; j < n; ++j)
        values[j] = model.quantile_of_survival(g.next_open01());
    return Sample::from_values(std::move(values));
}

struct MonteCarloConfig {
    ModelSpec model;
    std::size_t n = 0;
    std::vector<std::size_t> k_set;
    std::size_t replications = 0;
    std::uint64_t base_seed = 0;
    std::vector<EstimatorKind> estimators{EstimatorKind::hill,
                                          EstimatorKind::plpwm};
    std::optional<double> quantile_p;

    // Normalizes (k_set sorted ascending, deduplicated; estimator list
    // deduplicated keeping order) and checks every cell is admissible.
    void validate() {
        model.validate();
        if (n < 2)
            throw param_error("monte carlo needs n >= 2, got " +
                              std::to_string(n));
        if (replications < 1)
            throw param_error("monte carlo needs replications >= 1");
        if (estimators.empty())
            throw param_error("monte carlo needs at least one estimator");
        std::vector<EstimatorKind> kinds;
        for (EstimatorKind kind : estimators) {
            if (kind == EstimatorKind::ppwm)
                throw param_error("monte carlo runs hill and plpwm only");
            if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
                kinds.push_back(kind);
        }
        estimators = std::move(kinds);
        if (k_set.empty())
            throw param_error("monte carlo needs a non-empty k set");
        std::sort(k_set.begin(), k_set.end());
        k_set.erase(std::unique(k_set.begin(), k_set.end()), k_set.end());
        for (EstimatorKind kind : estimators)
            for (std::size_t k : k_set)
                (kind == EstimatorKind::hill)
                    ? detail::check_hill_level(k, n)
                    : detail::check_plpwm_level(k, n);
        if (quantile_p) {
            const QuantileSpec spec(*quantile_p);
            for (std::size_t k : k_set)
                if (!(spec.c_n(k, n) > 1.0))
                    throw param_error(
                        "quantile harness needs c_n = k/(n p) > 1; k=" +
                        std::to_string(k) + " gives c_n=" +
                        format_full(spec.c_n(k, n)));
        }
    }
};

// Distribution of one estimator at one level across replicates.
struct EstimateCell {
    EstimatorKind kind;
    std::size_t k;
    std::size_t replications;
    double mean;
    double bias;      // mean - model gamma
    double variance;  // population variance across replicates
    double mse;       // mean of (estimate - model gamma)^2, accumulated
                      // independently of bias/variance
};

// Distribution of the normalized errors behind the quantile convergence
// statement: e_Q = (sqrt(k)/ln c_n) * (Q_hat/q_p - 1) against
// e_gamma = sqrt(k) * (gamma_hat - gamma). Their variances should agree as
// c_n grows; variance_ratio tracks var(e_Q)/var(e_gamma).
struct QuantileCell {
    EstimatorKind kind;
    std::size_t k;
    double c_n;
    double rate_factor;  // sqrt(k)/ln(c_n)
    double true_quantile;
    double eq_mean;
    double eq_variance;
    double egamma_mean;
    double egamma_variance;
    double variance_ratio;
};

struct MonteCarloReport {
    MonteCarloConfig config;
    std::vector<EstimateCell> cells;           // estimator-major, k ascending
    std::vector<QuantileCell> quantile_cells;  // same order; empty without p
    std::string rng_id = rng::kId;
};

namespace detail {

struct Welford {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double v) {
        ++count;
        const double d = v - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (v - mean);
    }
    double variance() const { return m2 / static_cast<double>(count); }
};

}  // namespace detail

// Runs the experiment. threads=0 means hardware concurrency; any thread
// count yields bit-identical reports: workers only fill per-replicate value
// slots, and all aggregation is sequential in replicate order.
inline MonteCarloReport run_monte_carlo(MonteCarloConfig config,
                                        unsigned threads = 0) {
    config.validate();
    const std::size_t n = config.n;
    const std::size_t reps = config.replications;
    const std::size_t n_cells = config.estimators.size() * config.k_set.size();

    // Largest descending prefix any cell needs (Hill reads one past k).
    std::size_t prefix = 0;
    for (EstimatorKind kind : config.estimators)
        for (std::size_t k : config.k_set)
            prefix = std::max(prefix,
                              kind == EstimatorKind::hill ? k + 1 : k);

    const bool with_quantile = config.quantile_p.has_value();
    const QuantileSpec spec =
        with_quantile ? QuantileSpec(*config.quantile_p) : QuantileSpec(0.5);

    std::vector<double> evi(n_cells * reps);
    std::vector<double> qrel(with_quantile ? n_cells * reps : 0);

    auto cell_of = [&](std::size_t est_idx, std::size_t k_idx) {
        return est_idx * config.k_set.size() + k_idx;
    };

    auto worker = [&](std::size_t r_begin, std::size_t r_end) {
        std::vector<double> buf(n);
        for (std::size_t r = r_begin; r < r_end; ++r) {
            rng::CounterRng g(rng::replicate_seed(config.base_seed, r));
            for (std::size_t j = 0; j < n; ++j)
                buf[j] = config.model.quantile_of_survival(g.next_open01());
            // Only the top `prefix` values matter; a partial sort gives the
            // same descending prefix as sorting everything.
            if (prefix * 2 >= n)
                std::sort(buf.begin(), buf.end(), std::greater<>());
            else
                std::partial_sort(buf.begin(),
                                  buf.begin() + static_cast<std::ptrdiff_t>(prefix),
                                  buf.end(), std::greater<>());
            const std::span<const double> top(buf.data(), prefix);
            for (std::size_t e = 0; e < config.estimators.size(); ++e) {
                const EstimatorKind kind = config.estimators[e];
                for (std::size_t ki = 0; ki < config.k_set.size(); ++ki) {
                    const std::size_t k = config.k_set[ki];
                    const std::size_t c = cell_of(e, ki);
                    double gamma_hat, q_hat = 0.0;
                    if (kind == EstimatorKind::hill) {
                        gamma_hat = detail::hill_evi_desc(top, k);
                        if (with_quantile)
                            q_hat = buf[k] * std::pow(spec.c_n(k, n), gamma_hat);
                    } else {
                        gamma_hat = detail::plpwm_evi_desc(top, k);
                        if (with_quantile) {
                            const double d = detail::plpwm_log_term_desc(top, k);
                            q_hat = std::pow(spec.c_n(k, n), gamma_hat) *
                                    std::exp(d);
                        }
                    }
                    evi[c * reps + r] = gamma_hat;
                    if (with_quantile) {
                        const double q_true =
                            config.model.quantile_of_survival(spec.p);
                        qrel[c * reps + r] = q_hat / q_true - 1.0;
                    }
                }
            }
        }
    };

    unsigned t = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (t < 1) t = 1;
    t = static_cast<unsigned>(
        std::min<std::size_t>(t, reps));
    if (t <= 1) {
        worker(0, reps);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(t);
        const std::size_t chunk = (reps + t - 1) / t;
        for (unsigned i = 0; i < t; ++i) {
            const std::size_t lo = std::min<std::size_t>(i * chunk, reps);
            const std::size_t hi = std::min<std::size_t>(lo + chunk, reps);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (std::thread& th : pool) th.join();
    }

    MonteCarloReport report;
    report.cells.reserve(n_cells);
    if (with_quantile) report.quantile_cells.reserve(n_cells);
    const double gamma = config.model.gamma;
    for (std::size_t e = 0; e < config.estimators.size(); ++e) {
        for (std::size_t ki = 0; ki < config.k_set.size(); ++ki) {
            const std::size_t k = config.k_set[ki];
            const std::size_t c = cell_of(e, ki);
            detail::Welford w;
            CompensatedSum sq_err;  // MSE accumulated on its own so the
                                    // mse == bias^2 + variance identity is a
                                    // real cross-check, not a tautology
            for (std::size_t r = 0; r < reps; ++r) {
                const double v = evi[c * reps + r];
                w.add(v);
                sq_err.add((v - gamma) * (v - gamma));
            }
            report.cells.push_back({config.estimators[e], k, reps, w.mean,
                                    w.mean - gamma, w.variance(),
                                    sq_err.value() / static_cast<double>(reps)});
            if (with_quantile) {
                const double cn = spec.c_n(k, n);
                const double rate = quantile_rate_factor(k, cn);
                const double sqrt_k = std::sqrt(static_cast<double>(k));
                detail::Welford wq, wg;
                for (std::size_t r = 0; r < reps; ++r) {
                    wq.add(rate * qrel[c * reps + r]);
                    wg.add(sqrt_k * (evi[c * reps + r] - gamma));
                }
                report.quantile_cells.push_back(
                    {config.estimators[e], k, cn, rate,
                     config.model.quantile_of_survival(spec.p), wq.mean,
                     wq.variance(), wg.mean, wg.variance(),
                     wq.variance() / wg.variance()});
            }
        }
    }
    report.config = std::move(config);
    return report;
}

// Level with the smallest empirical MSE for one estimator; needs at least 3
// levels to say anything about a minimum. Ties go to the smaller k.
inline std::size_t empirical_optimal_k(const MonteCarloReport& report,
                                       EstimatorKind kind) {
    const EstimateCell* best = nullptr;
    std::size_t levels = 0;
    for (const EstimateCell& cell : report.cells) {
        if (cell.kind != kind) continue;
        ++levels;
        if (!best || cell.mse < best->mse) best = &cell;
    }
    if (levels < 3)
        throw param_error(
            "empirical_optimal_k needs at least 3 levels for " +
            std::string(to_string(kind)) + ", got " + std::to_string(levels));
    return best->k;
}

// Quantile-convergence experiment: insists the run actually extrapolates
// (c_n > e, i.e. ln c_n > 1, for every level) and returns the full report;
// the variance_ratio fields carry the rate-stability check.
inline MonteCarloReport quantile_rate_check(MonteCarloConfig config,
                                            unsigned threads = 0) {
    if (!config.quantile_p)
        throw param_error("quantile_rate_check needs quantile_p set");
    config.validate();
    const QuantileSpec spec(*config.quantile_p);
    const double e = std::exp(1.0);
    for (std::size_t k : config.k_set)
        if (!(spec.c_n(k, config.n) > e))
            throw param_error("quantile rate check needs c_n > e; k=" +
                              std::to_string(k) + " gives c_n=" +
                              format_full(spec.c_n(k, config.n)));
    return run_monte_carlo(std::move(config), threads);
}

}  // namespace tailest
