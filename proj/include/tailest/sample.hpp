#pragma once

// Validated sample container. Estimators in this library only ever look at
// order statistics, so the sample is stored sorted descending once, up front:
// values()[i] is the (i+1)-th largest observation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace tailest {

class Sample {
public:
    // Validates (n >= 2, every value finite and > 0) and sorts descending.
    // With keep_original_order, also records the permutation that sorted the
    // input: original_order()[j] is the input index of the (j+1)-th largest.
    static Sample from_values(std::vector<double> values,
                              bool keep_original_order = false) {
        const std::size_t n = values.size();
        if (n < 2)
            throw sample_error("sample needs at least 2 observations, got " +
                               std::to_string(n));
        for (std::size_t i = 0; i < n; ++i) {
            const double v = values[i];
            if (!std::isfinite(v))
                throw sample_error("non-finite observation at position " +
                                   std::to_string(i + 1));
            if (v <= 0.0)
                throw sample_error("non-positive observation " +
                                   std::to_string(v) + " at position " +
                                   std::to_string(i + 1) +
                                   " (tail estimation works on logs)");
        }
        Sample s;
        if (keep_original_order) {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            // Stable so ties keep input order among equal values.
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) {
                                 return values[a] > values[b];
                             });
            s.values_.resize(n);
            for (std::size_t j = 0; j < n; ++j) s.values_[j] = values[order[j]];
            s.original_order_ = std::move(order);
        } else {
            std::stable_sort(values.begin(), values.end(), std::greater<>());
            s.values_ = std::move(values);
        }
        return s;
    }

    std::size_t size() const { return values_.size(); }

    // i-th largest, 0-based: operator[](0) is the maximum.
    double operator[](std::size_t i) const { return values_[i]; }

    // All observations, descending.
    std::span<const double> values() const { return values_; }

    double max() const { return values_.front(); }
    double min() const { return values_.back(); }

    // Empty unless constructed with keep_original_order.
    const std::vector<std::size_t>& original_order() const {
        return original_order_;
    }

private:
    Sample() = default;
    std::vector<double> values_;
    std::vector<std::size_t> original_order_;
};

namespace detail {

// Admissible-level checks, shared by the Sample-based API and the
// simulation harness kernels. Hill needs the (k+1)-th largest as threshold;
// the log-PWM estimator needs k >= 2 (its weights divide by k-1) and may use
// the whole sample.
inline void check_hill_level(std::size_t k, std::size_t n) {
    if (k < 1 || k > n - 1)
        throw level_error("hill level k=" + std::to_string(k) +
                          " outside [1, n-1] for n=" + std::to_string(n));
}

inline void check_plpwm_level(std::size_t k, std::size_t n) {
    if (k < 2 || k > n)
        throw level_error("plpwm level k=" + std::to_string(k) +
                          " outside [2, n] for n=" + std::to_string(n));
}

}  // namespace detail
}  // namespace tailest
