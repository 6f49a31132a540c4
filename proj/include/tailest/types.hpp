#pragma once

// Shared vocabulary for the tailest library: error taxonomy, estimator and
// convention tags, compensated summation, and round-trip-exact formatting.

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace tailest {

// Root of the library's error hierarchy; all throws are subclasses so callers
// can distinguish "bad data" from "bad parameters" from "bad level".
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sample content is unusable: too few values, non-positive, NaN/inf.
struct sample_error : error {
    using error::error;
};

// Order-statistic level k outside the estimator's admissible range.
struct level_error : error {
    using error::error;
};

// Scalar parameter outside its domain (p, rho, beta, gamma, grid specs, ...).
struct param_error : error {
    using error::error;
};

// Input text could not be parsed; carries the 1-based line number.
struct parse_error : error {
    std::size_t line;
    parse_error(const std::string& what, std::size_t line_no)
        : error(what), line(line_no) {}
};

enum class EstimatorKind { hill, plpwm, ppwm };

// Which order statistics a nominal PLPWM level k refers to:
//   topk        - the top k observations (the defining formula as written)
//   topk_plus_1 - the top k+1 observations (effective level k+1), so that a
//                 nominal k uses the same threshold ordering as Hill at k.
enum class Convention { topk, topk_plus_1 };

inline const char* to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::hill: return "hill";
        case EstimatorKind::plpwm: return "plpwm";
        case EstimatorKind::ppwm: return "ppwm";
    }
    return "?";
}

inline const char* to_string(Convention conv) {
    return conv == Convention::topk ? "topk" : "topk_plus_1";
}

// Neumaier variant of Kahan summation: running compensation also catches the
// case where the addend is larger in magnitude than the running sum.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// 17 significant digits: enough for binary64 round-trip, so machine-readable
// output re-parses to the identical double.
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace tailest
