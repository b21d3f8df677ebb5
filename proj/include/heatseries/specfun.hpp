#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatseries/signed_log.hpp"

namespace heatseries {

/// Maximum polynomial degree accepted by the recurrences.
inline constexpr int kMaxRecurrenceDegree = 400;

namespace detail {

inline void check_degree(int n, const char* who) {
    if (n < 0 || n > kMaxRecurrenceDegree) {
        throw std::domain_error(std::string(who) + ": degree " + std::to_string(n) +
                                " outside [0, " + std::to_string(kMaxRecurrenceDegree) + "]");
    }
}

}  // namespace detail

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
/// Overflows to +-inf for large n and |x|; use hermite_weighted there.
inline double hermite(int n, double x) {
    detail::check_degree(n, "hermite");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * x;
    for (int m = 1; m < n; ++m) {
        const double next = 2.0 * x * cur - 2.0 * m * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// H_m(x) e^{-x^2} for every m = 0..n.
///
/// The recurrence runs on rescaled values: whenever the pair (H_{m-1}, H_m)
/// leaves [1e-100, 1e100] both are divided by the larger magnitude and the
/// log of the divisor is carried separately. The weight e^{-x^2} enters only
/// as an additive log offset, so nothing overflows or underflows.
inline std::vector<SignedLog> hermite_weighted_all(int n, double x) {
    detail::check_degree(n, "hermite_weighted");
    std::vector<SignedLog> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    double scale = -x * x;
    double prev = 1.0;
    out.push_back(SignedLog{1, scale});
    if (n == 0) return out;
    double cur = 2.0 * x;
    out.push_back(SignedLog::from_double(cur) * SignedLog{1, scale});
    for (int m = 1; m < n; ++m) {
        double next = 2.0 * x * cur - 2.0 * m * prev;
        prev = cur;
        cur = next;
        const double big = std::max(std::fabs(prev), std::fabs(cur));
        if (big > 1e100 || (big < 1e-100 && big > 0.0)) {
            prev /= big;
            cur /= big;
            scale += std::log(big);
        }
        out.push_back(SignedLog::from_double(cur) * SignedLog{1, scale});
    }
    return out;
}

/// H_n(x) e^{-x^2} as a SignedLog.
inline SignedLog hermite_weighted(int n, double x) {
    return hermite_weighted_all(n, x).back();
}

/// Generalized Laguerre polynomial L_n^{(a)}(x), a > -1.
inline double laguerre(int n, double a, double x) {
    detail::check_degree(n, "laguerre");
    if (!(a > -1.0)) {
        throw std::domain_error("laguerre: parameter a must exceed -1, got " + std::to_string(a));
    }
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 + a - x;
    for (int m = 1; m < n; ++m) {
        const double next = ((2.0 * m + 1.0 + a - x) * cur - (m + a) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// ln Gamma(z) for z > 0.
///
/// Lanczos approximation with g = 671/128 and 14 coefficients (the
/// Numerical Recipes 3rd edition set), good to about 1e-15.
inline double log_gamma(double z) {
    if (!(z > 0.0)) {
        throw std::domain_error("log_gamma: argument must be positive, got " + std::to_string(z));
    }
    if (z == 1.0 || z == 2.0) return 0.0;
    static constexpr std::array<double, 14> kCoef = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
        -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
        .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5};
    // The series is accurate for z >= 1; shift smaller arguments up.
    double shift = 0.0;
    if (z < 1.0) {
        shift = std::log(z);
        z += 1.0;
    }
    double y = z;
    double tmp = z + 5.24218750000000000;
    tmp = (z + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : kCoef) ser += c / ++y;
    return tmp + std::log(2.5066282746310005 * ser / z) - shift;
}

/// ln n!
inline double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    if (n < 2) return 0.0;
    return log_gamma(n + 1.0);
}

/// Gamma(z) as a SignedLog for z > 0.
inline SignedLog gamma_sl(double z) { return SignedLog{1, log_gamma(z)}; }

}  // namespace heatseries
