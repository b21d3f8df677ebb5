#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatseries/kernel_approx.hpp"
#include "heatseries/moments.hpp"
#include "heatseries/multi_index.hpp"
#include "heatseries/signed_log.hpp"
#include "heatseries/specfun.hpp"

namespace heatseries {

struct BoundReport {
    int k = 0;
    SignedLog F_k;
    std::optional<SignedLog> G_k;
    std::optional<SignedLog> divergence_lb;
};

/// Right-hand side of the uniform error estimate for u_k:
///   F(k) = (2pi)^{-d/2} (2t)^{-(k+d+1)/2} sum_{|a|=k+1} ||x^a u0||_1 / sqrt(a!) (prod (a_i+1))^{-1/12}.
/// Needs the absolute moments of degree k+1.
inline SignedLog error_bound_F(const MomentTable& table, const ApproxConfig& cfg) {
    cfg.validate();
    if (cfg.dim != table.dim()) throw std::invalid_argument("error_bound_F: table dimension mismatch");
    const int degree = cfg.k + 1;
    if (degree > table.kmax() || !table.has_abs_moments()) {
        throw std::domain_error("error_bound_F: absolute moments of degree " + std::to_string(degree) +
                                " not available (table kmax=" + std::to_string(table.kmax()) + ")");
    }
    const int d = cfg.dim;
    std::vector<SignedLog> terms;
    for_each_composition(degree, d, [&](const MultiIndex& a) {
        const SignedLog m = table.abs_moment(a);
        if (m.is_zero()) return;
        double log_weight = -0.5 * a.log_factorial();
        for (int ai : a.components()) log_weight -= std::log(ai + 1.0) / 12.0;
        terms.push_back(m.abs() * SignedLog{1, log_weight});
    });
    const double log_pref = -0.5 * d * std::log(2.0 * std::numbers::pi) -
                            0.5 * (cfg.k + d + 1) * std::log(2.0 * cfg.t);
    return aligned_sum(terms) * SignedLog{1, log_pref};
}

/// Closed-form envelope for data with |u0| <= C e^{-|x|^2/4t0}:
///   G(k) = C (t0/t)^{(k+d+1)/2} (1 + (k+1)/d)^{-d/12} (k+d)! / ((k+1)! (d-1)!).
inline SignedLog envelope_bound_G(double amplitude, double t0, const ApproxConfig& cfg) {
    cfg.validate();
    if (!(t0 > 0.0)) throw std::domain_error("envelope_bound_G: t0 must be positive");
    const int d = cfg.dim;
    const int k = cfg.k;
    const double log_val = 0.5 * (k + d + 1) * std::log(t0 / cfg.t) -
                           (d / 12.0) * std::log1p((k + 1.0) / d) + log_factorial(k + d) -
                           log_factorial(k + 1) - log_factorial(d - 1);
    return SignedLog::from_double(amplitude).abs() * SignedLog{1, log_val};
}

struct DivergenceBound {
    SignedLog value;
    /// True for d >= 2, where the value is a proven lower bound on |u_k(0,t)|.
    /// For d = 1 only the growth shape (t0/t)^{floor(k/2)} k^{-1/2} is known.
    bool certified = false;
};

/// Growth bound for Gaussian data when 0 < t < t0:
///   d >= 2:  C / ((4t)^{d/2} Gamma(d/2)) (t0/t - 1) (t0/t)^{floor(k/2) - 1}
///   d = 1:   (t0/t)^{floor(k/2)} / sqrt(max(k,1))  (shape, unit constant)
inline DivergenceBound divergence_lower_bound(double amplitude, double t0, const ApproxConfig& cfg) {
    cfg.validate();
    if (!(cfg.t < t0)) {
        throw std::domain_error("divergence_lower_bound: requires t < t0 (t=" + std::to_string(cfg.t) +
                                ", t0=" + std::to_string(t0) + ")");
    }
    const int d = cfg.dim;
    const int half = cfg.k / 2;
    const double ratio = t0 / cfg.t;
    if (d == 1) {
        return {SignedLog{1, half * std::log(ratio) - 0.5 * std::log(std::max(cfg.k, 1))}, false};
    }
    const double log_val = std::log(std::fabs(amplitude)) - 0.5 * d * std::log(4.0 * cfg.t) -
                           log_gamma(0.5 * d) + std::log(ratio - 1.0) + (half - 1) * std::log(ratio);
    return {SignedLog{1, log_val}, true};
}

/// max_x |H_n(x)| e^{-x^2} <= 2^{n/2} sqrt(n!) (n+1)^{-1/12}, in log form.
inline SignedLog bonan_clark_bound_log(int n) {
    if (n < 0 || n > kMaxRecurrenceDegree) {
        throw std::domain_error("bonan_clark_bound: degree out of range");
    }
    return {1, 0.5 * n * std::numbers::ln2 + 0.5 * log_factorial(n) - std::log(n + 1.0) / 12.0};
}

inline double bonan_clark_bound(int n) { return bonan_clark_bound_log(n).to_double(); }

struct LogFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (x_i, ln|y_i|).
inline LogFit fit_log_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("fit_log_line: need >= 2 points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double y = std::log(std::fabs(ys[i]));
        sx += xs[i];
        sy += y;
        sxx += xs[i] * xs[i];
        sxy += xs[i] * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

/// Fitted constant B in |u_k(0,t)| ~ B (t0/t)^{floor(k/2)} k^{-1/2} for d = 1:
/// mean of ln|u_k| - ln(shape) over the supplied k (least squares for a pure
/// offset). A measured constant, not a bound.
inline double fit_divergence_constant(const std::vector<int>& ks, const std::vector<double>& values,
                                      double t0, double t) {
    if (ks.size() != values.size() || ks.empty()) throw std::invalid_argument("fit_divergence_constant: bad input");
    double acc = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const auto shape = divergence_lower_bound(1.0, t0, ApproxConfig{1, ks[i], t});
        acc += std::log(std::fabs(values[i])) - shape.value.logmag;
    }
    return std::exp(acc / static_cast<double>(ks.size()));
}

}  // namespace heatseries
