#pragma once

// One-dimensional distributional Taylor decomposition
//   f = sum_{j<=k} (-1)^j/j! (int x^j f) delta^{(j)} + D^{k+1} F_{k+1}
// with the integral remainders
//   F_a(x) = (-1)^a int_0^1 a (1-s)^{a-1} s^{-1-a} x^a/a! f(x/s) ds.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatseries/moments.hpp"
#include "heatseries/quadrature.hpp"
#include "heatseries/specfun.hpp"

namespace heatseries {

namespace detail {

inline TailOptions remainder_tail_options(double length_scale, double rel_tol) {
    TailOptions opt;
    opt.quad.rel_tol = rel_tol;
    opt.quad.abs_tol = 1e-300;
    opt.initial_width = length_scale;
    opt.min_extent = 4.0 * length_scale;
    return opt;
}

}  // namespace detail

/// F_alpha(x) for alpha >= 1.
///
/// With v = x/s the inner integral runs over v in [x, +-inf):
///   x > 0:  F = (-1)^a/(a-1)! int_x^inf (v-x)^{a-1} f(v) dv
///   x < 0:  F =  1/(a-1)!     int_-inf^x (x-v)^{a-1} f(v) dv
/// and F(0) = 0 (the x^a factor vanishes identically there).
inline double remainder(const Generic1DDatum& f, int alpha, double x) {
    if (alpha < 1) throw std::domain_error("remainder: order must be >= 1");
    if (x == 0.0) return 0.0;
    const int dir = x > 0.0 ? +1 : -1;
    auto integrand = [&](double v) {
        const double fv = f.fn(v);
        return detail::power_times(std::fabs(v - x), alpha - 1, fv);
    };
    auto res = integrate_beyond(integrand, x, dir, f.breakpoints,
                                detail::remainder_tail_options(f.length_scale, 1e-13));
    if (!res.converged) {
        throw IntegrabilityError("remainder: inner integral did not converge at x=" + std::to_string(x));
    }
    double value = std::exp(-log_factorial(alpha - 1)) * res.value;
    if (dir > 0 && alpha % 2 == 1) value = -value;
    return value;
}

/// ||F_alpha||_1 by quadrature, split at the jump at the origin.
inline double remainder_l1_norm(const Generic1DDatum& f, int alpha) {
    if (alpha < 1) throw std::domain_error("remainder_l1_norm: order must be >= 1");
    auto integrand = [&](double x) { return std::fabs(remainder(f, alpha, x)); };
    auto opt = detail::remainder_tail_options(f.length_scale, 1e-11);
    auto right = integrate_beyond(integrand, 0.0, +1, f.breakpoints, opt);
    auto left = integrate_beyond(integrand, 0.0, -1, f.breakpoints, opt);
    return right.value + left.value;
}

/// phi(x) = p(x) e^{-a x^2} with analytic derivatives of every order.
struct TestFunction {
    std::vector<double> poly;  ///< ascending coefficients of p
    double rate = 1.0;         ///< a > 0

    double derivative(int n, double x) const {
        // Leibniz with d^m/dx^m e^{-a x^2} = (-sqrt a)^m H_m(sqrt a x) e^{-a x^2}.
        const double sa = std::sqrt(rate);
        const double gauss = std::exp(-rate * x * x);
        if (gauss == 0.0) return 0.0;
        double total = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double pj = poly_derivative(j, x);
            if (pj == 0.0) continue;
            const int m = n - j;
            const double binom = std::exp(log_factorial(n) - log_factorial(j) - log_factorial(m));
            total += binom * pj * std::pow(-sa, m) * hermite(m, sa * x);
        }
        return total * gauss;
    }

    double operator()(double x) const { return derivative(0, x); }

private:
    double poly_derivative(int j, double x) const {
        double acc = 0.0;
        for (int i = static_cast<int>(poly.size()) - 1; i >= j; --i) {
            double c = poly[i];
            for (int r = 0; r < j; ++r) c *= (i - r);
            acc = acc * x + c;
        }
        return acc;
    }
};

struct DecompositionCheck {
    double pairing = 0.0;         ///< int f phi
    double taylor = 0.0;          ///< sum_{j<=k} m_j phi^{(j)}(0)/j!
    double remainder_term = 0.0;  ///< (-1)^{k+1} int F_{k+1} phi^{(k+1)}
    double residual = 0.0;        ///< |pairing - taylor - remainder_term|
};

/// Tests the decomposition against phi: both sides by independent quadrature.
inline DecompositionCheck decomposition_residual(const Generic1DDatum& f, int k, const TestFunction& phi) {
    if (k < 0) throw std::domain_error("decomposition_residual: k must be >= 0");
    DecompositionCheck out;
    const double scale = std::min(f.length_scale, 1.0 / std::sqrt(phi.rate));
    auto pair_opt = detail::remainder_tail_options(scale, 1e-13);
    out.pairing = integrate_real_line([&](double x) { return f.fn(x) * phi(x); }, 0.0, pair_opt).value;

    CompensatedSum taylor;
    for (int j = 0; j <= k; ++j) {
        const double mj = generic_moment_1d(j, f).to_double();
        taylor.add(mj * phi.derivative(j, 0.0) * std::exp(-log_factorial(j)));
    }
    out.taylor = taylor.value();

    auto rem_opt = detail::remainder_tail_options(scale, 1e-11);
    auto integrand = [&](double x) {
        const double dphi = phi.derivative(k + 1, x);
        if (dphi == 0.0) return 0.0;
        return remainder(f, k + 1, x) * dphi;
    };
    const double rem = integrate_beyond(integrand, 0.0, +1, f.breakpoints, rem_opt).value +
                       integrate_beyond(integrand, 0.0, -1, f.breakpoints, rem_opt).value;
    out.remainder_term = ((k + 1) % 2 == 0) ? rem : -rem;
    out.residual = std::fabs(out.pairing - out.taylor - out.remainder_term);
    return out;
}

/// <F_{k+1}, D^{k+1} G(x - ., t)>: the exact truncation error u - u_k in 1D.
inline double remainder_error_term(const Generic1DDatum& f, int k, double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("remainder_error_term: time must be positive");
    const int order = k + 1;
    const double root = 2.0 * std::sqrt(t);
    // D^n G(w,t) = pi^{-1/2} (4t)^{-(n+1)/2} (-1)^n H_n(y) e^{-y^2},  y = w/(2 sqrt t)
    const double pref = std::pow(std::numbers::pi, -0.5) * std::pow(4.0 * t, -0.5 * (order + 1)) *
                        (order % 2 == 0 ? 1.0 : -1.0);
    auto integrand = [&](double y) {
        const double w = (x - y) / root;
        const double kernel = hermite_weighted(order, w).to_double();
        if (kernel == 0.0) return 0.0;
        return remainder(f, order, y) * pref * kernel;
    };
    auto opt = detail::remainder_tail_options(std::min(f.length_scale, std::sqrt(t)), 1e-11);
    return integrate_beyond(integrand, 0.0, +1, {x}, opt).value +
           integrate_beyond(integrand, 0.0, -1, {x}, opt).value;
}

struct DecompositionCase {
    std::string name;
    Generic1DDatum f;
    int k = 0;
    TestFunction phi;
};

struct RemainderNormCase {
    std::string name;
    Generic1DDatum f;
    int alpha = 1;
    double bound = 0.0;  ///< ||x^alpha f||_1 / alpha!
};

/// Gaussian f = e^{-x^2/4w} with the given width.
inline Generic1DDatum gaussian_function(double width, double amplitude = 1.0) {
    return Generic1DDatum{[=](double x) { return amplitude * std::exp(-x * x / (4.0 * width)); }, true, {},
                          2.0 * std::sqrt(width)};
}

/// Built-in suite: Gaussians of widths 0.5, 1, 2 and a narrow unit-mass
/// Gaussian, paired with three test functions, k = 0..4.
inline std::vector<DecompositionCase> default_decomposition_suite() {
    const std::vector<std::pair<std::string, TestFunction>> phis = {
        {"gauss", TestFunction{{1.0}, 1.0}},
        {"quadratic*cutoff", TestFunction{{1.0, 1.0, -0.5}, 0.125}},
        {"x^2*gauss", TestFunction{{0.0, 0.0, 1.0}, 0.5}},
    };
    std::vector<std::pair<std::string, Generic1DDatum>> fs;
    for (double w : {0.5, 1.0, 2.0}) fs.emplace_back("gauss(t0=" + std::to_string(w).substr(0, 3) + ")", gaussian_function(w));
    const double eps = 0.01;
    fs.emplace_back("narrow", gaussian_function(eps, 1.0 / std::sqrt(4.0 * std::numbers::pi * eps)));

    std::vector<DecompositionCase> out;
    for (const auto& [fname, f] : fs) {
        for (const auto& [pname, phi] : phis) {
            for (int k = 0; k <= 4; ++k) out.push_back({fname + "/" + pname + "/k=" + std::to_string(k), f, k, phi});
        }
    }
    return out;
}

/// Remainder L1 cases: widths 0.5, 1, 2 and alpha = 1..5.
inline std::vector<RemainderNormCase> default_remainder_suite() {
    std::vector<RemainderNormCase> out;
    for (double w : {0.5, 1.0, 2.0}) {
        const auto f = gaussian_function(w);
        for (int a = 1; a <= 5; ++a) {
            const double bound = gaussian_abs_moment(MultiIndex{a}, 1.0, w).to_double() * std::exp(-log_factorial(a));
            out.push_back({"gauss(t0=" + std::to_string(w).substr(0, 3) + ")/alpha=" + std::to_string(a), f, a, bound});
        }
    }
    return out;
}

}  // namespace heatseries
