#pragma once

// Similarity variables  u(x,t) = t^{-d/2} U(z,tau),  z = x/(2 sqrt t),  tau = ln t,
// and the Hermite eigenfunction expansion
//   U(z,tau) = e^{-|z|^2} sum_a a_a e^{-|a| tau/2} prod H_{a_i}(z_i).

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heatseries/kernel_approx.hpp"
#include "heatseries/moments.hpp"
#include "heatseries/multi_index.hpp"
#include "heatseries/quadrature.hpp"
#include "heatseries/signed_log.hpp"
#include "heatseries/specfun.hpp"

namespace heatseries {

struct SimilarityPoint {
    std::vector<double> z;
    double tau = 0.0;
};

inline SimilarityPoint to_similarity(const std::vector<double>& x, double t) {
    if (!(t > 0.0)) throw std::domain_error("to_similarity: time must be positive");
    const double root = 2.0 * std::sqrt(t);
    SimilarityPoint p{x, std::log(t)};
    for (double& zi : p.z) zi /= root;
    return p;
}

inline std::pair<std::vector<double>, double> from_similarity(const SimilarityPoint& p) {
    const double t = std::exp(p.tau);
    const double root = 2.0 * std::sqrt(t);
    std::vector<double> x = p.z;
    for (double& xi : x) xi *= root;
    return {x, t};
}

/// Expansion coefficients a_alpha, all |alpha| <= kmax. t0_coeff is the
/// time whose solution produced them (0 for the initial datum).
struct EigenCoeffs {
    double t0_coeff = 0.0;
    int dim = 1;
    int kmax = 0;
    std::map<MultiIndex, SignedLog> entries;

    SignedLog at(const MultiIndex& a) const {
        auto it = entries.find(a);
        if (it == entries.end()) throw std::out_of_range("EigenCoeffs: alpha not present");
        return it->second;
    }
};

namespace detail {

// 2^{-|a|-d} pi^{-d/2} / a!
inline SignedLog coeff_normalizer(const MultiIndex& a) {
    const int d = a.dim();
    return {1, -(a.degree() + d) * std::numbers::ln2 - 0.5 * d * std::log(std::numbers::pi) - a.log_factorial()};
}

}  // namespace detail

/// a_alpha(0) = 2^{-|a|-d} pi^{-d/2} / a! * int x^a u0: the coefficients that
/// make the expansion coincide with u_k.
inline EigenCoeffs eigen_coeffs_from_moments(const MomentTable& table) {
    EigenCoeffs out{0.0, table.dim(), table.kmax(), {}};
    for (const auto& [a, m] : table.entries()) out.entries[a] = detail::coeff_normalizer(a) * m;
    return out;
}

/// Coefficients from the solution at time s > 0 for Gaussian data, by
/// projecting e^{|z|^2} U(z, ln s) onto the Hermite basis:
///   a_a(s) = 2^{-|a|-d} pi^{-d/2}/a! * int prod s^{a_i/2} H_{a_i}(x_i/2sqrt s) u(x,s) dx.
/// For u(.,s) = C' e^{-|x|^2/4T}, T = t0 + s, each axis factor is
///   int s^m H_{2m}(x/2sqrt s) e^{-x^2/4T} dx = 2 sqrt(pi T) (2m)!/m! (T - s)^m,
/// and odd orders vanish.
inline EigenCoeffs eigen_coeffs(const GaussianDatum& u0, double s, int kmax) {
    if (s < 0.0) throw std::domain_error("eigen_coeffs: time must be >= 0");
    const int d = u0.dim;
    const double T = u0.t0 + s;
    const SignedLog amp = SignedLog::from_double(u0.amplitude) * SignedLog{1, 0.5 * d * std::log(u0.t0 / T)};
    EigenCoeffs out{s, d, kmax, {}};
    for (int j = 0; j <= kmax; ++j) {
        for_each_composition(j, d, [&](const MultiIndex& a) {
            if (!a.all_even()) {
                out.entries[a] = {};
                return;
            }
            SignedLog v = amp;
            for (int ai : a.components()) {
                const int m = ai / 2;
                v *= SignedLog{1, std::log(2.0) + 0.5 * std::log(std::numbers::pi * T) + log_factorial(ai) -
                                      log_factorial(m) + m * std::log(T - s)};
            }
            out.entries[a] = detail::coeff_normalizer(a) * v;
        });
    }
    return out;
}

/// Hermite projection coefficients for a 1D solution profile u(., s), s > 0,
/// by quadrature.
inline EigenCoeffs eigen_coeffs(const std::function<double(double)>& u_at_s, double s, int kmax,
                                double length_scale = 1.0) {
    if (!(s > 0.0)) throw std::domain_error("eigen_coeffs: time must be positive for quadrature coefficients");
    const double root = 2.0 * std::sqrt(s);
    EigenCoeffs out{s, 1, kmax, {}};
    for (int n = 0; n <= kmax; ++n) {
        // s^{n/2} H_n(y) u(x) with H_n e^{-y^2} from the scaled recurrence.
        auto integrand = [&](double x) {
            const double v = u_at_s(x);
            if (v == 0.0) return 0.0;
            const double y = x / root;
            const SignedLog h = hermite_weighted(n, y);
            if (h.is_zero()) return 0.0;
            const double logv = h.logmag + y * y + 0.5 * n * std::log(s) + std::log(std::fabs(v));
            return h.sign * (v < 0.0 ? -1.0 : 1.0) * std::exp(logv);
        };
        // Odd orders of even profiles integrate to zero and even orders cancel
        // heavily, so the tolerance is absolute relative to the L1 norm.
        auto opt = detail::moment_tail_options(length_scale);
        opt.quad.rel_tol = 1e-12;
        const double l1 = integrate_real_line([&](double x) { return std::fabs(integrand(x)); }, 0.0, opt).value;
        opt.quad.abs_tol = std::max(1e-300, 1e-14 * l1);
        auto res = integrate_real_line(integrand, 0.0, opt);
        if (!res.converged) throw IntegrabilityError("eigen_coeffs: projection of order " + std::to_string(n) + " did not converge");
        const MultiIndex a{n};
        out.entries[a] = detail::coeff_normalizer(a) * SignedLog::from_double(res.value);
    }
    return out;
}

/// Coefficients from plain monomial moments of u(., s):
///   2^{-|a|-d} pi^{-d/2}/a! * int x^a u(x,s) dx.
/// These coincide with the projection only at s = 0; for s > 0 the series
/// they generate is u_k for initial datum u(., s), i.e. a solution shifted
/// forward in time by s.
inline EigenCoeffs eigen_coeffs_monomial(const GaussianDatum& u0, double s, int kmax) {
    if (s < 0.0) throw std::domain_error("eigen_coeffs_monomial: time must be >= 0");
    const int d = u0.dim;
    const double T = u0.t0 + s;
    const double amp = u0.amplitude * std::pow(u0.t0 / T, 0.5 * d);
    EigenCoeffs out{s, d, kmax, {}};
    for (int j = 0; j <= kmax; ++j) {
        for_each_composition(j, d, [&](const MultiIndex& a) {
            out.entries[a] = detail::coeff_normalizer(a) * gaussian_moment(a, amp, T);
        });
    }
    return out;
}

/// e^{-|z|^2} sum_{|a|<=k} a_a e^{-|a| tau/2} prod H_{a_i}(z_i), summed per
/// degree with aligned compensated reduction.
inline ApproxResult eval_expansion(const EigenCoeffs& coeffs, const SimilarityPoint& p, int k) {
    if (k < 0 || k > coeffs.kmax) throw std::domain_error("eval_expansion: truncation outside coefficient range");
    const int d = coeffs.dim;
    if (static_cast<int>(p.z.size()) != d) throw std::invalid_argument("eval_expansion: point dimension mismatch");
    std::vector<std::vector<SignedLog>> weighted(d);
    for (int i = 0; i < d; ++i) weighted[i] = hermite_weighted_all(k, p.z[i]);
    ApproxResult out;
    out.partials.resize(static_cast<std::size_t>(k) + 1);
    std::vector<std::vector<SignedLog>> blocks(static_cast<std::size_t>(k) + 1);
    for (const auto& [a, c] : coeffs.entries) {
        const int j = a.degree();
        if (j > k || c.is_zero()) continue;
        SignedLog term = c * SignedLog{1, -0.5 * j * p.tau};
        for (int i = 0; i < d; ++i) term *= weighted[i][a[i]];
        blocks[j].push_back(term);
    }
    for (int j = 0; j <= k; ++j) out.partials[j] = aligned_sum(blocks[j]);
    out.value_sl = aligned_sum(out.partials);
    out.value = out.value_sl.to_double();
    return out;
}

struct ValidityResult {
    bool finite = false;
    double value = 0.0;       ///< partial integral when finite
    double log_partial = 0.0; ///< ln of the last partial integral
    double radius = 0.0;      ///< outer radius reached in z
    double last_ratio = 0.0;  ///< last shell increment ratio
};

namespace detail {

// ln of int_a^b exp(g(z)) dz.
template <typename G>
double log_shell_integral(G&& g, double a, double b) {
    double ref = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 32; ++i) ref = std::max(ref, g(a + (b - a) * i / 32.0));
    if (!std::isfinite(ref)) return ref;
    QuadOptions q;
    q.rel_tol = 1e-10;
    auto res = integrate([&](double z) { return std::exp(g(z) - ref); }, a, b, q);
    return ref + std::log(res.value);
}

}  // namespace detail

/// Weighted-L2 finiteness of e^{|z|^2} U^2 for a radial solution profile.
///
/// `log_abs_u(r)` returns ln|u(x,t)| at |x| = r (for d = 1, u even). The
/// integral runs over balls |z| <= R with R doubling from 1. Three
/// consecutive shell ratios below 0.5 mean convergence; three consecutive
/// ratios at or above 0.5 with outer radius >= 16, or overflow of the partial
/// integral, mean divergence.
inline ValidityResult validity_integral(const std::function<double(double)>& log_abs_u, double t, int d) {
    if (!(t > 0.0)) throw std::domain_error("validity_integral: time must be positive");
    if (d < 1) throw std::domain_error("validity_integral: dimension must be >= 1");
    const double root = 2.0 * std::sqrt(t);
    const double log_sphere = std::log(2.0) + 0.5 * d * std::log(std::numbers::pi) - log_gamma(0.5 * d);
    // ln of the radial integrand  |S^{d-1}| z^{d-1} e^{z^2} U(z)^2,  U = t^{d/2} u(2 sqrt t z).
    auto g = [&](double z) {
        const double log_U = 0.5 * d * std::log(t) + log_abs_u(root * z);
        const double log_z = (d > 1) ? (d - 1) * std::log(z) : 0.0;
        return log_sphere + log_z + z * z + 2.0 * log_U;
    };

    ValidityResult out;
    SignedLog total;
    double prev_log_shell = detail::log_shell_integral(g, 0.0, 1.0);
    total = SignedLog{1, prev_log_shell};
    int small = 0, large = 0;
    double lo = 1.0;
    for (int shell = 0; shell < 40; ++shell) {
        const double hi = 2.0 * lo;
        const double log_shell = detail::log_shell_integral(g, lo, hi);
        total += SignedLog{1, log_shell};
        const double log_ratio = log_shell - prev_log_shell;
        out.last_ratio = std::exp(log_ratio);
        out.radius = hi;
        out.log_partial = total.logmag;
        if (log_ratio < std::log(0.5)) {
            ++small;
            large = 0;
        } else {
            ++large;
            small = 0;
        }
        if (small >= 3) {
            out.finite = true;
            out.value = total.to_double();
            return out;
        }
        if ((large >= 3 && hi >= 16.0) || total.logmag > 700.0) return out;
        prev_log_shell = log_shell;
        lo = hi;
    }
    return out;
}

/// ln|u(x,t)| for Gaussian data as a function of r = |x|.
inline std::function<double(double)> gaussian_log_solution(double amplitude, double t0, int d, double t) {
    const double log_amp = std::log(std::fabs(amplitude)) + 0.5 * d * std::log(t0 / (t + t0));
    const double inv = 1.0 / (4.0 * (t + t0));
    return [=](double r) { return log_amp - r * r * inv; };
}

}  // namespace heatseries
