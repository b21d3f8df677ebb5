#pragma once

// Moments  int x^alpha u0(x) dx  of initial data, and the absolute moments
// || x^alpha u0 ||_1 needed by the error bound.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "heatseries/multi_index.hpp"
#include "heatseries/quadrature.hpp"
#include "heatseries/signed_log.hpp"
#include "heatseries/specfun.hpp"

namespace heatseries {

/// u0(x) = C exp(-|x|^2 / (4 t0)) on R^dim.
struct GaussianDatum {
    double amplitude = 1.0;
    double t0 = 1.0;
    int dim = 1;

    double operator()(double r2) const { return amplitude * std::exp(-r2 / (4.0 * t0)); }
};

/// u0(x) = profile(|x|) on R^dim, dim >= 2.
struct RadialDatum {
    std::function<double(double)> profile;
    int dim = 2;
    double length_scale = 1.0;  ///< rough width; seeds the quadrature shells
};

/// Arbitrary integrable u0 on R. Breakpoints mark discontinuities.
struct Generic1DDatum {
    std::function<double(double)> fn;
    bool decays = true;  ///< |x|^(kmax+1) u0 assumed integrable
    std::vector<double> breakpoints;
    double length_scale = 1.0;
};

using InitialDatum = std::variant<GaussianDatum, RadialDatum, Generic1DDatum>;

inline int dim_of(const InitialDatum& u0) {
    return std::visit(
        [](const auto& v) -> int {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Generic1DDatum>) {
                return 1;
            } else {
                return v.dim;
            }
        },
        u0);
}

/// Point value u0(x).
inline double evaluate(const InitialDatum& u0, const std::vector<double>& x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    if (auto* g = std::get_if<GaussianDatum>(&u0)) return (*g)(r2);
    if (auto* r = std::get_if<RadialDatum>(&u0)) return r->profile(std::sqrt(r2));
    return std::get<Generic1DDatum>(u0).fn(x.at(0));
}

namespace detail {

// x^p * fx without forming x^p on its own (it may overflow while fx underflows).
inline double power_times(double x, int p, double fx) {
    if (fx == 0.0) return 0.0;
    if (p == 0) return fx;
    if (x == 0.0) return 0.0;
    const double mag = std::exp(p * std::log(std::fabs(x)) + std::log(std::fabs(fx)));
    const int sign = ((x < 0.0 && p % 2 == 1) ? -1 : 1) * (fx < 0.0 ? -1 : 1);
    return sign * mag;
}

inline TailOptions moment_tail_options(double length_scale) {
    TailOptions opt;
    opt.quad.rel_tol = 1e-13;
    opt.quad.abs_tol = 1e-300;
    opt.initial_width = length_scale;
    opt.min_extent = 4.0 * length_scale;
    return opt;
}

}  // namespace detail

/// C (4 t0)^{(|alpha|+d)/2} prod Gamma((alpha_i+1)/2): the absolute moment
/// || x^alpha C e^{-|x|^2/4t0} ||_1, valid for every alpha.
inline SignedLog gaussian_abs_moment(const MultiIndex& alpha, double amplitude, double t0) {
    if (!(t0 > 0.0)) throw std::domain_error("gaussian moment: t0 must be positive");
    if (amplitude == 0.0) return {};
    const int d = alpha.dim();
    double log_val = std::log(std::fabs(amplitude)) + 0.5 * (alpha.degree() + d) * std::log(4.0 * t0);
    for (int a : alpha.components()) log_val += log_gamma(0.5 * (a + 1));
    return {amplitude > 0.0 ? 1 : -1, log_val};
}

/// Signed moment of the Gaussian datum: zero whenever some alpha_i is odd.
inline SignedLog gaussian_moment(const MultiIndex& alpha, double amplitude, double t0) {
    if (!alpha.all_even()) return {};
    return gaussian_abs_moment(alpha, amplitude, t0);
}

/// Angular constant C(j, d) converting tensor moments of radial functions to
/// radial integrals, for j = |alpha| even.
inline SignedLog constant_C(int j, int d) {
    if (d < 2) throw std::domain_error("constant_C: dimension must be >= 2");
    if (j < 0 || j % 2 != 0) throw std::domain_error("constant_C: j must be even and >= 0");
    const double ln2pi = std::log(2.0 * std::numbers::pi);
    const double ln2 = std::numbers::ln2;
    if (d % 2 == 0) {
        return {1, 0.5 * d * ln2pi - 0.5 * (j + d - 2) * ln2 - log_gamma(0.5 * (j + d))};
    }
    return {1, 0.5 * (d - 1) * ln2pi + 0.5 * (j + d + 1) * ln2 + log_gamma(0.5 * (j + d + 1)) -
                   log_gamma(static_cast<double>(j + d))};
}

/// int_0^inf r^power profile(r) dr (or of |profile| when `absolute`).
inline double radial_integral(const std::function<double(double)>& profile, int power,
                              double length_scale = 1.0, bool absolute = false) {
    auto integrand = [&](double r) {
        const double v = profile(r);
        return detail::power_times(r, power, absolute ? std::fabs(v) : v);
    };
    auto res = integrate_half_line(integrand, 0.0, +1, detail::moment_tail_options(length_scale));
    if (!res.converged) {
        throw IntegrabilityError("radial integral of degree " + std::to_string(power) +
                                 " did not converge");
    }
    return res.value;
}

/// Plain moment of a radial datum from its radial integral and C(|alpha|, d).
inline SignedLog radial_moment_from_integral(const MultiIndex& alpha, double radial_int) {
    if (!alpha.all_even()) return {};
    const int j = alpha.degree();
    SignedLog factor{1, alpha.log_factorial() - 0.5 * j * std::numbers::ln2};
    for (int a : alpha.components()) factor /= SignedLog{1, log_factorial(a / 2)};
    return factor * constant_C(j, alpha.dim()) * SignedLog::from_double(radial_int);
}

/// int x^alpha u0(x) dx for u0(x) = profile(|x|) in dimension d >= 2.
inline SignedLog radial_moment(const MultiIndex& alpha, const std::function<double(double)>& profile,
                               int d, double length_scale = 1.0) {
    if (d < 2) throw std::domain_error("radial_moment: dimension must be >= 2");
    if (alpha.dim() != d) throw std::invalid_argument("radial_moment: alpha dimension mismatch");
    if (!alpha.all_even()) return {};
    return radial_moment_from_integral(
        alpha, radial_integral(profile, alpha.degree() + d - 1, length_scale));
}

/// || x^alpha u0 ||_1 for a radial datum:
/// 2 prod Gamma((alpha_i+1)/2) / Gamma((|alpha|+d)/2) * int r^{|alpha|+d-1} |u0(r)| dr.
inline SignedLog radial_abs_moment_from_integral(const MultiIndex& alpha, double abs_radial_int) {
    const int d = alpha.dim();
    double log_factor = std::numbers::ln2 - log_gamma(0.5 * (alpha.degree() + d));
    for (int a : alpha.components()) log_factor += log_gamma(0.5 * (a + 1));
    return SignedLog{1, log_factor} * SignedLog::from_double(abs_radial_int);
}

/// int x^alpha f(x) dx on R by adaptive quadrature with growing range.
inline SignedLog generic_moment_1d(int alpha, const Generic1DDatum& f, bool absolute = false) {
    if (alpha < 0) throw std::domain_error("generic_moment_1d: negative order");
    auto integrand = [&](double x) {
        const double v = f.fn(x);
        const double w = detail::power_times(x, alpha, v);
        return absolute ? std::fabs(w) : w;
    };
    auto opt = detail::moment_tail_options(f.length_scale);
    auto right = integrate_beyond(integrand, 0.0, +1, f.breakpoints, opt);
    auto left = integrate_beyond(integrand, 0.0, -1, f.breakpoints, opt);
    if (!right.converged || !left.converged) {
        throw IntegrabilityError("moment of order " + std::to_string(alpha) + " did not converge");
    }
    return SignedLog::from_double(left.value + right.value);
}

inline SignedLog generic_moment_1d(int alpha, const std::function<double(double)>& f) {
    return generic_moment_1d(alpha, Generic1DDatum{f, true, {}, 1.0});
}

/// Map alpha -> moment for all |alpha| <= kmax, plus absolute moments.
class MomentTable {
public:
    MomentTable() = default;
    MomentTable(int dim, int kmax) : dim_(dim), kmax_(kmax) {}

    int dim() const { return dim_; }
    int kmax() const { return kmax_; }

    const std::map<MultiIndex, SignedLog>& entries() const { return entries_; }
    const std::map<MultiIndex, SignedLog>& abs_entries() const { return abs_entries_; }
    bool has_abs_moments() const { return !abs_entries_.empty(); }

    /// Gaussian parameters when built from a Gaussian datum.
    const std::optional<GaussianDatum>& gaussian() const { return gaussian_; }
    /// True when odd-component entries are exact zeros by symmetry.
    bool symmetric() const { return symmetric_; }

    SignedLog moment(const MultiIndex& alpha) const { return lookup(entries_, alpha, "moment"); }
    SignedLog abs_moment(const MultiIndex& alpha) const {
        return lookup(abs_entries_, alpha, "absolute moment");
    }

    void set(const MultiIndex& alpha, SignedLog value) { entries_[alpha] = value; }
    void set_abs(const MultiIndex& alpha, SignedLog value) { abs_entries_[alpha] = value; }
    void set_gaussian(const GaussianDatum& g) { gaussian_ = g; }
    void set_symmetric(bool s) { symmetric_ = s; }

private:
    SignedLog lookup(const std::map<MultiIndex, SignedLog>& m, const MultiIndex& alpha,
                     const char* what) const {
        auto it = m.find(alpha);
        if (it == m.end()) {
            throw std::out_of_range(std::string(what) + " of degree " +
                                    std::to_string(alpha.degree()) + " not in table (kmax=" +
                                    std::to_string(kmax_) + ")");
        }
        return it->second;
    }

    int dim_ = 1;
    int kmax_ = 0;
    std::map<MultiIndex, SignedLog> entries_;
    std::map<MultiIndex, SignedLog> abs_entries_;
    std::optional<GaussianDatum> gaussian_;
    bool symmetric_ = false;
};

namespace detail {

inline std::string alpha_to_string(const MultiIndex& a) {
    std::string s = "(";
    for (int i = 0; i < a.dim(); ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + ")";
}

}  // namespace detail

/// Builds the moment table for |alpha| <= kmax, dispatching on the datum.
inline MomentTable build_moment_table(const InitialDatum& u0, int kmax) {
    if (kmax < 0 || kmax > kMaxRecurrenceDegree) {
        throw std::domain_error("build_moment_table: kmax outside [0, " +
                                std::to_string(kMaxRecurrenceDegree) + "]");
    }
    const int d = dim_of(u0);
    MomentTable table(d, kmax);

    if (auto* g = std::get_if<GaussianDatum>(&u0)) {
        if (g->dim < 1) throw std::domain_error("Gaussian datum: dimension must be >= 1");
        table.set_gaussian(*g);
        table.set_symmetric(true);
        for (int j = 0; j <= kmax; ++j) {
            for_each_composition(j, d, [&](const MultiIndex& a) {
                table.set(a, gaussian_moment(a, g->amplitude, g->t0));
                table.set_abs(a, gaussian_abs_moment(a, std::fabs(g->amplitude), g->t0));
            });
        }
        return table;
    }

    if (auto* r = std::get_if<RadialDatum>(&u0)) {
        if (r->dim < 2) throw std::domain_error("radial datum: dimension must be >= 2");
        table.set_symmetric(true);
        for (int j = 0; j <= kmax; ++j) {
            double signed_int = 0.0, abs_int = 0.0;
            try {
                if (j % 2 == 0) signed_int = radial_integral(r->profile, j + d - 1, r->length_scale);
                abs_int = radial_integral(r->profile, j + d - 1, r->length_scale, true);
            } catch (const IntegrabilityError& e) {
                throw IntegrabilityError(std::string(e.what()) + " at alpha of degree " +
                                         std::to_string(j));
            }
            for_each_composition(j, d, [&](const MultiIndex& a) {
                table.set(a, radial_moment_from_integral(a, signed_int));
                table.set_abs(a, radial_abs_moment_from_integral(a, abs_int));
            });
        }
        return table;
    }

    const auto& f = std::get<Generic1DDatum>(u0);
    for (int j = 0; j <= kmax; ++j) {
        MultiIndex a{j};
        try {
            table.set(a, generic_moment_1d(j, f));
            table.set_abs(a, generic_moment_1d(j, f, true));
        } catch (const IntegrabilityError& e) {
            throw IntegrabilityError(std::string(e.what()) + " at alpha=" + detail::alpha_to_string(a));
        }
    }
    return table;
}

/// Table of a*U + b*V. Absolute moments do not combine and are dropped.
inline MomentTable combine(double a, const MomentTable& U, double b, const MomentTable& V) {
    if (U.dim() != V.dim()) throw std::invalid_argument("combine: dimension mismatch");
    MomentTable out(U.dim(), std::min(U.kmax(), V.kmax()));
    const auto sa = SignedLog::from_double(a);
    const auto sb = SignedLog::from_double(b);
    for (const auto& [alpha, m] : U.entries()) {
        if (alpha.degree() > out.kmax()) continue;
        out.set(alpha, sa * m + sb * V.moment(alpha));
    }
    out.set_symmetric(U.symmetric() && V.symmetric());
    return out;
}

}  // namespace heatseries
