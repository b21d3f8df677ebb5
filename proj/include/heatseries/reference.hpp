#pragma once

// Ground truth for the heat equation: the closed-form solution for Gaussian
// data, a quadrature convolution for everything else, and sup-norm error
// measurement on grids.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatseries/bounds.hpp"
#include "heatseries/kernel_approx.hpp"
#include "heatseries/moments.hpp"
#include "heatseries/quadrature.hpp"

namespace heatseries {

/// Uniform grid on [-extent, extent]^dim with an odd number of points per
/// axis, so the origin is a node.
struct GridSpec {
    int dim = 1;
    double extent = 10.0;
    int points = 801;

    void validate() const {
        if (dim < 1 || dim > 2) throw std::domain_error("GridSpec: only dimensions 1 and 2 are supported");
        if (!(extent > 0.0)) throw std::domain_error("GridSpec: extent must be positive");
        if (points < 3 || points % 2 == 0) throw std::domain_error("GridSpec: points per axis must be odd and >= 3");
    }

    double node(int i) const { return -extent + 2.0 * extent * i / (points - 1); }
};

/// R = 16 sqrt(t_max) + 4 sqrt(t0), 801 points per axis.
inline GridSpec default_grid(int dim, double t_max, double t0) {
    return GridSpec{dim, 16.0 * std::sqrt(t_max) + 4.0 * std::sqrt(t0), 801};
}

/// Solution for u0 = C e^{-|x|^2/4t0}:  C (t0/(t+t0))^{d/2} e^{-|x|^2/4(t+t0)}.
inline double exact_gaussian_solution(double amplitude, double t0, int d, const std::vector<double>& x, double t) {
    if (t < 0.0) throw std::domain_error("exact_gaussian_solution: time must be >= 0");
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    if (t == 0.0) return amplitude * std::exp(-r2 / (4.0 * t0));
    return amplitude * std::pow(t0 / (t + t0), 0.5 * d) * std::exp(-r2 / (4.0 * (t + t0)));
}

namespace detail {

inline TailOptions oracle_tail_options(double width) {
    TailOptions opt;
    opt.quad.rel_tol = 1e-13;
    opt.quad.abs_tol = 1e-300;
    opt.initial_width = width;
    opt.min_extent = 2.0 * width;
    return opt;
}

// int G(x-y,t) f(y) dy over R.
inline double convolve_1d(const std::function<double(double)>& f, const std::vector<double>& breaks,
                          double length_scale, double x, double t) {
    const double sd = std::sqrt(t);
    const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
    auto integrand = [&](double y) {
        const double fy = f(y);
        if (fy == 0.0) return 0.0;
        return norm * std::exp(-(x - y) * (x - y) / (4.0 * t)) * fy;
    };
    std::vector<double> cuts = breaks;
    cuts.push_back(x - 8.0 * sd);
    cuts.push_back(x + 8.0 * sd);
    const double width = std::min(length_scale, 2.0 * sd);
    auto opt = oracle_tail_options(width);
    opt.min_extent = std::max(opt.min_extent, std::fabs(x) + 8.0 * sd + length_scale);
    auto right = integrate_beyond(integrand, x, +1, cuts, opt);
    auto left = integrate_beyond(integrand, x, -1, cuts, opt);
    return left.value + right.value;
}

// Spherical average kernel: (4 pi t)^{-d/2} int_{S^{d-1}} e^{-|x - rho w|^2/4t} dw with |x| = r.
inline double spherical_kernel(int d, double r, double rho, double t) {
    const double pref = std::pow(4.0 * std::numbers::pi * t, -0.5 * d);
    const double gauss = std::exp(-(r - rho) * (r - rho) / (4.0 * t));
    if (gauss == 0.0) return 0.0;
    const double full_sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
    const double a = r * rho / (2.0 * t);
    if (a == 0.0) return pref * std::exp(-(r * r + rho * rho) / (4.0 * t)) * full_sphere;
    // |S^{d-2}| int_0^pi e^{-a(1 - cos th)} sin^{d-2} th dth
    const double ring = 2.0 * std::pow(std::numbers::pi, 0.5 * (d - 1)) / std::tgamma(0.5 * (d - 1));
    auto inner = [&](double th) { return std::exp(-a * (1.0 - std::cos(th))) * std::pow(std::sin(th), d - 2); };
    QuadOptions q;
    q.rel_tol = 1e-13;
    const double knee = std::min(std::numbers::pi, 12.0 / std::sqrt(a));
    const double angular = integrate(inner, 0.0, std::numbers::pi, q, {knee}).value;
    return pref * gauss * ring * angular;
}

}  // namespace detail

/// u(x,t) = int G(x-y,t) u0(y) dy by quadrature. Generic data: d = 1.
/// Gaussian and radial data: any d, through a radial integral against the
/// spherically averaged kernel.
inline double convolve_oracle(const InitialDatum& u0, const std::vector<double>& x, double t) {
    if (!(t > 0.0)) throw std::domain_error("convolve_oracle: time must be positive");
    const int d = dim_of(u0);
    if (static_cast<int>(x.size()) != d) throw std::invalid_argument("convolve_oracle: point dimension mismatch");

    if (auto* g = std::get_if<GaussianDatum>(&u0)) {
        if (d == 1) {
            auto f = [g](double y) { return (*g)(y * y); };
            return detail::convolve_1d(f, {}, 2.0 * std::sqrt(g->t0), x[0], t);
        }
        RadialDatum r{[g](double rho) { return (*g)(rho * rho); }, d, 2.0 * std::sqrt(g->t0)};
        return convolve_oracle(InitialDatum{r}, x, t);
    }

    if (auto* f = std::get_if<Generic1DDatum>(&u0)) {
        return detail::convolve_1d(f->fn, f->breakpoints, f->length_scale, x[0], t);
    }

    const auto& rad = std::get<RadialDatum>(u0);
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    const double r = std::sqrt(r2);
    auto integrand = [&](double rho) {
        const double v = rad.profile(rho);
        if (v == 0.0) return 0.0;
        return std::pow(rho, d - 1) * v * detail::spherical_kernel(d, r, rho, t);
    };
    auto opt = detail::oracle_tail_options(std::min(rad.length_scale, 2.0 * std::sqrt(t)));
    opt.min_extent = r + 8.0 * std::sqrt(t) + rad.length_scale;
    auto res = integrate_beyond(integrand, 0.0, +1, {r}, opt);
    if (!res.converged) throw IntegrabilityError("convolve_oracle: radial integral did not converge");
    return res.value;
}

/// Reference solution used for error measurement.
inline double reference_solution(const InitialDatum& u0, const std::vector<double>& x, double t) {
    if (auto* g = std::get_if<GaussianDatum>(&u0)) return exact_gaussian_solution(g->amplitude, g->t0, g->dim, x, t);
    return convolve_oracle(u0, x, t);
}

namespace detail {

// Extra degrees needed for sum_{j > K} of the Gaussian series to fall 12
// orders below the degree-K term; 0 when the tail representation is not used.
inline int tail_extension(const InitialDatum& u0, double t, int kmax) {
    const auto* g = std::get_if<GaussianDatum>(&u0);
    if (!g || !(t > g->t0)) return 0;
    const double q = g->t0 / t;
    if (std::pow(q, 0.5 * (kmax + 1)) > 1e-11) return 0;
    const int ext = static_cast<int>(std::ceil(2.0 * std::log(1e-12) / std::log(q))) + 4;
    return std::min(ext, kMaxRecurrenceDegree - kmax);
}

}  // namespace detail

/// max over grid nodes of |u(x,t) - u_k(x,t)| for every k = 0..kmax, from a
/// single series evaluation per node.
///
/// For Gaussian data with t > t0 the series converges to u, and once the
/// errors drop below double resolution of u itself they are measured as the
/// tail sum_{kmax < j <= K} of the degree blocks instead of a difference of
/// two nearly equal numbers.
inline std::vector<double> sup_errors(const InitialDatum& u0, const MomentTable& table, double t, int kmax,
                                      const GridSpec& grid) {
    grid.validate();
    if (grid.dim != table.dim() || dim_of(u0) != table.dim()) {
        throw std::invalid_argument("sup_errors: grid, datum and table dimensions must agree");
    }
    if (kmax > table.kmax()) throw std::domain_error("sup_errors: kmax exceeds the moment table");
    const int ext = detail::tail_extension(u0, t, kmax);
    const bool tail_mode = ext > 0;
    const MomentTable extended =
        tail_mode ? build_moment_table(u0, kmax + ext) : MomentTable(table.dim(), 0);
    const HermiteSeries series(tail_mode ? extended : table, t, kmax + ext);

    std::vector<HermiteSeries::Axis> axes;
    axes.reserve(grid.points);
    for (int i = 0; i < grid.points; ++i) axes.push_back(series.axis(grid.node(i)));

    std::vector<double> worst(static_cast<std::size_t>(kmax) + 1, 0.0);
    std::vector<double> x(grid.dim);
    std::vector<const HermiteSeries::Axis*> ax(grid.dim);
    auto visit = [&] {
        const auto res = series.evaluate(ax);
        if (tail_mode) {
            const auto tails = res.suffix_values();
            for (int k = 0; k <= kmax; ++k) worst[k] = std::max(worst[k], std::fabs(tails[k]));
        } else {
            const double ref = reference_solution(u0, x, t);
            const auto prefixes = res.prefix_values();
            for (int k = 0; k <= kmax; ++k) worst[k] = std::max(worst[k], std::fabs(ref - prefixes[k]));
        }
    };
    if (grid.dim == 1) {
        for (int i = 0; i < grid.points; ++i) {
            x[0] = grid.node(i);
            ax[0] = &axes[i];
            visit();
        }
    } else {
        for (int i = 0; i < grid.points; ++i) {
            x[0] = grid.node(i);
            ax[0] = &axes[i];
            for (int j = 0; j < grid.points; ++j) {
                x[1] = grid.node(j);
                ax[1] = &axes[j];
                visit();
            }
        }
    }
    return worst;
}

/// max over grid nodes of |u - u_k| at the configured k.
inline double sup_error(const InitialDatum& u0, const MomentTable& table, const ApproxConfig& cfg,
                        const GridSpec& grid) {
    cfg.validate();
    return sup_errors(u0, table, cfg.t, cfg.k, grid).back();
}

struct ErrorCurveRow {
    int k = 0;
    double sup_error = 0.0;
    double F_k = 0.0;
    std::optional<double> G_k;
    std::optional<double> lb;
    std::optional<double> ratio;  ///< sup_error(k+2) / sup_error(k)
};

struct ErrorCurve {
    int dim = 1;
    double t = 1.0;
    std::vector<ErrorCurveRow> rows;
};

/// Error curve over k = 0..kmax (even k only unless all_k). The table must
/// reach degree kmax+1 for F(kmax).
inline ErrorCurve error_curve(const InitialDatum& u0, const MomentTable& table, double t, int kmax,
                              const GridSpec& grid, bool all_k = false) {
    if (table.kmax() < kmax + 1) {
        throw std::domain_error("error_curve: moment table must reach degree kmax+1 = " + std::to_string(kmax + 1));
    }
    const int d = table.dim();
    const auto errs = sup_errors(u0, table, t, kmax, grid);
    const GaussianDatum* g = std::get_if<GaussianDatum>(&u0);

    ErrorCurve curve{d, t, {}};
    const int step = all_k ? 1 : 2;
    for (int k = 0; k <= kmax; k += step) {
        ErrorCurveRow row;
        row.k = k;
        row.sup_error = errs[k];
        const ApproxConfig cfg{d, k, t};
        row.F_k = error_bound_F(table, cfg).to_double();
        if (g) {
            row.G_k = envelope_bound_G(g->amplitude, g->t0, cfg).to_double();
            if (d >= 2 && t < g->t0) row.lb = divergence_lower_bound(g->amplitude, g->t0, cfg).value.to_double();
        }
        if (k + 2 <= kmax && errs[k] > 0.0) row.ratio = errs[k + 2] / errs[k];
        curve.rows.push_back(row);
    }
    return curve;
}

}  // namespace heatseries
