#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) quadrature, plus helpers for
// half-lines and the real line that grow the integration range until the
// tail is negligible.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatseries {

/// Raised when an integral does not settle: the integrand is not integrable
/// with the assumed weight, or its tail never becomes negligible.
class IntegrabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    int evaluations = 0;
};

struct QuadOptions {
    double abs_tol = 1e-300;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

namespace detail {

inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208005250818, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7, 9.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gauss_kronrod21(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[10];
    double gauss = 0.0;
    double resabs = std::fabs(kronrod);
    std::array<double, 10> f1{}, f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kKronrodNodes[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        const double pair = f1[j] + f2[j];
        kronrod += kKronrodWeights[j] * pair;
        resabs += kKronrodWeights[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double resasc = kKronrodWeights[10] * std::fabs(fc - mean);
    for (int j = 0; j < 10; ++j) {
        resasc += kKronrodWeights[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));
    }
    const double scale = std::fabs(half);
    resasc *= scale;
    resabs *= scale;
    double err = std::fabs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    return {a, b, kronrod * half, err};
}

}  // namespace detail

/// Adaptive integral of f over [a, b]. Interior breakpoints (discontinuities,
/// peaks) may be supplied; points outside (a, b) are ignored.
template <typename F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {},
                     std::vector<double> breakpoints = {}) {
    QuadResult out;
    if (a == b) return out;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    int evals = 0;
    auto counted = [&](double x) {
        ++evals;
        return f(x);
    };

    std::vector<double> cuts{a};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double p : breakpoints) {
        if (p > a && p < b && p > cuts.back()) cuts.push_back(p);
    }
    cuts.push_back(b);

    std::priority_queue<detail::Panel> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto p = detail::gauss_kronrod21(counted, cuts[i], cuts[i + 1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }

    int intervals = static_cast<int>(heap.size());
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total))) {
        if (intervals >= opt.max_intervals) {
            out.converged = false;
            break;
        }
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            out.converged = false;  // interval cannot be split further
            break;
        }
        heap.pop();
        auto left = detail::gauss_kronrod21(counted, worst.a, mid);
        auto right = detail::gauss_kronrod21(counted, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }

    // Re-sum from the panels to shed accumulated update rounding.
    double value = 0.0, err = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = sign * value;
    out.error = err;
    out.evaluations = evals;
    if (!std::isfinite(out.value)) out.converged = false;
    return out;
}

struct TailOptions {
    QuadOptions quad{};
    double initial_width = 1.0;  ///< width of the first shell
    double min_extent = 0.0;     ///< never stop before reaching this distance
    int max_shells = 60;
};

/// Integral of f over [a, a + dir*inf), dir = +1 or -1. Shells of doubling
/// width are added until two consecutive shells fall below the tolerance
/// relative to the running total.
template <typename F>
QuadResult integrate_half_line(F&& f, double a, int dir, const TailOptions& opt = {}) {
    QuadResult out;
    double lo = 0.0;
    double width = opt.initial_width;
    int quiet = 0;
    for (int shell = 0; shell < opt.max_shells; ++shell) {
        const double hi = lo + width;
        auto piece = integrate(f, a + dir * lo, a + dir * hi, opt.quad);
        if (dir < 0) piece.value = -piece.value;
        out.value += piece.value;
        out.error += piece.error;
        out.evaluations += piece.evaluations;
        out.converged = out.converged && piece.converged;
        if (!std::isfinite(out.value)) {
            throw IntegrabilityError("integral over half line is not finite");
        }
        const double tol = std::max(opt.quad.abs_tol, opt.quad.rel_tol * std::fabs(out.value));
        quiet = (std::fabs(piece.value) <= tol) ? quiet + 1 : 0;
        if (quiet >= 2 && hi >= opt.min_extent) return out;
        lo = hi;
        width *= 2.0;
    }
    throw IntegrabilityError("integral over half line did not settle within " +
                             std::to_string(opt.max_shells) + " shells");
}

/// Like integrate_half_line, but the stretch out to the farthest breakpoint
/// in direction `dir` is integrated first with those breakpoints split exactly.
template <typename F>
QuadResult integrate_beyond(F&& f, double a, int dir, const std::vector<double>& breakpoints,
                            const TailOptions& opt = {}) {
    double reach = a;
    std::vector<double> inside;
    for (double b : breakpoints) {
        if ((b - a) * dir > 0.0) {
            inside.push_back(b);
            if ((b - reach) * dir > 0.0) reach = b;
        }
    }
    QuadResult out;
    if (reach != a) {
        out = integrate(f, a, reach, opt.quad, inside);
        if (dir < 0) out.value = -out.value;
    }
    auto tail = integrate_half_line(f, reach, dir, opt);
    out.value += tail.value;
    out.error += tail.error;
    out.evaluations += tail.evaluations;
    out.converged = out.converged && tail.converged;
    return out;
}

/// Integral of f over the real line, split at `center`.
template <typename F>
QuadResult integrate_real_line(F&& f, double center = 0.0, const TailOptions& opt = {}) {
    auto right = integrate_half_line(f, center, +1, opt);
    auto left = integrate_half_line(f, center, -1, opt);
    QuadResult out;
    out.value = left.value + right.value;
    out.error = left.error + right.error;
    out.evaluations = left.evaluations + right.evaluations;
    out.converged = left.converged && right.converged;
    return out;
}

}  // namespace heatseries
