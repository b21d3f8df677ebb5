#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "heatseries/bounds.hpp"
#include "heatseries/reference.hpp"

using namespace heatseries;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

// erf by its Maclaurin series (|z| small) or the continued-fraction tail.
double erf_series(double z) {
    if (std::fabs(z) < 3.0) {
        long double sum = 0.0L, term = z;
        for (int n = 0; n < 200; ++n) {
            sum += term / (2 * n + 1);
            term *= -static_cast<long double>(z) * z / (n + 1);
            if (std::fabs(static_cast<double>(term)) < 1e-22) break;
        }
        return static_cast<double>(2.0L / std::sqrt(static_cast<long double>(kPi)) * sum);
    }
    // erfc(z) = e^{-z^2}/sqrt(pi) * 1/(z + 1/2/(z + 1/(z + 3/2/(z + ...))))
    double f = z;
    for (int n = 60; n >= 1; --n) f = z + (n / 2.0) / f;
    const double erfc = std::exp(-z * z) / std::sqrt(kPi) / f;
    return z > 0 ? 1.0 - erfc : erfc - 1.0;
}

Generic1DDatum indicator() {
    return Generic1DDatum{[](double x) { return std::fabs(x) <= 1.0 ? 1.0 : 0.0; }, true, {-1.0, 1.0}, 1.0};
}

}  // namespace

TEST(ExactGaussian, Examples) {
    EXPECT_EQ(exact_gaussian_solution(1.0, 1.0, 1, {0.0}, 0.0), 1.0);
    EXPECT_NEAR(exact_gaussian_solution(1.0, 1.0, 1, {0.0}, 1.0), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(exact_gaussian_solution(1.0, 1.0, 1, {0.0}, 1.0), 0.70711, 1e-5);
    EXPECT_LE(rel(exact_gaussian_solution(1.0, 1.0, 1, {0.0}, 1.0), convolve_oracle(GaussianDatum{1.0, 1.0, 1}, {0.0}, 1.0)), 1e-10);
    EXPECT_THROW(exact_gaussian_solution(1.0, 1.0, 1, {0.0}, -1.0), std::domain_error);
}

TEST(ExactGaussian, MassIsConserved) {
    TailOptions opt;
    opt.quad.rel_tol = 1e-13;
    opt.min_extent = 10.0;
    for (double t : {0.0, 0.5, 3.0}) {
        const double m1 = integrate_real_line([&](double x) { return exact_gaussian_solution(1.5, 0.8, 1, {x}, t); }, 0.0, opt).value;
        EXPECT_NEAR(m1, 1.5 * std::sqrt(4.0 * kPi * 0.8), 1e-12);
        const double m2 = integrate_half_line([&](double r) { return 2.0 * kPi * r * exact_gaussian_solution(1.5, 0.8, 2, {r, 0.0}, t); },
                                              0.0, +1, opt)
                              .value;
        EXPECT_NEAR(m2, 1.5 * 4.0 * kPi * 0.8, 1e-11);
    }
}

TEST(ExactGaussian, SolvesTheHeatEquation) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ut(0.1, 4.0), ux(-3.0, 3.0);
    const double h = 1e-4;
    for (int i = 0; i < 20; ++i) {
        const double t = ut(rng), x = ux(rng), y = ux(rng);
        auto u = [&](double xx, double yy, double tt) { return exact_gaussian_solution(1.0, 1.0, 2, {xx, yy}, tt); };
        const double ut_fd = (u(x, y, t + h) - u(x, y, t - h)) / (2 * h);
        const double lap = (u(x + h, y, t) - 2 * u(x, y, t) + u(x - h, y, t)) / (h * h) +
                           (u(x, y + h, t) - 2 * u(x, y, t) + u(x, y - h, t)) / (h * h);
        EXPECT_LE(std::fabs(ut_fd - lap), 1e-6) << x << " " << y << " " << t;
    }
}

TEST(ConvolveOracle, MatchesClosedFormForGaussians) {
    for (int d : {1, 2, 3}) {
        const GaussianDatum g{1.0, 1.0, d};
        for (double t : {0.1, 1.0, 5.0}) {
            for (double r : {0.0, 0.8, 3.0, 9.0}) {
                std::vector<double> x(d, 0.0);
                x[0] = r;
                EXPECT_LE(rel(convolve_oracle(g, x, t), exact_gaussian_solution(1.0, 1.0, d, x, t)), 1e-9) << d << " " << t << " " << r;
            }
        }
    }
}

TEST(ConvolveOracle, IndicatorMatchesErf) {
    for (double t : {0.01, 0.5, 2.0}) {
        for (double x : {0.0, 0.5, 1.0, 2.5}) {
            const double root = 2.0 * std::sqrt(t);
            const double want = 0.5 * (erf_series((1.0 - x) / root) + erf_series((1.0 + x) / root));
            EXPECT_NEAR(convolve_oracle(indicator(), {x}, t), want, 1e-12) << t << " " << x;
        }
    }
}

TEST(ConvolveOracle, ApproximateIdentity) {
    EXPECT_NEAR(convolve_oracle(indicator(), {0.3}, 1e-6), 1.0, 1e-4);
    EXPECT_NEAR(convolve_oracle(indicator(), {1.7}, 1e-6), 0.0, 1e-4);
}

TEST(ConvolveOracle, SemigroupProperty) {
    const double s = 0.4, t = 0.7;
    for (bool gaussian : {true, false}) {
        const InitialDatum u0 = gaussian ? InitialDatum{GaussianDatum{1.0, 1.0, 1}} : InitialDatum{indicator()};
        Generic1DDatum at_s{[&](double y) { return convolve_oracle(u0, {y}, s); }, true, {}, 1.0};
        for (double x : {0.0, 0.9, 2.0}) {
            const double direct = convolve_oracle(u0, {x}, s + t);
            const double two_step = convolve_oracle(at_s, {x}, t);
            EXPECT_LE(rel(direct, two_step), 1e-8) << gaussian << " " << x;
        }
    }
}

TEST(ConvolveOracle, PreservesPositivity) {
    const GridSpec grid{1, 6.0, 61};
    for (double t : {1e-3, 0.2, 3.0}) {
        for (int i = 0; i < grid.points; ++i) EXPECT_GE(convolve_oracle(indicator(), {grid.node(i)}, t), 0.0);
    }
    const RadialDatum bump{[](double r) { return r < 1.0 ? 1.0 - r * r : 0.0; }, 2, 1.0};
    for (int i = 0; i < 21; ++i) EXPECT_GE(convolve_oracle(bump, {0.3 * i, 0.1}, 0.05), 0.0);
}

TEST(ConvolveOracle, RadialMatchesTensorQuadratureInTwoDimensions) {
    const RadialDatum u0{[](double r) { return std::exp(-r) * (1.0 + r); }, 2, 1.0};
    const double t = 0.6;
    const std::vector<double> x{0.7, -0.4};
    QuadOptions q;
    q.rel_tol = 1e-11;
    auto inner = [&](double y1) {
        auto f = [&](double y2) {
            const double r = std::hypot(y1, y2);
            const double dx = x[0] - y1, dy = x[1] - y2;
            return u0.profile(r) * std::exp(-(dx * dx + dy * dy) / (4 * t)) / (4 * kPi * t);
        };
        return integrate(f, -40.0, 40.0, q, {0.0, x[1]}).value;
    };
    const double tensor = integrate(inner, -40.0, 40.0, q, {0.0, x[0]}).value;
    EXPECT_LE(rel(convolve_oracle(u0, x, t), tensor), 1e-9);
}

TEST(Grid, Shape) {
    const auto g = default_grid(1, 4.0, 1.0);
    EXPECT_DOUBLE_EQ(g.extent, 16.0 * 2.0 + 4.0);
    EXPECT_EQ(g.points, 801);
    EXPECT_EQ(g.node(400), 0.0);
    EXPECT_THROW((GridSpec{1, 1.0, 10}.validate()), std::domain_error);
    EXPECT_THROW((GridSpec{3, 1.0, 11}.validate()), std::domain_error);
}

TEST(SupError, KZeroBoundedByF) {
    const GaussianDatum u0{1.0, 1.0, 1};
    const auto table = build_moment_table(u0, 1);
    const double e = sup_error(u0, table, ApproxConfig{1, 0, 2.0}, default_grid(1, 2.0, 1.0));
    EXPECT_GT(e, 0.0);
    EXPECT_LE(e, error_bound_F(table, ApproxConfig{1, 0, 2.0}).to_double());
}

TEST(SupError, Example40AtTwiceT0) {
    const GaussianDatum u0{1.0, 1.0, 1};
    const auto table = build_moment_table(u0, 41);
    const double e = sup_error(u0, table, ApproxConfig{1, 40, 2.0}, GridSpec{1, 10.0, 801});
    EXPECT_LE(e, error_bound_F(table, ApproxConfig{1, 40, 2.0}).to_double());
}

TEST(SupError, KernelSliceDataConverges) {
    // u0 = G(., s): the solution is G(., s + t) and u_k -> u quickly for t >> s.
    const double s = 0.25;
    const GaussianDatum u0{1.0 / std::sqrt(4.0 * kPi * s), s, 1};
    const auto table = build_moment_table(u0, 20);
    const auto errs = sup_errors(u0, table, 4.0, 20, default_grid(1, 4.0, s));
    for (int k = 2; k <= 20; k += 2) EXPECT_LT(errs[k], errs[k - 2]) << k;
    EXPECT_LT(errs[20], 1e-12);
}

TEST(SupError, TailMeasurementAgreesWithDirectDifference) {
    // At t = 4 t0 the errors for large k fall below double resolution of u,
    // so sup_errors measures them from the series tail. Where the direct
    // difference is still resolvable the two must agree.
    const GaussianDatum u0{1.0, 1.0, 1};
    const auto table = build_moment_table(u0, 60);
    const GridSpec grid{1, 30.0, 301};
    const auto errs = sup_errors(u0, table, 4.0, 60, grid);
    const HermiteSeries series(table, 4.0, 60);
    std::vector<double> direct(61, 0.0);
    for (int i = 0; i < grid.points; ++i) {
        const double x = grid.node(i);
        const auto pre = series.evaluate(std::vector<double>{x}).prefix_values();
        const double ref = exact_gaussian_solution(1.0, 1.0, 1, {x}, 4.0);
        for (int k = 0; k <= 60; ++k) direct[k] = std::max(direct[k], std::fabs(ref - pre[k]));
    }
    for (int k = 0; k <= 60; k += 2) {
        if (direct[k] > 1e-12) EXPECT_LE(rel(errs[k], direct[k]), 1e-3) << k;
        else EXPECT_LE(errs[k], 1e-12) << k;
    }
    EXPECT_LT(errs[60], 1e-16);
    EXPECT_GT(errs[60], 0.0);
}

TEST(ErrorCurve, RowsAndOptionalFields) {
    const GaussianDatum u0{1.0, 1.0, 2};
    const auto table = build_moment_table(u0, 11);
    const auto below = error_curve(u0, table, 0.5, 10, GridSpec{2, 8.0, 41});
    ASSERT_EQ(below.rows.size(), 6u);
    for (const auto& r : below.rows) {
        EXPECT_TRUE(r.G_k.has_value());
        EXPECT_TRUE(r.lb.has_value());
        EXPECT_EQ(r.ratio.has_value(), r.k + 2 <= 10);
    }
    const auto above = error_curve(u0, table, 2.0, 10, GridSpec{2, 8.0, 41}, true);
    ASSERT_EQ(above.rows.size(), 11u);
    for (const auto& r : above.rows) EXPECT_FALSE(r.lb.has_value());
    EXPECT_THROW(error_curve(u0, table, 2.0, 11, GridSpec{2, 8.0, 41}), std::domain_error);

    const auto single = error_curve(GaussianDatum{1.0, 1.0, 1}, build_moment_table(GaussianDatum{1.0, 1.0, 1}, 1), 2.0, 0,
                                    GridSpec{1, 10.0, 101});
    ASSERT_EQ(single.rows.size(), 1u);
    EXPECT_FALSE(single.rows[0].ratio.has_value());
}

TEST(ErrorCurve, SlowRegimeBoundedByEnvelope) {
    const GaussianDatum u0{1.0, 1.0, 1};
    const auto table = build_moment_table(u0, 61);
    const auto curve = error_curve(u0, table, 1.0, 60, default_grid(1, 1.0, 1.0));
    for (const auto& r : curve.rows) {
        EXPECT_LE(r.sup_error, std::pow(r.k + 2.0, -1.0 / 12.0));
        EXPECT_LE(r.sup_error, r.F_k);
    }
    EXPECT_LT(curve.rows.back().sup_error, curve.rows.front().sup_error);
}

TEST(ErrorCurve, DivergentRegimeGrows) {
    const GaussianDatum u0{1.0, 1.0, 1};
    const auto table = build_moment_table(u0, 61);
    const auto curve = error_curve(u0, table, 0.5, 60, default_grid(1, 1.0, 1.0));
    EXPECT_GT(curve.rows.back().sup_error, 1e6);
}

TEST(ErrorCurve, RatioTrendsToHalf) {
    const GaussianDatum u0{1.0, 1.0, 1};
    const auto table = build_moment_table(u0, 41);
    const auto curve = error_curve(u0, table, 2.0, 40, default_grid(1, 2.0, 1.0));
    const auto& late = curve.rows[curve.rows.size() - 2];
    ASSERT_TRUE(late.ratio.has_value());
    EXPECT_NEAR(*late.ratio, 0.5, 0.1);
}
