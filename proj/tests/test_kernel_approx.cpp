#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "heatseries/bounds.hpp"
#include "heatseries/kernel_approx.hpp"
#include "heatseries/moments.hpp"

using namespace heatseries;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

double largest_block(const ApproxResult& r) {
    double m = 0.0;
    for (const auto& p : r.partials) m = std::max(m, std::fabs(p.to_double()));
    return m;
}

// Degree-j block straight from the derivative form:
//   sum_{|a|=j} (-1)^j m_a/a! D^a G(x,t), reduced in SignedLog.
SignedLog block_from_derivatives(const MomentTable& table, int j, const std::vector<double>& x, double t) {
    std::vector<SignedLog> terms;
    for_each_composition(j, table.dim(), [&](const MultiIndex& a) {
        const auto m = table.moment(a);
        if (m.is_zero()) return;
        SignedLog term = m * kernel_derivative(a, x, t) * SignedLog{1, -a.log_factorial()};
        if (j % 2) term = -term;
        terms.push_back(term);
    });
    return aligned_sum(terms);
}

}  // namespace

TEST(HeatKernel, Examples) {
    EXPECT_NEAR(heat_kernel({0.0}, 1.0 / (4.0 * kPi)), 1.0, 1e-15);
    EXPECT_NEAR(heat_kernel({0.0, 0.0}, 1.0), 1.0 / (4.0 * kPi), 1e-16);
    double prev = heat_kernel({0.0}, 1.0);
    for (int i = 1; i <= 100; ++i) {
        const double v = heat_kernel({0.5 * i}, 1.0);
        EXPECT_LE(v, prev);
        prev = v;
    }
    EXPECT_NEAR(std::log(prev), -625.0 - 0.5 * std::log(4.0 * kPi), 1e-12);
    EXPECT_EQ(heat_kernel({80.0}, 1.0), 0.0);
    EXPECT_THROW(heat_kernel({0.0}, 0.0), std::domain_error);
}

TEST(KernelDerivative, Examples) {
    EXPECT_NEAR(kernel_derivative(MultiIndex{0}, {0.0}, 1.0).to_double(), 1.0 / std::sqrt(4.0 * kPi), 1e-15);
    EXPECT_TRUE(kernel_derivative(MultiIndex{1}, {0.0}, 3.0).is_zero());
    EXPECT_NEAR(kernel_derivative(MultiIndex{2}, {0.0}, 1.0).to_double(), -2.0 / (8.0 * std::sqrt(kPi)), 1e-15);
}

TEST(KernelDerivative, MatchesRichardsonFiniteDifferences) {
    auto G = [](double x) { return heat_kernel({x}, 1.0); };
    auto d2 = [&](double x, double h) { return (G(x + h) - 2.0 * G(x) + G(x - h)) / (h * h); };
    auto d1 = [&](double x, double h) { return (G(x + h) - G(x - h)) / (2.0 * h); };
    for (double x : {0.0, 0.7, -1.9}) {
        const double h = 1e-3;
        const double second = (4.0 * d2(x, h / 2) - d2(x, h)) / 3.0;
        const double first = (4.0 * d1(x, h / 2) - d1(x, h)) / 3.0;
        EXPECT_NEAR(kernel_derivative(MultiIndex{2}, {x}, 1.0).to_double(), second, 1e-8);
        EXPECT_NEAR(kernel_derivative(MultiIndex{1}, {x}, 1.0).to_double(), first, 1e-10);
    }
    // Mixed derivative in 2D.
    auto G2 = [](double x, double y) { return heat_kernel({x, y}, 0.5); };
    const double h = 1e-4, x = 0.3, y = -0.4;
    const double mixed = (G2(x + h, y + h) - G2(x + h, y - h) - G2(x - h, y + h) + G2(x - h, y - h)) / (4 * h * h);
    EXPECT_NEAR(kernel_derivative(MultiIndex({1, 1}), {x, y}, 0.5).to_double(), mixed, 1e-6);
}

TEST(KernelDerivative, ScalingSelfSimilarity) {
    for (auto a : {MultiIndex{0}, MultiIndex{3}, MultiIndex({2, 1}), MultiIndex({4, 0, 2})}) {
        std::vector<double> x(a.dim(), 0.35);
        x[0] = -0.8;
        for (double lam : {0.5, 2.0}) {
            std::vector<double> lx = x;
            for (double& v : lx) v *= lam;
            const double lhs = kernel_derivative(a, lx, lam * lam * 1.3).to_double();
            const double rhs = std::pow(lam, -(a.degree() + a.dim())) * kernel_derivative(a, x, 1.3).to_double();
            EXPECT_LE(rel(lhs, rhs), 1e-11);
        }
    }
}

TEST(EvalUk, KZeroIsMassTimesKernel) {
    const auto table = build_moment_table(GaussianDatum{1.0, 1.0, 1}, 4);
    EXPECT_NEAR(eval_uk(table, ApproxConfig{1, 0, 4.0}, {0.0}).value, 0.5, 1e-15);
    for (double x : {-3.0, 0.5, 7.0}) {
        EXPECT_LE(rel(eval_uk(table, ApproxConfig{1, 0, 2.0}, {x}).value, 2.0 * std::sqrt(kPi) * heat_kernel({x}, 2.0)), 1e-14);
    }
}

TEST(EvalUk, OddDegreesContributeNothingForSymmetricData) {
    for (int d : {1, 2}) {
        const auto table = build_moment_table(GaussianDatum{1.0, 1.0, d}, 12);
        std::vector<double> x(d, 0.0);
        x[0] = 0.9;
        for (int k = 0; k + 1 <= 12; k += 2) {
            const auto odd = eval_uk(table, ApproxConfig{d, k + 1, 1.5}, x);
            EXPECT_TRUE(odd.partials[k + 1].is_zero());
            EXPECT_LE(rel(eval_uk(table, ApproxConfig{d, k, 1.5}, x).value, odd.value), 1e-13);
        }
    }
}

TEST(EvalUk, ValueEqualsSumOfPartials) {
    const auto table = build_moment_table(GaussianDatum{1.0, 1.0, 2}, 40);
    for (double t : {0.5, 2.0}) {
        const auto r = eval_uk(table, ApproxConfig{2, 40, t}, {0.4, -1.2});
        double s = 0.0;
        for (const auto& p : r.partials) s += p.to_double();
        EXPECT_LE(std::fabs(r.value - s), 1e-12 * largest_block(r));
        EXPECT_EQ(r.partials.size(), 41u);
    }
}

TEST(EvalUk, BlocksMatchDerivativeForm) {
    for (int d : {1, 2, 3}) {
        const auto table = build_moment_table(GaussianDatum{1.3, 0.7, d}, 10);
        std::vector<double> x(d, -0.6);
        x[0] = 1.1;
        const auto r = eval_uk(table, ApproxConfig{d, 10, 0.9}, x);
        for (int j = 0; j <= 10; ++j) {
            const auto want = block_from_derivatives(table, j, x, 0.9);
            if (want.is_zero()) {
                EXPECT_TRUE(r.partials[j].is_zero());
                continue;
            }
            EXPECT_EQ(r.partials[j].sign, want.sign);
            EXPECT_NEAR(r.partials[j].logmag, want.logmag, 1e-11) << d << " " << j;
        }
    }
}

TEST(EvalUk, FarFieldStaysRepresentable) {
    // At |x| = 80, t = 1 the weight e^{-1600} underflows doubles; the blocks
    // must still match the SignedLog derivative form.
    const auto table = build_moment_table(GaussianDatum{1.0, 1.0, 1}, 30);
    const auto r = eval_uk(table, ApproxConfig{1, 30, 1.0}, {80.0});
    for (int j = 0; j <= 30; j += 2) {
        const auto want = block_from_derivatives(table, j, {80.0}, 1.0);
        EXPECT_EQ(r.partials[j].sign, want.sign);
        EXPECT_NEAR(r.partials[j].logmag, want.logmag, 1e-10) << j;
    }
    EXPECT_LT(r.value_sl.logmag, -1500.0);
}

TEST(EvalUk, Linearity) {
    const auto U = build_moment_table(GaussianDatum{1.0, 1.0, 1}, 20);
    const auto V = build_moment_table(Generic1DDatum{[](double x) { return x > 0 ? x * std::exp(-x) : 0.0; }, true, {0.0}, 1.0}, 20);
    const auto W = combine(2.0, U, -0.5, V);
    for (double x : {-2.0, 0.0, 1.3, 4.0}) {
        for (int k : {0, 5, 20}) {
            const ApproxConfig cfg{1, k, 1.7};
            const auto a = eval_uk(U, cfg, {x}), b = eval_uk(V, cfg, {x});
            const double want = 2.0 * a.value - 0.5 * b.value;
            const double scale = std::max({std::fabs(want), 2.0 * largest_block(a), 0.5 * largest_block(b)});
            EXPECT_LE(std::fabs(eval_uk(W, cfg, {x}).value - want), 1e-12 * scale) << x << " " << k;
        }
    }
}

TEST(EvalUk, TruncationAboveTableThrows) {
    const auto table = build_moment_table(GaussianDatum{1.0, 1.0, 1}, 4);
    EXPECT_THROW(eval_uk(table, ApproxConfig{1, 5, 1.0}, {0.0}), std::domain_error);
    EXPECT_THROW(eval_uk(table, ApproxConfig{1, 2, -1.0}, {0.0}), std::domain_error);
    EXPECT_THROW(eval_uk(table, ApproxConfig{1, 2, 1.0}, {0.0, 0.0}), std::invalid_argument);
}

TEST(RadialForm, OriginExamples) {
    const auto t2 = build_moment_table(GaussianDatum{1.0, 1.0, 2}, 3);
    const ApproxConfig c0{2, 0, 1.0};
    EXPECT_LE(rel(eval_uk_radial_origin(t2, c0, 0.0).value, eval_uk(t2, c0, {0.0, 0.0}).value), 1e-13);
    EXPECT_EQ(eval_uk_radial_origin(t2, ApproxConfig{2, 2, 0.7}, 0.0).value,
              eval_uk_radial_origin(t2, ApproxConfig{2, 3, 0.7}, 0.0).value);

    const auto t3 = build_moment_table(GaussianDatum{1.0, 1.0, 3}, 20);
    const ApproxConfig c3{3, 20, 0.5};
    const auto lb = divergence_lower_bound(1.0, 1.0, c3);
    EXPECT_GE(std::fabs(eval_uk_radial_origin(t3, c3, 0.0).value), lb.value.to_double());
}

TEST(RadialForm, AgreesWithHermiteProduct) {
    for (int d : {2, 3}) {
        const auto table = build_moment_table(GaussianDatum{1.0, 1.0, d}, 60);
        for (double t : {0.5, 1.0, 2.0}) {
            for (int k = 0; k <= 60; k += 2) {
                for (double r : {0.0, 0.5, 1.0, 2.0}) {
                    std::vector<double> x(d, 0.0);
                    x[d - 1] = r;
                    const ApproxConfig cfg{d, k, t};
                    const auto a = eval_uk(table, cfg, x);
                    const auto b = eval_uk_radial_origin(table, cfg, r);
                    // u_k can cancel to zero exactly, so scale by the largest block too.
                    const double scale = std::max({std::fabs(a.value), std::fabs(b.value), largest_block(a)});
                    EXPECT_LE(std::fabs(a.value - b.value), 1e-9 * scale) << d << " " << t << " " << k << " " << r;
                }
            }
        }
    }
}

TEST(RadialForm, RejectsNonGaussianTables) {
    const auto rad = build_moment_table(RadialDatum{[](double r) { return std::exp(-r); }, 2, 1.0}, 2);
    EXPECT_THROW(eval_uk_radial_origin(rad, ApproxConfig{2, 2, 1.0}, 0.0), UnsupportedVariant);
    const auto one = build_moment_table(GaussianDatum{1.0, 1.0, 1}, 2);
    EXPECT_THROW(eval_uk_radial_origin(one, ApproxConfig{1, 2, 1.0}, 0.0), std::domain_error);
}

TEST(HermiteSeries, SuffixAndPrefixPartitionTheTotal) {
    const auto table = build_moment_table(GaussianDatum{1.0, 1.0, 1}, 30);
    const auto r = HermiteSeries(table, 3.0, 30).evaluate(std::vector<double>{1.4});
    const auto pre = r.prefix_values();
    const auto suf = r.suffix_values();
    for (int k = 0; k <= 30; ++k) EXPECT_NEAR(pre[k] + suf[k], r.value, 1e-15);
    EXPECT_EQ(suf[30], 0.0);
}
