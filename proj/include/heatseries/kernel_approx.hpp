#pragma once

// The truncated approximation
//   u_k(x,t) = sum_{|a|<=k} (-1)^|a|/a! (int y^a u0) D^a G(x,t)
//            = pi^{-d/2} e^{-|x|^2/4t} sum_{|a|<=k} m_a/a! (4t)^{-(|a|+d)/2} prod H_{a_i}(x_i/2sqrt t)
// evaluated degree by degree so each degree block can be inspected.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatseries/moments.hpp"
#include "heatseries/multi_index.hpp"
#include "heatseries/signed_log.hpp"
#include "heatseries/specfun.hpp"

namespace heatseries {

struct ApproxConfig {
    int dim = 1;
    int k = 0;
    double t = 1.0;

    void validate() const {
        if (dim < 1) throw std::domain_error("ApproxConfig: dimension must be >= 1");
        if (k < 0) throw std::domain_error("ApproxConfig: truncation order must be >= 0");
        if (!(t > 0.0)) throw std::domain_error("ApproxConfig: time must be positive");
    }
};

/// Value of u_k plus the contribution of each total degree j = 0..k.
struct ApproxResult {
    double value = 0.0;
    SignedLog value_sl;
    std::vector<SignedLog> partials;  ///< partials[j] = degree-j block

    /// u_j for every j <= partials.size()-1, by one compensated running sum
    /// over the blocks aligned to the largest one.
    std::vector<double> prefix_values() const {
        double top = -std::numeric_limits<double>::infinity();
        for (const auto& p : partials) {
            if (!p.is_zero()) top = std::max(top, p.logmag);
        }
        std::vector<double> out(partials.size(), 0.0);
        if (!std::isfinite(top)) return out;
        CompensatedSum acc;
        const double rescale = std::exp(top);
        for (std::size_t j = 0; j < partials.size(); ++j) {
            if (!partials[j].is_zero()) acc.add(partials[j].sign * std::exp(partials[j].logmag - top));
            out[j] = acc.value() * rescale;
        }
        return out;
    }

    /// sum_{j > k} partials[j] for every k, accumulated from the top degree
    /// down so small tails keep full relative precision.
    std::vector<double> suffix_values() const {
        double top = -std::numeric_limits<double>::infinity();
        for (const auto& p : partials) {
            if (!p.is_zero()) top = std::max(top, p.logmag);
        }
        std::vector<double> out(partials.size(), 0.0);
        if (!std::isfinite(top)) return out;
        CompensatedSum acc;
        const double rescale = std::exp(top);
        for (std::size_t j = partials.size(); j-- > 0;) {
            out[j] = acc.value() * rescale;
            if (!partials[j].is_zero()) acc.add(partials[j].sign * std::exp(partials[j].logmag - top));
        }
        return out;
    }
};

/// Heat kernel G(x,t) = (4 pi t)^{-d/2} exp(-|x|^2/4t).
inline double heat_kernel(const std::vector<double>& x, double t) {
    if (!(t > 0.0)) throw std::domain_error("heat_kernel: time must be positive");
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    const double d = static_cast<double>(x.size());
    return std::pow(4.0 * std::numbers::pi * t, -0.5 * d) * std::exp(-r2 / (4.0 * t));
}

/// D^alpha G(x,t) = pi^{-d/2} (4t)^{-(|a|+d)/2} (-1)^|a| prod H_{a_i}(y_i) e^{-y_i^2},  y = x/(2 sqrt t).
inline SignedLog kernel_derivative(const MultiIndex& alpha, const std::vector<double>& x, double t) {
    if (!(t > 0.0)) throw std::domain_error("kernel_derivative: time must be positive");
    const int d = alpha.dim();
    if (static_cast<int>(x.size()) != d) {
        throw std::invalid_argument("kernel_derivative: point dimension mismatch");
    }
    const double root = 2.0 * std::sqrt(t);
    SignedLog out{alpha.degree() % 2 == 0 ? 1 : -1,
                  -0.5 * d * std::log(std::numbers::pi) -
                      0.5 * (alpha.degree() + d) * std::log(4.0 * t)};
    for (int i = 0; i < d; ++i) out *= hermite_weighted(alpha[i], x[i] / root);
    return out;
}

/// Precomputed Hermite-product series for one moment table and time t.
/// Evaluating at many points reuses the coefficient work.
class HermiteSeries {
public:
    HermiteSeries(const MomentTable& table, double t, int kmax) : dim_(table.dim()), kmax_(kmax), t_(t) {
        if (!(t > 0.0)) throw std::domain_error("HermiteSeries: time must be positive");
        if (kmax < 0 || kmax > table.kmax()) {
            throw std::domain_error("HermiteSeries: truncation " + std::to_string(kmax) +
                                    " outside moment table range [0, " +
                                    std::to_string(table.kmax()) + "]");
        }
        blocks_.resize(static_cast<std::size_t>(kmax) + 1);
        const double log_pi = std::log(std::numbers::pi);
        const double log_4t = std::log(4.0 * t);
        for (const auto& [alpha, m] : table.entries()) {
            const int j = alpha.degree();
            if (j > kmax || m.is_zero()) continue;
            auto& blk = blocks_[j];
            blk.coeffs.push_back(SignedLog{m.sign, m.logmag - alpha.log_factorial() - 0.5 * dim_ * log_pi -
                                                       0.5 * (j + dim_) * log_4t});
            blk.indices.insert(blk.indices.end(), alpha.components().begin(), alpha.components().end());
        }
        for (auto& blk : blocks_) {
            double top = -std::numeric_limits<double>::infinity();
            for (const auto& c : blk.coeffs) top = std::max(top, c.logmag);
            blk.log_scale = top;
            blk.scaled.reserve(blk.coeffs.size());
            for (const auto& c : blk.coeffs) blk.scaled.push_back(c.sign * std::exp(c.logmag - top));
        }
    }

    int dim() const { return dim_; }
    int kmax() const { return kmax_; }
    double time() const { return t_; }

    /// Weighted Hermite values H_n(y) e^{-y^2}, n = 0..kmax, y = x_i/(2 sqrt t),
    /// for one coordinate; `scaled` holds them relative to exp(log_scale).
    struct Axis {
        std::vector<SignedLog> weighted;
        std::vector<double> scaled;
        double log_scale = 0.0;
    };

    Axis axis(double xi) const {
        Axis a;
        a.weighted = hermite_weighted_all(kmax_, xi / (2.0 * std::sqrt(t_)));
        double top = -std::numeric_limits<double>::infinity();
        for (const auto& h : a.weighted) {
            if (!h.is_zero()) top = std::max(top, h.logmag);
        }
        a.log_scale = top;
        a.scaled.resize(a.weighted.size());
        for (std::size_t n = 0; n < a.weighted.size(); ++n) {
            const auto& h = a.weighted[n];
            a.scaled[n] = h.is_zero() ? 0.0 : h.sign * std::exp(h.logmag - top);
        }
        return a;
    }

    /// Per-degree blocks for j = 0..kmax at x; value is u_kmax(x,t).
    ApproxResult evaluate(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != dim_) {
            throw std::invalid_argument("HermiteSeries: point dimension mismatch");
        }
        std::vector<Axis> axes;
        axes.reserve(x.size());
        for (double xi : x) axes.push_back(axis(xi));
        std::vector<const Axis*> ptrs;
        for (const auto& a : axes) ptrs.push_back(&a);
        return evaluate(ptrs);
    }

    /// Same, from precomputed axis tables (one per coordinate).
    ApproxResult evaluate(const std::vector<const Axis*>& axes) const {
        if (static_cast<int>(axes.size()) != dim_) {
            throw std::invalid_argument("HermiteSeries: point dimension mismatch");
        }
        double axis_total = 0.0;
        for (const Axis* a : axes) axis_total += a->log_scale;

        ApproxResult out;
        out.partials.resize(blocks_.size());
        for (std::size_t j = 0; j < blocks_.size(); ++j) {
            const auto& blk = blocks_[j];
            if (blk.coeffs.empty()) continue;
            CompensatedSum acc;
            bool any_nonzero_term = false;
            const int* idx = blk.indices.data();
            for (std::size_t n = 0; n < blk.scaled.size(); ++n, idx += dim_) {
                double term = blk.scaled[n];
                bool zero_factor = false;
                for (int i = 0; i < dim_; ++i) {
                    if (axes[i]->weighted[idx[i]].is_zero()) zero_factor = true;
                    term *= axes[i]->scaled[idx[i]];
                }
                any_nonzero_term = any_nonzero_term || !zero_factor;
                acc.add(term);
            }
            const double s = acc.value();
            if (std::fabs(s) < 1e-250 && any_nonzero_term) {
                out.partials[j] = exact_block(blk, axes);
            } else {
                out.partials[j] = SignedLog::from_double(s) * SignedLog{1, blk.log_scale + axis_total};
            }
        }
        out.value_sl = aligned_sum(out.partials);
        out.value = out.value_sl.to_double();
        return out;
    }

private:
    struct Block {
        std::vector<SignedLog> coeffs;
        std::vector<double> scaled;  ///< coeffs relative to log_scale
        std::vector<int> indices;    ///< dim_ components per term, flattened
        double log_scale = 0.0;
    };

    // Term-by-term SignedLog evaluation; used when the scaled fast path
    // cannot resolve a block.
    SignedLog exact_block(const Block& blk, const std::vector<const Axis*>& axes) const {
        std::vector<SignedLog> terms;
        terms.reserve(blk.coeffs.size());
        const int* idx = blk.indices.data();
        for (std::size_t n = 0; n < blk.coeffs.size(); ++n, idx += dim_) {
            SignedLog term = blk.coeffs[n];
            for (int i = 0; i < dim_; ++i) term *= axes[i]->weighted[idx[i]];
            terms.push_back(term);
        }
        return aligned_sum(terms);
    }

    int dim_;
    int kmax_;
    double t_;
    std::vector<Block> blocks_;
};

/// u_k(x,t) from a moment table.
inline ApproxResult eval_uk(const MomentTable& table, const ApproxConfig& cfg, const std::vector<double>& x) {
    cfg.validate();
    if (cfg.dim != table.dim()) throw std::invalid_argument("eval_uk: table dimension mismatch");
    return HermiteSeries(table, cfg.t, cfg.k).evaluate(x);
}

/// Thrown when an operation needs a datum variant the table was not built from.
class UnsupportedVariant : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// u_k(x,t) at |x| = r for Gaussian data through the Laguerre radial form
///   (4 pi t)^{d/2} e^{r^2/4t} u_k = (C/2)(4t0)^{d/2} sum_{j even <= k} (-2t0/t)^{j/2}
///                                   Gamma((j+d)/2) C(j,d) L_{j/2}^{((d-2)/2)}(r^2/4t).
inline ApproxResult eval_uk_radial_origin(const MomentTable& table, const ApproxConfig& cfg, double r) {
    cfg.validate();
    if (cfg.dim < 2) throw std::domain_error("eval_uk_radial_origin: dimension must be >= 2");
    if (!table.gaussian()) throw UnsupportedVariant("eval_uk_radial_origin: table is not from Gaussian data");
    if (cfg.k > table.kmax()) throw std::domain_error("eval_uk_radial_origin: truncation above table range");
    if (r < 0.0) throw std::domain_error("eval_uk_radial_origin: radius must be >= 0");
    const auto& g = *table.gaussian();
    const int d = cfg.dim;
    const double t = cfg.t;
    const double arg = r * r / (4.0 * t);
    const double lag_param = 0.5 * (d - 2);
    const SignedLog prefactor = SignedLog::from_double(0.5 * g.amplitude) *
                                SignedLog{1, 0.5 * d * std::log(4.0 * g.t0) -
                                                 0.5 * d * std::log(4.0 * std::numbers::pi * t) - arg};
    ApproxResult out;
    out.partials.resize(static_cast<std::size_t>(cfg.k) + 1);
    for (int j = 0; j <= cfg.k; j += 2) {
        const int n = j / 2;
        SignedLog term{n % 2 == 0 ? 1 : -1, n * std::log(2.0 * g.t0 / t) + log_gamma(0.5 * (j + d))};
        term *= constant_C(j, d);
        term *= SignedLog::from_double(laguerre(n, lag_param, arg));
        out.partials[j] = prefactor * term;
    }
    out.value_sl = aligned_sum(out.partials);
    out.value = out.value_sl.to_double();
    return out;
}

}  // namespace heatseries
