#pragma once

// Scalars stored as (sign, ln|value|). Gamma ratios, factorials and powers
// that appear in the series coefficients routinely leave double range; this
// keeps every intermediate finite.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace heatseries {

struct SignedLog {
    int sign = 0;
    double logmag = -std::numeric_limits<double>::infinity();

    static constexpr SignedLog zero() { return {}; }
    static SignedLog one() { return {1, 0.0}; }

    static SignedLog from_log(int sign, double logmag) {
        if (sign == 0) return {};
        return {sign > 0 ? 1 : -1, logmag};
    }

    static SignedLog from_double(double x) {
        if (x == 0.0) return {};
        return {x > 0.0 ? 1 : -1, std::log(std::fabs(x))};
    }

    bool is_zero() const { return sign == 0; }

    double to_double() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(logmag);
    }

    SignedLog abs() const { return from_log(sign == 0 ? 0 : 1, logmag); }

    // |x|^p; a nonzero value raised to p keeps sign only for p = 1 semantics,
    // so callers use this on magnitudes.
    SignedLog pow(double p) const {
        if (sign == 0) return p == 0.0 ? one() : SignedLog{};
        return {1, logmag * p};
    }

    SignedLog operator-() const { return {-sign, logmag}; }

    friend SignedLog operator*(SignedLog a, SignedLog b) {
        if (a.sign == 0 || b.sign == 0) return {};
        return {a.sign * b.sign, a.logmag + b.logmag};
    }

    friend SignedLog operator/(SignedLog a, SignedLog b) {
        if (b.sign == 0) {
            return {a.sign == 0 ? 1 : a.sign, std::numeric_limits<double>::infinity()};
        }
        if (a.sign == 0) return {};
        return {a.sign * b.sign, a.logmag - b.logmag};
    }

    friend SignedLog operator+(SignedLog a, SignedLog b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        if (a.logmag < b.logmag) std::swap(a, b);
        const double gap = b.logmag - a.logmag;  // <= 0
        if (a.sign == b.sign) return {a.sign, a.logmag + std::log1p(std::exp(gap))};
        if (gap == 0.0) return {};
        return {a.sign, a.logmag + std::log1p(-std::exp(gap))};
    }

    friend SignedLog operator-(SignedLog a, SignedLog b) { return a + (-b); }

    SignedLog& operator*=(SignedLog o) { return *this = *this * o; }
    SignedLog& operator/=(SignedLog o) { return *this = *this / o; }
    SignedLog& operator+=(SignedLog o) { return *this = *this + o; }

    // Magnitude comparison, zero smallest.
    friend bool abs_less(SignedLog a, SignedLog b) {
        if (b.sign == 0) return false;
        if (a.sign == 0) return true;
        return a.logmag < b.logmag;
    }
};

// Neumaier-compensated accumulator in plain doubles.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Sum of SignedLog terms: exponents aligned to the largest term, then a
// compensated plain-double reduction.
inline SignedLog aligned_sum(std::span<const SignedLog> terms) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& s : terms) {
        if (s.sign != 0) top = std::max(top, s.logmag);
    }
    if (!std::isfinite(top)) return {};
    CompensatedSum acc;
    for (const auto& s : terms) {
        if (s.sign != 0) acc.add(s.sign * std::exp(s.logmag - top));
    }
    return SignedLog::from_double(acc.value()) * SignedLog{1, top};
}

inline SignedLog aligned_sum(const std::vector<SignedLog>& terms) {
    return aligned_sum(std::span<const SignedLog>(terms.data(), terms.size()));
}

}  // namespace heatseries
