#pragma once

#include <compare>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "heatseries/specfun.hpp"

namespace heatseries {

/// alpha in N^d. Ordered by degree first, then lexicographically, which is
/// the summation order used throughout.
class MultiIndex {
public:
    MultiIndex() = default;

    explicit MultiIndex(std::vector<int> components) : parts_(std::move(components)) {
        if (parts_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
        for (int a : parts_) {
            if (a < 0) throw std::invalid_argument("MultiIndex: negative component");
        }
        degree_ = std::accumulate(parts_.begin(), parts_.end(), 0);
    }

    MultiIndex(std::initializer_list<int> components) : MultiIndex(std::vector<int>(components)) {}

    static MultiIndex zeros(int dim) { return MultiIndex(std::vector<int>(dim, 0)); }

    int dim() const { return static_cast<int>(parts_.size()); }
    int degree() const { return degree_; }
    int operator[](std::size_t i) const { return parts_[i]; }
    const std::vector<int>& components() const { return parts_; }

    bool all_even() const {
        for (int a : parts_) {
            if (a % 2 != 0) return false;
        }
        return true;
    }

    /// ln(alpha!) = sum ln(alpha_i!)
    double log_factorial() const {
        double s = 0.0;
        for (int a : parts_) s += heatseries::log_factorial(a);
        return s;
    }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
        if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
        return a.parts_ <=> b.parts_;
    }

private:
    std::vector<int> parts_;
    int degree_ = 0;
};

/// Calls fn(const MultiIndex&) for every composition of `degree` into `dim`
/// nonnegative parts, in lexicographic order. Iterative odometer: the last
/// component absorbs the remainder, the rest count up.
template <typename Fn>
void for_each_composition(int degree, int dim, Fn&& fn) {
    if (dim < 1) throw std::invalid_argument("for_each_composition: dim must be >= 1");
    if (degree < 0) return;
    std::vector<int> head(static_cast<std::size_t>(dim - 1), 0);
    std::vector<int> parts(static_cast<std::size_t>(dim), 0);
    int head_sum = 0;
    while (true) {
        for (int i = 0; i < dim - 1; ++i) parts[i] = head[i];
        parts[dim - 1] = degree - head_sum;
        fn(MultiIndex(parts));
        // Advance the odometer on head from the rightmost digit; a digit may
        // grow while head_sum stays <= degree.
        int i = dim - 2;
        while (i >= 0) {
            if (head_sum < degree) {
                ++head[i];
                ++head_sum;
                break;
            }
            head_sum -= head[i];
            head[i] = 0;
            --i;
        }
        if (i < 0) return;
    }
}

/// All compositions of `degree` into `dim` parts, lexicographic.
inline std::vector<MultiIndex> compositions(int degree, int dim) {
    std::vector<MultiIndex> out;
    for_each_composition(degree, dim, [&](const MultiIndex& a) { out.push_back(a); });
    return out;
}

/// Number of compositions of `degree` into `dim` parts: C(degree+dim-1, dim-1).
inline double composition_count(int degree, int dim) {
    double c = 1.0;
    for (int i = 1; i < dim; ++i) c = c * (degree + i) / i;
    return c;
}

}  // namespace heatseries
