#pragma once

#include <span>
#include <vector>

namespace covario {

/// Gauss-Legendre rule on [-1, 1] with the full (not half) node set.
class GaussLegendre {
public:
    /// Supported orders: 32 and 64.
    explicit GaussLegendre(int order = 64);

    int order() const { return static_cast<int>(nodes_.size()); }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

    /// Appends the rule mapped to [a, b] to (t, w).
    void append(double a, double b, std::vector<double>& t, std::vector<double>& w) const;

    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double s = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
        return s * half;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Shared rule instances (constructed once, immutable).
const GaussLegendre& gauss_legendre(int order);

}  // namespace covario
