#pragma once

// Independent brute-force references: Monte Carlo volumes, the matrix and
// paraboloid-cap identities, and Bessel J1 with its zeros. Nothing in here
// depends on the covariogram or transform code paths it is used to check.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "covario/geometry.hpp"

namespace covario::oracles {

/// Reproducible random stream identified by (seed, stream id). Independent
/// streams can be consumed in parallel and combined deterministically.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

using Membership = std::function<bool(std::span<const double>)>;

/// Hit-or-miss volume of {x in box : member(x)}. Samples are drawn in chunks
/// of kChunk, chunk c using stream c, so the estimate depends only on
/// (N, seed) and never on the thread count.
MonteCarloEstimate mc_volume(const Membership& member, std::span<const double> lower, std::span<const double> upper,
                             std::uint64_t n, std::uint64_t seed);

inline constexpr std::uint64_t kChunk = 1u << 16;

struct BoundingBox {
    Vec2 lo;
    Vec2 hi;
};

MonteCarloEstimate mc_area(const std::function<bool(Vec2)>& member, const BoundingBox& box, std::uint64_t n,
                           std::uint64_t seed);

/// Closed-form area of the intersection of two disks of radius r at distance d.
double lens_area(double r, double d);

// ---------------------------------------------------------------------------
// Matrix identities

struct MatrixIdentityReport {
    /// A - A(A+B)^-1 A, B(A+B)^-1 A, A(A+B)^-1 B, (A^-1 + B^-1)^-1
    std::array<Eigen::MatrixXd, 4> expressions;
    /// max |E_i - E_j| over all pairs, divided by max |entry| of E_3
    double max_relative_deviation = 0.0;
    double det_lhs = 0.0;  ///< det((A^-1 + B^-1)^-1)
    double det_rhs = 0.0;  ///< det A det B / det(A+B)
    double det_relative_deviation = 0.0;
};

MatrixIdentityReport matrix_identities(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Random symmetric positive-definite matrix with eigenvalues in [lo, hi].
Eigen::MatrixXd random_spd(int dim, double lo, double hi, RandomStream& rng);

// ---------------------------------------------------------------------------
// Paraboloid cap volume

/// Surface area of the unit sphere S^{k-1} in R^k (omega_1 = 2, omega_2 = 2 pi).
double sphere_surface_area(int k);

struct ParaboloidReport {
    int dim = 0;                 ///< d, the size of A and B; the region lives in R^{d+1}
    double s = 0.0;              ///< t - <(A^-1+B^-1)^-1 q, q> / 2
    double closed_form = 0.0;    ///< omega_d 2^{(n+1)/2} s^{(n+1)/2} / ((n^2-1) sqrt det(A+B)), n = d+1
    double statement_form = 0.0; ///< the same with (2s) in place of s
    MonteCarloEstimate estimate;
    double z_closed = 0.0;       ///< (estimate - closed) / std_error
    double z_statement = 0.0;
    double relative_error = 0.0; ///< |estimate - closed| / closed
};

/// Volume between the graphs of f1(x) = t - <A(x-q), x-q>/2 and
/// f2(x) = <Bx, x>/2, estimated by Monte Carlo and compared with both
/// candidate closed forms. Throws InvalidCap when 2t - <Qq, q> < 0.
ParaboloidReport paraboloid_volume(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& q,
                                   double t, std::uint64_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Bessel functions

/// J0 and J1: Taylor series (long double) for |x| <= 12, Hankel asymptotic
/// expansion beyond.
double bessel_j0(double x);
double bessel_j1(double x);
double bessel_j1_taylor(double x);
double bessel_j1_asymptotic(double x);
inline constexpr double kBesselSwitch = 12.0;

/// m-th positive zero of J1, by bisection on [beta - pi/2, beta + pi/2] with
/// beta = (m + 1/4) pi.
double bessel_j1_zero(int m);

}  // namespace covario::oracles
