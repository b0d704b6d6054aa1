#pragma once

// Fourier-Laplace transform of the chord function along complex rays,
// F(zeta) = int S_K(u, t) e^{i t zeta} dt, its zero branches F_m(u), and the
// transform of the chord autocorrelation (the covariogram side).

#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covario/geometry.hpp"
#include "covario/radon.hpp"

namespace covario {

using cdouble = std::complex<double>;

struct RayTransformOptions {
    int order = 64;                ///< Gauss-Legendre points per panel (32 or 64)
    double max_frequency = 200.0;  ///< largest |zeta| the panel layout resolves
    double im_cap_factor = 12.0;   ///< |Im zeta| <= im_cap_factor / w_K(u)
};

/// Precomputed quadrature for zeta -> int S(u,t) e^{i t zeta} dt. The chord
/// function is sampled once; every evaluation is a weighted exponential sum.
class RayTransformContext {
public:
    RayTransformContext(const Body& k, const Direction& u, const RayTransformOptions& options = {});

    /// F(zeta). PrecisionLoss when |Im zeta| or |zeta| exceeds the caps.
    cdouble flt(cdouble zeta) const;
    /// dF/dzeta = i int t S e^{i t zeta} dt.
    cdouble derivative(cdouble zeta) const;
    std::pair<cdouble, cdouble> flt_with_derivative(cdouble zeta) const;

    const Direction& direction() const { return u_; }
    double width() const { return width_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    double im_cap() const { return im_cap_; }
    double max_frequency() const { return options_.max_frequency; }
    bool smooth() const { return smooth_; }
    std::size_t node_count() const { return t_.size(); }

private:
    void check(cdouble zeta) const;

    Direction u_;
    RayTransformOptions options_;
    double lower_, upper_, width_, im_cap_;
    bool smooth_;
    std::vector<double> t_;
    std::vector<double> w_;  ///< quadrature weight times S(t)
};

cdouble flt_ray(const RayTransformContext& ctx, cdouble zeta);
cdouble flt_ray_derivative(const RayTransformContext& ctx, cdouble zeta);

/// zeta -> (F(zeta), F'(zeta)) on one ray.
using TransformFn = std::function<std::pair<cdouble, cdouble>(cdouble)>;

/// Predicted branch location pi (4m + 1) / (2w) + i (ln tau(-u) - ln tau(u)) / (2w).
/// Smooth bodies only.
cdouble kobayashi_center(const Body& k, int m, const Direction& u);

// ---------------------------------------------------------------------------
// Zero tracking

struct ZeroBranch {
    int m = 0;
    Direction u;
    cdouble zeta;
    double residual = 0.0;  ///< |F(zeta)| / |F'(zeta)|, the size of the next Newton step
    bool validated = false;
    cdouble predicted_center;
    int winding = 0;
    int iterations = 0;
    bool smooth_input = true;  ///< false when the center formula was applied to a polygon
};

struct ZeroTrackOptions {
    int max_iterations = 50;
    double step_tolerance = 1e-12;
    double residual_tolerance = 1e-9;
    int contour_order = 64;
    double winding_tolerance = 0.1;
};

/// Damped complex Newton from `start`, stopping when |dz| <= tol (1 + |z|).
/// Returns the root and the iteration count; nullopt on divergence.
std::optional<std::pair<cdouble, int>> newton_zero(const TransformFn& f, cdouble start,
                                                    const ZeroTrackOptions& options = {});

/// (1 / 2 pi i) times the contour integral of F'/F over the rectangle with the
/// given half-sides (Gauss-Legendre per side). Returns the unrounded value.
double winding_number(const TransformFn& f, cdouble center, double half_re, double half_im, int order = 64);

/// Starting point of the branch search: the Kobayashi center for smooth
/// bodies, its real part for polygons.
cdouble branch_start(const RayTransformContext& ctx, const Body& k, int m);

/// Tracks F_m(u): Newton from the branch start, then argument-principle
/// validation on the rectangle of half-sides (pi/(2w), 0.5/w). Throws
/// NewtonDiverged or ValidationFailed.
ZeroBranch track_zero(const RayTransformContext& ctx, const Body& k, int m, const ZeroTrackOptions& options = {});

/// Non-throwing variant: the branch is returned with validated = false and
/// the failure message in `failure`.
ZeroBranch try_track_zero(const RayTransformContext& ctx, const Body& k, int m, std::string& failure,
                          const ZeroTrackOptions& options = {});

struct BranchFailure {
    int m;
    Direction u;
    std::string message;
};

struct BranchTable {
    std::vector<ZeroBranch> rows;  ///< ordered by m, then by direction
    std::vector<BranchFailure> failures;
    double max_jump = 0.0;         ///< max |F_m(u_{i+1}) - F_m(u_i)| over adjacent directions
    double jump_bound = 0.0;       ///< pi / max_u w_K(u)
    bool continuous = true;
};

/// All (m, u) pairs, evaluated in parallel and assembled in a fixed order.
/// Tracking failures are recorded, not thrown.
BranchTable branch_sweep(const Body& k, const std::vector<Direction>& u_grid, int m_first, int m_last,
                         const RayTransformOptions& options = {});

void write_branch_csv(const BranchTable& table, const std::filesystem::path& path);
std::string branch_csv(const BranchTable& table);

// ---------------------------------------------------------------------------
// Identities

struct ReflectionReport {
    int samples = 0;
    double max_deviation = 0.0;  ///< max |F_{-K}(zeta) - conj F_K(conj zeta)|
    double scale = 0.0;          ///< area(K)
    double zero_mirror_residual = 0.0;  ///< |F(-conj z*)| / |F'(-conj z*)| for a tracked zero z*
    bool passed = false;
};

ReflectionReport verify_reflection_identity(const Body& k, int samples, std::uint64_t seed, double tolerance = 1e-9);

/// Transform of the chord autocorrelation A(s):
/// xi -> 2 int_0^w A(s) cos(s xi) ds, which equals F(xi) F(-xi).
class AutocorrelationTransform {
public:
    AutocorrelationTransform(const Body& k, const Direction& u, double max_frequency = 64.0);

    cdouble operator()(cdouble xi) const;
    cdouble derivative(cdouble xi) const;
    double width() const { return width_; }
    std::size_t node_count() const { return s_.size(); }

private:
    double width_;
    std::vector<double> s_;
    std::vector<double> w_;  ///< quadrature weight times A(s)
};

struct FactorizationReport {
    int points = 0;
    double max_deviation = 0.0;  ///< sup |ghat(xi) - |F(xi)|^2|
    double area_squared = 0.0;
    double relative_deviation = 0.0;  ///< max_deviation / area^2
    bool passed = false;
};

FactorizationReport verify_factorization(const Body& k, const Direction& u, const std::vector<double>& xi_grid,
                                         double tolerance = 1e-6);

}  // namespace covario
