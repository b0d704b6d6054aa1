#pragma once

// Covariograms g_K(x) = area(K ∩ (K + x)) and cross covariograms
// g_{H,K}(x) = area(H ∩ (K + x)), plus the quantities that can be read off
// them: support, width of the support, the directional derivative at the
// origin and the unordered pair of opposite curvatures.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "covario/geometry.hpp"
#include "covario/polygon_ops.hpp"

namespace covario {

enum class CovariogramMethod { ExactClip, PolylineApprox };
std::string to_string(CovariogramMethod m);

/// Boundary points used when a smooth body is replaced by a polygon.
inline constexpr int kSmoothVertices = 4096;

/// Black-box covariogram access: point -> value.
using CovariogramFn = std::function<double(Vec2)>;

/// Evaluator for g_{H,K}. Polygon bodies are used exactly; smooth bodies are
/// replaced once by their inscribed kSmoothVertices-gon, so every evaluation
/// is an exact polygon computation on fixed data.
class CrossCovariogram {
public:
    CrossCovariogram(const Body& h, const Body& k, int smooth_vertices = kSmoothVertices);

    double operator()(Vec2 x) const;
    CovariogramMethod method() const { return method_; }
    const Polygon& h_polygon() const { return h_; }
    const Polygon& k_polygon() const { return k_; }
    CovariogramFn as_function() const;

private:
    Polygon h_;
    Polygon k_;
    MonotoneChains h_chains_;
    MonotoneChains k_chains_;
    CovariogramMethod method_;
    bool use_clip_;
};

double covariogram(const Body& k, Vec2 x);
double cross_covariogram(const Body& h, const Body& k, Vec2 x);

// ---------------------------------------------------------------------------
// Lattice sampling

struct GridSpec {
    Vec2 origin;
    Vec2 spacing;
    int nx = 0;
    int ny = 0;
};

/// nx x ny lattice spanning the bounding box of H + (-K).
GridSpec support_grid(const Body& h, const Body& k, int nx, int ny);

struct CovariogramGrid {
    GridSpec spec;
    /// Row-major, index iy * nx + ix, value at origin + (ix dx, iy dy).
    std::vector<double> values;
    CovariogramMethod method = CovariogramMethod::ExactClip;
    std::vector<std::string> body_hashes;

    Vec2 point(int ix, int iy) const {
        return {spec.origin.x + ix * spec.spacing.x, spec.origin.y + iy * spec.spacing.y};
    }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * spec.nx + ix]; }
};

/// Evaluates the lattice in parallel (rows are independent) with a fixed
/// output order.
CovariogramGrid evaluate_grid(const CrossCovariogram& g, const GridSpec& spec, std::vector<std::string> hashes = {});

/// CSV with header x,y,value and 17 significant digits, plus a JSON sidecar
/// at `<csv>.json` carrying origin, spacing, dims, method and body hashes.
void write_grid(const CovariogramGrid& grid, const std::filesystem::path& csv);
nlohmann::json grid_metadata(const CovariogramGrid& grid);

// ---------------------------------------------------------------------------
// Readable quantities

struct SupportReport {
    Polygon support;             ///< H + (-K) (of the polygons actually used)
    bool exact = true;           ///< false when a smooth body was approximated
    double max_width_deviation;  ///< max_u |w_supp(u) - w_H(u) - w_K(u)|
};

/// Support of g_{H,K} as the Minkowski sum H + (-K), with the width identity
/// checked on a grid of `directions` directions.
SupportReport support_of_crosscov(const Body& h, const Body& k, int directions = 360);

struct DirectionalDerivative {
    double geometric;          ///< -length of the projection of K onto v-perp
    double finite_difference;  ///< (g(step v) - g(o)) / step
    double step;
};

DirectionalDerivative directional_derivative_origin(const Body& k, const Direction& v, double step = 1e-4);

struct ReciprocalCurvatureSum {
    double from_width;      ///< w(theta) + w''(theta)
    double from_curvature;  ///< 1/tau(u) + 1/tau(-u)
    double deviation;
};

/// Sum of the radii of curvature at u and -u read from the width function.
/// Smooth bodies only (PolygonNotSmooth otherwise).
ReciprocalCurvatureSum sum_reciprocal_curvatures_from_width(const Body& k, const Direction& u);

// ---------------------------------------------------------------------------
// Curvature pair from the behaviour of g near the support boundary

struct CurvatureFitOptions {
    double depth_min = 1e-4;
    double depth_max = 1e-2;
    int depth_count = 12;
    double tangential_depth = 1e-3;
    int tangential_count = 9;
    /// RMS residual of the fit log g - 1.5 log t = c0 + c1 t (natural log units).
    double max_log_residual = 0.05;
    /// RMS residual of the g^{2/3} versus q^2 fit, relative to its intercept.
    double max_linear_residual = 0.05;
    /// Negative discriminants with |disc| / D^2 below this are clamped to 0.
    double discriminant_tolerance = 1e-3;
    /// Boundary points of the polygon standing in for a smooth body (body overload only).
    int smooth_vertices = 16384;
};

struct CurvaturePair {
    double low = 0.0;
    double high = 0.0;
    Direction u;
    double sum = 0.0;        ///< D = tau(u) + tau(-u)
    double harmonic = 0.0;   ///< Q = (1/tau(u) + 1/tau(-u))^-1
    double residual = 0.0;   ///< max of the two normalized fit residuals
    int samples = 0;
    Vec2 support_point;      ///< boundary point of supp g with outer normal u
};

/// Constant of the leading term g ~ c (2t - Q q^2)^{3/2} / sqrt(D).
inline constexpr double kCapConstant = 2.0 / 3.0;

/// Point of the boundary of supp g with outer normal u, found from g values
/// only (radial bisection on g > 0, then maximizing <x, u>).
Vec2 locate_support_point(const CovariogramFn& g, const Direction& u);

CurvaturePair curvature_pair_from_covariogram(const CovariogramFn& g, const Direction& u,
                                              const CurvatureFitOptions& options = {});
CurvaturePair curvature_pair_from_covariogram(const Body& k, const Direction& u,
                                              const CurvatureFitOptions& options = {});

}  // namespace covario
