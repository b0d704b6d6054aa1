#pragma once

// Instance-level experiments: zero branches against their predicted
// centers, the zero set of the covariogram transform, the parallelogram
// cross-covariogram counterexamples and the determination pipeline run on
// black-box covariogram access.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "covario/covariogram.hpp"
#include "covario/fourier_laplace.hpp"
#include "covario/geometry.hpp"
#include "covario/oracles.hpp"

namespace covario {

// ---------------------------------------------------------------------------
// Kobayashi report

struct KobayashiRow {
    int m = 0;
    Direction u;
    cdouble zeta;
    cdouble center;
    double deviation = 0.0;          ///< |zeta - center|
    double re_error = 0.0;           ///< |Re zeta 2w / pi - (4m + 1)|
    double im_recovery_error = 0.0;  ///< |Im zeta 2w - (ln tau(-u) - ln tau(u))|; NaN for polygons
    bool validated = false;
};

struct KobayashiReport {
    std::string body_id;
    bool smooth_input = true;
    std::vector<KobayashiRow> rows;  ///< ordered by m, then direction
    std::vector<int> ms;
    std::vector<double> max_deviation;      ///< per m, over directions
    std::vector<double> max_re_error;       ///< per m
    std::vector<double> max_im_error;       ///< per m
    double exponent = 0.0;                  ///< p in deviation ~ C m^p, fitted over m >= 2
    double prefactor = 0.0;                 ///< C
    double exponent_residual = 0.0;         ///< RMS residual of the log-log fit
    std::vector<BranchFailure> failures;
    BranchTable table;
};

KobayashiReport kobayashi_report(const Body& k, int m_first, int m_last, const std::vector<Direction>& u_grid,
                                 const std::string& body_id = "");

/// {tau(u), tau(-u)} implied by a branch zeta (log-ratio from Im zeta 2w) and
/// the sum D = tau(u) + tau(-u).
std::pair<double, double> implied_curvatures(cdouble zeta, double width, double sum);

// ---------------------------------------------------------------------------
// Zero set of the covariogram transform

struct ZeroUnionRow {
    int m = 0;
    cdouble branch;                 ///< F_m(u)
    double count = 0.0;             ///< contour zero count (unrounded)
    std::array<cdouble, 2> zeros;   ///< located zeros of the covariogram transform
    double match_error = 0.0;       ///< max(|e1 - e1*|, |e2 - e2*| / r): elementary symmetric functions of the
                                    ///< located pair against {F_m, conj F_m}, both about Re F_m
    double residual = 0.0;          ///< |ghat(F_m)| / area^2
};

struct ZeroUnionReport {
    Direction u;
    std::vector<ZeroUnionRow> rows;
    double max_match_error = 0.0;
    double max_residual = 0.0;
    double tolerance = 0.0;
};

/// For each m, counts and locates the zeros of xi -> ghat(xi u) inside the
/// circle of radius pi/(2w) about Re F_m(u) (contour moments) and matches
/// them to {F_m, conj F_m}. Throws UnmatchedZero on a count other than 2 or
/// match error above `tolerance`.
ZeroUnionReport zero_union_check(const Body& k, const Direction& u, int m_first, int m_last,
                                 double tolerance = 1e-6);

// ---------------------------------------------------------------------------
// Cross-covariogram counterexamples

/// Admissible random parameters for the family pair starting at `family`
/// (1 or 3): Greek parameters in [0.5, 2], translations in [-1, 1]^2,
/// slope m in [-2, 2] (m = 0 every fourth draw), |alpha' - gamma'| > 0.1 and
/// for m = 0 also |beta' - delta'| > 0.1.
FamilyParams random_family_params(int family, oracles::RandomStream& rng, int draw);

/// True when (H2, K2) = (H1 + x, K1 + x) or (-K1 + x, -H1 + x) for some x,
/// comparing vertex sets after aligning Steiner points.
bool trivial_associates(const Polygon& h1, const Polygon& k1, const Polygon& h2, const Polygon& k2,
                        double tolerance = 1e-9);

/// max over an n x n lattice covering both supports of |g_{H1,K1} - g_{H2,K2}|.
double crosscov_deviation(const Polygon& h1, const Polygon& k1, const Polygon& h2, const Polygon& k2, int n);

struct CounterexampleReport {
    int family = 1;
    FamilyParams params;
    int grid = 41;
    double max_deviation = 0.0;
    bool trivial = false;
    double tolerance = 0.0;
    bool passed = false;
};

/// Pairs `family` and `family + 1` (family 1 or 3) on an n x n grid.
CounterexampleReport crosscov_counterexample(int family, const FamilyParams& params, int grid = 41,
                                             double tolerance = 1e-9);

// ---------------------------------------------------------------------------
// Determination from black-box access

/// What the determination pipeline may use: covariogram values and the
/// transform along rays. The body itself is not reachable through it.
struct BodyAccess {
    CovariogramFn covariogram;
    std::function<TransformFn(const Direction&)> ray_transform;
};

BodyAccess black_box(const Body& k, int smooth_vertices = 16384);

enum class Verdict { IdenticalUpToTranslation, ReflectionNeeded, Distinct };
std::string to_string(Verdict v);

struct DeterminationOptions {
    int m = 10;                        ///< branch used for the curvature ratio
    double width_tolerance = 1e-6;     ///< relative
    double pair_tolerance = 0.05;      ///< relative, per curvature
    double zero_tolerance = 1e-6;      ///< relative distance of matching zeros
    double abstain_threshold = 1e-3;   ///< |Im zeta| below which the ratio sign is undefined
    double max_failure_fraction = 0.05;
    CurvatureFitOptions fit;
};

struct DirectionRow {
    Direction u;
    bool ok = false;        ///< fits and tracking succeeded for both inputs
    std::string failure;
    double width_a = 0.0, width_b = 0.0;
    CurvaturePair pair_a, pair_b;
    cdouble zeta_a, zeta_b;
    int sign = 0;           ///< +1 same ratio, -1 swapped, 0 abstained
    bool widths_match = false;
    bool pairs_match = false;
    bool zeros_match = false;
};

struct DeterminationVerdict {
    Verdict outcome = Verdict::Distinct;
    std::string reason;
    std::vector<DirectionRow> rows;
    int abstentions = 0;
    int failures = 0;
};

/// Curvature pairs from each covariogram, ratio signs from the zero branches,
/// one global sign over the direction grid. Throws Inconclusive when more
/// than max_failure_fraction of the directions fail.
DeterminationVerdict determination_experiment(const BodyAccess& a, const BodyAccess& b,
                                              const std::vector<Direction>& u_grid,
                                              const DeterminationOptions& options = {});

}  // namespace covario
