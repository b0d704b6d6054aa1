#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "covario/covariogram.hpp"
#include "covario/error.hpp"
#include "covario/oracles.hpp"
#include "covario/polygon_ops.hpp"
#include "covario/verify.hpp"

using namespace covario;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool inside(const Polygon& p, Vec2 x) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (cross(p[(i + 1) % p.size()] - p[i], x - p[i]) < 0.0) return false;
    return true;
}

}  // namespace

TEST_CASE("intersection area of a triangle and its translate against Monte Carlo") {
    const Polygon tri({{0, 0}, {1, 0}, {0, 1}});
    const Polygon moved = tri.translated({0.2, 0.2});
    const double exact = polygon_intersection_area(tri, moved);
    CHECK(exact == doctest::Approx(0.18).epsilon(1e-12));
    const auto mc = oracles::mc_area([&](Vec2 x) { return inside(tri, x) && inside(moved, x); }, {{0, 0}, {1, 1}},
                                     1'000'000, 17);
    CHECK(std::abs(mc.mean - exact) <= 3.0 * mc.std_error);
}

TEST_CASE("covariogram values") {
    CHECK(covariogram(unit_square(), {0.5, 0.5}) == doctest::Approx(0.25));
    CHECK(covariogram(unit_square(), {}) == doctest::Approx(1.0));
    const double lens = 2.0 * kPi / 3.0 - std::sqrt(3.0) / 2.0;
    CHECK(std::abs(covariogram(unit_disk(), {1.0, 0.0}) - lens) <= 1e-5);
    CHECK(std::abs(covariogram(unit_disk(), {0.0, 0.0}) - kPi) <= 1e-5);
    CHECK(covariogram(unit_square(), {1.5, 0.0}) == 0.0);
}

TEST_CASE("cross covariogram values") {
    CHECK(cross_covariogram(unit_square(), unit_square(), {}) == doctest::Approx(1.0));
    const auto [h1, k1] = example_pair(1, FamilyParams{});
    const auto [h2, k2] = example_pair(2, FamilyParams{});
    const Vec2 x{0.3, 0.1};
    const double a = cross_covariogram(Body(h1), Body(k1), x);
    const double b = cross_covariogram(Body(h2), Body(k2), x);
    CHECK(a > 0.0);
    CHECK(std::abs(a - b) <= 1e-12);
    CHECK(cross_covariogram(unit_square(), transform(unit_square(), Translate{{5, 5}}), {}) == 0.0);
}

TEST_CASE("exact kernels agree: clipping and slab integration") {
    oracles::RandomStream rng(21, 0);
    for (int i = 0; i < 200; ++i) {
        const Polygon p = random_convex_polygon(rng, 3 + i % 12);
        const Polygon q = random_convex_polygon(rng, 3 + (i / 12) % 12);
        const Vec2 x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const double clip = polygon_intersection_area(p, q.translated(x));
        const double slab = slab_intersection_area(MonotoneChains(p), {}, MonotoneChains(q), x);
        CHECK(std::abs(clip - slab) <= 1e-13);
    }
}

TEST_CASE("smooth bodies switch to the slab kernel") {
    const CrossCovariogram small(unit_square(), unit_square());
    CHECK(small.method() == CovariogramMethod::ExactClip);
    const CrossCovariogram big(unit_disk(), unit_disk());
    CHECK(big.method() == CovariogramMethod::PolylineApprox);
    CHECK(big.h_polygon().size() == static_cast<std::size_t>(kSmoothVertices));
}

TEST_CASE("support of the cross covariogram") {
    const SupportReport s = support_of_crosscov(unit_square(), unit_square());
    CHECK(s.support.area() == doctest::Approx(4.0));
    CHECK(width(Body(s.support), Direction(0.0)) == doctest::Approx(2.0));
    CHECK(s.exact);
    const SupportReport d = support_of_crosscov(unit_disk(), Body(Disk({0, 0}, 2.0)));
    CHECK(!d.exact);
    CHECK(width(Body(d.support), Direction(0.3)) == doctest::Approx(6.0).epsilon(1e-5));
    CHECK(d.max_width_deviation <= 1e-12);

    const auto [h1, k1] = example_pair(1, FamilyParams{});
    const auto [h2, k2] = example_pair(2, FamilyParams{});
    const SupportReport a = support_of_crosscov(Body(h1), Body(k1));
    const SupportReport b = support_of_crosscov(Body(h2), Body(k2));
    CHECK(a.support.size() == 8);  // four generator directions
    CHECK(b.support.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(norm(a.support[i] - b.support[i]) <= 1e-12);
}

TEST_CASE("support of the cross covariogram bounds where it is positive") {
    oracles::RandomStream rng(22, 0);
    const Polygon h = random_convex_polygon(rng, 6), k = random_convex_polygon(rng, 5);
    const SupportReport s = support_of_crosscov(Body(h), Body(k));
    const CrossCovariogram g{Body(h), Body(k)};
    const CovariogramGrid grid = evaluate_grid(g, support_grid(Body(h), Body(k), 31, 31));
    for (int iy = 0; iy < 31; ++iy)
        for (int ix = 0; ix < 31; ++ix) {
            const Vec2 x = grid.point(ix, iy);
            if (!inside(s.support, x)) CHECK(grid.at(ix, iy) <= 1e-14);
        }
    const Vec2 c = s.support.steiner_point();
    CHECK(g(c) > 0.0);
}

TEST_CASE("directional derivative at the origin") {
    const auto sq = directional_derivative_origin(unit_square(), Direction(0.0));
    CHECK(sq.geometric == doctest::Approx(-1.0));
    CHECK(std::abs(sq.finite_difference - sq.geometric) <= 1e-3);
    const auto d = directional_derivative_origin(unit_disk(), Direction(1.1));
    CHECK(d.geometric == doctest::Approx(-2.0));
    CHECK(std::abs(d.finite_difference - d.geometric) <= 1e-3);
    const auto cw = directional_derivative_origin(constant_width_body(), Direction(0.0));
    CHECK(cw.geometric == doctest::Approx(-2.0));
    CHECK_THROWS_AS(directional_derivative_origin(unit_square(), Direction(0.0), -1.0), Error);
}

TEST_CASE("sum of radii of curvature from the width function") {
    CHECK(sum_reciprocal_curvatures_from_width(unit_disk(), Direction(0.2)).from_width == doctest::Approx(2.0));
    for (double t = 0.0; t < kTwoPi; t += 0.4) {
        const auto r = sum_reciprocal_curvatures_from_width(constant_width_body(), Direction(t));
        CHECK(r.from_width == doctest::Approx(2.0));
        CHECK(r.deviation <= 1e-10);
    }
    const Body b(SupportBody(1.0, {{0, 0}, {0.02, 0}}));
    const auto r = sum_reciprocal_curvatures_from_width(b, Direction(0.0));
    CHECK(r.from_width == doctest::Approx(1.88));
    CHECK(r.deviation <= 1e-10);
    CHECK_THROWS_AS(sum_reciprocal_curvatures_from_width(unit_square(), Direction(0.0)), Error);
}

TEST_CASE("curvature pair of a disk") {
    const CurvaturePair p = curvature_pair_from_covariogram(unit_disk(), Direction(0.0));
    CHECK(std::abs(p.low - 1.0) <= 0.02);
    CHECK(std::abs(p.high - 1.0) <= 0.02);
    CHECK(p.low <= p.high);
    CHECK(std::abs(p.harmonic * p.sum - p.sum * p.sum / 4.0) <= 0.02 * p.sum * p.sum / 4.0);
    const CurvaturePair r = curvature_pair_from_covariogram(Body(Disk({0.3, -0.2}, 2.0)), Direction(2.0));
    CHECK(std::abs(r.low - 0.5) <= 0.01);
    CHECK(std::abs(r.high - 0.5) <= 0.01);
}

TEST_CASE("curvature pair of the three-fold constant width body") {
    const CurvaturePair p = curvature_pair_from_covariogram(constant_width_body(), Direction(0.0));
    CHECK(std::abs(p.low - 1.0 / 1.4) <= 0.05 / 1.4);
    CHECK(std::abs(p.high - 1.0 / 0.6) <= 0.05 / 0.6);
    CHECK(p.samples == 21);
    CHECK(p.support_point.x == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("curvature pair rejects polygons and bad options") {
    CHECK_THROWS_AS(curvature_pair_from_covariogram(unit_square(), Direction(0.0)), Error);
    CurvatureFitOptions bad;
    bad.depth_count = 1;
    CHECK_THROWS_AS(curvature_pair_from_covariogram(unit_disk(), Direction(0.0), bad), Error);
}

TEST_CASE("curvature pair from a covariogram that is not smooth fails the fit") {
    const CrossCovariogram g(unit_square(), unit_square());
    try {
        const CurvaturePair p = curvature_pair_from_covariogram(g.as_function(), Direction(0.3));
        FAIL("fit accepted a polygon: " << p.low << " " << p.high);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FitFailed);
    }
}

TEST_CASE("grid sampling, CSV and sidecar") {
    const CrossCovariogram g(unit_square(), unit_square());
    const GridSpec spec = support_grid(unit_square(), unit_square(), 41, 41);
    const CovariogramGrid grid = evaluate_grid(g, spec, {"a", "b"});
    CHECK(grid.values.size() == 41u * 41u);
    CHECK(grid.at(20, 20) == doctest::Approx(1.0).epsilon(1e-9));
    for (const double v : grid.values) CHECK(v >= 0.0);
    const auto dir = std::filesystem::temp_directory_path() / "covario_grid_test";
    std::filesystem::create_directories(dir);
    write_grid(grid, dir / "a.csv");
    write_grid(evaluate_grid(g, spec, {"a", "b"}), dir / "b.csv");
    const std::string a = slurp(dir / "a.csv");
    CHECK(a.rfind("x,y,value\n", 0) == 0);
    CHECK(a == slurp(dir / "b.csv"));
    const auto meta = nlohmann::json::parse(slurp(dir / "a.csv.json"));
    CHECK(meta["schema_version"] == 1);
    CHECK(meta["method"] == "exact-clip");
    CHECK(meta["dims"][0] == 41);
    CHECK(meta["body_hashes"][1] == "b");
    std::filesystem::remove_all(dir);
}
