#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covario/error.hpp"
#include "covario/geometry.hpp"
#include "covario/polygon_ops.hpp"
#include "covario/verify.hpp"

using namespace covario;

namespace {

bool has_vertex(const Polygon& p, Vec2 v, double tol = 1e-12) {
    for (const auto& q : p.vertices())
        if (norm(q - v) <= tol) return true;
    return false;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no exception");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("direction is a unit vector and the antipode wraps") {
    for (double t : {-7.0, 0.0, 1.0, 3.14, 10.0}) {
        const Direction d(t);
        CHECK(std::abs(norm(d.u()) - 1.0) <= 1e-14);
        CHECK(d.theta() >= 0.0);
        CHECK(d.theta() < kTwoPi);
        const Direction a = d.antipode();
        CHECK(a.theta() < kTwoPi);
        CHECK(norm(a.u() + d.u()) <= 1e-14);
    }
    CHECK(direction_grid(4).size() == 4);
    CHECK(direction_grid(4)[1].theta() == doctest::Approx(kPi / 2));
}

TEST_CASE("polygon construction normalizes orientation, collinear points and start vertex") {
    const Polygon cw({{0, 1}, {1, 1}, {1, 0}, {0, 0}});
    CHECK(cw.area() == doctest::Approx(1.0));
    CHECK(cw[0] == Vec2{0, 0});
    const Polygon col({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(col.size() == 4);
    CHECK(kind_of([] { Polygon({{0, 0}, {1, 0}, {2, 0}}); }) == ErrorKind::InvalidPolygon);
    CHECK(kind_of([] { Polygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}); }) == ErrorKind::NotConvex);
    CHECK(kind_of([] { Polygon({{0, 0}, {1, 0}}); }) == ErrorKind::InvalidPolygon);
}

TEST_CASE("support values") {
    CHECK(support(unit_square(), Direction(0.0)) == doctest::Approx(1.0));
    CHECK(support(Body(Disk({0, 0}, 2.0)), Direction(1.234)) == doctest::Approx(2.0));
    const auto [h1, k1] = example_pair(1, FamilyParams{});
    CHECK(h1.support({1, 0}) == doctest::Approx(1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(support(Body(Disk({1, 2}, 1.0)), Direction(0.0)) == doctest::Approx(2.0));
}

TEST_CASE("width values") {
    for (double t = 0.0; t < kTwoPi; t += 0.37) {
        CHECK(width(unit_disk(), Direction(t)) == doctest::Approx(2.0));
        CHECK(width(constant_width_body(), Direction(t)) == doctest::Approx(2.0).epsilon(1e-13));
    }
    CHECK(width(unit_square(), Direction(kPi / 4)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("boundary points") {
    const Vec2 a = boundary_point(unit_disk(), Direction(0.0));
    CHECK(a.x == doctest::Approx(1.0));
    CHECK(a.y == doctest::Approx(0.0));
    const Vec2 b = boundary_point(Body(SupportBody(1.0, {})), Direction(kPi / 2));
    CHECK(b.x == doctest::Approx(0.0));
    CHECK(b.y == doctest::Approx(1.0));
    const Vec2 c = boundary_point(constant_width_body(), Direction(0.0));
    CHECK(c.x == doctest::Approx(1.05));
    CHECK(std::abs(c.y) <= 1e-15);
    CHECK(kind_of([] { boundary_point(unit_square(), Direction(0.3)); }) == ErrorKind::PolygonNotSmooth);
}

TEST_CASE("curvature values") {
    CHECK(curvature(Body(Disk({0, 0}, 3.0)), Direction(0.4)) == doctest::Approx(1.0 / 3.0));
    CHECK(curvature(constant_width_body(), Direction(0.0)) == doctest::Approx(1.0 / 0.6));
    CHECK(curvature(constant_width_body(), Direction(kPi)) == doctest::Approx(1.0 / 1.4));
    CHECK(kind_of([] { SupportBody(1.0, {{0, 0}, {0, 0}, {0.2, 0}}); }) == ErrorKind::NotC2Plus);
}

TEST_CASE("zonogons") {
    const auto s = parallelogram_segments(0.0);
    const std::vector<Segment> sq{s[0], s[2]};
    const Polygon p = zonogon({}, sq);
    CHECK(p.size() == 4);
    CHECK(p.area() == doctest::Approx(4.0));
    CHECK(has_vertex(p, {-1, -1}));
    CHECK(has_vertex(p, {1, 1}));
    const std::vector<Segment> par{s[0], s[1]};
    const Polygon q = zonogon({}, par);
    const double r = 1.0 / std::sqrt(2.0);
    for (const double sx : {-1.0, 1.0})
        for (const double sy : {-1.0, 1.0}) CHECK(has_vertex(q, Vec2{sx, 0} + Vec2{sy * r, sy * r}));
    const std::vector<Segment> one{s[0]};
    CHECK(kind_of([&] { zonogon({}, one); }) == ErrorKind::DegenerateZonogon);
    CHECK(kind_of([] { Segment({1, 1}, {1, 1}); }) == ErrorKind::InvalidSegment);
}

TEST_CASE("family construction and parameter checks") {
    FamilyParams p;
    p.m = 0.0;
    p.alpha_p = 1;
    p.gamma_p = 2;
    p.beta_p = 1;
    p.delta_p = 2;
    const auto [h3, k3] = example_pair(3, p);
    // axis-aligned rectangles
    for (const auto& poly : {h3, k3}) {
        CHECK(poly.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            const Vec2 e = poly[(i + 1) % 4] - poly[i];
            CHECK((std::abs(e.x) < 1e-14 || std::abs(e.y) < 1e-14));
        }
    }
    FamilyParams bad;
    bad.alpha = -1.0;
    CHECK(kind_of([&] { example_pair(1, bad); }) == ErrorKind::InvalidFamilyParams);
    FamilyParams eq;
    eq.alpha_p = eq.gamma_p = 1.0;
    eq.m = 0.5;
    CHECK(kind_of([&] { example_pair(3, eq); }) == ErrorKind::InvalidFamilyParams);
    CHECK(kind_of([] { example_pair(5, FamilyParams{}); }) == ErrorKind::InvalidFamilyParams);
}

TEST_CASE("transforms") {
    const Body r = transform(unit_square(), Reflect{});
    CHECK(has_vertex(r.polygon(), {-1, -1}));
    CHECK(has_vertex(r.polygon(), {0, 0}));
    const Body t = transform(unit_disk(), Translate{{3, 0}});
    CHECK(support(t, Direction(0.0)) == doctest::Approx(4.0));
    const Body cw = constant_width_body();
    const Body m = transform(cw, Reflect{});
    for (double th = 0.0; th < kTwoPi; th += 0.5) {
        CHECK(support(m, Direction(th)) == doctest::Approx(support(cw, Direction(th + kPi))));
        CHECK(support(transform(m, Reflect{}), Direction(th)) == doctest::Approx(support(cw, Direction(th))));
    }
}

TEST_CASE("polygonal approximation is inscribed and converges") {
    const Polygon p = polygonal_approximation(unit_disk(), 4096);
    CHECK(p.size() == 4096);
    CHECK(std::abs(p.area() - kPi) < 2e-6);
    CHECK(p.area() < kPi);
}

TEST_CASE("clipping kernel against simple configurations") {
    const Polygon sq = unit_square().polygon();
    CHECK(polygon_intersection_area(sq, sq) == doctest::Approx(1.0));
    CHECK(polygon_intersection_area(sq, sq.translated({0.5, 0})) == doctest::Approx(0.5));
    CHECK(polygon_intersection_area(sq, sq.translated({2, 0})) == 0.0);
    const Polygon m = minkowski_sum(sq, sq.reflected());
    CHECK(m.area() == doctest::Approx(4.0));
}
