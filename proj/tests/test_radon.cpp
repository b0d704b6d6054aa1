#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covario/covariogram.hpp"
#include "covario/fourier_laplace.hpp"
#include "covario/quadrature.hpp"
#include "covario/radon.hpp"
#include "covario/verify.hpp"

using namespace covario;

TEST_CASE("chord lengths") {
    CHECK(radon(unit_disk(), Direction(0.0), 0.0) == doctest::Approx(2.0));
    CHECK(radon(unit_square(), Direction(0.0), 0.5) == doctest::Approx(1.0));
    CHECK(radon(unit_square(), Direction(0.0), 1.5) == 0.0);
    CHECK(radon(unit_disk(), Direction(0.7), -1.0001) == 0.0);
    const Body cw = constant_width_body();
    const Body approx(polygonal_approximation(cw, 4096));
    CHECK(std::abs(radon(cw, Direction(0.0), 0.3) - radon(approx, Direction(0.0), 0.3)) <= 1e-6);
    const Body moved = transform(cw, Translate{{0.4, -1.3}});
    CHECK(radon(moved, Direction(0.0), 0.7) == doctest::Approx(radon(cw, Direction(0.0), 0.3)).epsilon(1e-12));
}

TEST_CASE("chord function domain and methods") {
    const ChordFunction s(unit_square(), Direction(kPi / 4));
    CHECK(s.lower() == doctest::Approx(0.0));
    CHECK(s.upper() == doctest::Approx(std::sqrt(2.0)));
    CHECK(s.method() == "polygon-edges");
    CHECK(s.breakpoints().size() == 1);
    CHECK(ChordFunction(unit_disk(), Direction(0.0)).method() == "closed-form");
    CHECK(ChordFunction(constant_width_body(), Direction(0.0)).method() == "boundary-roots");
    const ChordFunction c(constant_width_body(), Direction(0.0));
    CHECK(c.lower() == doctest::Approx(-0.95));
    CHECK(c.upper() == doctest::Approx(1.05));
}

TEST_CASE("chord autocorrelation values") {
    CHECK(chord_autocorrelation(unit_square(), Direction(0.0), 0.0) == doctest::Approx(1.0));
    CHECK(chord_autocorrelation(unit_square(), Direction(0.0), 1.2) == 0.0);
    CHECK(chord_autocorrelation(unit_disk(), Direction(0.0), 2.5) == 0.0);
    // autocorrelation at s equals the integral of g over the line <x, u> = s
    const CrossCovariogram g(unit_disk(), unit_disk(), 16384);
    const auto& gl = gauss_legendre(64);
    double direct = 0.0;
    const double half = std::sqrt(3.0);  // supp g is the disk of radius 2
    const int panels = 16;
    for (int p = 0; p < panels; ++p) {
        const double a = -half + 2.0 * half * p / panels, b = -half + 2.0 * half * (p + 1) / panels;
        direct += gl.integrate([&](double y) { return g({1.0, y}); }, a, b);
    }
    CHECK(std::abs(chord_autocorrelation(unit_disk(), Direction(0.0), 1.0) - direct) <= 1e-5);
}

TEST_CASE("leading coefficients") {
    const auto d = leading_coefficients(unit_disk(), Direction(0.3));
    CHECK(d.a0 == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(d.b0 == doctest::Approx(2.0 * std::sqrt(2.0)));
    const auto c = leading_coefficients(constant_width_body(), Direction(0.0));
    CHECK(c.b0 / c.a0 == doctest::Approx(std::sqrt(0.6 / 1.4)));
    const auto r = leading_coefficients(Body(Disk({1, 1}, 3.0)), Direction(0.0));
    CHECK(r.a0 == doctest::Approx(d.a0 * std::sqrt(3.0)));
    CHECK_THROWS(leading_coefficients(unit_square(), Direction(0.0)));
}

TEST_CASE("square-root behaviour at the upper endpoint of a disk chord") {
    const auto lc = leading_coefficients(unit_disk(), Direction(0.0));
    const double delta = 1e-6;
    const double fitted = radon(unit_disk(), Direction(0.0), 1.0 - delta) / std::sqrt(delta);
    CHECK(std::abs(fitted - lc.b0) <= 0.01 * lc.b0);
}

TEST_CASE("chord integral equals the area") {
    for (const Body& k : {unit_square(), unit_disk(), constant_width_body()}) {
        for (double t = 0.1; t < kTwoPi; t += 0.9) {
            const RayTransformContext ctx(k, Direction(t));
            CHECK(std::abs(ctx.flt({0.0, 0.0}).real() - area(k)) <= 1e-8);
        }
    }
}
