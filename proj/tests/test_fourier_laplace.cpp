#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "covario/error.hpp"
#include "covario/fourier_laplace.hpp"
#include "covario/oracles.hpp"
#include "covario/verify.hpp"

using namespace covario;

namespace {

Body centered_square() { return Body(Polygon({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}})); }

double disk_transform(double x) { return 2.0 * kPi * oracles::bessel_j1(x) / x; }

}  // namespace

TEST_CASE("transform values on the real axis") {
    const RayTransformContext sq(centered_square(), Direction(0.0));
    CHECK(std::abs(sq.flt({kTwoPi, 0.0})) <= 1e-14);
    CHECK(sq.flt({0.0, 0.0}).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sq.flt({1.0, 0.0}).real() == doctest::Approx(2.0 * std::sin(0.5)).epsilon(1e-14));
    const RayTransformContext d(unit_disk(), Direction(0.0));
    CHECK(d.flt({3.0, 0.0}).real() == doctest::Approx(0.7101234).epsilon(1e-6));
    for (double x = 0.5; x < 60.0; x += 1.7) CHECK(std::abs(d.flt({x, 0.0}).real() - disk_transform(x)) <= 1e-12);
}

TEST_CASE("derivative of the transform") {
    const RayTransformContext sq(centered_square(), Direction(0.0));
    CHECK(std::abs(sq.derivative({0.0, 0.0})) <= 1e-15);
    const RayTransformContext d(unit_disk(), Direction(0.0));
    // d/dx [2 pi J1(x) / x] = -2 pi J2(x) / x, J2 = 2 J1 / x - J0
    const double x = 3.0;
    const double j2 = 2.0 * oracles::bessel_j1(x) / x - oracles::bessel_j0(x);
    CHECK(d.derivative({x, 0.0}).real() == doctest::Approx(-2.0 * kPi * j2 / x).epsilon(1e-12));
    oracles::RandomStream rng(31, 0);
    const RayTransformContext c(constant_width_body(), Direction(0.4));
    for (int i = 0; i < 20; ++i) {
        const cdouble z{rng.uniform(-30, 30), rng.uniform(-2, 2)};
        const double h = 1e-5;
        const cdouble fd = (c.flt(z + h) - c.flt(z - h)) / (2.0 * h);
        const cdouble an = c.derivative(z);
        CHECK(std::abs(fd - an) <= 1e-7 * std::max(1.0, std::abs(an)));
    }
}

TEST_CASE("precision guards") {
    const RayTransformContext d(unit_disk(), Direction(0.0));
    CHECK(d.im_cap() == doctest::Approx(6.0));
    CHECK_THROWS_AS(d.flt({1.0, 7.0}), Error);
    CHECK_THROWS_AS(d.flt({250.0, 0.0}), Error);
    try {
        d.flt({0.0, -6.5});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PrecisionLoss);
    }
    RayTransformOptions bad;
    bad.order = 8;
    CHECK_THROWS_AS(RayTransformContext(unit_disk(), Direction(0.0), bad), Error);
}

TEST_CASE("growth bound of exponential type") {
    oracles::RandomStream rng(32, 0);
    for (const Body& k : {unit_square(), constant_width_body()}) {
        const Direction u(1.0);
        const RayTransformContext ctx(k, u);
        const double bound = std::max(support(k, u), support(k, u.antipode()));
        for (int i = 0; i < 50; ++i) {
            const cdouble z{rng.uniform(-50, 50), rng.uniform(-0.9, 0.9) * ctx.im_cap()};
            CHECK(std::abs(ctx.flt(z)) <= area(k) * std::exp(bound * std::abs(z.imag())) * (1 + 1e-12));
        }
    }
}

TEST_CASE("predicted branch centers") {
    const cdouble d = kobayashi_center(unit_disk(), 1, Direction(0.0));
    CHECK(d.real() == doctest::Approx(5.0 * kPi / 4.0));
    CHECK(d.imag() == 0.0);
    const cdouble c = kobayashi_center(constant_width_body(), 1, Direction(0.0));
    CHECK(c.real() == doctest::Approx(3.92699).epsilon(1e-6));
    CHECK(c.imag() == doctest::Approx(-0.21182).epsilon(1e-4));
    CHECK(kobayashi_center(Body(SupportBody(1.0, {{0, 0}, {0.05, 0.02}})), 4, Direction(0.8)).imag() ==
          doctest::Approx(0.0));
    CHECK_THROWS_AS(kobayashi_center(unit_square(), 1, Direction(0.0)), Error);
}

TEST_CASE("disk zeros are the zeros of J1") {
    const RayTransformContext ctx(unit_disk(), Direction(0.0));
    for (int m : {1, 5, 12}) {
        const ZeroBranch b = track_zero(ctx, unit_disk(), m);
        CHECK(b.validated);
        CHECK(b.winding == 1);
        CHECK(std::abs(b.zeta - cdouble(oracles::bessel_j1_zero(m), 0.0)) <= 1e-9);
        CHECK(b.residual <= 1e-9);
    }
    CHECK(track_zero(ctx, unit_disk(), 1).zeta.real() == doctest::Approx(3.83171).epsilon(1e-6));
    CHECK(track_zero(ctx, unit_disk(), 5).zeta.real() == doctest::Approx(16.47063).epsilon(1e-6));
}

TEST_CASE("square zeros are multiples of two pi") {
    const RayTransformContext ctx(centered_square(), Direction(0.0));
    for (int m = 1; m <= 6; ++m) {
        const ZeroBranch b = track_zero(ctx, centered_square(), m);
        CHECK(!b.smooth_input);
        CHECK(std::abs(b.zeta - cdouble(kTwoPi * m, 0.0)) <= 1e-10);
    }
}

TEST_CASE("newton and winding helpers") {
    const TransformFn f = [](cdouble z) { return std::make_pair((z - 2.0) * (z + 1.0), 2.0 * z - 1.0); };
    const auto r = newton_zero(f, {2.5, 0.3});
    REQUIRE(r.has_value());
    CHECK(std::abs(r->first - 2.0) <= 1e-12);
    CHECK(winding_number(f, {2.0, 0.0}, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(winding_number(f, {0.5, 0.0}, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-10));
    const TransformFn none = [](cdouble z) { return std::make_pair(std::exp(z), std::exp(z)); };
    CHECK(!newton_zero(none, {0.0, 0.0}).has_value());
}

TEST_CASE("branch sweep: rotation invariance, ordering and continuity") {
    const BranchTable disk = branch_sweep(unit_disk(), direction_grid(8), 3, 3);
    double lo = 1e9, hi = -1e9;
    for (const auto& b : disk.rows) {
        lo = std::min(lo, b.zeta.real());
        hi = std::max(hi, b.zeta.real());
    }
    CHECK(hi - lo <= 1e-8);
    CHECK(disk.continuous);

    const BranchTable t = branch_sweep(constant_width_body(), {Direction(0.0)}, 5, 40);
    CHECK(t.failures.empty());
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].zeta.real() > t.rows[i - 1].zeta.real());
    for (const auto& b : t.rows) CHECK(b.residual <= 1e-9);
}

TEST_CASE("three-fold symmetry of the branch imaginary part") {
    const BranchTable t = branch_sweep(constant_width_body(), direction_grid(120), 10, 10);
    REQUIRE(t.rows.size() == 120);
    CHECK(t.failures.empty());
    CHECK(t.continuous);
    for (std::size_t i = 0; i < 120; ++i) {
        CHECK(std::abs(t.rows[i].zeta.imag() - t.rows[(i + 40) % 120].zeta.imag()) <= 1e-9);
    }
}

TEST_CASE("antipodal branches and mirrored zeros") {
    const Body k = constant_width_body();
    const Direction u(0.7);
    const RayTransformContext a(k, u), b(k, u.antipode());
    const ZeroBranch z = track_zero(a, k, 7);
    const ZeroBranch w = track_zero(b, k, 7);
    // F(-zeta) on direction u equals F(zeta) on -u, so -conj of a zero on u ...
    CHECK(std::abs(a.flt(-std::conj(z.zeta))) <= 1e-9 * std::abs(a.derivative(z.zeta)));
    // ... and the gamma = -1 zero on u is -F_m(-u)
    CHECK(std::abs(a.flt(-w.zeta)) <= 1e-9 * std::abs(a.derivative(-w.zeta)));
}

TEST_CASE("branch CSV") {
    const BranchTable t = branch_sweep(unit_disk(), {Direction(0.0)}, 1, 2);
    const std::string csv = branch_csv(t);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "m,theta,re_zeta,im_zeta,residual,pred_re,pred_im,validated");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.back() == '1');
    }
    CHECK(rows == 2);
    CHECK(csv == branch_csv(branch_sweep(unit_disk(), {Direction(0.0)}, 1, 2)));
}

TEST_CASE("reflection identity") {
    oracles::RandomStream rng(33, 0);
    const Body poly(random_convex_polygon(rng, 7));
    const auto r = verify_reflection_identity(poly, 50, 5);
    CHECK(r.passed);
    CHECK(r.max_deviation <= 1e-9 * r.scale);
    CHECK(r.zero_mirror_residual <= 1e-9);
    const RayTransformContext sq(centered_square(), Direction(0.3));
    for (double x = 0.5; x < 30.0; x += 3.1) CHECK(std::abs(sq.flt({x, 0.0}).imag()) <= 1e-14);
    CHECK(verify_reflection_identity(constant_width_body(), 30, 6).passed);
}

TEST_CASE("factorization on the real axis") {
    std::vector<double> xi;
    for (int i = 0; i < 64; ++i) xi.push_back(50.0 * i / 63.0);
    const auto d = verify_factorization(unit_disk(), Direction(0.0), xi);
    CHECK(d.passed);
    CHECK(d.relative_deviation <= 1e-6);
    const AutocorrelationTransform g(unit_disk(), Direction(0.0));
    CHECK(g({0.0, 0.0}).real() == doctest::Approx(kPi * kPi).epsilon(1e-12));
    const AutocorrelationTransform s(centered_square(), Direction(0.0));
    CHECK(std::abs(s({kTwoPi, 0.0})) <= 1e-14);
    CHECK(verify_factorization(constant_width_body(), Direction(1.3), xi).passed);
}
