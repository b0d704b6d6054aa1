#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covario/error.hpp"
#include "covario/oracles.hpp"

using namespace covario;
using namespace covario::oracles;

TEST_CASE("Monte Carlo area of known regions") {
    const auto sq = mc_area([](Vec2 p) { return p.x <= 1.0 && p.y <= 1.0; }, {{0, 0}, {2, 2}}, 1'000'000, 1);
    CHECK(std::abs(sq.mean - 1.0) <= 3.0 * sq.std_error);
    CHECK(sq.std_error == doctest::Approx(0.0017).epsilon(0.05));
    const auto disk = mc_area([](Vec2 p) { return p.x * p.x + p.y * p.y <= 1.0; }, {{-1, -1}, {1, 1}}, 1'000'000, 2);
    CHECK(std::abs(disk.mean - kPi) <= 3.0 * disk.std_error);
    const auto lens = mc_area(
        [](Vec2 p) { return p.x * p.x + p.y * p.y <= 1.0 && (p.x - 1) * (p.x - 1) + p.y * p.y <= 1.0; },
        {{0, -1}, {1, 1}}, 1'000'000, 3);
    CHECK(lens_area(1.0, 1.0) == doctest::Approx(1.22837).epsilon(1e-5));
    CHECK(std::abs(lens.mean - lens_area(1.0, 1.0)) <= 3.0 * lens.std_error);
}

TEST_CASE("Monte Carlo estimates are reproducible for a fixed seed") {
    const auto f = [](Vec2 p) { return p.x + p.y <= 1.0; };
    const auto a = mc_area(f, {{0, 0}, {1, 1}}, 300'000, 9);
    const auto b = mc_area(f, {{0, 0}, {1, 1}}, 300'000, 9);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.seed == 9);
    CHECK(a.samples == 300'000);
    const auto c = mc_area(f, {{0, 0}, {1, 1}}, 300'000, 10);
    CHECK(a.mean != c.mean);
}

TEST_CASE("matrix identities on fixed inputs") {
    const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
    const auto r = matrix_identities(i2, i2);
    for (const auto& e : r.expressions) CHECK((e - 0.5 * i2).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(r.det_lhs == doctest::Approx(0.25));
    CHECK(r.det_rhs == doctest::Approx(0.25));

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2), b = Eigen::MatrixXd::Zero(2, 2);
    a.diagonal() << 1, 2;
    b.diagonal() << 3, 4;
    const auto s = matrix_identities(a, b);
    CHECK(s.expressions[3](0, 0) == doctest::Approx(0.75));
    CHECK(s.expressions[3](1, 1) == doctest::Approx(4.0 / 3.0));
    CHECK(s.det_lhs == doctest::Approx(1.0));
    CHECK(s.det_rhs == doctest::Approx(24.0 / 24.0));
    CHECK(s.max_relative_deviation <= 1e-15);
}

TEST_CASE("random SPD matrices respect the eigenvalue range") {
    RandomStream rng(4, 0);
    for (int d = 1; d <= 6; ++d) {
        const Eigen::MatrixXd m = random_spd(d, 0.1, 10.0, rng);
        CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        CHECK(es.eigenvalues().minCoeff() >= 0.1 - 1e-12);
        CHECK(es.eigenvalues().maxCoeff() <= 10.0 + 1e-12);
    }
}

TEST_CASE("paraboloid cap volumes") {
    const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
    const auto r1 = paraboloid_volume(one, one, Eigen::VectorXd::Zero(1), 1.0, 1'000'000, 11);
    CHECK(r1.closed_form == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(r1.z_closed) <= 3.0);
    CHECK(std::abs(r1.z_statement) > 10.0);
    const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
    const auto r2 = paraboloid_volume(i2, i2, Eigen::VectorXd::Zero(2), 1.0, 1'000'000, 12);
    CHECK(r2.closed_form == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(std::abs(r2.z_closed) <= 3.0);
}

TEST_CASE("paraboloid closed form is homogeneous in t") {
    RandomStream rng(5, 0);
    for (int d = 1; d <= 3; ++d) {
        const auto a = random_spd(d, 0.5, 2.0, rng), b = random_spd(d, 0.5, 2.0, rng);
        const Eigen::VectorXd q = Eigen::VectorXd::Zero(d);
        const double lambda = 1.7;
        const auto x = paraboloid_volume(a, b, q, 1.0, 2000, 1);
        const auto y = paraboloid_volume(a, b, q, lambda, 2000, 1);
        CHECK(y.closed_form / x.closed_form == doctest::Approx(std::pow(lambda, (d + 2) / 2.0)).epsilon(1e-13));
    }
}

TEST_CASE("an empty cap is rejected") {
    const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
    Eigen::VectorXd q(1);
    q << 3.0;
    CHECK_THROWS_AS(paraboloid_volume(one, one, q, 0.1, 1000, 1), Error);
}

TEST_CASE("sphere surface areas") {
    CHECK(sphere_surface_area(1) == doctest::Approx(2.0));
    CHECK(sphere_surface_area(2) == doctest::Approx(2.0 * kPi));
    CHECK(sphere_surface_area(3) == doctest::Approx(4.0 * kPi));
}

TEST_CASE("Bessel J1 zeros") {
    CHECK(bessel_j1_zero(1) == doctest::Approx(3.831705970).epsilon(1e-10));
    CHECK(bessel_j1_zero(2) == doctest::Approx(7.015586670).epsilon(1e-10));
    CHECK(bessel_j1_zero(5) == doctest::Approx(16.47063005).epsilon(1e-9));
    for (int m = 1; m <= 40; ++m) CHECK(std::abs(bessel_j1(bessel_j1_zero(m))) <= 1e-13);
    for (int m = 3; m <= 40; ++m) {
        const double beta = (m + 0.25) * kPi;
        const double gap = std::abs(bessel_j1_zero(m) - beta);
        CHECK(gap <= 1.1 * 3.0 / (8.0 * beta));
    }
}

TEST_CASE("Bessel series and asymptotic forms agree at the switch") {
    for (double x = kBesselSwitch; x <= kBesselSwitch + 5.0; x += 0.25)
        CHECK(std::abs(bessel_j1_taylor(x) - bessel_j1_asymptotic(x)) <= 1e-12);
    CHECK(bessel_j0(0.0) == doctest::Approx(1.0));
    CHECK(bessel_j1(3.0) == doctest::Approx(0.3390589585259365).epsilon(1e-13));
}
