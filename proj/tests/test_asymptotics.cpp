#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covario/asymptotics.hpp"
#include "covario/error.hpp"
#include "covario/verify.hpp"

using namespace covario;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("disk branches sit on the J1 zeros") {
    const KobayashiReport r = kobayashi_report(unit_disk(), 1, 20, {Direction(0.0), Direction(1.0)}, "disk");
    CHECK(r.smooth_input);
    CHECK(r.failures.empty());
    CHECK(r.rows.size() == 40);
    for (const auto& row : r.rows) {
        CHECK(std::abs(row.zeta - cdouble(oracles::bessel_j1_zero(row.m), 0.0)) <= 1e-9);
        CHECK(row.im_recovery_error <= 1e-9);
    }
    CHECK(r.max_deviation.front() == doctest::Approx(0.0953).epsilon(0.1));
    CHECK(r.exponent >= -1.3);
    CHECK(r.exponent <= -0.7);
}

TEST_CASE("branch deviation shrinks on the constant width body") {
    const KobayashiReport r = kobayashi_report(constant_width_body(), 2, 40, {Direction(0.0)});
    CHECK(r.failures.empty());
    CHECK(r.max_deviation.back() < r.max_deviation.front());
    CHECK(r.max_im_error.back() <= 1e-2);
    CHECK(r.max_re_error.back() <= 1e-2);
}

TEST_CASE("polygon input is reported as non-smooth") {
    const KobayashiReport r = kobayashi_report(unit_square(), 1, 4, {Direction(0.0)});
    CHECK(!r.smooth_input);
    for (const auto& row : r.rows) CHECK(std::isnan(row.im_recovery_error));
}

TEST_CASE("implied curvatures split the sum by the branch ratio") {
    const auto [a, b] = implied_curvatures({10.0, 0.0}, 2.0, 2.0);
    CHECK(a == doctest::Approx(1.0));
    CHECK(b == doctest::Approx(1.0));
    const auto [c, d] = implied_curvatures({10.0, std::log(3.0) / 4.0}, 2.0, 4.0);
    CHECK(c == doctest::Approx(1.0));
    CHECK(d == doctest::Approx(3.0));
    CHECK(c + d == doctest::Approx(4.0));
}

TEST_CASE("implied curvatures agree with the fitted pair") {
    const Body k = constant_width_body();
    const Direction u(0.0);
    const RayTransformContext ctx(k, u);
    const ZeroBranch z = track_zero(ctx, k, 40);
    const CurvaturePair p = curvature_pair_from_covariogram(k, u);
    const auto [tu, tmu] = implied_curvatures(z.zeta, width(k, u), p.sum);
    const double lo = std::min(tu, tmu), hi = std::max(tu, tmu);
    CHECK(std::abs(lo - p.low) <= 0.05 * p.low);
    CHECK(std::abs(hi - p.high) <= 0.05 * p.high);
}

TEST_CASE("zero set of the covariogram transform") {
    const ZeroUnionReport d = zero_union_check(unit_disk(), Direction(0.0), 1, 10);
    CHECK(d.rows.size() == 10);
    CHECK(d.max_match_error <= 1e-6);
    for (const auto& row : d.rows) CHECK(row.count == doctest::Approx(2.0).epsilon(1e-3));
    const ZeroUnionReport c = zero_union_check(constant_width_body(), Direction(0.5), 3, 8);
    CHECK(c.max_match_error <= 1e-6);
    CHECK(c.max_residual <= 1e-9);
    for (const auto& row : c.rows) CHECK(std::abs(row.branch.imag()) > 1e-3);
    CHECK(kind_of([] { zero_union_check(unit_square(), Direction(0.0), 1, 2); }) == ErrorKind::PolygonNotSmooth);
    CHECK(kind_of([] { zero_union_check(unit_disk(), Direction(0.0), 3, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("parallelogram families share cross covariograms") {
    const CounterexampleReport one = crosscov_counterexample(1, FamilyParams{});
    CHECK(one.passed);
    CHECK(one.max_deviation <= 1e-9);
    CHECK(!one.trivial);
    FamilyParams p;
    p.m = 1.0;
    p.alpha_p = 1.0;
    p.gamma_p = 2.0;
    const CounterexampleReport three = crosscov_counterexample(3, p);
    CHECK(three.passed);
    oracles::RandomStream rng(41, 0);
    for (int i = 0; i < 8; ++i) {
        const int fam = i % 2 == 0 ? 1 : 3;
        CHECK(crosscov_counterexample(fam, random_family_params(fam, rng, i), 21).passed);
    }
}

TEST_CASE("perturbing one segment breaks the equality") {
    FamilyParams p;
    const auto [h1, k1] = example_pair(1, p);
    FamilyParams q = p;
    q.alpha += 0.1;
    const auto [h2, k2] = example_pair(2, q);
    CHECK(crosscov_deviation(h1, k1, h2, k2, 41) >= 1e-3);
}

TEST_CASE("random family parameters are admissible") {
    oracles::RandomStream rng(42, 0);
    for (int i = 0; i < 40; ++i) {
        const FamilyParams a = random_family_params(1, rng, i);
        for (double v : {a.alpha, a.beta, a.gamma, a.delta}) {
            CHECK(v >= 0.5);
            CHECK(v <= 2.0);
        }
        CHECK(std::abs(a.y.x) <= 1.0);
        const FamilyParams b = random_family_params(3, rng, i);
        CHECK(std::abs(b.alpha_p - b.gamma_p) > 0.1);
        if (i % 4 == 0) {
            CHECK(b.m == 0.0);
            CHECK(std::abs(b.beta_p - b.delta_p) > 0.1);
        }
        CHECK(std::abs(b.m) <= 2.0);
    }
    CHECK(kind_of([&] { random_family_params(2, rng, 0); }) == ErrorKind::InvalidFamilyParams);
    FamilyParams bad;
    bad.gamma_p = bad.alpha_p;
    CHECK(kind_of([&] { example_pair(3, bad); }) == ErrorKind::InvalidFamilyParams);
    bad = FamilyParams{};
    bad.beta = -1.0;
    CHECK(kind_of([&] { crosscov_counterexample(1, bad); }) == ErrorKind::InvalidFamilyParams);
}

TEST_CASE("trivial associates") {
    oracles::RandomStream rng(43, 0);
    const Polygon h = random_convex_polygon(rng, 5), k = random_convex_polygon(rng, 6);
    const Vec2 x{0.3, -1.2};
    CHECK(trivial_associates(h, k, h.translated(x), k.translated(x)));
    CHECK(trivial_associates(h, k, k.reflected().translated(x), h.reflected().translated(x)));
    CHECK(!trivial_associates(h, k, h.translated(x), k.translated({0.3, -1.0})));
    CHECK(!trivial_associates(h, k, k, h));
    // the associate has the same cross covariogram
    CHECK(crosscov_deviation(h, k, k.reflected().translated(x), h.reflected().translated(x), 21) <= 1e-12);
}

TEST_CASE("determination from black-box access") {
    const std::vector<Direction> grid = direction_grid(6);
    const Body cw = constant_width_body();
    const BodyAccess a = black_box(cw);

    const DeterminationVerdict self = determination_experiment(a, black_box(transform(cw, Translate{{0.7, -0.4}})), grid);
    CHECK(self.outcome == Verdict::IdenticalUpToTranslation);
    CHECK(self.failures == 0);

    const DeterminationVerdict refl = determination_experiment(a, black_box(transform(cw, Reflect{})), grid);
    CHECK(refl.outcome == Verdict::ReflectionNeeded);

    const DeterminationVerdict far =
        determination_experiment(black_box(unit_disk()), black_box(Body(Disk({0, 0}, 1.05))), grid);
    CHECK(far.outcome == Verdict::Distinct);

    CHECK(to_string(Verdict::IdenticalUpToTranslation) == "identical-up-to-translation");
    CHECK(to_string(Verdict::ReflectionNeeded) == "reflection-needed");
    CHECK(to_string(Verdict::Distinct) == "distinct");
}

TEST_CASE("determination abstains on a centrally symmetric body") {
    const std::vector<Direction> grid = direction_grid(4);
    const DeterminationVerdict v =
        determination_experiment(black_box(unit_disk()), black_box(transform(unit_disk(), Translate{{2, 1}})), grid);
    CHECK(v.outcome == Verdict::IdenticalUpToTranslation);
    CHECK(v.abstentions == 4);
}

TEST_CASE("determination without a smooth covariogram is inconclusive") {
    const BodyAccess sq = black_box(unit_square());
    CHECK(kind_of([&] { determination_experiment(sq, sq, direction_grid(4)); }) == ErrorKind::Inconclusive);
}
