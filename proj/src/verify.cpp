#include "covario/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "covario/asymptotics.hpp"
#include "covario/covariogram.hpp"
#include "covario/error.hpp"
#include "covario/fourier_laplace.hpp"
#include "covario/parallel.hpp"
#include "covario/radon.hpp"

namespace covario {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Check at_most(std::string name, double value, double limit, std::string detail = {}) {
    Check c{std::move(name), value, limit, "<=", value <= limit, std::move(detail)};
    return c;
}

Check at_least(std::string name, double value, double limit, std::string detail = {}) {
    Check c{std::move(name), value, limit, ">=", value >= limit, std::move(detail)};
    return c;
}

Check within(std::string name, double value, double lo, double hi, std::string detail = {}) {
    char rel[64];
    std::snprintf(rel, sizeof rel, "in [%g, %g]", lo, hi);
    Check c{std::move(name), value, hi, rel, value >= lo && value <= hi, std::move(detail)};
    return c;
}

Check flag(std::string name, bool ok, std::string detail = {}) {
    Check c{std::move(name), ok ? 1.0 : 0.0, 1.0, "==", ok, std::move(detail)};
    return c;
}

double tol(const VerifyOptions& o, double fallback) { return o.tolerance.value_or(fallback); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---------------------------------------------------------------------------

SuiteResult suite_counterexample(const VerifyOptions& o) {
    SuiteResult r;
    const double limit = tol(o, 1e-9);
    const auto t0 = Clock::now();
    std::vector<int> families = o.family == 0 ? std::vector<int>{1, 3} : std::vector<int>{o.family};
    for (const int f : families) {
        if (f != 1 && f != 3) throw Error(ErrorKind::InvalidFamilyParams, "family must be 1 or 3");
        oracles::RandomStream rng(o.seed, static_cast<std::uint64_t>(f));
        double worst = 0.0;
        int trivial = 0;
        nlohmann::json draws = nlohmann::json::array();
        for (int d = 0; d < 20; ++d) {
            const FamilyParams p = random_family_params(f, rng, d);
            const CounterexampleReport rep = crosscov_counterexample(f, p, 41, limit);
            worst = std::max(worst, rep.max_deviation);
            trivial += rep.trivial ? 1 : 0;
            draws.push_back({{"draw", d}, {"max_deviation", rep.max_deviation}, {"trivial", rep.trivial}});
        }
        const std::string fam = "family " + std::to_string(f);
        r.checks.push_back(at_most(fam + ": max deviation over 20 draws", worst, limit, "41x41 grid"));
        r.checks.push_back(at_most(fam + ": draws that are trivial associates", trivial, 0));
        r.details["family_" + std::to_string(f)] = draws;
    }
    // reference parameters
    if (o.family == 0 || o.family == 1) {
        const CounterexampleReport a = crosscov_counterexample(1, FamilyParams{}, 41, limit);
        r.checks.push_back(at_most("family 1, unit parameters", a.max_deviation, limit));
        r.checks.push_back(flag("family 1, unit parameters: not trivial associates", !a.trivial));
        // negative control: alpha + 0.1 in the second pair only
        FamilyParams q;
        const auto [h1, k1] = example_pair(1, q);
        q.alpha += 0.1;
        const auto [h2, k2] = example_pair(2, q);
        r.checks.push_back(at_least("perturbed family 1 (negative control)", crosscov_deviation(h1, k1, h2, k2, 41),
                                    1e-3));
    }
    if (o.family == 0 || o.family == 3) {
        FamilyParams p;
        p.m = 1.0;
        p.alpha_p = 1.0;
        p.gamma_p = 2.0;
        p.beta_p = 1.0;
        p.delta_p = 1.0;
        const CounterexampleReport b = crosscov_counterexample(3, p, 41, limit);
        r.checks.push_back(at_most("family 3, m = 1 reference", b.max_deviation, limit));
        r.checks.push_back(flag("family 3, m = 1 reference: not trivial associates", !b.trivial));
    }
    r.checks.push_back(at_most("runtime [s]", seconds_since(t0), 10.0));
    return r;
}

SuiteResult suite_kobayashi_disk(const VerifyOptions& o) {
    SuiteResult r;
    const Body disk = unit_disk();
    const Direction e1(0.0);
    const RayTransformContext ctx(disk, e1);
    double worst = 0.0;
    nlohmann::json zeros = nlohmann::json::array();
    for (int m = 1; m <= 20; ++m) {
        const ZeroBranch b = track_zero(ctx, disk, m);
        const double j = oracles::bessel_j1_zero(m);
        const double err = std::abs(b.zeta - cdouble(j, 0.0));
        worst = std::max(worst, err);
        zeros.push_back({{"m", m}, {"re", b.zeta.real()}, {"im", b.zeta.imag()}, {"j1m", j}, {"error", err}});
    }
    r.details["zeros"] = zeros;
    r.checks.push_back(at_most("max |F_m - j_{1,m}|, m = 1..20", worst, tol(o, 1e-6)));

    const KobayashiReport k = kobayashi_report(disk, 1, 40, {e1}, "disk(1)");
    r.checks.push_back(at_most("branch failures, m = 1..40", static_cast<double>(k.failures.size()), 0));
    r.checks.push_back(within("deviation decay exponent, m = 2..40", k.exponent, -1.3, -0.7,
                              "RMS log residual " + fmt("%.3g", k.exponent_residual)));
    r.checks.push_back(within("deviation at m = 1", k.max_deviation.front(), 0.0953 - 0.01, 0.0953 + 0.01));
    r.checks.push_back(at_most("Im recovery error at m = 40", k.max_im_error.back(), 1e-3));
    nlohmann::json dev = nlohmann::json::array();
    for (std::size_t i = 0; i < k.ms.size(); ++i) dev.push_back({{"m", k.ms[i]}, {"deviation", k.max_deviation[i]}});
    r.details["deviation"] = dev;
    r.details["exponent"] = k.exponent;
    r.details["prefactor"] = k.prefactor;
    return r;
}

SuiteResult suite_curvature_ratio(const VerifyOptions& o) {
    SuiteResult r;
    const auto t0 = Clock::now();
    const Body k = constant_width_body();
    const KobayashiReport rep = kobayashi_report(k, 40, 40, direction_grid(120), "h = 1 + 0.05 cos 3 theta");
    r.checks.push_back(at_most("branch failures", static_cast<double>(rep.failures.size()), 0));
    r.checks.push_back(at_most("max_u |Im F_40 2w - ln(tau(-u)/tau(u))|", rep.max_im_error.front(), tol(o, 2e-2),
                               "120 directions"));
    r.checks.push_back(at_most("max_u |Re F_40 2w / pi - 161|", rep.max_re_error.front(), 2e-2));
    r.checks.push_back(at_most("runtime [s]", seconds_since(t0), 60.0));
    r.details["max_deviation"] = rep.max_deviation.front();
    return r;
}

SuiteResult suite_paraboloid(const VerifyOptions& o) {
    SuiteResult r;
    constexpr std::uint64_t kSamples = 1'000'000;
    const double rel_limit = tol(o, 1e-2);
    oracles::RandomStream rng(o.seed, 4);
    double worst_z = 0.0, worst_rel = 0.0;
    nlohmann::json cases = nlohmann::json::array();
    for (int i = 0; i < 10; ++i) {
        const int d = 1 + i % 3;
        const Eigen::MatrixXd a = oracles::random_spd(d, 0.5, 2.0, rng);
        const Eigen::MatrixXd b = oracles::random_spd(d, 0.5, 2.0, rng);
        Eigen::VectorXd q(d);
        for (int j = 0; j < d; ++j) q[j] = rng.uniform(-0.5, 0.5);
        const Eigen::MatrixXd qm = (a.inverse() + b.inverse()).inverse();
        const double t = 0.5 * q.dot(qm * q) + rng.uniform(0.2, 1.5);
        const auto rep = oracles::paraboloid_volume(a, b, q, t, kSamples, o.seed + 100 + i);
        worst_z = std::max(worst_z, std::abs(rep.z_closed));
        worst_rel = std::max(worst_rel, rep.relative_error);
        cases.push_back({{"dim", d},
                         {"t", t},
                         {"closed_form", rep.closed_form},
                         {"estimate", rep.estimate.mean},
                         {"std_error", rep.estimate.std_error},
                         {"z", rep.z_closed}});
    }
    r.details["cases"] = cases;
    r.checks.push_back(at_most("max |z| against closed form (10 instances)", worst_z, 3.0));
    r.checks.push_back(at_most("max relative error", worst_rel, rel_limit));

    Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
    const auto ref = oracles::paraboloid_volume(one, one, Eigen::VectorXd::Zero(1), 1.0, kSamples, o.seed + 99);
    r.checks.push_back(at_most("d = 1 reference: closed form - 4/3", std::abs(ref.closed_form - 4.0 / 3.0), 1e-12));
    r.checks.push_back(at_most("d = 1 reference: |z| closed form", std::abs(ref.z_closed), 3.0));
    r.checks.push_back(at_least("d = 1 reference: |z| statement constant", std::abs(ref.z_statement), 10.0));
    return r;
}

SuiteResult suite_matrix_identities(const VerifyOptions& o) {
    SuiteResult r;
    const double limit = tol(o, 1e-10);
    oracles::RandomStream rng(o.seed, 5);
    double worst = 0.0, worst_det = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int d = 1 + i % 6;
        const auto a = oracles::random_spd(d, 0.1, 10.0, rng);
        const auto b = oracles::random_spd(d, 0.1, 10.0, rng);
        const auto rep = oracles::matrix_identities(a, b);
        worst = std::max(worst, rep.max_relative_deviation);
        worst_det = std::max(worst_det, rep.det_relative_deviation);
    }
    r.checks.push_back(at_most("four expressions, max relative deviation", worst, limit, "1000 pairs, dims 1..6"));
    r.checks.push_back(at_most("determinant identity, max relative deviation", worst_det, limit));
    return r;
}

SuiteResult suite_curvature_pair(const VerifyOptions& o) {
    SuiteResult r;
    const Direction e1(0.0);
    const CurvaturePair d = curvature_pair_from_covariogram(unit_disk(), e1);
    const double disk_err = std::max(std::abs(d.low - 1.0), std::abs(d.high - 1.0));
    r.checks.push_back(at_most("unit disk: max relative error", disk_err, tol(o, 2e-2),
                               "{" + fmt("%.6f", d.low) + ", " + fmt("%.6f", d.high) + "}"));
    const Body k = constant_width_body();
    const CurvaturePair c = curvature_pair_from_covariogram(k, e1);
    const double lo = std::min(curvature(k, e1), curvature(k, e1.antipode()));
    const double hi = std::max(curvature(k, e1), curvature(k, e1.antipode()));
    const double cw_err = std::max(std::abs(c.low - lo) / lo, std::abs(c.high - hi) / hi);
    r.checks.push_back(at_most("h = 1 + 0.05 cos 3 theta at e1: max relative error", cw_err, tol(o, 5e-2),
                               "{" + fmt("%.6f", c.low) + ", " + fmt("%.6f", c.high) + "} vs {" + fmt("%.6f", lo) +
                                   ", " + fmt("%.6f", hi) + "}"));
    r.details["disk"] = {d.low, d.high};
    r.details["constant_width"] = {c.low, c.high};
    return r;
}

SuiteResult suite_factorization(const VerifyOptions& o) {
    SuiteResult r;
    std::vector<double> xi(512);
    for (int i = 0; i < 512; ++i) xi[i] = 50.0 * i / 511.0;
    oracles::RandomStream rng(o.seed, 7);
    const Body poly(random_convex_polygon(rng, 9));
    const Direction u(rng.uniform(0.0, kTwoPi));
    const double limit = tol(o, 1e-6);
    const auto a = verify_factorization(unit_disk(), Direction(0.0), xi, limit);
    const auto b = verify_factorization(poly, u, xi, limit);
    r.checks.push_back(at_most("disk: sup |ghat - |F|^2| / area^2", a.relative_deviation, limit));
    r.checks.push_back(at_most("random 9-gon: sup |ghat - |F|^2| / area^2", b.relative_deviation, limit));
    return r;
}

SuiteResult suite_width_of_support(const VerifyOptions& o) {
    SuiteResult r;
    oracles::RandomStream rng(o.seed, 8);
    std::vector<std::pair<Polygon, Polygon>> pairs;
    for (int i = 0; i < 50; ++i) {
        Polygon h = random_convex_polygon(rng, 3 + static_cast<int>(rng.uniform() * 10));
        Polygon k = random_convex_polygon(rng, 3 + static_cast<int>(rng.uniform() * 10));
        pairs.emplace_back(std::move(h), std::move(k));
    }
    std::vector<double> dev(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        dev[i] = support_of_crosscov(Body(pairs[i].first), Body(pairs[i].second), 360).max_width_deviation;
    });
    r.checks.push_back(at_most("max_u |w_{H+(-K)} - w_H - w_K|", *std::max_element(dev.begin(), dev.end()),
                               tol(o, 1e-12), "50 pairs, 360 directions"));
    return r;
}

SuiteResult suite_matheron(const VerifyOptions& o) {
    SuiteResult r;
    const double limit = tol(o, 1e-3);
    const std::vector<std::pair<std::string, Body>> bodies{
        {"square", unit_square()}, {"disk", unit_disk()}, {"constant width", constant_width_body()}};
    for (const auto& [name, k] : bodies) {
        double worst = 0.0;
        for (const auto& v : direction_grid(8, 0.1)) {
            const auto d = directional_derivative_origin(k, v);
            worst = std::max(worst, std::abs(d.finite_difference - d.geometric));
        }
        r.checks.push_back(at_most(name + ": |finite difference + projection length|", worst, limit, "8 directions"));
    }
    return r;
}

SuiteResult suite_properties(const VerifyOptions& o) {
    SuiteResult r;
    const double limit = tol(o, 1e-12);
    oracles::RandomStream rng(o.seed, 10);

    // covariogram evenness, translation and reflection invariance, ray monotonicity
    double even = 0.0, transl = 0.0, refl = 0.0;
    int monotone_violations = 0;
    for (int i = 0; i < 20; ++i) {
        const Polygon p = random_convex_polygon(rng, 3 + i % 8);
        const Body k(p);
        const Vec2 shift{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const CrossCovariogram g(k, k), gt(transform(k, Translate{shift}), transform(k, Translate{shift})),
            gr(transform(k, Reflect{}), transform(k, Reflect{}));
        const double scale = p.area();
        for (int j = 0; j < 20; ++j) {
            const Vec2 x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
            const double gx = g(x);
            even = std::max(even, std::abs(gx - g(-x)) / scale);
            transl = std::max(transl, std::abs(gx - gt(x)) / scale);
            refl = std::max(refl, std::abs(gx - gr(x)) / scale);
            double prev = g({});
            for (int s = 1; s <= 16; ++s) {
                const double cur = g(x * (s / 16.0));
                if (cur > prev + limit * scale) ++monotone_violations;
                prev = cur;
            }
        }
    }
    r.checks.push_back(at_most("evenness g(x) = g(-x)", even, limit, "20 polygons x 20 points"));
    r.checks.push_back(at_most("translation invariance", transl, limit));
    r.checks.push_back(at_most("reflection invariance g_{-K} = g_K", refl, limit));
    r.checks.push_back(at_most("ray monotonicity violations", monotone_violations, 0));

    // radon area identity
    double radon_poly = 0.0, radon_smooth = 0.0;
    for (int i = 0; i < 10; ++i) {
        const Body k(random_convex_polygon(rng, 3 + i));
        const Direction u(rng.uniform(0.0, kTwoPi));
        const RayTransformContext ctx(k, u);
        radon_poly = std::max(radon_poly, std::abs(ctx.flt({0.0, 0.0}).real() - area(k)) / area(k));
        const Body s(random_support_body(rng));
        const RayTransformContext cs(s, u);
        radon_smooth = std::max(radon_smooth, std::abs(cs.flt({0.0, 0.0}).real() - area(s)) / area(s));
    }
    r.checks.push_back(at_most("int S(u, t) dt = area, polygons (relative)", radon_poly, limit));
    r.checks.push_back(at_most("int S(u, t) dt = area, smooth bodies (relative)", radon_smooth, limit));

    // reflection identity of the transform
    double mirror = 0.0;
    const std::vector<Body> refl_bodies{constant_width_body(), Body(random_convex_polygon(rng, 7)),
                                        Body(random_support_body(rng))};
    for (std::size_t i = 0; i < refl_bodies.size(); ++i) {
        const auto rep = verify_reflection_identity(refl_bodies[i], 200, o.seed + i);
        mirror = std::max(mirror, rep.max_deviation / rep.scale);
    }
    r.checks.push_back(at_most("F_{-K}(z) = conj F_K(conj z) (relative to area)", mirror, limit));

    // square covariogram product formula
    const CrossCovariogram sq(unit_square(), unit_square());
    double prod = 0.0;
    for (int i = 0; i < 400; ++i) {
        const Vec2 x{rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
        const double expect = std::max(0.0, 1.0 - std::abs(x.x)) * std::max(0.0, 1.0 - std::abs(x.y));
        prod = std::max(prod, std::abs(sq(x) - expect));
    }
    r.checks.push_back(at_most("square: g(x) = (1 - |x1|)(1 - |x2|)", prod, limit, "400 points"));
    return r;
}

using SuiteFn = SuiteResult (*)(const VerifyOptions&);

const std::map<std::string, SuiteFn>& registry() {
    static const std::map<std::string, SuiteFn> r{
        {"counterexample", suite_counterexample},     {"kobayashi-disk", suite_kobayashi_disk},
        {"curvature-ratio", suite_curvature_ratio},   {"paraboloid", suite_paraboloid},
        {"matrix-identities", suite_matrix_identities}, {"curvature-pair", suite_curvature_pair},
        {"factorization", suite_factorization},       {"width-of-support", suite_width_of_support},
        {"matheron", suite_matheron},                 {"properties", suite_properties},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"counterexample", "kobayashi-disk",    "curvature-ratio",
                                                "paraboloid",     "matrix-identities", "curvature-pair",
                                                "factorization",  "width-of-support",  "matheron",
                                                "properties"};
    return names;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& options) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw Error(ErrorKind::InvalidArgument, "unknown suite '" + name + "'");
    const auto t0 = Clock::now();
    SuiteResult r;
    try {
        r = it->second(options);
    } catch (const Error& e) {
        r.checks.push_back(flag("suite raised", false, e.what()));
    }
    r.suite = name;
    r.seconds = seconds_since(t0);
    r.passed = !r.checks.empty() &&
               std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.passed; });
    return r;
}

std::vector<SuiteResult> run_all(const VerifyOptions& options) {
    const auto t0 = Clock::now();
    std::vector<SuiteResult> out;
    for (const auto& n : suite_names()) out.push_back(run_suite(n, options));
    SuiteResult total;
    total.suite = "all";
    total.checks.push_back(at_most("total runtime [s]", seconds_since(t0), 300.0));
    total.seconds = seconds_since(t0);
    total.passed = total.checks.front().passed;
    out.push_back(total);
    return out;
}

nlohmann::json to_json(const Check& c) {
    return {{"name", c.name},     {"value", c.value},   {"limit", c.limit},
            {"relation", c.relation}, {"passed", c.passed}, {"detail", c.detail}};
}

nlohmann::json to_json(const SuiteResult& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"schema_version", kSchemaVersion}, {"suite", r.suite},   {"passed", r.passed},
            {"seconds", r.seconds},             {"checks", checks},   {"details", r.details}};
}

std::string format_table(const std::vector<SuiteResult>& results) {
    std::ostringstream os;
    char line[512];
    for (const auto& r : results) {
        std::snprintf(line, sizeof line, "%s  %-18s %7.2fs\n", r.passed ? "PASS" : "FAIL", r.suite.c_str(), r.seconds);
        os << line;
        for (const auto& c : r.checks) {
            const std::string bound = c.relation.rfind("in ", 0) == 0 ? c.relation : c.relation + " " + fmt("%g", c.limit);
            std::snprintf(line, sizeof line, "    %s  %-58s %12.4g %-16s %s\n", c.passed ? "ok  " : "FAIL",
                          c.name.c_str(), c.value, bound.c_str(), c.detail.c_str());
            os << line;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------

Polygon random_convex_polygon(oracles::RandomStream& rng, int n) {
    if (n < 3) throw Error(ErrorKind::InvalidArgument, "a polygon needs at least 3 vertices");
    for (;;) {
        std::vector<double> angles(static_cast<std::size_t>(n));
        for (auto& a : angles) a = rng.uniform(0.0, kTwoPi);
        std::sort(angles.begin(), angles.end());
        const double ax = rng.uniform(0.5, 1.5), ay = rng.uniform(0.5, 1.5), rot = rng.uniform(0.0, kTwoPi);
        const Vec2 c{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        std::vector<Vec2> pts;
        for (const double a : angles) {
            const Vec2 e{ax * std::cos(a), ay * std::sin(a)};
            pts.push_back(c + Vec2{e.x * std::cos(rot) - e.y * std::sin(rot), e.x * std::sin(rot) + e.y * std::cos(rot)});
        }
        try {
            Polygon p(pts);
            if (p.area() > 0.05) return p;
        } catch (const Error&) {
            // nearly coincident angles; draw again
        }
    }
}

SupportBody random_support_body(oracles::RandomStream& rng, int harmonics) {
    const double a0 = rng.uniform(0.8, 1.5);
    std::vector<std::pair<double, double>> c(static_cast<std::size_t>(harmonics));
    double budget = 0.5 * a0;
    for (int k = 1; k <= harmonics; ++k) {
        const double weight = k == 1 ? 1.0 : std::abs(1.0 - double(k) * k);
        const double amp = rng.uniform(0.0, budget / (2.0 * harmonics)) / (k == 1 ? 1.0 : weight);
        const double phase = rng.uniform(0.0, kTwoPi);
        c[static_cast<std::size_t>(k - 1)] = {amp * std::cos(phase), amp * std::sin(phase)};
        if (k == 1) c[0] = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    }
    return SupportBody(a0, std::move(c));
}

Body unit_square() { return Body(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})); }
Body unit_disk() { return Body(Disk{{0.0, 0.0}, 1.0}); }
Body constant_width_body() { return Body(SupportBody(1.0, {{0.0, 0.0}, {0.0, 0.0}, {0.05, 0.0}})); }

}  // namespace covario
