#include "covario/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "covario/error.hpp"
#include "covario/parallel.hpp"

namespace covario {

namespace {

std::pair<double, double> least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double b = sxy / sxx;
    return {my - b * mx, b};
}

}  // namespace

// ---------------------------------------------------------------------------

KobayashiReport kobayashi_report(const Body& k, int m_first, int m_last, const std::vector<Direction>& u_grid,
                                 const std::string& body_id) {
    KobayashiReport r;
    r.body_id = body_id;
    r.smooth_input = k.is_smooth();
    r.table = branch_sweep(k, u_grid, m_first, m_last);
    r.failures = r.table.failures;
    const std::size_t nu = u_grid.size();
    for (int m = m_first; m <= m_last; ++m) {
        double dev = 0.0, re = 0.0, im = r.smooth_input ? 0.0 : std::nan("");
        for (std::size_t i = 0; i < nu; ++i) {
            const ZeroBranch& b = r.table.rows[static_cast<std::size_t>(m - m_first) * nu + i];
            KobayashiRow row;
            row.m = m;
            row.u = b.u;
            row.zeta = b.zeta;
            row.center = b.predicted_center;
            row.validated = b.validated;
            const double w = width(k, b.u);
            row.deviation = std::abs(b.zeta - b.predicted_center);
            row.re_error = std::abs(b.zeta.real() * 2.0 * w / kPi - (4.0 * m + 1.0));
            row.im_recovery_error = std::nan("");
            if (r.smooth_input) {
                const double ratio = std::log(curvature(k, b.u.antipode())) - std::log(curvature(k, b.u));
                row.im_recovery_error = std::abs(b.zeta.imag() * 2.0 * w - ratio);
            }
            if (b.validated) {
                dev = std::max(dev, row.deviation);
                re = std::max(re, row.re_error);
                if (r.smooth_input) im = std::max(im, row.im_recovery_error);
            }
            r.rows.push_back(row);
        }
        r.ms.push_back(m);
        r.max_deviation.push_back(dev);
        r.max_re_error.push_back(re);
        r.max_im_error.push_back(im);
    }

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < r.ms.size(); ++i) {
        if (r.ms[i] >= 2 && r.max_deviation[i] > 0.0) {
            lx.push_back(std::log(static_cast<double>(r.ms[i])));
            ly.push_back(std::log(r.max_deviation[i]));
        }
    }
    if (lx.size() >= 2) {
        const auto [c, p] = least_squares_line(lx, ly);
        r.exponent = p;
        r.prefactor = std::exp(c);
        double res = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) res += std::pow(ly[i] - c - p * lx[i], 2);
        r.exponent_residual = std::sqrt(res / static_cast<double>(lx.size()));
    } else {
        r.exponent = std::nan("");
    }
    return r;
}

std::pair<double, double> implied_curvatures(cdouble zeta, double width, double sum) {
    const double e = std::exp(zeta.imag() * 2.0 * width);  // tau(-u) / tau(u)
    return {sum / (1.0 + e), sum * e / (1.0 + e)};
}

// ---------------------------------------------------------------------------

ZeroUnionReport zero_union_check(const Body& k, const Direction& u, int m_first, int m_last, double tolerance) {
    if (!k.is_smooth()) throw Error(ErrorKind::PolygonNotSmooth, "zero union check needs a smooth body");
    if (m_first < 1 || m_last < m_first) throw Error(ErrorKind::InvalidArgument, "invalid branch range");
    const RayTransformContext ctx(k, u);
    const double w = ctx.width();
    const double radius = 0.5 * kPi / w;
    const double max_freq = kPi * (4.0 * m_last + 1.0) / (2.0 * w) + 2.0 * radius + 1.0;
    const AutocorrelationTransform ghat(k, u, max_freq);
    const double a2 = std::pow(area(k), 2);

    ZeroUnionReport rep;
    rep.u = u;
    rep.tolerance = tolerance;
    for (int m = m_first; m <= m_last; ++m) {
        const ZeroBranch b = track_zero(ctx, k, m);
        ZeroUnionRow row;
        row.m = m;
        row.branch = b.zeta;
        row.residual = std::abs(ghat(b.zeta)) / a2;

        // Contour moments about c on the circle |xi - c| = radius (trapezoid
        // rule, spectrally accurate for the periodic integrand).
        const cdouble c{b.zeta.real(), 0.0};
        constexpr int kPoints = 256;
        cdouble s0{}, s1{}, s2{};
        for (int j = 0; j < kPoints; ++j) {
            const cdouble d = radius * std::polar(1.0, kTwoPi * j / kPoints);
            const cdouble xi = c + d;
            const cdouble q = ghat.derivative(xi) / ghat(xi) * d;
            s0 += q;
            s1 += q * d;
            s2 += q * d * d;
        }
        s0 /= double(kPoints);
        s1 /= double(kPoints);
        s2 /= double(kPoints);
        row.count = s0.real();
        if (std::abs(s0 - 2.0) > 0.1) {
            throw Error(ErrorKind::UnmatchedZero,
                        "m = " + std::to_string(m) + ": contour holds " + std::to_string(row.count) + " zeros, expected 2");
        }
        const cdouble e2 = 0.5 * (s1 * s1 - s2);
        const cdouble disc = std::sqrt(s1 * s1 - 4.0 * e2);
        row.zeros = {c + 0.5 * (s1 - disc), c + 0.5 * (s1 + disc)};
        // Compare symmetric functions of the pair: well conditioned even when
        // the two zeros coincide (real branches).
        const cdouble t1 = b.zeta + std::conj(b.zeta) - 2.0 * c;
        const cdouble t2 = (b.zeta - c) * (std::conj(b.zeta) - c);
        row.match_error = std::max(std::abs(s1 - t1), std::abs(e2 - t2) / radius);
        rep.max_match_error = std::max(rep.max_match_error, row.match_error);
        rep.max_residual = std::max(rep.max_residual, row.residual);
        rep.rows.push_back(row);
        if (row.match_error > tolerance) {
            throw Error(ErrorKind::UnmatchedZero, "m = " + std::to_string(m) + ": located zero is " +
                                                      std::to_string(row.match_error) + " from the branch pair");
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

FamilyParams random_family_params(int family, oracles::RandomStream& rng, int draw) {
    FamilyParams p;
    const auto greek = [&] { return rng.uniform(0.5, 2.0); };
    const auto point = [&] { return Vec2{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}; };
    if (family == 1) {
        p.alpha = greek();
        p.beta = greek();
        p.gamma = greek();
        p.delta = greek();
        p.y = point();
        return p;
    }
    if (family != 3) throw Error(ErrorKind::InvalidFamilyParams, "family must be 1 or 3");
    p.m = draw % 4 == 0 ? 0.0 : rng.uniform(-2.0, 2.0);
    p.y_p = point();
    do {
        p.alpha_p = greek();
        p.beta_p = greek();
        p.gamma_p = greek();
        p.delta_p = greek();
    } while (std::abs(p.alpha_p - p.gamma_p) <= 0.1 || (p.m == 0.0 && std::abs(p.beta_p - p.delta_p) <= 0.1));
    return p;
}

namespace {

bool same_vertex_set(const Polygon& a, const Polygon& b, double tol) {
    if (a.size() != b.size()) return false;
    for (const auto& p : a.vertices()) {
        const bool found = std::any_of(b.vertices().begin(), b.vertices().end(),
                                       [&](const Vec2& q) { return norm(p - q) <= tol; });
        if (!found) return false;
    }
    return true;
}

}  // namespace

bool trivial_associates(const Polygon& h1, const Polygon& k1, const Polygon& h2, const Polygon& k2,
                        double tolerance) {
    // (H2, K2) = (H1 + x, K1 + x)
    {
        const Vec2 x = h2.steiner_point() - h1.steiner_point();
        if (same_vertex_set(h1.translated(x), h2, tolerance) && same_vertex_set(k1.translated(x), k2, tolerance))
            return true;
    }
    // (H2, K2) = (-K1 + x, -H1 + x)
    {
        const Polygon mk = k1.reflected(), mh = h1.reflected();
        const Vec2 x = h2.steiner_point() - mk.steiner_point();
        if (same_vertex_set(mk.translated(x), h2, tolerance) && same_vertex_set(mh.translated(x), k2, tolerance))
            return true;
    }
    return false;
}

double crosscov_deviation(const Polygon& h1, const Polygon& k1, const Polygon& h2, const Polygon& k2, int n) {
    const CrossCovariogram g1{Body(h1), Body(k1)}, g2{Body(h2), Body(k2)};
    const GridSpec a = support_grid(Body(h1), Body(k1), n, n);
    const GridSpec b = support_grid(Body(h2), Body(k2), n, n);
    // lattice over the union of both bounding boxes
    const Vec2 lo{std::min(a.origin.x, b.origin.x), std::min(a.origin.y, b.origin.y)};
    const Vec2 hi{std::max(a.origin.x + a.spacing.x * (n - 1), b.origin.x + b.spacing.x * (n - 1)),
                  std::max(a.origin.y + a.spacing.y * (n - 1), b.origin.y + b.spacing.y * (n - 1))};
    const GridSpec spec{lo, {(hi.x - lo.x) / (n - 1), (hi.y - lo.y) / (n - 1)}, n, n};
    const auto v1 = evaluate_grid(g1, spec).values;
    const auto v2 = evaluate_grid(g2, spec).values;
    double dev = 0.0;
    for (std::size_t i = 0; i < v1.size(); ++i) dev = std::max(dev, std::abs(v1[i] - v2[i]));
    return dev;
}

CounterexampleReport crosscov_counterexample(int family, const FamilyParams& params, int grid, double tolerance) {
    if (family != 1 && family != 3) throw Error(ErrorKind::InvalidFamilyParams, "family must be 1 or 3");
    if (grid < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 points per axis");
    const auto [h1, k1] = example_pair(family, params);
    const auto [h2, k2] = example_pair(family + 1, params);
    CounterexampleReport r;
    r.family = family;
    r.params = params;
    r.grid = grid;
    r.tolerance = tolerance;
    r.max_deviation = crosscov_deviation(h1, k1, h2, k2, grid);
    r.trivial = trivial_associates(h1, k1, h2, k2);
    r.passed = r.max_deviation <= tolerance && !r.trivial;
    return r;
}

// ---------------------------------------------------------------------------

BodyAccess black_box(const Body& k, int smooth_vertices) {
    auto g = std::make_shared<const CrossCovariogram>(k, k, smooth_vertices);
    BodyAccess access;
    access.covariogram = [g](Vec2 x) { return (*g)(x); };
    access.ray_transform = [k](const Direction& u) -> TransformFn {
        auto ctx = std::make_shared<const RayTransformContext>(k, u);
        return [ctx](cdouble z) { return ctx->flt_with_derivative(z); };
    };
    return access;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::IdenticalUpToTranslation: return "identical-up-to-translation";
    case Verdict::ReflectionNeeded: return "reflection-needed";
    case Verdict::Distinct: return "distinct";
    }
    return "unknown";
}

namespace {

/// Branch m of a ray transform, started from the real part of the predicted
/// center (the width is known from the covariogram, the ratio is not).
cdouble branch_from_access(const TransformFn& f, int m, double w) {
    const cdouble start{kPi * (4.0 * m + 1.0) / (2.0 * w), 0.0};
    const auto root = newton_zero(f, start);
    if (!root) throw Error(ErrorKind::NewtonDiverged, "branch tracking diverged");
    const double n = winding_number(f, root->first, 0.5 * kPi / w, 0.5 / w);
    if (std::abs(n - 1.0) > 0.1) throw Error(ErrorKind::ValidationFailed, "branch winding " + std::to_string(n));
    return root->first;
}

bool relative_match(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

}  // namespace

DeterminationVerdict determination_experiment(const BodyAccess& a, const BodyAccess& b,
                                              const std::vector<Direction>& u_grid,
                                              const DeterminationOptions& opt) {
    if (u_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty direction grid");
    DeterminationVerdict v;
    v.rows.resize(u_grid.size());
    parallel_for(u_grid.size(), [&](std::size_t i) {
        DirectionRow& row = v.rows[i];
        row.u = u_grid[i];
        try {
            row.pair_a = curvature_pair_from_covariogram(a.covariogram, row.u, opt.fit);
            row.pair_b = curvature_pair_from_covariogram(b.covariogram, row.u, opt.fit);
            // supp g = K + (-K), whose support in direction u is w_K(u)
            row.width_a = dot(row.pair_a.support_point, row.u.u());
            row.width_b = dot(row.pair_b.support_point, row.u.u());
            row.zeta_a = branch_from_access(a.ray_transform(row.u), opt.m, row.width_a);
            row.zeta_b = branch_from_access(b.ray_transform(row.u), opt.m, row.width_b);
            row.ok = true;
        } catch (const Error& e) {
            row.failure = e.what();
            return;
        }
        row.widths_match = relative_match(row.width_a, row.width_b, opt.width_tolerance);
        row.pairs_match = relative_match(row.pair_a.low, row.pair_b.low, opt.pair_tolerance) &&
                          relative_match(row.pair_a.high, row.pair_b.high, opt.pair_tolerance);
        const double scale = opt.zero_tolerance * std::abs(row.zeta_a);
        const bool same = std::abs(row.zeta_b - row.zeta_a) <= scale;
        const bool conj = std::abs(row.zeta_b - std::conj(row.zeta_a)) <= scale;
        row.zeros_match = same || conj;
        const bool abstain_a = std::abs(row.zeta_a.imag()) <= opt.abstain_threshold;
        const bool abstain_b = std::abs(row.zeta_b.imag()) <= opt.abstain_threshold;
        if (abstain_a && abstain_b) row.sign = 0;
        else if (abstain_a != abstain_b) row.zeros_match = false;
        else row.sign = (row.zeta_a.imag() > 0.0) == (row.zeta_b.imag() > 0.0) ? 1 : -1;
    });

    int plus = 0, minus = 0;
    for (const auto& row : v.rows) {
        if (!row.ok) {
            ++v.failures;
            continue;
        }
        if (row.sign == 0) ++v.abstentions;
        if (row.sign > 0) ++plus;
        if (row.sign < 0) ++minus;
    }
    if (v.failures > opt.max_failure_fraction * static_cast<double>(u_grid.size())) {
        throw Error(ErrorKind::Inconclusive, std::to_string(v.failures) + " of " + std::to_string(u_grid.size()) +
                                                 " directions failed");
    }
    for (const auto& row : v.rows) {
        if (!row.ok) continue;
        const char* what = !row.widths_match ? "widths differ"
                           : !row.pairs_match ? "curvature pairs differ"
                           : !row.zeros_match ? "zero branches differ"
                                              : nullptr;
        if (what) {
            v.outcome = Verdict::Distinct;
            v.reason = std::string(what) + " at theta = " + std::to_string(row.u.theta());
            return v;
        }
    }
    if (plus > 0 && minus > 0) {
        v.outcome = Verdict::Distinct;
        v.reason = "ratio signs disagree across the direction grid";
    } else if (minus > 0) {
        v.outcome = Verdict::ReflectionNeeded;
        v.reason = "all ratio signs flipped";
    } else {
        v.outcome = Verdict::IdenticalUpToTranslation;
        v.reason = plus > 0 ? "all ratio signs agree" : "centrally symmetric on the grid: every ratio sign abstained";
    }
    return v;
}

}  // namespace covario
