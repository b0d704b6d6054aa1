#include "covario/covariogram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "covario/error.hpp"
#include "covario/parallel.hpp"

namespace covario {

std::string to_string(CovariogramMethod m) {
    return m == CovariogramMethod::ExactClip ? "exact-clip" : "polyline-approx";
}

CrossCovariogram::CrossCovariogram(const Body& h, const Body& k, int smooth_vertices)
    : h_(polygonal_approximation(h, smooth_vertices)),
      k_(polygonal_approximation(k, smooth_vertices)),
      h_chains_(h_),
      k_chains_(k_),
      method_(h.is_polygon() && k.is_polygon() ? CovariogramMethod::ExactClip : CovariogramMethod::PolylineApprox),
      use_clip_(h_.size() * k_.size() <= kClipWorkLimit) {}

double CrossCovariogram::operator()(Vec2 x) const {
    if (use_clip_) {
        const auto loop = clip_convex(k_, h_, x, {});
        return loop.size() < 3 ? 0.0 : std::max(0.0, shoelace_area(loop));
    }
    return slab_intersection_area(h_chains_, {}, k_chains_, x);
}

CovariogramFn CrossCovariogram::as_function() const {
    return [self = *this](Vec2 x) { return self(x); };
}

double covariogram(const Body& k, Vec2 x) { return CrossCovariogram(k, k)(x); }

double cross_covariogram(const Body& h, const Body& k, Vec2 x) { return CrossCovariogram(h, k)(x); }

// ---------------------------------------------------------------------------

GridSpec support_grid(const Body& h, const Body& k, int nx, int ny) {
    if (nx < 2 || ny < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 points per axis");
    const Direction e1(0.0), e2(0.5 * kPi);
    const double x_hi = support(h, e1) + support(k, e1.antipode());
    const double x_lo = -(support(h, e1.antipode()) + support(k, e1));
    const double y_hi = support(h, e2) + support(k, e2.antipode());
    const double y_lo = -(support(h, e2.antipode()) + support(k, e2));
    return {{x_lo, y_lo}, {(x_hi - x_lo) / (nx - 1), (y_hi - y_lo) / (ny - 1)}, nx, ny};
}

CovariogramGrid evaluate_grid(const CrossCovariogram& g, const GridSpec& spec, std::vector<std::string> hashes) {
    if (spec.nx < 1 || spec.ny < 1) throw Error(ErrorKind::InvalidArgument, "empty grid");
    CovariogramGrid grid{spec, std::vector<double>(static_cast<std::size_t>(spec.nx) * spec.ny), g.method(),
                         std::move(hashes)};
    parallel_for(static_cast<std::size_t>(spec.ny), [&](std::size_t iy) {
        for (int ix = 0; ix < spec.nx; ++ix)
            grid.values[iy * spec.nx + ix] = g(grid.point(ix, static_cast<int>(iy)));
    });
    return grid;
}

nlohmann::json grid_metadata(const CovariogramGrid& grid) {
    return {{"schema_version", 1},
            {"origin", {grid.spec.origin.x, grid.spec.origin.y}},
            {"spacing", {grid.spec.spacing.x, grid.spec.spacing.y}},
            {"dims", {grid.spec.nx, grid.spec.ny}},
            {"method", to_string(grid.method)},
            {"body_hashes", grid.body_hashes}};
}

void write_grid(const CovariogramGrid& grid, const std::filesystem::path& csv) {
    std::ofstream out(csv);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + csv.string());
    out << "x,y,value\n";
    char buf[96];
    for (int iy = 0; iy < grid.spec.ny; ++iy) {
        for (int ix = 0; ix < grid.spec.nx; ++ix) {
            const Vec2 p = grid.point(ix, iy);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.x, p.y, grid.at(ix, iy));
            out << buf;
        }
    }
    std::ofstream side(csv.string() + ".json");
    if (!side) throw Error(ErrorKind::InvalidArgument, "cannot write sidecar for " + csv.string());
    side << grid_metadata(grid).dump(2) << '\n';
}

// ---------------------------------------------------------------------------

SupportReport support_of_crosscov(const Body& h, const Body& k, int directions) {
    const Polygon ph = polygonal_approximation(h);
    const Polygon pk = polygonal_approximation(k).reflected();
    SupportReport r{minkowski_sum(ph, pk), h.is_polygon() && k.is_polygon(), 0.0};
    for (const auto& u : direction_grid(directions)) {
        const double w_sum = r.support.support(u.u()) + r.support.support(-u.u());
        const double w_parts = width(Body(ph), u) + width(Body(pk), u);
        r.max_width_deviation = std::max(r.max_width_deviation, std::abs(w_sum - w_parts));
    }
    return r;
}

DirectionalDerivative directional_derivative_origin(const Body& k, const Direction& v, double step) {
    if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
    const CrossCovariogram g(k, k);
    return {-width(k, v.normal()), (g(v.u() * step) - g({})) / step, step};
}

ReciprocalCurvatureSum sum_reciprocal_curvatures_from_width(const Body& k, const Direction& u) {
    ReciprocalCurvatureSum r{};
    if (const auto* s = std::get_if<SupportBody>(&k.shape())) {
        // w + w'' from the even harmonics of h.
        const double theta = u.theta();
        double v = 2.0 * s->a0();
        for (std::size_t i = 1; i < s->coeffs().size(); i += 2) {
            const double n = static_cast<double>(i + 1);
            const auto [a, b] = s->coeffs()[i];
            v += 2.0 * (1.0 - n * n) * (a * std::cos(n * theta) + b * std::sin(n * theta));
        }
        r.from_width = v;
    } else if (const auto* d = std::get_if<Disk>(&k.shape())) {
        r.from_width = 2.0 * d->radius;
    } else {
        throw Error(ErrorKind::PolygonNotSmooth, "width-curvature identity needs a smooth body");
    }
    r.from_curvature = 1.0 / curvature(k, u) + 1.0 / curvature(k, u.antipode());
    r.deviation = std::abs(r.from_width - r.from_curvature);
    return r;
}

// ---------------------------------------------------------------------------

namespace {

/// sup { r : g(r e) > 0 }. Bracketing with steps that extrapolate g^{2/3},
/// which vanishes linearly at a smooth support boundary, to zero; every
/// other step after a landing outside the support is a bisection.
double radial_extent(const CovariogramFn& g, Vec2 e, double g0, double rel_tol, double guess = 0.0) {
    double lo = 0.0, hi = 1.0;
    double f_lo = std::cbrt(g0 * g0);
    const auto inside = [&](double r) {
        const double v = g(e * r);
        if (v > 0.0) {
            lo = r;
            f_lo = std::cbrt(v * v);
            return true;
        }
        hi = r;
        return false;
    };
    if (guess > 0.0) {
        // Bracket around a nearby radius; evaluations deep inside the
        // support are the expensive ones.
        double step = 1e-3 * guess;
        if (inside(guess)) {
            while (inside(lo + step)) step *= 4.0;
        } else {
            lo = 0.0;
            f_lo = std::cbrt(g0 * g0);
            while (guess - step > 0.0 && !inside(guess - step)) step *= 4.0;
        }
    } else {
        while (inside(hi) && hi < 1e300) hi *= 2.0;
    }
    const double tol = rel_tol * hi;
    double prev = -1.0, f_prev = 0.0;
    bool extrapolate = false;
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        double x = 0.5 * (lo + hi);
        if (extrapolate && prev >= 0.0 && f_prev > f_lo) {
            const double c = lo + f_lo * (lo - prev) / (f_prev - f_lo);
            if (c > lo && c < hi) x = std::clamp(c, lo + 0.5 * tol, hi - 0.5 * tol);
        }
        const double v = g(e * x);
        if (v > 0.0) {
            prev = lo;
            f_prev = f_lo;
            lo = x;
            f_lo = std::cbrt(v * v);
            extrapolate = true;
        } else {
            hi = x;
            extrapolate = !extrapolate;
        }
    }
    return 0.5 * (lo + hi);
}

/// Least-squares line y = a + b x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
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

Vec2 locate_support_point(const CovariogramFn& g, const Direction& u) {
    const double g0 = g({});
    if (!(g0 > 0.0)) throw Error(ErrorKind::FitFailed, "covariogram vanishes at the origin");
    const double theta = u.theta();
    double last = 0.0;
    const auto score = [&](double phi, double rel_tol) {
        last = radial_extent(g, Direction(phi).u(), g0, rel_tol, last);
        return last * std::cos(phi - theta);
    };
    // Coarse scan over the half circle facing u, then golden-section search.
    // The tangential position only needs ~1e-5 relative accuracy; the
    // normal coordinate is second order in it.
    constexpr int kCoarse = 24;
    const double span = 0.5 * kPi;
    double best_phi = theta, best = -1.0;
    for (int i = 0; i <= kCoarse; ++i) {
        const double phi = theta - span + 2.0 * span * i / kCoarse;
        const double s = score(phi, 1e-8);
        if (s > best) {
            best = s;
            best_phi = phi;
        }
    }
    const double step = 2.0 * span / kCoarse;
    double a = best_phi - step, b = best_phi + step;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = score(c, 1e-14), fd = score(d, 1e-14);
    while (b - a > 1e-6) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = score(c, 1e-14);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = score(d, 1e-14);
        }
    }
    const Direction best_dir(0.5 * (a + b));
    return best_dir.u() * radial_extent(g, best_dir.u(), g0, 1e-15, last);
}

CurvaturePair curvature_pair_from_covariogram(const CovariogramFn& g, const Direction& u,
                                              const CurvatureFitOptions& opt) {
    if (opt.depth_count < 3 || opt.tangential_count < 3 || !(opt.depth_min > 0.0) || !(opt.depth_max > opt.depth_min))
        throw Error(ErrorKind::InvalidArgument, "invalid curvature fit options");
    CurvaturePair r;
    r.u = u;
    r.support_point = locate_support_point(g, u);
    const Vec2 un = u.u(), tan = u.normal().u();

    // Stage 1: log g = log(c 2^{3/2} / sqrt(D)) + 1.5 log t along the normal.
    std::vector<double> depths, logs;
    for (int i = 0; i < opt.depth_count; ++i) {
        const double t = opt.depth_min * std::pow(opt.depth_max / opt.depth_min, double(i) / (opt.depth_count - 1));
        const double v = g(r.support_point - un * t);
        if (!(v > 0.0)) throw Error(ErrorKind::FitFailed, "covariogram vanishes inside its support");
        depths.push_back(t);
        logs.push_back(std::log(v) - 1.5 * std::log(t));
    }
    // log g - 1.5 log t = c0 + c1 t; c1 absorbs the first correction term.
    const auto [c0, c1] = linear_fit(depths, logs);
    double log_res = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const double e = logs[i] - c0 - c1 * depths[i];
        log_res += e * e;
    }
    log_res = std::sqrt(log_res / static_cast<double>(logs.size()));
    const double sum = std::exp(2.0 * (std::log(kCapConstant * std::pow(2.0, 1.5)) - c0));

    // Stage 2: g^{2/3} = alpha + beta q^2 at fixed depth, with Q = -2 t beta / alpha.
    const double t = opt.tangential_depth;
    const double q_max = std::sqrt(4.0 * t / sum);
    const int half = (opt.tangential_count - 1) / 2;
    std::vector<double> xs, ys;
    for (int j = 0; j < opt.tangential_count; ++j) {
        const double q = q_max * (j - half) / std::max(half, 1);
        const double v = g(r.support_point - un * t + tan * q);
        if (!(v > 0.0)) throw Error(ErrorKind::FitFailed, "covariogram vanishes inside its support");
        xs.push_back(q * q);
        ys.push_back(std::pow(v, 2.0 / 3.0));
    }
    const double n = static_cast<double>(xs.size());
    const auto [alpha, beta] = linear_fit(xs, ys);
    double lin_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - alpha - beta * xs[i];
        lin_res += e * e;
    }
    lin_res = std::sqrt(lin_res / n) / std::abs(alpha);
    const double harmonic = -2.0 * t * beta / alpha;

    r.sum = sum;
    r.harmonic = harmonic;
    r.samples = opt.depth_count + opt.tangential_count;
    r.residual = std::max(log_res, lin_res);
    if (log_res > opt.max_log_residual || lin_res > opt.max_linear_residual || !(harmonic > 0.0))
        throw Error(ErrorKind::FitFailed, "curvature fit residual too large");

    double disc = sum * sum - 4.0 * harmonic * sum;
    if (disc < 0.0) {
        if (-disc > opt.discriminant_tolerance * sum * sum)
            throw Error(ErrorKind::FitFailed, "negative discriminant in curvature pair");
        disc = 0.0;
    }
    const double root = std::sqrt(disc);
    r.low = 0.5 * (sum - root);
    r.high = 0.5 * (sum + root);
    if (!(r.low > 0.0)) throw Error(ErrorKind::FitFailed, "non-positive curvature recovered");
    return r;
}

CurvaturePair curvature_pair_from_covariogram(const Body& k, const Direction& u, const CurvatureFitOptions& options) {
    if (!k.is_smooth()) throw Error(ErrorKind::PolygonNotSmooth, "curvature pair needs a smooth body");
    const CrossCovariogram g(k, k, options.smooth_vertices);
    return curvature_pair_from_covariogram([&g](Vec2 x) { return g(x); }, u, options);
}

}  // namespace covario
