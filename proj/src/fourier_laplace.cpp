#include "covario/fourier_laplace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "covario/error.hpp"
#include "covario/oracles.hpp"
#include "covario/parallel.hpp"
#include "covario/quadrature.hpp"

namespace covario {

namespace {

constexpr cdouble kI{0.0, 1.0};

/// Phase budget (radians at max_frequency) per quadrature panel.
constexpr double kPanelPhase = 16.0;

}  // namespace

RayTransformContext::RayTransformContext(const Body& k, const Direction& u, const RayTransformOptions& options)
    : u_(u), options_(options), smooth_(k.is_smooth()) {
    if (options.order != 32 && options.order != 64)
        throw Error(ErrorKind::InvalidArgument, "quadrature order must be 32 or 64");
    if (!(options.max_frequency > 0.0) || !(options.im_cap_factor > 0.0))
        throw Error(ErrorKind::InvalidArgument, "frequency caps must be positive");
    const ChordFunction chord(k, u);
    lower_ = chord.lower();
    upper_ = chord.upper();
    width_ = chord.width();
    im_cap_ = options.im_cap_factor / width_;
    const auto& gl = gauss_legendre(options.order);

    if (smooth_) {
        // t = lower + tau^2 and t = upper - tau^2 remove the square-root
        // endpoints; uniform tau-panels bound the phase per panel.
        const double tau_max = std::sqrt(0.5 * width_);
        const int panels = std::max(4, static_cast<int>(std::ceil(options.max_frequency * width_ / kPanelPhase)));
        std::vector<double> tau, wt;
        for (int p = 0; p < panels; ++p) gl.append(tau_max * p / panels, tau_max * (p + 1) / panels, tau, wt);
        t_.reserve(2 * tau.size());
        w_.reserve(2 * tau.size());
        for (std::size_t i = 0; i < tau.size(); ++i) {
            const double t = lower_ + tau[i] * tau[i];
            t_.push_back(t);
            w_.push_back(2.0 * tau[i] * wt[i] * chord(t));
        }
        for (std::size_t i = 0; i < tau.size(); ++i) {
            const double t = upper_ - tau[i] * tau[i];
            t_.push_back(t);
            w_.push_back(2.0 * tau[i] * wt[i] * chord(t));
        }
    } else {
        std::vector<double> cuts{lower_};
        cuts.insert(cuts.end(), chord.breakpoints().begin(), chord.breakpoints().end());
        cuts.push_back(upper_);
        std::vector<double> wt;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double len = cuts[i + 1] - cuts[i];
            const int pieces = std::max(1, static_cast<int>(std::ceil(len * options.max_frequency / kPanelPhase)));
            for (int p = 0; p < pieces; ++p)
                gl.append(cuts[i] + len * p / pieces, cuts[i] + len * (p + 1) / pieces, t_, wt);
        }
        w_.resize(t_.size());
        for (std::size_t i = 0; i < t_.size(); ++i) w_[i] = wt[i] * chord(t_[i]);
    }
}

void RayTransformContext::check(cdouble zeta) const {
    if (std::abs(zeta.imag()) > im_cap_ * (1.0 + 1e-12))
        throw Error(ErrorKind::PrecisionLoss, "|Im zeta| exceeds the cap " + std::to_string(im_cap_));
    if (std::abs(zeta) > options_.max_frequency * (1.0 + 1e-12))
        throw Error(ErrorKind::PrecisionLoss,
                    "|zeta| exceeds the resolved frequency " + std::to_string(options_.max_frequency));
}

cdouble RayTransformContext::flt(cdouble zeta) const { return flt_with_derivative(zeta).first; }

cdouble RayTransformContext::derivative(cdouble zeta) const { return flt_with_derivative(zeta).second; }

std::pair<cdouble, cdouble> RayTransformContext::flt_with_derivative(cdouble zeta) const {
    check(zeta);
    cdouble f{}, d{};
    for (std::size_t j = 0; j < t_.size(); ++j) {
        const cdouble e = w_[j] * std::exp(kI * t_[j] * zeta);
        f += e;
        d += t_[j] * e;
    }
    return {f, kI * d};
}

cdouble flt_ray(const RayTransformContext& ctx, cdouble zeta) { return ctx.flt(zeta); }
cdouble flt_ray_derivative(const RayTransformContext& ctx, cdouble zeta) { return ctx.derivative(zeta); }

cdouble kobayashi_center(const Body& k, int m, const Direction& u) {
    if (!k.is_smooth()) throw Error(ErrorKind::PolygonNotSmooth, "branch centers need a smooth body");
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "branch index must be >= 1");
    const double w = width(k, u);
    const double ratio = std::log(curvature(k, u.antipode())) - std::log(curvature(k, u));
    return {kPi * (4.0 * m + 1.0) / (2.0 * w), ratio / (2.0 * w)};
}

// ---------------------------------------------------------------------------

std::optional<std::pair<cdouble, int>> newton_zero(const TransformFn& f, cdouble start, const ZeroTrackOptions& opt) {
    try {
        cdouble z = start;
        auto [fz, dz] = f(z);
        for (int it = 1; it <= opt.max_iterations; ++it) {
            if (dz == cdouble{}) return std::nullopt;
            const cdouble step = fz / dz;
            if (std::abs(step) <= opt.step_tolerance * (1.0 + std::abs(z))) return std::make_pair(z - step, it);
            double lambda = 1.0;
            cdouble next = z - step;
            auto trial = f(next);
            for (int h = 0; h < 20 && std::abs(trial.first) > std::abs(fz); ++h) {
                lambda *= 0.5;
                next = z - lambda * step;
                trial = f(next);
            }
            z = next;
            fz = trial.first;
            dz = trial.second;
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::PrecisionLoss) throw;
    }
    return std::nullopt;
}

double winding_number(const TransformFn& f, cdouble center, double half_re, double half_im, int order) {
    const auto& gl = gauss_legendre(order);
    const std::array<cdouble, 4> corners{center + cdouble{-half_re, -half_im}, center + cdouble{half_re, -half_im},
                                         center + cdouble{half_re, half_im}, center + cdouble{-half_re, half_im}};
    cdouble total{};
    for (int side = 0; side < 4; ++side) {
        const cdouble a = corners[side], b = corners[(side + 1) % 4];
        const cdouble half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (int i = 0; i < gl.order(); ++i) {
            const auto [fz, dz] = f(mid + half * gl.nodes()[i]);
            total += gl.weights()[i] * dz / fz * half;
        }
    }
    return (total / (kTwoPi * kI)).real();
}

cdouble branch_start(const RayTransformContext& ctx, const Body& k, int m) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "branch index must be >= 1");
    if (ctx.smooth()) return kobayashi_center(k, m, ctx.direction());
    return {kPi * (4.0 * m + 1.0) / (2.0 * ctx.width()), 0.0};
}

ZeroBranch track_zero(const RayTransformContext& ctx, const Body& k, int m, const ZeroTrackOptions& opt) {
    ZeroBranch b;
    b.m = m;
    b.u = ctx.direction();
    b.smooth_input = ctx.smooth();
    b.predicted_center = branch_start(ctx, k, m);
    const TransformFn f = [&ctx](cdouble z) { return ctx.flt_with_derivative(z); };
    const auto root = newton_zero(f, b.predicted_center, opt);
    if (!root) {
        b.zeta = b.predicted_center;
        throw Error(ErrorKind::NewtonDiverged, "no convergence for m = " + std::to_string(m) +
                                                   " at theta = " + std::to_string(ctx.direction().theta()));
    }
    b.zeta = root->first;
    b.iterations = root->second;
    const auto [fz, dz] = f(b.zeta);
    b.residual = std::abs(fz) / std::abs(dz);
    const double w = ctx.width();
    const double n = winding_number(f, b.zeta, 0.5 * kPi / w, 0.5 / w, opt.contour_order);
    b.winding = static_cast<int>(std::lround(n));
    b.validated = std::abs(n - b.winding) <= opt.winding_tolerance && b.winding == 1 &&
                  b.residual <= opt.residual_tolerance;
    if (!b.validated) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "m = %d, theta = %.6g: winding %.4g, residual %.3g", m,
                      ctx.direction().theta(), n, b.residual);
        throw Error(ErrorKind::ValidationFailed, buf);
    }
    return b;
}

ZeroBranch try_track_zero(const RayTransformContext& ctx, const Body& k, int m, std::string& failure,
                          const ZeroTrackOptions& options) {
    failure.clear();
    try {
        return track_zero(ctx, k, m, options);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NewtonDiverged && e.kind() != ErrorKind::ValidationFailed &&
            e.kind() != ErrorKind::PrecisionLoss)
            throw;
        failure = e.what();
        ZeroBranch b;
        b.m = m;
        b.u = ctx.direction();
        b.smooth_input = ctx.smooth();
        b.predicted_center = branch_start(ctx, k, m);
        b.zeta = {std::nan(""), std::nan("")};
        b.residual = std::nan("");
        return b;
    }
}

BranchTable branch_sweep(const Body& k, const std::vector<Direction>& u_grid, int m_first, int m_last,
                         const RayTransformOptions& options) {
    if (u_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty direction grid");
    if (m_first < 1 || m_last < m_first) throw Error(ErrorKind::InvalidArgument, "invalid branch range");
    const std::size_t nu = u_grid.size();
    const std::size_t nm = static_cast<std::size_t>(m_last - m_first + 1);

    std::vector<std::optional<RayTransformContext>> contexts(nu);
    parallel_for(nu, [&](std::size_t i) { contexts[i].emplace(k, u_grid[i], options); });

    BranchTable table;
    table.rows.resize(nm * nu);
    std::vector<std::string> messages(nm * nu);
    parallel_for(nm * nu, [&](std::size_t idx) {
        const int m = m_first + static_cast<int>(idx / nu);
        table.rows[idx] = try_track_zero(*contexts[idx % nu], k, m, messages[idx]);
    });

    double max_w = 0.0;
    for (const auto& c : contexts) max_w = std::max(max_w, c->width());
    table.jump_bound = kPi / max_w;
    for (std::size_t idx = 0; idx < table.rows.size(); ++idx) {
        if (!messages[idx].empty()) table.failures.push_back({table.rows[idx].m, table.rows[idx].u, messages[idx]});
    }
    for (std::size_t im = 0; im < nm; ++im) {
        for (std::size_t i = 0; i + 1 < nu; ++i) {
            const auto& a = table.rows[im * nu + i];
            const auto& b = table.rows[im * nu + i + 1];
            if (!a.validated || !b.validated) continue;
            table.max_jump = std::max(table.max_jump, std::abs(b.zeta - a.zeta));
        }
    }
    table.continuous = table.max_jump < table.jump_bound;
    return table;
}

std::string branch_csv(const BranchTable& table) {
    std::ostringstream out;
    out << "m,theta,re_zeta,im_zeta,residual,pred_re,pred_im,validated\n";
    char buf[256];
    for (const auto& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.m, r.u.theta(), r.zeta.real(),
                      r.zeta.imag(), r.residual, r.predicted_center.real(), r.predicted_center.imag(),
                      r.validated ? 1 : 0);
        out << buf;
    }
    return out.str();
}

void write_branch_csv(const BranchTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    out << branch_csv(table);
}

// ---------------------------------------------------------------------------

ReflectionReport verify_reflection_identity(const Body& k, int samples, std::uint64_t seed, double tolerance) {
    if (samples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
    const Body reflected = transform(k, Reflect{});
    ReflectionReport r;
    r.samples = samples;
    r.scale = area(k);
    oracles::RandomStream rng(seed, 0);
    for (int i = 0; i < samples; ++i) {
        const Direction u(rng.uniform(0.0, kTwoPi));
        const RayTransformContext ck(k, u), cr(reflected, u);
        const cdouble z{rng.uniform(-40.0, 40.0), rng.uniform(-0.5, 0.5) * ck.im_cap()};
        const double dev = std::abs(cr.flt(z) - std::conj(ck.flt(std::conj(z))));
        r.max_deviation = std::max(r.max_deviation, dev);
    }
    const RayTransformContext ctx(k, Direction(0.0));
    std::string failure;
    const ZeroBranch b = try_track_zero(ctx, k, 1, failure);
    if (std::isfinite(b.zeta.real())) {
        const auto [f, d] = ctx.flt_with_derivative(-std::conj(b.zeta));
        r.zero_mirror_residual = std::abs(f) / std::abs(d);
    }
    r.passed = r.max_deviation <= tolerance * r.scale && r.zero_mirror_residual <= 1e-9;
    return r;
}

AutocorrelationTransform::AutocorrelationTransform(const Body& k, const Direction& u, double max_frequency) {
    if (!(max_frequency > 0.0)) throw Error(ErrorKind::InvalidArgument, "max frequency must be positive");
    const ChordFunction chord(k, u);
    width_ = chord.width();
    std::vector<double> cuts{0.0, width_};
    int order = 64;
    if (chord.is_polygon()) {
        // A is piecewise polynomial with kinks at differences of vertex projections.
        order = 32;
        std::vector<double> f{chord.lower(), chord.upper()};
        f.insert(f.end(), chord.breakpoints().begin(), chord.breakpoints().end());
        for (double a : f)
            for (double b : f)
                if (a - b > 0.0 && a - b < width_) cuts.push_back(a - b);
    } else {
        for (int e = 1; e <= 12; ++e) cuts.push_back(width_ * std::pow(4.0, -e));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const auto& gl = gauss_legendre(order);
    std::vector<double> wt;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        if (!(len > 0.0)) continue;
        const int pieces = std::max(1, static_cast<int>(std::ceil(len * max_frequency / kPanelPhase)));
        for (int p = 0; p < pieces; ++p) gl.append(cuts[i] + len * p / pieces, cuts[i] + len * (p + 1) / pieces, s_, wt);
    }
    w_.resize(s_.size());
    parallel_for(s_.size(), [&](std::size_t i) { w_[i] = 2.0 * wt[i] * chord_autocorrelation(chord, s_[i]); });
}

cdouble AutocorrelationTransform::operator()(cdouble xi) const {
    cdouble sum{};
    for (std::size_t j = 0; j < s_.size(); ++j) sum += w_[j] * std::cos(s_[j] * xi);
    return sum;
}

cdouble AutocorrelationTransform::derivative(cdouble xi) const {
    cdouble sum{};
    for (std::size_t j = 0; j < s_.size(); ++j) sum -= w_[j] * s_[j] * std::sin(s_[j] * xi);
    return sum;
}

FactorizationReport verify_factorization(const Body& k, const Direction& u, const std::vector<double>& xi_grid,
                                         double tolerance) {
    if (xi_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty frequency grid");
    double xi_max = 0.0;
    for (double x : xi_grid) xi_max = std::max(xi_max, std::abs(x));
    RayTransformOptions opt;
    opt.max_frequency = std::max(opt.max_frequency, xi_max);
    const RayTransformContext ctx(k, u, opt);
    const AutocorrelationTransform ghat(k, u, std::max(xi_max, 1.0));
    FactorizationReport r;
    r.points = static_cast<int>(xi_grid.size());
    const double a = area(k);
    r.area_squared = a * a;
    for (double xi : xi_grid) {
        const double lhs = ghat(xi).real();
        const double rhs = std::norm(ctx.flt(xi));
        r.max_deviation = std::max(r.max_deviation, std::abs(lhs - rhs));
    }
    r.relative_deviation = r.max_deviation / r.area_squared;
    r.passed = r.relative_deviation <= tolerance;
    return r;
}

}  // namespace covario
