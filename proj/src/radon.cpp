#include "covario/radon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "covario/error.hpp"
#include "covario/quadrature.hpp"

namespace covario {

ChordFunction::ChordFunction(const Body& k, const Direction& u)
    : body_(k), u_(u), lower_(-support(k, u.antipode())), upper_(support(k, u)), shift_(dot(k.offset(), u.u())) {
    if (k.is_polygon()) {
        polygon_ = k.polygon();
        for (const auto& v : polygon_->vertices()) {
            const double f = dot(v, u.u());
            if (f > lower_ && f < upper_) breaks_.push_back(f);
        }
        std::sort(breaks_.begin(), breaks_.end());
        const double eps = 1e-13 * (upper_ - lower_);
        breaks_.erase(std::unique(breaks_.begin(), breaks_.end(), [eps](double a, double b) { return b - a <= eps; }),
                      breaks_.end());
    }
}

std::string ChordFunction::method() const {
    if (polygon_) return "polygon-edges";
    return std::holds_alternative<Disk>(body_.shape()) ? "closed-form" : "boundary-roots";
}

double ChordFunction::operator()(double t) const {
    if (!(t > lower_ && t < upper_)) return 0.0;
    if (polygon_) {
        const Vec2 n = perp(u_.u());
        const auto& v = polygon_->vertices();
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        const auto take = [&](Vec2 p) {
            const double s = dot(p, n);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        };
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec2 a = v[i], b = v[(i + 1) % v.size()];
            const double fa = dot(a, u_.u()) - t, fb = dot(b, u_.u()) - t;
            if (fa == 0.0) take(a);
            if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) take(a + (b - a) * (fa / (fa - fb)));
        }
        return hi > lo ? hi - lo : 0.0;
    }
    if (const auto* d = std::get_if<Disk>(&body_.shape())) {
        const double r = t - shift_ - dot(d->center, u_.u());
        return 2.0 * std::sqrt(std::max(0.0, d->radius * d->radius - r * r));
    }
    return smooth_chord(std::get<SupportBody>(body_.shape()), t - shift_);
}

double ChordFunction::smooth_chord(const SupportBody& s, double t) const {
    // f(theta) = <x(theta), u> decreases on [phi, phi + pi] and increases on
    // [phi + pi, phi + 2 pi]; each branch crosses t exactly once.
    const double phi = u_.theta();
    const double hu = s.h(phi), hmu = s.h(phi + kPi);
    const auto f = [&](double theta) {
        const double c = std::cos(theta - phi), sn = std::sin(theta - phi);
        const double val = s.h(theta) * c - s.dh(theta) * sn - t;
        return std::make_pair(val, -s.radius_of_curvature(theta) * sn);
    };
    const double guess = std::acos(std::clamp((2.0 * t - (hu - hmu)) / (hu + hmu), -1.0, 1.0));
    constexpr int digits = std::numeric_limits<double>::digits - 4;
    std::uintmax_t iters = 200;
    const double t1 = boost::math::tools::newton_raphson_iterate(f, phi + guess, phi, phi + kPi, digits, iters);
    iters = 200;
    const double t2 =
        boost::math::tools::newton_raphson_iterate(f, phi + kTwoPi - guess, phi + kPi, phi + kTwoPi, digits, iters);
    return norm(s.boundary_point(t2) - s.boundary_point(t1));
}

double radon(const Body& k, const Direction& u, double t) { return ChordFunction(k, u)(t); }

// ---------------------------------------------------------------------------

namespace {

/// int_{0}^{tau_max} f(tau) dtau on panels graded geometrically around `scale`.
template <class F>
double graded_integral(F&& f, double tau_max, double scale) {
    const auto& gl = gauss_legendre(64);
    std::vector<double> cuts{0.0};
    if (scale > 0.0) {
        double b = std::max(0.25 * scale, 1e-9 * tau_max);
        while (b < tau_max) {
            cuts.push_back(b);
            b *= 4.0;
        }
    }
    cuts.push_back(tau_max);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += gl.integrate(f, cuts[i], cuts[i + 1]);
    return sum;
}

}  // namespace

double chord_autocorrelation(const ChordFunction& chord, double s) {
    s = std::abs(s);
    const double a = chord.lower(), b = chord.upper() - s;
    if (!(b > a)) return 0.0;
    const auto integrand = [&](double t) { return chord(t) * chord(t + s); };

    if (chord.is_polygon()) {
        // S is piecewise linear; the product is a quadratic on each piece.
        std::vector<double> cuts{a, b};
        for (double x : chord.breakpoints()) {
            if (x > a && x < b) cuts.push_back(x);
            if (x - s > a && x - s < b) cuts.push_back(x - s);
        }
        std::sort(cuts.begin(), cuts.end());
        const auto& gl = gauss_legendre(32);
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (cuts[i + 1] > cuts[i]) sum += gl.integrate(integrand, cuts[i], cuts[i + 1]);
        }
        return sum;
    }

    const double mid = 0.5 * (a + b);
    const double tau_max = std::sqrt(mid - a);
    const double scale = std::sqrt(s);
    const double left = graded_integral([&](double tau) { return 2.0 * tau * integrand(a + tau * tau); }, tau_max, scale);
    const double right =
        graded_integral([&](double tau) { return 2.0 * tau * integrand(b - tau * tau); }, tau_max, scale);
    return left + right;
}

double chord_autocorrelation(const Body& k, const Direction& u, double s) {
    return chord_autocorrelation(ChordFunction(k, u), s);
}

LeadingCoefficients leading_coefficients(const Body& k, const Direction& u) {
    if (!k.is_smooth()) throw Error(ErrorKind::PolygonNotSmooth, "leading coefficients need a smooth body");
    const double c = std::sqrt(kTwoPi) / std::tgamma(1.5);
    return {c / std::sqrt(curvature(k, u.antipode())), c / std::sqrt(curvature(k, u))};
}

}  // namespace covario
