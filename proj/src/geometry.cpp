#include "covario/geometry.hpp"

#include <algorithm>
#include <limits>

#include "covario/error.hpp"

namespace covario {

namespace {

constexpr double kCollinearTol = 1e-12;

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    // fmod can return exactly 2pi after the correction for tiny negatives
    if (t >= kTwoPi) t -= kTwoPi;
    return t;
}

double signed_area(const std::vector<Vec2>& v) {
    double s = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) s += cross(v[i], v[(i + 1) % n]);
    return 0.5 * s;
}

bool nearly_collinear(Vec2 a, Vec2 b) {
    return std::abs(cross(a, b)) <= kCollinearTol * norm(a) * norm(b);
}

}  // namespace

Direction::Direction(double theta) : theta_(wrap_angle(theta)), u_{std::cos(theta_), std::sin(theta_)} {}

Direction Direction::from_vector(Vec2 v) {
    if (v.x == 0.0 && v.y == 0.0) throw Error(ErrorKind::InvalidArgument, "zero vector has no direction");
    return Direction(std::atan2(v.y, v.x));
}

std::vector<Direction> direction_grid(int n, double theta0) {
    if (n <= 0) throw Error(ErrorKind::InvalidArgument, "direction grid needs n > 0");
    std::vector<Direction> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out.emplace_back(theta0 + kTwoPi * k / n);
    return out;
}

Segment::Segment(Vec2 p_, Vec2 q_) : p(p_), q(q_) {
    if (p == q) throw Error(ErrorKind::InvalidSegment, "segment endpoints coincide");
}

// ---------------------------------------------------------------------------
// Polygon

Polygon::Polygon(std::vector<Vec2> v) {
    if (v.size() < 3) throw Error(ErrorKind::InvalidPolygon, "need at least 3 vertices");
    for (const auto& p : v) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw Error(ErrorKind::InvalidPolygon, "non-finite vertex");
    }
    if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());

    // Drop duplicates and straight-through vertices until stable.
    bool changed = true;
    while (changed && v.size() >= 3) {
        changed = false;
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 prev = v[(i + n - 1) % n];
            const Vec2 next = v[(i + 1) % n];
            const Vec2 a = v[i] - prev;
            const Vec2 b = next - v[i];
            const bool duplicate = (a.x == 0.0 && a.y == 0.0);
            const bool straight = !duplicate && nearly_collinear(a, b) && dot(a, b) > 0.0;
            if (duplicate || straight) {
                v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    if (v.size() < 3) throw Error(ErrorKind::InvalidPolygon, "fewer than 3 non-collinear vertices");

    const std::size_t n = v.size();
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[(i + 1) % n] - v[i];
        const Vec2 b = v[(i + 2) % n] - v[(i + 1) % n];
        if (cross(a, b) <= 0.0) throw Error(ErrorKind::NotConvex, "reflex or degenerate turn");
        turning += std::atan2(cross(a, b), dot(a, b));
    }
    // A star-shaped self-intersecting loop turns more than once.
    if (std::abs(turning - kTwoPi) > 1e-6) throw Error(ErrorKind::NotConvex, "polygon winds more than once");
    if (!(signed_area(v) > 0.0)) throw Error(ErrorKind::InvalidPolygon, "zero area");

    const auto first = std::min_element(v.begin(), v.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    std::rotate(v.begin(), first, v.end());
    vertices_ = std::move(v);
}

double Polygon::area() const { return signed_area(vertices_); }

double Polygon::support(Vec2 u) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : vertices_) best = std::max(best, dot(p, u));
    return best;
}

Polygon Polygon::translated(Vec2 x) const {
    std::vector<Vec2> v(vertices_.begin(), vertices_.end());
    for (auto& p : v) p += x;
    return Polygon(std::move(v));
}

Polygon Polygon::reflected() const {
    std::vector<Vec2> v(vertices_.begin(), vertices_.end());
    for (auto& p : v) p = -p;
    return Polygon(std::move(v));
}

Vec2 Polygon::steiner_point() const {
    const std::size_t n = vertices_.size();
    Vec2 s{};
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices_[i] - vertices_[(i + n - 1) % n];
        const Vec2 b = vertices_[(i + 1) % n] - vertices_[i];
        const double exterior = std::atan2(cross(a, b), dot(a, b));
        s += vertices_[i] * (exterior / kTwoPi);
    }
    return s;
}

// ---------------------------------------------------------------------------
// SupportBody

SupportBody::SupportBody(double a0, std::vector<std::pair<double, double>> coeffs)
    : a0_(a0), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) > kMaxHarmonic)
        throw Error(ErrorKind::InvalidArgument, "at most 32 harmonics are supported");
    if (!std::isfinite(a0_)) throw Error(ErrorKind::InvalidArgument, "non-finite a0");
    for (const auto& [a, b] : coeffs_) {
        if (!std::isfinite(a) || !std::isfinite(b)) throw Error(ErrorKind::InvalidArgument, "non-finite coefficient");
    }
    for (int i = 0; i < kValidationGrid; ++i) {
        const double theta = kTwoPi * i / kValidationGrid;
        const double rho = radius_of_curvature(theta);
        if (!(rho > kRadiusMargin))
            throw Error(ErrorKind::NotC2Plus, "h + h'' = " + std::to_string(rho) + " at theta = " + std::to_string(theta));
        if (!(h(theta) > 0.0)) throw Error(ErrorKind::NotC2Plus, "support function not positive (origin outside body)");
    }
}

namespace {

// Sum over harmonics of w_k * (a_k, b_k) . (phase rotated cos/sin), with the
// derivative order folded into the phase.
template <class Weight>
double harmonic_sum(double a0, const std::vector<std::pair<double, double>>& coeffs, double theta, int deriv,
                    Weight weight) {
    double s = deriv == 0 ? a0 : 0.0;
    const double c1 = std::cos(theta), s1 = std::sin(theta);
    double ck = 1.0, sk = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double cn = ck * c1 - sk * s1;
        const double sn = sk * c1 + ck * s1;
        ck = cn;
        sk = sn;
        const double k = static_cast<double>(i + 1);
        const auto [a, b] = coeffs[i];
        double term = 0.0;
        switch (deriv) {
        case 0: term = a * ck + b * sk; break;
        case 1: term = k * (-a * sk + b * ck); break;
        default: term = -k * k * (a * ck + b * sk); break;
        }
        s += weight(k) * term;
    }
    return s;
}

constexpr auto unit_weight = [](double) { return 1.0; };

}  // namespace

double SupportBody::h(double theta) const { return harmonic_sum(a0_, coeffs_, theta, 0, unit_weight); }
double SupportBody::dh(double theta) const { return harmonic_sum(a0_, coeffs_, theta, 1, unit_weight); }
double SupportBody::d2h(double theta) const { return harmonic_sum(a0_, coeffs_, theta, 2, unit_weight); }

double SupportBody::radius_of_curvature(double theta) const {
    // h + h'' = a0 + sum (1 - k^2)(a_k cos + b_k sin)
    return harmonic_sum(a0_, coeffs_, theta, 0, [](double k) { return 1.0 - k * k; });
}

Vec2 SupportBody::boundary_point(double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const double hv = h(theta), dhv = dh(theta);
    return {hv * c - dhv * s, hv * s + dhv * c};
}

double SupportBody::area() const {
    // (1/2) int (h^2 - h'^2) dtheta
    double a = kPi * a0_ * a0_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        const auto [ak, bk] = coeffs_[i];
        a += 0.5 * kPi * (1.0 - k * k) * (ak * ak + bk * bk);
    }
    return a;
}

SupportBody SupportBody::reflected() const {
    auto c = coeffs_;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if ((i + 1) % 2 == 1) c[i] = {-c[i].first, -c[i].second};
    }
    return SupportBody(a0_, std::move(c));
}

Disk::Disk(Vec2 c, double r) : center(c), radius(r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::InvalidArgument, "disk radius must be positive");
}

// ---------------------------------------------------------------------------
// Body-level operations

Polygon Body::polygon() const {
    const auto* p = std::get_if<Polygon>(&shape_);
    if (!p) throw Error(ErrorKind::InvalidArgument, "body is not a polygon");
    return offset_ == Vec2{} ? *p : p->translated(offset_);
}

double support(const Body& body, const Direction& u) {
    const double shift = dot(body.offset(), u.u());
    return shift + std::visit(
                       [&](const auto& s) -> double {
                           using T = std::decay_t<decltype(s)>;
                           if constexpr (std::is_same_v<T, Polygon>) return s.support(u.u());
                           else if constexpr (std::is_same_v<T, SupportBody>) return s.h(u.theta());
                           else return dot(s.center, u.u()) + s.radius;
                       },
                       body.shape());
}

double width(const Body& body, const Direction& u) { return support(body, u) + support(body, u.antipode()); }

double area(const Body& body) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Polygon>) return s.area();
            else if constexpr (std::is_same_v<T, SupportBody>) return s.area();
            else return kPi * s.radius * s.radius;
        },
        body.shape());
}

Vec2 boundary_point(const Body& body, const Direction& u) {
    return body.offset() + std::visit(
                               [&](const auto& s) -> Vec2 {
                                   using T = std::decay_t<decltype(s)>;
                                   if constexpr (std::is_same_v<T, Polygon>)
                                       throw Error(ErrorKind::PolygonNotSmooth, "polygon has no unique smooth boundary point");
                                   else if constexpr (std::is_same_v<T, SupportBody>) return s.boundary_point(u.theta());
                                   else return s.center + u.u() * s.radius;
                               },
                               body.shape());
}

double curvature(const Body& body, const Direction& u) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Polygon>)
                throw Error(ErrorKind::PolygonNotSmooth, "polygon curvature is not defined");
            else if constexpr (std::is_same_v<T, SupportBody>) return 1.0 / s.radius_of_curvature(u.theta());
            else return 1.0 / s.radius;
        },
        body.shape());
}

Polygon polygonal_approximation(const Body& body, int n) {
    if (body.is_polygon()) return body.polygon();
    if (n < 8) throw Error(ErrorKind::InvalidArgument, "approximation needs at least 8 vertices");
    std::vector<Vec2> v;
    v.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v.push_back(boundary_point(body, Direction(kTwoPi * k / n)));
    return Polygon(std::move(v));
}

// ---------------------------------------------------------------------------
// Zonogons and the parallelogram families

Polygon zonogon(Vec2 center, std::span<const Segment> segments) {
    if (segments.empty()) throw Error(ErrorKind::DegenerateZonogon, "no generators");
    Vec2 c = center;
    std::vector<Vec2> halves;
    for (const auto& s : segments) {
        c += s.midpoint();
        Vec2 h = s.half_vector();
        if (h.y < 0.0 || (h.y == 0.0 && h.x < 0.0)) h = -h;
        halves.push_back(h);
    }
    std::sort(halves.begin(), halves.end(),
              [](Vec2 a, Vec2 b) { return std::atan2(a.y, a.x) < std::atan2(b.y, b.x); });
    std::vector<Vec2> merged;
    for (const auto& h : halves) {
        if (!merged.empty() && nearly_collinear(merged.back(), h)) merged.back() += h;
        else merged.push_back(h);
    }
    // the first and last half-vectors can be parallel when one is near angle 0
    // and the other near pi after normalization
    if (merged.size() > 1 && nearly_collinear(merged.front(), merged.back())) {
        const Vec2 b = merged.back();
        merged.pop_back();
        merged.front() += dot(merged.front(), b) > 0.0 ? b : -b;
    }
    if (merged.size() < 2) throw Error(ErrorKind::DegenerateZonogon, "all generators are parallel");

    Vec2 p = c;
    for (const auto& h : merged) p = p - h;
    std::vector<Vec2> v;
    v.reserve(2 * merged.size());
    for (const auto& h : merged) {
        v.push_back(p);
        p += 2.0 * h;
    }
    for (const auto& h : merged) {
        v.push_back(p);
        p = p - 2.0 * h;
    }
    return Polygon(std::move(v));
}

std::array<Segment, 5> parallelogram_segments(double m) {
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r5 = 1.0 / std::sqrt(1.0 + m * m);
    return {Segment({-1.0, 0.0}, {1.0, 0.0}),
            Segment({-r2, -r2}, {r2, r2}),
            Segment({0.0, -1.0}, {0.0, 1.0}),
            Segment({r2, -r2}, {-r2, r2}),
            Segment({-m * r5, -r5}, {m * r5, r5})};
}

std::pair<Polygon, Polygon> example_pair(int family, const FamilyParams& p) {
    auto positive = [](std::initializer_list<double> xs) {
        return std::all_of(xs.begin(), xs.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
    };
    auto make = [](Vec2 c, std::initializer_list<Segment> segs) {
        std::vector<Segment> s(segs);
        return zonogon(c, s);
    };

    if (family == 1 || family == 2) {
        if (!positive({p.alpha, p.beta, p.gamma, p.delta}))
            throw Error(ErrorKind::InvalidFamilyParams, "alpha, beta, gamma, delta must be positive");
        const auto I = parallelogram_segments(0.0);
        if (family == 1)
            return {make({}, {I[0].scaled(p.alpha), I[1].scaled(p.beta)}),
                    make(p.y, {I[2].scaled(p.gamma), I[3].scaled(p.delta)})};
        return {make({}, {I[0].scaled(p.alpha), I[3].scaled(p.delta)}),
                make(p.y, {I[1].scaled(p.beta), I[2].scaled(p.gamma)})};
    }
    if (family == 3 || family == 4) {
        if (!positive({p.alpha_p, p.beta_p, p.gamma_p, p.delta_p}) || !std::isfinite(p.m))
            throw Error(ErrorKind::InvalidFamilyParams, "alpha', beta', gamma', delta' must be positive");
        if (p.alpha_p == p.gamma_p) throw Error(ErrorKind::InvalidFamilyParams, "requires alpha' != gamma'");
        if (p.m == 0.0 && p.beta_p == p.delta_p)
            throw Error(ErrorKind::InvalidFamilyParams, "m = 0 requires beta' != delta'");
        const auto I = parallelogram_segments(p.m);
        if (family == 3)
            return {make({}, {I[0].scaled(p.alpha_p), I[2].scaled(p.beta_p)}),
                    make(p.y_p, {I[0].scaled(p.gamma_p), I[4].scaled(p.delta_p)})};
        return {make({}, {I[0].scaled(p.gamma_p), I[2].scaled(p.beta_p)}),
                make(p.y_p, {I[0].scaled(p.alpha_p), I[4].scaled(p.delta_p)})};
    }
    throw Error(ErrorKind::InvalidFamilyParams, "family must be 1, 2, 3 or 4");
}

Body transform(const Body& body, const Transform& op) {
    if (const auto* t = std::get_if<Translate>(&op)) return Body(body.shape(), body.offset() + t->x);
    Body::Shape reflected = std::visit(
        [](const auto& s) -> Body::Shape {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Polygon>) return s.reflected();
            else if constexpr (std::is_same_v<T, SupportBody>) return s.reflected();
            else return Disk(-s.center, s.radius);
        },
        body.shape());
    return Body(std::move(reflected), -body.offset());
}

}  // namespace covario
