#pragma once

// Planar convex bodies: polygons, support-function bodies and disks.
//
// Every body is a value type and immutable after construction. Constructors
// validate the invariants of each representation, so any Body reaching the
// rest of the library is a valid convex body.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace covario {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// Counterclockwise rotation by a quarter turn.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

/// Unit direction on the circle. The angle is normalized to [0, 2pi) and the
/// unit vector is derived from it, so the two representations never disagree.
class Direction {
public:
    Direction() : Direction(0.0) {}
    explicit Direction(double theta);
    static Direction from_vector(Vec2 v);

    double theta() const { return theta_; }
    Vec2 u() const { return u_; }
    Direction antipode() const { return Direction(theta_ + kPi); }
    /// u rotated by +pi/2.
    Direction normal() const { return Direction(theta_ + 0.5 * kPi); }

private:
    double theta_;
    Vec2 u_;
};

/// Uniform grid of n directions theta_k = theta0 + 2 pi k / n.
std::vector<Direction> direction_grid(int n, double theta0 = 0.0);

struct Segment {
    Vec2 p;
    Vec2 q;

    Segment(Vec2 p_, Vec2 q_);
    Vec2 midpoint() const { return 0.5 * (p + q); }
    Vec2 half_vector() const { return 0.5 * (q - p); }
    Segment scaled(double s) const { return Segment(p * s, q * s); }
};

/// Convex polygon with counterclockwise vertices, collinear vertices removed
/// and the lexicographically smallest vertex first.
class Polygon {
public:
    /// Accepts either orientation; throws NotConvex for reflex turns and
    /// InvalidPolygon when fewer than three non-collinear vertices remain.
    explicit Polygon(std::vector<Vec2> vertices);

    std::span<const Vec2> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Vec2& operator[](std::size_t i) const { return vertices_[i]; }

    double area() const;
    double support(Vec2 u) const;
    Polygon translated(Vec2 x) const;
    Polygon reflected() const;
    /// Steiner point: vertices weighted by their exterior angles.
    Vec2 steiner_point() const;

private:
    std::vector<Vec2> vertices_;
};

/// Body given by a truncated Fourier series of its support function,
/// h(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta), k <= 32.
class SupportBody {
public:
    static constexpr int kMaxHarmonic = 32;
    static constexpr int kValidationGrid = 4096;
    static constexpr double kRadiusMargin = 1e-9;

    SupportBody(double a0, std::vector<std::pair<double, double>> coeffs);

    double a0() const { return a0_; }
    const std::vector<std::pair<double, double>>& coeffs() const { return coeffs_; }

    double h(double theta) const;
    double dh(double theta) const;
    double d2h(double theta) const;
    /// Radius of curvature rho = h + h''.
    double radius_of_curvature(double theta) const;
    /// Boundary point with outer normal (cos theta, sin theta).
    Vec2 boundary_point(double theta) const;
    double area() const;
    /// Support function of -K: h(theta + pi), i.e. odd harmonics change sign.
    SupportBody reflected() const;

private:
    double a0_;
    std::vector<std::pair<double, double>> coeffs_;
};

struct Disk {
    Vec2 center;
    double radius;

    Disk(Vec2 c, double r);
};

/// Tagged representation of a planar convex body plus a translation.
class Body {
public:
    using Shape = std::variant<Polygon, SupportBody, Disk>;

    Body(Polygon p) : shape_(std::move(p)) {}
    Body(SupportBody s) : shape_(std::move(s)) {}
    Body(Disk d) : shape_(std::move(d)) {}
    Body(Shape shape, Vec2 offset) : shape_(std::move(shape)), offset_(offset) {}

    const Shape& shape() const { return shape_; }
    Vec2 offset() const { return offset_; }

    bool is_polygon() const { return std::holds_alternative<Polygon>(shape_); }
    /// C2+ bodies: support-function bodies and disks.
    bool is_smooth() const { return !is_polygon(); }
    /// The polygon with the offset applied. InvalidArgument for other shapes.
    Polygon polygon() const;

private:
    Shape shape_;
    Vec2 offset_{};
};

double support(const Body& body, const Direction& u);
double width(const Body& body, const Direction& u);
double area(const Body& body);
Vec2 boundary_point(const Body& body, const Direction& u);
/// Gauss curvature tau_K(u) = 1 / (h + h'') at the boundary point with normal u.
double curvature(const Body& body, const Direction& u);

/// Exact polygon for polygon bodies; otherwise the inscribed polygon through
/// the boundary points with normals at theta_k = 2 pi k / n.
Polygon polygonal_approximation(const Body& body, int n = 4096);

/// Minkowski sum center + sum of segments.
Polygon zonogon(Vec2 center, std::span<const Segment> segments);

struct FamilyParams {
    double alpha = 1.0, beta = 1.0, gamma = 1.0, delta = 1.0;
    double alpha_p = 1.0, beta_p = 1.0, gamma_p = 2.0, delta_p = 1.0;
    double m = 0.0;
    Vec2 y{};
    Vec2 y_p{};
};

/// The generating segments I1..I5 (I5 depends on the slope m).
std::array<Segment, 5> parallelogram_segments(double m);

/// Pair (H_i, K_i) of the four parallelogram families with equal cross
/// covariograms in pairs 1/2 and 3/4.
std::pair<Polygon, Polygon> example_pair(int family, const FamilyParams& params);

struct Translate {
    Vec2 x;
};
struct Reflect {};
using Transform = std::variant<Translate, Reflect>;

/// Translation K + x or point reflection K -> -K.
Body transform(const Body& body, const Transform& op);

}  // namespace covario
