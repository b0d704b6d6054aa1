#include "covario/polygon_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "covario/error.hpp"

namespace covario {

double shoelace_area(std::span<const Vec2> loop) {
    const std::size_t n = loop.size();
    if (n < 3) return 0.0;
    // anchored at the first vertex to limit cancellation for far-off loops
    const Vec2 o = loop[0];
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) s += cross(loop[i] - o, loop[i + 1] - o);
    return 0.5 * s;
}

std::vector<Vec2> clip_convex(const Polygon& subject, const Polygon& clip, Vec2 subject_shift, Vec2 clip_shift) {
    std::vector<Vec2> out;
    out.reserve(subject.size() + clip.size());
    for (const auto& v : subject.vertices()) out.push_back(v + subject_shift);

    std::vector<Vec2> in;
    const std::size_t m = clip.size();
    for (std::size_t e = 0; e < m && !out.empty(); ++e) {
        const Vec2 a = clip[e] + clip_shift;
        const Vec2 b = clip[(e + 1) % m] + clip_shift;
        const Vec2 edge = b - a;
        in.swap(out);
        out.clear();
        const std::size_t n = in.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 p = in[i];
            const Vec2 q = in[(i + 1) % n];
            const double sp = cross(edge, p - a);
            const double sq = cross(edge, q - a);
            if (sp >= 0.0) out.push_back(p);
            if ((sp >= 0.0) != (sq >= 0.0)) {
                const double t = sp / (sp - sq);
                out.push_back(p + (q - p) * t);
            }
        }
    }
    return out;
}

MonotoneChains::MonotoneChains(const Polygon& p) {
    // Vertex 0 is the lexicographic minimum; the lower chain runs CCW until x
    // stops increasing, the upper chain continues from the top of the right
    // side back to the top of the left side.
    const std::size_t n = p.size();
    std::size_t i = 0;
    lower.push_back(p[0]);
    while (p[(i + 1) % n].x > p[i].x) {
        i = (i + 1) % n;
        lower.push_back(p[i]);
    }
    while (p[(i + 1) % n].x == p[i].x && (i + 1) % n != 0) i = (i + 1) % n;
    std::vector<Vec2> up;
    up.push_back(p[i]);
    while (p[(i + 1) % n].x < p[i].x) {
        i = (i + 1) % n;
        up.push_back(p[i]);
    }
    std::reverse(up.begin(), up.end());
    upper = std::move(up);
}

namespace {

struct ChainCursor {
    const std::vector<Vec2>& pts;
    Vec2 shift;
    std::size_t seg = 0;

    // Advance so that segment [seg, seg+1] covers x (x assumed inside range).
    void seek(double x) {
        while (seg + 2 < pts.size() && pts[seg + 1].x + shift.x <= x) ++seg;
    }
    double eval(double x) const {
        const Vec2 p = pts[seg] + shift;
        const Vec2 q = pts[seg + 1] + shift;
        const double t = (x - p.x) / (q.x - p.x);
        return p.y + (q.y - p.y) * t;
    }
};

// Index of the segment [j, j+1] of a chain covering x - s.x.
std::size_t segment_at(const std::vector<Vec2>& pts, double x) {
    const auto it = std::upper_bound(pts.begin(), pts.end(), x, [](double v, const Vec2& p) { return v < p.x; });
    const auto j = static_cast<std::size_t>(it - pts.begin());
    return std::clamp<std::size_t>(j, 1, pts.size() - 1) - 1;
}

double chain_at(const std::vector<Vec2>& pts, Vec2 s, double x) {
    const std::size_t j = segment_at(pts, x - s.x);
    const Vec2 p = pts[j], q = pts[j + 1];
    return s.y + p.y + (q.y - p.y) * ((x - s.x - p.x) / (q.x - p.x));
}

// Positive part of a linear function integrated over [a, b].
double positive_part_integral(double a, double b, double fa, double fb) {
    const double len = b - a;
    if (fa >= 0.0 && fb >= 0.0) return 0.5 * (fa + fb) * len;
    if (fa <= 0.0 && fb <= 0.0) return 0.0;
    const double pos = fa > 0.0 ? fa : fb;
    return 0.5 * pos * len * (pos / (std::abs(fa) + std::abs(fb)));
}

}  // namespace

double slab_intersection_area(const MonotoneChains& a, Vec2 sa, const MonotoneChains& b, Vec2 sb) {
    const double lo0 = std::max(a.min_x() + sa.x, b.min_x() + sb.x);
    const double hi0 = std::min(a.max_x() + sa.x, b.max_x() + sb.x);
    if (!(lo0 < hi0)) return 0.0;

    // The vertical extent of the intersection, min(upper) - max(lower), is
    // concave in x. Restrict the sweep to where it is positive so that small
    // intersections cost O(log n) plus the vertices they touch.
    const auto gap = [&](double x) {
        return std::min(chain_at(a.upper, sa, x), chain_at(b.upper, sb, x)) -
               std::max(chain_at(a.lower, sa, x), chain_at(b.lower, sb, x));
    };
    double lo = lo0, hi = hi0;
    {
        const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
        const double eps = 1e-15 * (std::abs(lo) + std::abs(hi) + (hi - lo));
        double l = lo, r = hi;
        double c = r - ratio * (r - l), d = l + ratio * (r - l);
        double fc = gap(c), fd = gap(d);
        while (r - l > eps && std::max(fc, fd) <= 0.0) {
            if (fc > fd) {
                r = d;
                d = c;
                fd = fc;
                c = r - ratio * (r - l);
                fc = gap(c);
            } else {
                l = c;
                c = d;
                fc = fd;
                d = l + ratio * (r - l);
                fd = gap(d);
            }
        }
        if (std::max(fc, fd) <= 0.0) return 0.0;
        const double peak = fc > fd ? c : d;
        if (gap(lo) <= 0.0) {
            double in = peak, out = lo;
            while (in - out > eps) {
                const double m = 0.5 * (in + out);
                if (gap(m) > 0.0) in = m;
                else out = m;
            }
            lo = out;
        }
        if (gap(hi) <= 0.0) {
            double in = peak, out = hi;
            while (out - in > eps) {
                const double m = 0.5 * (in + out);
                if (gap(m) > 0.0) in = m;
                else out = m;
            }
            hi = out;
        }
    }

    std::vector<double> xs{lo, hi};
    auto collect = [&](const std::vector<Vec2>& chain, Vec2 s) {
        auto it = std::upper_bound(chain.begin(), chain.end(), lo - s.x, [](double v, const Vec2& p) { return v < p.x; });
        for (; it != chain.end() && it->x + s.x < hi; ++it) {
            const double x = it->x + s.x;
            if (x > lo) xs.push_back(x);
        }
    };
    collect(a.lower, sa);
    collect(a.upper, sa);
    collect(b.lower, sb);
    collect(b.upper, sb);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    ChainCursor ua{a.upper, sa}, la{a.lower, sa}, ub{b.upper, sb}, lb{b.lower, sb};
    for (auto* c : {&ua, &la, &ub, &lb}) c->seg = segment_at(c->pts, lo - c->shift.x);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const double x0 = xs[k], x1 = xs[k + 1];
        const double mid = 0.5 * (x0 + x1);
        for (auto* c : {&ua, &la, &ub, &lb}) c->seek(mid);

        // Split [x0, x1] where the two upper (or two lower) lines cross so that
        // min(upper) - max(lower) is linear on every piece.
        std::array<double, 4> cuts{x0, x1, x1, x1};
        std::size_t ncut = 1;
        auto add_crossing = [&](const ChainCursor& p, const ChainCursor& q) {
            const double d0 = p.eval(x0) - q.eval(x0);
            const double d1 = p.eval(x1) - q.eval(x1);
            if ((d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0)) cuts[ncut++] = x0 + (x1 - x0) * (d0 / (d0 - d1));
        };
        add_crossing(ua, ub);
        add_crossing(la, lb);
        cuts[ncut++] = x1;
        std::sort(cuts.begin(), cuts.begin() + static_cast<std::ptrdiff_t>(ncut));

        for (std::size_t c = 0; c + 1 < ncut; ++c) {
            const double p0 = cuts[c], p1 = cuts[c + 1];
            if (!(p1 > p0)) continue;
            // the lines active at the piece middle stay active on the whole piece
            const double pm = 0.5 * (p0 + p1);
            const bool a_up = ua.eval(pm) <= ub.eval(pm);
            const bool a_lo = la.eval(pm) >= lb.eval(pm);
            const ChainCursor& U = a_up ? ua : ub;
            const ChainCursor& L = a_lo ? la : lb;
            const double f0 = U.eval(p0) - L.eval(p0);
            const double f1 = U.eval(p1) - L.eval(p1);
            total += positive_part_integral(p0, p1, f0, f1);
        }
    }
    return total;
}

double polygon_intersection_area(const Polygon& p, const Polygon& q) {
    if (p.size() * q.size() <= kClipWorkLimit) {
        const auto loop = clip_convex(p, q);
        return std::max(0.0, shoelace_area(loop));
    }
    return slab_intersection_area(MonotoneChains(p), {}, MonotoneChains(q), {});
}

namespace {

double polar_angle(Vec2 e) {
    const double a = std::atan2(e.y, e.x);
    return a < 0.0 ? a + kTwoPi : a;
}

}  // namespace

Polygon minkowski_sum(const Polygon& p, const Polygon& q) {
    // Start both at their lowest (then leftmost) vertex and merge edges by
    // polar angle in [0, 2pi).
    auto lowest = [](const Polygon& poly) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < poly.size(); ++i) {
            const Vec2 a = poly[i], b = poly[best];
            if (a.y < b.y || (a.y == b.y && a.x < b.x)) best = i;
        }
        return best;
    };
    const std::size_t n = p.size(), m = q.size();
    const std::size_t i0 = lowest(p), j0 = lowest(q);
    auto edge = [](const Polygon& poly, std::size_t start, std::size_t k) {
        const std::size_t sz = poly.size();
        return poly[(start + k + 1) % sz] - poly[(start + k) % sz];
    };
    std::vector<Vec2> out;
    out.reserve(n + m);
    Vec2 cur = p[i0] + q[j0];
    std::size_t i = 0, j = 0;
    while (i < n || j < m) {
        out.push_back(cur);
        if (i == n) {
            cur += edge(q, j0, j++);
        } else if (j == m) {
            cur += edge(p, i0, i++);
        } else {
            const Vec2 ep = edge(p, i0, i), eq = edge(q, j0, j);
            const bool parallel = std::abs(cross(ep, eq)) <= 1e-15 * norm(ep) * norm(eq) && dot(ep, eq) > 0.0;
            if (!parallel && polar_angle(ep) < polar_angle(eq)) cur += edge(p, i0, i++);
            else if (!parallel) cur += edge(q, j0, j++);
            else {
                cur += ep + eq;
                ++i;
                ++j;
            }
        }
    }
    return Polygon(std::move(out));
}

}  // namespace covario
