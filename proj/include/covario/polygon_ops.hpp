#pragma once

#include <vector>

#include "covario/geometry.hpp"

namespace covario {

/// Shoelace area of a closed vertex loop (counterclockwise positive).
double shoelace_area(std::span<const Vec2> loop);

/// Sutherland-Hodgman clip of `subject` against the convex `clip` polygon.
/// Returns the (possibly empty) intersection loop.
std::vector<Vec2> clip_convex(const Polygon& subject, const Polygon& clip, Vec2 subject_shift = {},
                              Vec2 clip_shift = {});

/// Lower and upper boundary chains of a convex polygon, both with strictly
/// increasing x. Used by the linear-time intersection kernel.
struct MonotoneChains {
    std::vector<Vec2> lower;
    std::vector<Vec2> upper;

    explicit MonotoneChains(const Polygon& p);
    double min_x() const { return lower.front().x; }
    double max_x() const { return lower.back().x; }
};

/// Area of (A + shift_a) intersected with (B + shift_b), computed by
/// integrating min(upper) - max(lower) over the merged x-breakpoints. Runs in
/// O(|A| + |B|).
double slab_intersection_area(const MonotoneChains& a, Vec2 shift_a, const MonotoneChains& b, Vec2 shift_b);

/// Area of P intersected with Q. Small inputs go through clipping + shoelace;
/// once |P|*|Q| exceeds kClipWorkLimit the slab kernel is used instead.
double polygon_intersection_area(const Polygon& p, const Polygon& q);

inline constexpr std::size_t kClipWorkLimit = 4096;

/// Minkowski sum of two convex polygons by merging edge sequences.
Polygon minkowski_sum(const Polygon& p, const Polygon& q);

}  // namespace covario
