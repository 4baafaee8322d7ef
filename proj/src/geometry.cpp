#include "lrfmap/geometry.hpp"

#include <algorithm>

#include "lrfmap/simd_kernels.hpp"

namespace lrfmap {

std::optional<RayHit> ray_cast(const Point2& origin, double direction,
                               std::span<const Segment2> segments, double max_range) {
    const double dx = std::cos(direction);
    const double dy = std::sin(direction);
    double best = kernels::detail::kMiss;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const Segment2& s = segments[i];
        const double t = kernels::detail::ray_segment_param(origin.x, origin.y, dx, dy, s.a.x,
                                                            s.a.y, s.b.x, s.b.y, max_range);
        if (t < best - kernels::detail::kTieTolerance) {
            best = t;
            best_index = i;
        }
    }
    if (!std::isfinite(best)) return std::nullopt;
    return RayHit{best, {origin.x + best * dx, origin.y + best * dy}, best_index};
}

namespace {

constexpr double kCollinearEps = 1e-12;

// Sign of the turn a->b->c: +1 left, -1 right, 0 collinear.
int orientation(const Point2& a, const Point2& b, const Point2& c) {
    const double v = cross(b - a, c - a);
    if (std::abs(v) < kCollinearEps) return 0;
    return v > 0.0 ? 1 : -1;
}

// Assumes collinearity; checks q inside the bounding box of [a, b].
bool on_segment(const Point2& a, const Point2& q, const Point2& b) {
    return q.x <= std::max(a.x, b.x) + kCollinearEps &&
           q.x >= std::min(a.x, b.x) - kCollinearEps &&
           q.y <= std::max(a.y, b.y) + kCollinearEps &&
           q.y >= std::min(a.y, b.y) - kCollinearEps;
}

}  // namespace

bool segments_intersect(const Segment2& s1, const Segment2& s2) {
    const int o1 = orientation(s1.a, s1.b, s2.a);
    const int o2 = orientation(s1.a, s1.b, s2.b);
    const int o3 = orientation(s2.a, s2.b, s1.a);
    const int o4 = orientation(s2.a, s2.b, s1.b);

    if (o1 != o2 && o3 != o4) return true;

    // Collinear contact (including shared endpoints and overlap) counts.
    if (o1 == 0 && on_segment(s1.a, s2.a, s1.b)) return true;
    if (o2 == 0 && on_segment(s1.a, s2.b, s1.b)) return true;
    if (o3 == 0 && on_segment(s2.a, s1.a, s2.b)) return true;
    if (o4 == 0 && on_segment(s2.a, s1.b, s2.b)) return true;
    return false;
}

double point_segment_distance(const Point2& p, const Segment2& s) {
    return kernels::detail::point_segment_dist(p.x, p.y, s.a.x, s.a.y, s.b.x, s.b.y);
}

}  // namespace lrfmap
