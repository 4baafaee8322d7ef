#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>

namespace lrfmap {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }

// Wraps an angle into [-pi, pi).
inline double normalize_angle(double theta) {
    double t = std::fmod(theta + M_PI, 2.0 * M_PI);
    if (t < 0.0) t += 2.0 * M_PI;
    return t - M_PI;
}

struct Pose {
    Point2 position;
    double heading = 0.0;  // radians, [-pi, pi)
};

struct Segment2 {
    Point2 a;
    Point2 b;
};

struct RayHit {
    double distance = 0.0;
    Point2 point;
    std::size_t segment_index = 0;
};

// Nearest intersection of the ray (origin, direction) with any segment,
// within (0, max_range]. Ties between segments at equal distance (within
// 1e-12) go to the earlier segment in the sequence.
std::optional<RayHit> ray_cast(const Point2& origin, double direction,
                               std::span<const Segment2> segments, double max_range);

// Closed-segment intersection test. Shared endpoints and collinear overlap
// count as intersecting.
bool segments_intersect(const Segment2& s1, const Segment2& s2);

// Distance from p to the closest point of the segment.
double point_segment_distance(const Point2& p, const Segment2& s);

}  // namespace lrfmap
