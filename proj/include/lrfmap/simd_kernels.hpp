#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "lrfmap/geometry.hpp"

// Hot inner loops of the simulator: one ray against every wall segment, and
// one point against every wall segment. Both exist as a scalar reference
// kernel and an AVX2 variant selected at runtime. The two paths perform the
// same IEEE operations per lane (the project builds with -ffp-contract=off),
// so their results are bit-identical; the equivalence tests assert that.

namespace lrfmap::kernels {

enum class Backend { scalar, avx2 };

bool avx2_available();
// Backend used by nearest_hit/min_distance. Auto-detected on first use;
// the LRFMAP_BACKEND env var ("scalar"/"avx2") or force_backend override it.
Backend active_backend();
void force_backend(Backend b);

// Structure-of-arrays copy of a segment list, padded to the vector width.
class SegmentBatch {
public:
    SegmentBatch() = default;
    explicit SegmentBatch(std::span<const Segment2> segments);

    std::size_t size() const { return count_; }
    const std::vector<double>& ax() const { return ax_; }
    const std::vector<double>& ay() const { return ay_; }
    const std::vector<double>& bx() const { return bx_; }
    const std::vector<double>& by() const { return by_; }

private:
    std::vector<double> ax_, ay_, bx_, by_;
    std::size_t count_ = 0;

    friend struct BatchAccess;
};

struct NearestHit {
    double t = std::numeric_limits<double>::infinity();
    std::ptrdiff_t index = -1;  // -1 when nothing was hit

    bool hit() const { return index >= 0; }
};

// Nearest ray/segment intersection parameter within (0, max_range].
// dir_cos/dir_sin must be the unit direction, so t is the hit distance.
NearestHit nearest_hit(const SegmentBatch& batch, const Point2& origin,
                       double dir_cos, double dir_sin, double max_range);

// Minimum distance from p to any segment in the batch.
double min_distance(const SegmentBatch& batch, const Point2& p);

// Direct entry points for the scalar/AVX2 equivalence tests.
NearestHit nearest_hit_scalar(const SegmentBatch&, const Point2&, double, double, double);
NearestHit nearest_hit_avx2(const SegmentBatch&, const Point2&, double, double, double);
double min_distance_scalar(const SegmentBatch&, const Point2&);
double min_distance_avx2(const SegmentBatch&, const Point2&);

namespace detail {

inline constexpr double kMiss = std::numeric_limits<double>::infinity();
inline constexpr double kTieTolerance = 1e-12;

// Ray parameter of the intersection with one segment, or kMiss. Shared by
// the scalar kernel and geometry::ray_cast so every path agrees bit-for-bit.
inline double ray_segment_param(double ox, double oy, double dx, double dy,
                                double ax, double ay, double bx, double by,
                                double max_range) {
    const double ex = bx - ax;
    const double ey = by - ay;
    const double denom = dx * ey - dy * ex;
    if (denom == 0.0) return kMiss;  // parallel or degenerate
    const double qx = ax - ox;
    const double qy = ay - oy;
    const double t = (qx * ey - qy * ex) / denom;
    const double s = (qx * dy - qy * dx) / denom;
    if (!(s >= 0.0 && s <= 1.0)) return kMiss;
    if (!(t > 0.0 && t <= max_range)) return kMiss;
    return t;
}

inline double point_segment_dist(double px, double py, double ax, double ay,
                                 double bx, double by) {
    const double ex = bx - ax;
    const double ey = by - ay;
    const double l2 = ex * ex + ey * ey;
    double tt = ((px - ax) * ex + (py - ay) * ey) / l2;
    if (tt < 0.0) tt = 0.0;
    if (tt > 1.0) tt = 1.0;
    const double cx = ax + tt * ex;
    const double cy = ay + tt * ey;
    const double rx = px - cx;
    const double ry = py - cy;
    return std::sqrt(rx * rx + ry * ry);
}

}  // namespace detail

}  // namespace lrfmap::kernels
