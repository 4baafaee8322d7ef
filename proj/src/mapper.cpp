#include "lrfmap/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "lrfmap/simd_kernels.hpp"

namespace lrfmap {

void integrate_sweep(GlobalMap& map, const Sweep& sweep, const Pose& estimated_pose, int node) {
    for (int d = 0; d < 360; ++d) {
        const SweepSample& s = sweep.samples[d];
        if (!s.valid) continue;
        const double b = normalize_angle(estimated_pose.heading + d * (M_PI / 180.0));
        map.points.push_back(
            {estimated_pose.position + Point2{std::cos(b), std::sin(b)} * s.range, node, d});
    }
}

void apply_correction(GlobalMap& map, int node, const SimilarityTransform& transform) {
    for (MapPoint& p : map.points)
        if (p.source_node >= node) p.position = transform.apply(p.position);
    for (TrajectoryEntry& t : map.trajectory) {
        if (t.node_era < node) continue;
        t.corrected.position = transform.apply(t.corrected.position);
        t.corrected.heading = normalize_angle(t.corrected.heading + transform.rotation);
    }
}

MapError map_error(const GlobalMap& map, const EnvironmentModel& truth) {
    if (map.points.empty()) throw std::invalid_argument("map_error: empty map");

    MapError err;
    double sum = 0.0;
    for (const MapPoint& p : map.points) {
        const double d = kernels::min_distance(truth.batch, p.position);
        sum += d;
        err.hausdorff = std::max(err.hausdorff, d);
    }
    err.mean_point_to_wall = sum / static_cast<double>(map.points.size());

    constexpr double kSampleSpacing = 0.05;
    constexpr double kCoverageRadius = 0.15;
    std::size_t covered = 0, total = 0;
    for (const Segment2& seg : truth.segments) {
        const double len = distance(seg.a, seg.b);
        const int samples = std::max(1, static_cast<int>(std::ceil(len / kSampleSpacing)));
        for (int i = 0; i <= samples; ++i) {
            const double t = static_cast<double>(i) / samples;
            const Point2 q = seg.a + (seg.b - seg.a) * t;
            ++total;
            for (const MapPoint& p : map.points) {
                if (distance(q, p.position) <= kCoverageRadius) {
                    ++covered;
                    break;
                }
            }
        }
    }
    err.coverage_fraction = total ? static_cast<double>(covered) / total : 0.0;
    return err;
}

std::string dump_map(const GlobalMap& map) {
    std::ostringstream out;
    char buf[128];
    for (const MapPoint& p : map.points) {
        std::snprintf(buf, sizeof buf, "%.9g %.9g %d %d\n", p.position.x, p.position.y,
                      p.source_node, p.source_degree);
        out << buf;
    }
    return out.str();
}

std::string dump_trajectory(const GlobalMap& map) {
    std::ostringstream out;
    char buf[256];
    for (std::size_t i = 0; i < map.trajectory.size(); ++i) {
        const TrajectoryEntry& t = map.trajectory[i];
        std::snprintf(buf, sizeof buf, "%zu %.9g %.9g %.9g %.9g %.9g %.9g %.9g %.9g %.9g\n", i,
                      t.truth.position.x, t.truth.position.y, t.truth.heading,
                      t.odometry.position.x, t.odometry.position.y, t.odometry.heading,
                      t.corrected.position.x, t.corrected.position.y, t.corrected.heading);
        out << buf;
    }
    return out.str();
}

}  // namespace lrfmap
