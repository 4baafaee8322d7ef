#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrfmap/geometry.hpp"
#include "lrfmap/simd_kernels.hpp"

namespace lrfmap {

struct EnvParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnvValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ground-truth world. The simulator reads it; the agent only ever sees
// range samples derived from it. Immutable after load.
struct EnvironmentModel {
    std::vector<Point2> boundary;                 // closed simple polygon
    std::vector<std::vector<Point2>> obstacles;   // closed polygons inside it
    Pose start_pose;
    double agent_radius = 0.0;

    std::vector<Segment2> segments;               // boundary edges, then obstacles
    kernels::SegmentBatch batch;                  // SoA mirror of `segments`
};

// Parses and validates the line-oriented environment format:
//   boundary: x1,y1 x2,y2 ...
//   obstacle: x1,y1 x2,y2 ...        (zero or more)
//   start: x,y,heading_rad
//   agent_radius: r
// '#' lines are comments, blank lines ignored, section order fixed.
EnvironmentModel load_environment(const std::string& text);
EnvironmentModel load_environment_file(const std::string& path);

std::string serialize(const EnvironmentModel& model);

// Every polygon edge exactly once, boundary first.
std::span<const Segment2> all_segments(const EnvironmentModel& model);

// Even-odd test; points on the polygon border count as inside.
bool point_in_polygon(std::span<const Point2> polygon, const Point2& p);

// Inside the boundary, outside every obstacle, and at least agent_radius
// away from every wall segment.
bool is_pose_free(const EnvironmentModel& model, const Point2& p);

}  // namespace lrfmap
