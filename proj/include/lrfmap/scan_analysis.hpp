#pragma once

#include <vector>

#include "lrfmap/geometry.hpp"
#include "lrfmap/lidar.hpp"

namespace lrfmap {

// A contiguous arc of far-or-missing returns: a candidate frontier into
// space the sweep could not see. `bound_a`/`bound_b` are the wall points
// flanking the arc (the gap's mouth); `width` is the chord between them.
struct GapDescriptor {
    int start_degree = 0;  // inclusive, sweep frame
    int end_degree = 0;    // inclusive
    double width = 0.0;
    Point2 centroid;       // world frame, pushed to the gap threshold
    bool explored = false;
    Point2 bound_a;
    Point2 bound_b;
};

// A contiguous arc of near returns: sensed obstacle surface.
struct WallDescriptor {
    int start_degree = 0;
    int end_degree = 0;
    std::vector<Point2> points;  // world-frame hit points of the valid samples
};

struct Classification {
    std::vector<GapDescriptor> gaps;
    std::vector<WallDescriptor> walls;
    bool degenerate = false;  // sweep had no valid samples at all
};

// Splits a sweep into gaps and walls. A degree is a gap point when its
// range exceeds gap_threshold or it has no return; gap runs shorter than
// min_gap_degrees are folded into the flanking walls. Full sweeps treat
// the 359->0 step as contiguous.
Classification classify(const Sweep& sweep, double gap_threshold, int min_gap_degrees);

struct Feature {
    Point2 position;  // world frame under the sweep's origin pose
    int degree = 0;   // sample the jump was anchored to
    double range = 0.0;
};

// Jump-edge features: points where the range profile steps by more than
// jump_threshold between consecutive valid samples. Detections within two
// degrees of each other merge into one.
std::vector<Feature> extract_features(const Sweep& sweep, double jump_threshold);

}  // namespace lrfmap
