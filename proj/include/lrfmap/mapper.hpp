#pragma once

#include <string>
#include <vector>

#include "lrfmap/environment.hpp"
#include "lrfmap/geometry.hpp"
#include "lrfmap/lidar.hpp"
#include "lrfmap/similarity.hpp"

namespace lrfmap {

struct MapPoint {
    Point2 position;
    int source_node = 0;
    int source_degree = 0;
};

struct TrajectoryEntry {
    int node_era = 0;  // id of the node the agent was traveling toward
    Pose truth;
    Pose odometry;
    Pose corrected;
};

struct GlobalMap {
    std::vector<MapPoint> points;
    std::vector<TrajectoryEntry> trajectory;
};

// Appends the sweep's valid samples, projected under the estimated pose.
void integrate_sweep(GlobalMap& map, const Sweep& sweep, const Pose& estimated_pose, int node);

// Remaps every point and trajectory correction sourced at or after `node`.
void apply_correction(GlobalMap& map, int node, const SimilarityTransform& transform);

struct MapError {
    double mean_point_to_wall = 0.0;
    double hausdorff = 0.0;          // max point-to-wall distance
    double coverage_fraction = 0.0;  // share of true perimeter near a map point
};

// Point-to-wall statistics against the true environment. Coverage samples
// the true perimeter every 0.05 m and counts samples within 0.15 m of some
// map point. Throws std::invalid_argument on an empty map.
MapError map_error(const GlobalMap& map, const EnvironmentModel& truth);

// `x y node degree` per point.
std::string dump_map(const GlobalMap& map);
// `t x_true y_true h_true x_odo y_odo h_odo x_cor y_cor h_cor` per entry.
std::string dump_trajectory(const GlobalMap& map);

}  // namespace lrfmap
