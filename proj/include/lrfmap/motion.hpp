#pragma once

#include <span>
#include <vector>

#include "lrfmap/environment.hpp"
#include "lrfmap/geometry.hpp"
#include "lrfmap/rng.hpp"

namespace lrfmap {

struct MotionConfig {
    double step_length = 0.05;       // waypoint discretization, meters
    double odo_noise_trans = 0.01;   // sigma fraction of each step, per axis
    double odo_noise_rot = 0.002;    // sigma radians per step
    double slip_probability = 0.01;  // chance of a slip event per step
    double slip_magnitude = 0.03;    // meters of phantom travel per slip
    std::uint64_t rng_seed = 0;
};

struct MotionLogEntry {
    double dx = 0.0, dy = 0.0, dtheta = 0.0;  // commanded delta for this step
    Pose true_pose;
    Pose odometry_pose;
};

struct MotionResult {
    std::vector<MotionLogEntry> log;
    bool collided = false;
    Pose last_safe;  // final true pose (where the agent stopped)
};

// Drives the omni platform through the waypoints in straight legs split
// into steps of at most step_length. The true pose follows the leg exactly
// with the heading tracking the travel direction; the odometry pose is the
// true pose plus accumulated Gaussian noise and occasional slip offsets.
// Stops early when the next step would leave free space.
MotionResult execute_path(const EnvironmentModel& model, const Pose& start,
                          std::span<const Point2> waypoints, const MotionConfig& cfg,
                          RngStream& rng);

}  // namespace lrfmap
