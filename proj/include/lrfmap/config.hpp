#pragma once

#include <cstdint>
#include <string>

#include "lrfmap/lidar.hpp"
#include "lrfmap/motion.hpp"
#include "lrfmap/navigation.hpp"
#include "lrfmap/particle_filter.hpp"

namespace lrfmap {

enum class SlamMode { none, similarity, particle };

struct RunConfig {
    std::string environment;
    std::uint64_t seed = 1;
    Strategy strategy = Strategy::min_gap;
    SlamMode slam = SlamMode::none;

    LidarConfig lidar;
    MotionConfig motion;
    FilterNoise filter;
    std::size_t particle_count = 500;

    double gap_threshold = 2.5;    // meters; below the sensor trust region
    int min_gap_degrees = 5;       // suppress single-sample noise gaps
    double jump_threshold = 0.5;   // meters; feature detector step size
    double feature_gate = 0.5;     // meters; association/matching gate
    double slam_travel_interval = 1.0;  // meters between in-transit corrections; 0 disables

    int max_nodes = 200;
    long max_steps = 500000;
};

// Applies `key = value` lines with dotted keys (e.g. lidar.max_range = 3.0)
// on top of the config. '#' lines are comments. Unknown keys or malformed
// values raise std::runtime_error with the line number.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::string& path);

std::string strategy_name(Strategy s);
std::string slam_mode_name(SlamMode m);
Strategy parse_strategy(const std::string& name);   // "min-gap" | "max-gap"
SlamMode parse_slam_mode(const std::string& name);  // "none" | "similarity" | "particle"

}  // namespace lrfmap
