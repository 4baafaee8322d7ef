#pragma once

#include <map>
#include <string>
#include <vector>

#include "lrfmap/config.hpp"
#include "lrfmap/environment.hpp"
#include "lrfmap/mapper.hpp"
#include "lrfmap/navigation.hpp"

namespace lrfmap {

struct RunMetrics {
    bool complete = false;
    int node_count = 0;
    double travel_distance = 0.0;  // meters actually driven
    long sim_steps = 0;
    MapError map_err;
    double final_pose_error = 0.0;      // believed vs true position at the end
    double final_odometry_error = 0.0;  // raw dead reckoning vs truth
    double wall_seconds = 0.0;
    std::map<std::string, double> phase_seconds;
};

// One planned travel leg, kept for diagnostics and the route assertions in
// the tests.
struct TravelRecord {
    int from_node = -1;
    int to_node = -1;
    int gap_index = -1;
    std::vector<int> chain;  // node ids visited on the way (ending at to_node)
    double planned_length = 0.0;
    bool collided = false;
    bool failed_on_gap_leg = false;  // stopped after the last chain node
};

struct EpisodeResult {
    GlobalMap map;
    NavGraph graph;
    RunMetrics metrics;
    std::vector<TravelRecord> travels;
};

// The exploration loop: scan (full circle first, forward afterwards),
// correct the pose estimate, classify, grow the graph, pick the next gap,
// drive there, repeat until no unexplored traversable gap remains or a
// limit trips. Deterministic for a fixed config and seed.
EpisodeResult run_episode(const EnvironmentModel& model, const RunConfig& cfg);
EpisodeResult run_episode(const RunConfig& cfg);  // loads cfg.environment

struct StrategyOutcome {
    bool complete = false;
    int node_count = 0;
    double travel_distance = 0.0;
    long sim_steps = 0;
};

struct ComparisonRow {
    std::string environment;
    StrategyOutcome min_gap;
    StrategyOutcome max_gap;
};

// Runs both gap-selection strategies on every environment with identical
// seeds and reports the hardware-independent cost proxies.
std::vector<ComparisonRow> compare_strategies(const RunConfig& cfg,
                                              const std::vector<std::string>& env_paths);

// `key = value` metrics dump. Wall-clock values are skipped unless asked
// for so the dump stays reproducible.
std::string format_metrics(const RunMetrics& metrics, bool include_timings = false);
std::string format_comparison(const std::vector<ComparisonRow>& rows);

}  // namespace lrfmap
