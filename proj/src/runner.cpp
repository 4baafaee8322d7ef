#include "lrfmap/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "lrfmap/motion.hpp"
#include "lrfmap/particle_filter.hpp"
#include "lrfmap/rng.hpp"
#include "lrfmap/scan_analysis.hpp"
#include "lrfmap/similarity.hpp"

namespace lrfmap {

namespace {

using Clock = std::chrono::steady_clock;

struct PhaseTimer {
    std::map<std::string, double>& sink;
    const char* name;
    Clock::time_point begin = Clock::now();
    PhaseTimer(std::map<std::string, double>& s, const char* n) : sink(s), name(n) {}
    ~PhaseTimer() {
        sink[name] += std::chrono::duration<double>(Clock::now() - begin).count();
    }
};

std::vector<RangeBearing> to_range_bearings(const std::vector<Feature>& features) {
    std::vector<RangeBearing> out;
    out.reserve(features.size());
    for (const Feature& f : features)
        out.push_back({f.range, normalize_angle(f.degree * (M_PI / 180.0))});
    return out;
}

// Episode state shared by the loop phases.
struct Episode {
    const EnvironmentModel& model;
    const RunConfig& cfg;
    RngStream lidar_rng, motion_rng, filter_rng;

    Pose truth;
    Pose believed;   // agent's running pose estimate (corrected at nodes)
    Pose odometry;   // raw dead reckoning, never corrected

    EpisodeResult result;
    ParticleSet pf;
    std::vector<Point2> landmarks;       // particle mode map
    std::vector<Feature> reference;      // similarity mode feature store
    std::map<std::pair<int, int>, int> gap_failures;  // aborted attempts per gap

    Episode(const EnvironmentModel& m, const RunConfig& c)
        : model(m),
          cfg(c),
          lidar_rng(mix_seed(c.seed ^ c.lidar.rng_seed, 1)),
          motion_rng(mix_seed(c.seed ^ c.motion.rng_seed, 2)),
          filter_rng(mix_seed(c.seed, 3)),
          truth(m.start_pose),
          believed(m.start_pose),
          odometry(m.start_pose) {
        if (cfg.slam == SlamMode::particle)
            pf = initialize(cfg.particle_count, believed, cfg.filter, filter_rng);
    }

    double agent_diameter() const { return 2.0 * model.agent_radius; }

    void correct_pose(const Sweep& physical, std::vector<Feature>& features,
                      Sweep& sweep_believed) {
        const int upcoming_node = static_cast<int>(result.graph.nodes.size());
        if (cfg.slam == SlamMode::similarity && !reference.empty()) {
            const auto pairs = match_features(features, reference, cfg.feature_gate);
            if (pairs.size() >= 3) {
                try {
                    const SimilarityTransform t = estimate_transform(pairs);
                    believed.position = t.apply(believed.position);
                    believed.heading = normalize_angle(believed.heading + t.rotation);
                    apply_correction(result.map, upcoming_node, t);
                    sweep_believed = rebased(physical, believed);
                    features = extract_features(sweep_believed, cfg.jump_threshold);
                } catch (const std::invalid_argument&) {
                    // Coincident feature geometry; skip this correction.
                }
            }
        } else if (cfg.slam == SlamMode::particle && !landmarks.empty()) {
            weigh(pf, to_range_bearings(features), landmarks, cfg.filter, cfg.feature_gate);
            if (effective_sample_size(pf) < 0.5 * static_cast<double>(pf.particles.size()))
                resample(pf, filter_rng);
            believed = estimate(pf, believed.heading).pose;
            sweep_believed = rebased(physical, believed);
            features = extract_features(sweep_believed, cfg.jump_threshold);
        }
    }

    // Localization-only fix between anchors: a quick forward sweep weighed
    // against the map built so far. Keeps the pose estimate from drifting
    // past the association gate on long legs.
    void transit_correction() {
        const Sweep physical = scan(model, truth, SweepArc::forward, cfg.lidar, lidar_rng);
        const Sweep sweep_believed = rebased(physical, believed);
        const auto features = extract_features(sweep_believed, cfg.jump_threshold);
        if (cfg.slam == SlamMode::similarity) {
            if (reference.empty()) return;
            const auto pairs = match_features(features, reference, cfg.feature_gate);
            if (pairs.size() < 3) return;
            try {
                const SimilarityTransform t = estimate_transform(pairs);
                believed.position = t.apply(believed.position);
                believed.heading = normalize_angle(believed.heading + t.rotation);
            } catch (const std::invalid_argument&) {
            }
        } else if (cfg.slam == SlamMode::particle) {
            if (landmarks.empty()) return;
            weigh(pf, to_range_bearings(features), landmarks, cfg.filter, cfg.feature_gate);
            if (effective_sample_size(pf) < 0.5 * static_cast<double>(pf.particles.size()))
                resample(pf, filter_rng);
            believed = estimate(pf, believed.heading).pose;
        }
    }

    void remember_features(const std::vector<Feature>& features) {
        if (cfg.slam == SlamMode::none) return;
        // Keep the stored features at least a gate apart so a drifted
        // re-observation cannot split one landmark into two.
        const double dedupe = cfg.feature_gate;
        for (const Feature& f : features) {
            bool known = false;
            if (cfg.slam == SlamMode::similarity) {
                for (const Feature& r : reference)
                    if (distance(f.position, r.position) <= dedupe) {
                        known = true;
                        break;
                    }
                if (!known) reference.push_back(f);
            } else {
                for (const Point2& l : landmarks)
                    if (distance(f.position, l) <= dedupe) {
                        known = true;
                        break;
                    }
                if (!known) landmarks.push_back(f.position);
            }
        }
    }

    // Scan at the current pose and grow the graph; returns the new node id.
    int anchor(std::optional<std::pair<int, int>>& traveled_gap) {
        const SweepArc arc =
            result.graph.nodes.empty() ? SweepArc::full : SweepArc::forward;
        Sweep physical;
        {
            PhaseTimer t(result.metrics.phase_seconds, "scan");
            physical = scan(model, truth, arc, cfg.lidar, lidar_rng);
        }
        Sweep sweep_believed = rebased(physical, believed);
        std::vector<Feature> features;
        {
            PhaseTimer t(result.metrics.phase_seconds, "analysis");
            features = extract_features(sweep_believed, cfg.jump_threshold);
        }
        {
            PhaseTimer t(result.metrics.phase_seconds, "slam");
            correct_pose(physical, features, sweep_believed);
        }

        Classification cls;
        {
            PhaseTimer t(result.metrics.phase_seconds, "analysis");
            cls = classify(sweep_believed, cfg.gap_threshold, cfg.min_gap_degrees);
        }
        int id;
        {
            PhaseTimer t(result.metrics.phase_seconds, "navigation");
            id = add_node(result.graph, believed, std::move(cls.gaps), std::move(cls.walls),
                          arc);
            if (traveled_gap) {
                mark_gap_explored(result.graph, traveled_gap->first, traveled_gap->second);
                traveled_gap.reset();
            }
            identify_neighbours(result.graph, id, cfg.lidar.max_range, agent_diameter());
        }
        {
            PhaseTimer t(result.metrics.phase_seconds, "integrate");
            integrate_sweep(result.map, sweep_believed, believed, id);
        }
        remember_features(features);
        return id;
    }

    // Drives toward the target. Returns false when no ground was covered
    // (the caller then drops that gap and picks another target).
    bool travel(const Target& target, bool& made_progress) {
        PhaseTimer timer(result.metrics.phase_seconds, "travel");
        TravelRecord record;
        record.from_node = result.graph.current_node;
        record.to_node = target.node_id;
        record.gap_index = target.gap_index;
        record.planned_length = 0.0;
        {
            Point2 prev = believed.position;
            for (const Point2& w : target.waypoints) {
                record.planned_length += distance(prev, w);
                prev = w;
            }
        }
        // Waypoints live in the agent's believed frame; the platform can
        // only execute them relative to where it really is.
        const Point2 shift = truth.position - believed.position;
        std::vector<Point2> shifted;
        shifted.reserve(target.waypoints.size());
        for (const Point2& w : target.waypoints) shifted.push_back(w + shift);

        // Node ids along the planned route, ending at the target node.
        for (int v = target.node_id; v >= 0 && v != record.from_node;
             v = result.graph.parent[v])
            record.chain.push_back(v);
        std::reverse(record.chain.begin(), record.chain.end());

        const MotionResult mres = execute_path(model, truth, shifted, cfg.motion, motion_rng);
        record.collided = mres.collided;

        const int era = static_cast<int>(result.graph.nodes.size());
        const bool correct_in_transit =
            cfg.slam != SlamMode::none && cfg.slam_travel_interval > 0.0;
        double since_correction = 0.0;
        Pose prev_odo_step = truth;  // execute_path starts its error at zero
        double moved = 0.0;
        std::size_t waypoints_reached = 0;
        for (const MotionLogEntry& entry : mres.log) {
            if (waypoints_reached < shifted.size() &&
                distance(entry.true_pose.position, shifted[waypoints_reached]) < 1e-12)
                ++waypoints_reached;
            const double ddx = entry.odometry_pose.position.x - prev_odo_step.position.x;
            const double ddy = entry.odometry_pose.position.y - prev_odo_step.position.y;
            const double ddh =
                normalize_angle(entry.odometry_pose.heading - prev_odo_step.heading);
            prev_odo_step = entry.odometry_pose;

            believed.position.x += ddx;
            believed.position.y += ddy;
            believed.heading = normalize_angle(believed.heading + ddh);
            odometry.position.x += ddx;
            odometry.position.y += ddy;
            odometry.heading = normalize_angle(odometry.heading + ddh);
            if (cfg.slam == SlamMode::particle)
                predict(pf, ddx, ddy, ddh, cfg.filter, filter_rng);

            const double step_len = std::sqrt(entry.dx * entry.dx + entry.dy * entry.dy);
            moved += step_len;
            if (correct_in_transit) {
                since_correction += step_len;
                if (since_correction >= cfg.slam_travel_interval) {
                    since_correction = 0.0;
                    PhaseTimer t(result.metrics.phase_seconds, "slam");
                    truth = entry.true_pose;
                    transit_correction();
                }
            }
            result.map.trajectory.push_back({era, entry.true_pose, odometry, believed});
        }
        truth = mres.last_safe;
        result.metrics.travel_distance += moved;
        result.metrics.sim_steps += static_cast<long>(mres.log.size());

        made_progress = moved >= cfg.motion.step_length;
        record.failed_on_gap_leg = mres.collided && waypoints_reached >= record.chain.size();
        if (!mres.collided) {
            result.graph.current_node = target.node_id;
        } else if (waypoints_reached >= 1 && !record.chain.empty()) {
            // Stopped mid-route: anchor bookkeeping continues from the last
            // graph node the agent actually passed.
            const std::size_t last = std::min(waypoints_reached, record.chain.size());
            result.graph.current_node = record.chain[last - 1];
        }
        const bool ok = !mres.collided;
        result.travels.push_back(std::move(record));
        return ok;
    }
};

}  // namespace

EpisodeResult run_episode(const EnvironmentModel& model, const RunConfig& cfg) {
    const auto episode_begin = Clock::now();
    Episode ep(model, cfg);
    ep.result.map.trajectory.push_back({0, ep.truth, ep.odometry, ep.believed});

    std::optional<std::pair<int, int>> traveled_gap;
    bool limit_hit = false;

    while (true) {
        if (static_cast<int>(ep.result.graph.nodes.size()) >= cfg.max_nodes) {
            limit_hit = true;
            break;
        }
        ep.anchor(traveled_gap);
        {
            PhaseTimer t(ep.result.metrics.phase_seconds, "navigation");
            update_cost_table(ep.result.graph);
        }

        bool arrived = false;
        while (!arrived) {
            std::optional<Target> target;
            {
                PhaseTimer t(ep.result.metrics.phase_seconds, "navigation");
                target = select_target(ep.result.graph, ep.agent_diameter(), cfg.strategy);
            }
            if (!target) {
                ep.result.metrics.complete = true;
                break;
            }
            bool made_progress = false;
            arrived = ep.travel(*target, made_progress);
            if (ep.result.metrics.sim_steps > cfg.max_steps) {
                limit_hit = true;
                break;
            }
            const std::pair<int, int> key{target->node_id, target->gap_index};
            if (arrived) {
                traveled_gap = key;
            } else if (made_progress) {
                // Anchor at the stop. Drop the gap when the failure happened
                // on its own approach leg or keeps repeating; a collision
                // somewhere along the route says nothing about the gap.
                const bool gap_leg = ep.result.travels.back().failed_on_gap_leg;
                if (gap_leg || ++ep.gap_failures[key] >= 2) traveled_gap = key;
                arrived = true;
            } else {
                // Stuck right away: that gap is not actually passable.
                mark_gap_explored(ep.result.graph, target->node_id, target->gap_index);
            }
        }
        if (ep.result.metrics.complete || limit_hit) break;
    }

    RunMetrics& m = ep.result.metrics;
    if (limit_hit) m.complete = false;
    m.node_count = static_cast<int>(ep.result.graph.nodes.size());
    m.final_pose_error = distance(ep.truth.position, ep.believed.position);
    m.final_odometry_error = distance(ep.truth.position, ep.odometry.position);
    if (!ep.result.map.points.empty()) m.map_err = map_error(ep.result.map, model);
    m.wall_seconds = std::chrono::duration<double>(Clock::now() - episode_begin).count();
    return ep.result;
}

EpisodeResult run_episode(const RunConfig& cfg) {
    const EnvironmentModel model = load_environment_file(cfg.environment);
    return run_episode(model, cfg);
}

std::vector<ComparisonRow> compare_strategies(const RunConfig& cfg,
                                              const std::vector<std::string>& env_paths) {
    if (env_paths.empty())
        throw std::invalid_argument("compare_strategies: need at least one environment");
    std::vector<ComparisonRow> rows;
    for (const std::string& path : env_paths) {
        const EnvironmentModel model = load_environment_file(path);
        ComparisonRow row;
        row.environment = path;
        for (Strategy strategy : {Strategy::min_gap, Strategy::max_gap}) {
            RunConfig run_cfg = cfg;
            run_cfg.environment = path;
            run_cfg.strategy = strategy;
            const EpisodeResult res = run_episode(model, run_cfg);
            StrategyOutcome& out =
                strategy == Strategy::min_gap ? row.min_gap : row.max_gap;
            out.complete = res.metrics.complete;
            out.node_count = res.metrics.node_count;
            out.travel_distance = res.metrics.travel_distance;
            out.sim_steps = res.metrics.sim_steps;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_metrics(const RunMetrics& metrics, bool include_timings) {
    std::ostringstream out;
    char buf[128];
    out << "complete = " << (metrics.complete ? 1 : 0) << "\n";
    out << "node_count = " << metrics.node_count << "\n";
    std::snprintf(buf, sizeof buf, "travel_distance = %.9g\n", metrics.travel_distance);
    out << buf;
    out << "sim_steps = " << metrics.sim_steps << "\n";
    std::snprintf(buf, sizeof buf, "map_mean_error = %.9g\n", metrics.map_err.mean_point_to_wall);
    out << buf;
    std::snprintf(buf, sizeof buf, "map_hausdorff = %.9g\n", metrics.map_err.hausdorff);
    out << buf;
    std::snprintf(buf, sizeof buf, "map_coverage = %.9g\n", metrics.map_err.coverage_fraction);
    out << buf;
    std::snprintf(buf, sizeof buf, "final_pose_error = %.9g\n", metrics.final_pose_error);
    out << buf;
    std::snprintf(buf, sizeof buf, "final_odometry_error = %.9g\n",
                  metrics.final_odometry_error);
    out << buf;
    if (include_timings) {
        std::snprintf(buf, sizeof buf, "wall_seconds = %.6f\n", metrics.wall_seconds);
        out << buf;
        for (const auto& [phase, seconds] : metrics.phase_seconds) {
            std::snprintf(buf, sizeof buf, "phase.%s_seconds = %.6f\n", phase.c_str(), seconds);
            out << buf;
        }
    }
    return out.str();
}

std::string format_comparison(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    char buf[256];
    for (const ComparisonRow& row : rows) {
        const std::pair<const StrategyOutcome*, const char*> picks[] = {
            {&row.min_gap, "min-gap"}, {&row.max_gap, "max-gap"}};
        for (const auto& pick : picks) {
            std::snprintf(buf, sizeof buf,
                          "env = %s | strategy = %s | complete = %d | nodes = %d | "
                          "travel = %.9g | steps = %ld\n",
                          row.environment.c_str(), pick.second, pick.first->complete ? 1 : 0,
                          pick.first->node_count, pick.first->travel_distance,
                          pick.first->sim_steps);
            out << buf;
        }
    }
    return out.str();
}

}  // namespace lrfmap
