// Acceptance suite: one check per shipped behavior, one PASS/FAIL line each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lrfmap/motion.hpp"
#include "lrfmap/particle_filter.hpp"
#include "lrfmap/runner.hpp"
#include "lrfmap/scan_analysis.hpp"
#include "lrfmap/similarity.hpp"
#include "oracles.hpp"

using namespace lrfmap;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::printf("%s  criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const std::string kEnvDir = LRFMAP_ENV_DIR;

const std::vector<std::string> kComparisonEnvs = {
    "env01_single_room.env", "env02_closet_hall.env", "env03_l_corridor.env",
    "env04_ring.env",        "env05_office.env",
};

RunConfig noiseless_config(const std::string& env_name) {
    RunConfig cfg;
    cfg.environment = kEnvDir + "/" + env_name;
    cfg.lidar.noise_sigma_fraction = 0.0;
    cfg.lidar.dropout_probability = 0.0;
    cfg.motion.odo_noise_trans = 0.0;
    cfg.motion.odo_noise_rot = 0.0;
    cfg.motion.slip_probability = 0.0;
    return cfg;
}

// --- criterion 1: termination and coverage --------------------------------

void criterion_1() {
    std::vector<std::string> fixtures = kComparisonEnvs;
    fixtures.push_back("loop_sideroom.env");
    bool ok = true;
    std::string detail;
    char buf[160];
    for (const std::string& env : fixtures) {
        const auto start = std::chrono::steady_clock::now();
        const EpisodeResult res = run_episode(noiseless_config(env));
        const double elapsed = seconds_since(start);
        const bool good = res.metrics.complete &&
                          res.metrics.map_err.coverage_fraction >= 0.95 &&
                          res.metrics.map_err.mean_point_to_wall <= 0.02 && elapsed <= 10.0;
        std::snprintf(buf, sizeof buf, "%s[cov %.3f err %.4f %.1fs] ", env.c_str(),
                      res.metrics.map_err.coverage_fraction,
                      res.metrics.map_err.mean_point_to_wall, elapsed);
        detail += buf;
        ok = ok && good;
    }
    report(1, "all bundled fixtures terminate with coverage >= 0.95 and error <= 0.02 m", ok,
           detail);
}

// --- criterion 2: strategy comparison ordering ----------------------------

void criterion_2() {
    const auto start = std::chrono::steady_clock::now();
    RunConfig cfg = noiseless_config("");
    std::vector<std::string> paths;
    for (const std::string& env : kComparisonEnvs) paths.push_back(kEnvDir + "/" + env);
    const auto rows = compare_strategies(cfg, paths);

    int travel_wins = 0, node_wins = 0;
    for (const ComparisonRow& row : rows) {
        if (row.min_gap.travel_distance <= row.max_gap.travel_distance + 1e-9) ++travel_wins;
        if (row.min_gap.node_count <= row.max_gap.node_count) ++node_wins;
    }
    const double elapsed = seconds_since(start);
    char buf[128];
    std::snprintf(buf, sizeof buf, "travel %d/5, nodes %d/5, %.1fs", travel_wins, node_wins,
                  elapsed);
    report(2, "min-gap-first beats or ties max-gap-first in >= 4 of 5 environments",
           travel_wins >= 4 && node_wins >= 4 && elapsed <= 120.0, buf);
}

// --- criterion 3: learned shortcut on the loop fixture ---------------------

void criterion_3() {
    const EpisodeResult res = run_episode(noiseless_config("loop_sideroom.env"));

    auto is_inferred = [&](int a, int b) {
        for (const auto& e : res.graph.inferred_edges)
            if ((e.first == a && e.second == b) || (e.first == b && e.second == a)) return true;
        return false;
    };

    bool has_distant_inferred = false;
    for (const auto& e : res.graph.inferred_edges)
        if (std::abs(e.first - e.second) >= 2) has_distant_inferred = true;

    // Find a travel leg that routed through an inferred edge and compare it
    // with naive backtracking along the visit order.
    bool shortcut_used = false;
    double margin = 0.0;
    for (const TravelRecord& travel : res.travels) {
        if (travel.chain.size() < 2) continue;
        bool via_inferred = false;
        int prev = travel.from_node;
        for (int v : travel.chain) {
            if (std::abs(v - prev) >= 2 && is_inferred(prev, v)) via_inferred = true;
            prev = v;
        }
        if (!via_inferred) continue;
        // Naive backtracking: walk the node ids in reverse creation order.
        const int from = travel.from_node;
        const int to = travel.to_node;
        if (from <= to) continue;
        double backtrack = 0.0;
        for (int v = from; v > to; --v)
            backtrack += distance(res.graph.nodes[v].pose.position,
                                  res.graph.nodes[v - 1].pose.position);
        double routed = 0.0;
        prev = from;
        for (int v : travel.chain) {
            routed += distance(res.graph.nodes[prev].pose.position,
                               res.graph.nodes[v].pose.position);
            prev = v;
        }
        if (routed < backtrack - 1e-9) {
            shortcut_used = true;
            margin = backtrack - routed;
            break;
        }
    }

    char buf[128];
    std::snprintf(buf, sizeof buf, "inferred edges %zu, shortcut margin %.2f m",
                  res.graph.inferred_edges.size(), margin);
    report(3, "loop fixture links distant nodes without a scan and routes the return through them",
           res.metrics.complete && has_distant_inferred && shortcut_used && margin > 0.0, buf);
}

// --- criterion 4: Dijkstra against exhaustive enumeration ------------------

void criterion_4() {
    const auto start = std::chrono::steady_clock::now();
    RngStream rng(20240);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 7);
        NavGraph graph;
        for (int i = 0; i < n; ++i) {
            add_node(graph, {{rng.uniform(-5, 5), rng.uniform(-5, 5)}, 0.0}, {}, {},
                     SweepArc::full);
            graph.current_node = -1;
        }
        std::vector<std::vector<std::pair<int, double>>> adjacency(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.uniform01() < 0.4) {
                    const double w = rng.uniform(0.05, 4.0);
                    graph.nodes[i].neighbours[j] = w;
                    graph.nodes[j].neighbours[i] = w;
                    adjacency[i].push_back({j, w});
                    adjacency[j].push_back({i, w});
                }
        graph.current_node = static_cast<int>(rng.uniform_index(n));
        update_cost_table(graph);
        const auto expected = oracles::shortest_paths_oracle(adjacency, graph.current_node);
        for (int i = 0; i < n; ++i)
            if (graph.cost_table[i] != expected[i]) ++mismatches;
    }
    const double elapsed = seconds_since(start);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d mismatches, %.1fs", mismatches, elapsed);
    report(4, "travel-cost table matches exhaustive path enumeration on 1000 random graphs",
           mismatches == 0 && elapsed <= 10.0, buf);
}

// --- criterion 5: similarity transform recovery ----------------------------

void criterion_5() {
    const auto start = std::chrono::steady_clock::now();
    RngStream rng(555);
    int clean_ok = 0, outlier_ok = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        const SimilarityTransform truth{rng.uniform(0.95, 1.05), rng.uniform(-0.3, 0.3),
                                        {rng.uniform(-1, 1), rng.uniform(-1, 1)}};
        const std::size_t n = 6 + static_cast<std::size_t>(rng.uniform01() * 5);
        std::vector<Correspondence> pairs;
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 p{rng.uniform(-3, 3), rng.uniform(-3, 3)};
            pairs.push_back({p, truth.apply(p)});
        }
        const SimilarityTransform clean = estimate_transform(pairs);
        if (std::abs(clean.scale - truth.scale) <= 1e-6 &&
            std::abs(clean.rotation - truth.rotation) <= 1e-6 &&
            distance(clean.translation, truth.translation) <= 1e-6)
            ++clean_ok;

        // 10% gross outliers.
        std::vector<Correspondence> dirty = pairs;
        const std::size_t n_outliers = std::max<std::size_t>(1, n / 10);
        for (std::size_t k = 0; k < n_outliers; ++k) {
            const std::size_t idx = rng.uniform_index(dirty.size());
            dirty[idx].reference =
                dirty[idx].reference + Point2{rng.uniform(1.5, 3.0), rng.uniform(-3.0, -1.5)};
        }
        const SimilarityTransform robust = estimate_transform(dirty, 200, 1e-12);
        if (std::abs(robust.scale - truth.scale) <= 1e-2 &&
            std::abs(robust.rotation - truth.rotation) <= 1e-2 &&
            distance(robust.translation, truth.translation) <= 1e-2)
            ++outlier_ok;
    }
    const double elapsed = seconds_since(start);
    char buf[96];
    std::snprintf(buf, sizeof buf, "clean %d/100, outliers %d/100, %.1fs", clean_ok, outlier_ok,
                  elapsed);
    report(5, "similarity transform recovered to 1e-6 clean and 1e-2 with 10% outliers",
           clean_ok == trials && outlier_ok == trials && elapsed <= 5.0, buf);
}

// --- criterion 6: particle filter convergence -------------------------------

struct TourOutcome {
    double corrected_error = 0.0;
    double odometry_error = 0.0;
};

// Drives a fixed waypoint tour through the drift fixture with wheel slip,
// running the filter against the known obstacle-corner landmark map.
TourOutcome drift_tour(std::uint64_t seed, const EnvironmentModel& model, bool with_noise) {
    RunConfig cfg;
    cfg.lidar.noise_sigma_fraction = with_noise ? 0.01 : 0.0;
    cfg.lidar.dropout_probability = 0.0;
    cfg.motion.odo_noise_trans = with_noise ? 0.01 : 0.0;
    cfg.motion.odo_noise_rot = with_noise ? 0.002 : 0.0;
    cfg.motion.slip_probability = with_noise ? 0.04 : 0.0;
    cfg.motion.slip_magnitude = 0.06;

    FilterNoise noise;
    if (!with_noise) {
        noise.sigma_trans = 0.0;
        noise.sigma_rot = 0.0;
    }

    std::vector<Point2> landmarks;
    for (const auto& obstacle : model.obstacles)
        for (const Point2& corner : obstacle) landmarks.push_back(corner);

    RngStream lidar_rng(mix_seed(seed, 1)), motion_rng(mix_seed(seed, 2)),
        filter_rng(mix_seed(seed, 3));
    Pose truth = model.start_pose;
    Pose odometry = truth;
    ParticleSet pf = initialize(500, truth, noise, filter_rng);

    const std::vector<Point2> tour = {{1.6, 0.4},  {2.8, 0.4},  {3.9, 0.35}, {5.1, 0.35},
                                      {5.2, 1.3},  {5.2, 2.2},  {5.2, 3.2},  {5.2, 4.2},
                                      {4.1, 4.25}, {2.9, 4.25}, {1.7, 4.2},  {0.45, 4.1},
                                      {0.4, 3.2},  {0.4, 2.2},  {0.6, 1.3}};
    TourOutcome outcome;
    for (const Point2& waypoint : tour) {
        const MotionResult leg =
            execute_path(model, truth, std::vector<Point2>{waypoint}, cfg.motion, motion_rng);
        Pose prev = truth;
        for (const MotionLogEntry& entry : leg.log) {
            const double dx = entry.odometry_pose.position.x - prev.position.x;
            const double dy = entry.odometry_pose.position.y - prev.position.y;
            const double dh = normalize_angle(entry.odometry_pose.heading - prev.heading);
            prev = entry.odometry_pose;
            odometry.position.x += dx;
            odometry.position.y += dy;
            odometry.heading = normalize_angle(odometry.heading + dh);
            predict(pf, dx, dy, dh, noise, filter_rng);
        }
        truth = leg.last_safe;

        const Sweep sweep = scan(model, truth, SweepArc::full, cfg.lidar, lidar_rng);
        const auto features = extract_features(sweep, 0.5);
        std::vector<RangeBearing> measurements;
        for (const Feature& f : features)
            measurements.push_back({f.range, normalize_angle(f.degree * (M_PI / 180.0))});
        weigh(pf, measurements, landmarks, noise, 0.5);
        if (effective_sample_size(pf) < 0.5 * static_cast<double>(pf.particles.size()))
            resample(pf, filter_rng);

        const PoseEstimate est = estimate(pf, odometry.heading);
        const double err = distance(est.pose.position, truth.position);
        if (!with_noise && err > outcome.corrected_error) outcome.corrected_error = err;
        if (with_noise) outcome.corrected_error = err;
    }
    outcome.odometry_error = distance(odometry.position, truth.position);
    return outcome;
}

void criterion_6() {
    const auto start = std::chrono::steady_clock::now();
    const EnvironmentModel model = load_environment_file(kEnvDir + "/drift_room.env");

    const TourOutcome zero = drift_tour(1, model, /*with_noise=*/false);
    const bool zero_ok = zero.corrected_error <= 1e-6;

    int converged = 0, beats_odometry = 0;
    for (int seed = 0; seed < 100; ++seed) {
        const TourOutcome out = drift_tour(1000 + seed, model, /*with_noise=*/true);
        if (out.corrected_error < 0.1) ++converged;
        if (out.corrected_error < out.odometry_error) ++beats_odometry;
    }
    const double elapsed = seconds_since(start);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "zero-noise max err %.2g, converged %d/100, beats odometry %d/100, %.1fs",
                  zero.corrected_error, converged, beats_odometry, elapsed);
    report(6, "particle filter converges on the drift fixture and beats raw odometry",
           zero_ok && converged >= 95 && beats_odometry >= 95 && elapsed <= 120.0, buf);
}

// --- criterion 7: resampling wheel statistics -------------------------------

void criterion_7() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = 100;
    std::vector<long> counts(n, 0);
    for (int round = 0; round < 100; ++round) {
        RngStream rng(31337 + round);
        ParticleSet set;
        for (std::size_t i = 0; i < n; ++i)
            set.particles.push_back(
                {{{static_cast<double>(i), 0.0}, 0.0}, 1.0 / static_cast<double>(n)});
        resample(set, rng);
        for (const Particle& p : set.particles)
            counts[static_cast<std::size_t>(p.pose.position.x)]++;
    }
    double chi2 = 0.0;
    for (long c : counts) chi2 += (c - 100.0) * (c - 100.0) / 100.0;
    const bool uniform_ok = chi2 < oracles::kChi2Crit99;

    RngStream rng(7);
    ParticleSet dominant;
    for (std::size_t i = 0; i < 500; ++i)
        dominant.particles.push_back({{{static_cast<double>(i), 0.0}, 0.0}, 0.0});
    dominant.particles[123].weight = 1.0;
    resample(dominant, rng);
    bool dominant_ok = dominant.particles.size() == 500;
    for (const Particle& p : dominant.particles)
        dominant_ok = dominant_ok && p.pose.position.x == 123.0;

    const double elapsed = seconds_since(start);
    char buf[96];
    std::snprintf(buf, sizeof buf, "chi2 %.1f (crit %.1f), %.1fs", chi2, oracles::kChi2Crit99,
                  elapsed);
    report(7, "resampling wheel is uniform under uniform weights and all-copies under dominance",
           uniform_ok && dominant_ok && elapsed <= 5.0, buf);
}

// --- criterion 8: determinism of the noiseless runs -------------------------

void criterion_8() {
    std::vector<std::string> fixtures = kComparisonEnvs;
    fixtures.push_back("loop_sideroom.env");
    bool ok = true;
    for (const std::string& env : fixtures) {
        const RunConfig cfg = noiseless_config(env);
        const EpisodeResult a = run_episode(cfg);
        const EpisodeResult b = run_episode(cfg);
        ok = ok && dump_map(a.map) == dump_map(b.map) &&
             dump_graph(a.graph) == dump_graph(b.graph) &&
             dump_trajectory(a.map) == dump_trajectory(b.map) &&
             format_metrics(a.metrics) == format_metrics(b.metrics);
    }
    report(8, "repeated runs produce bit-identical map, graph and metrics dumps", ok,
           ok ? "all dumps equal" : "dump mismatch");
}

// --- criterion 9: circular-mean heading estimator ---------------------------

void criterion_9() {
    const double deg = M_PI / 180.0;
    bool ok = true;

    for (double theta : {10.0, 45.0, 80.0}) {
        ParticleSet set;
        set.particles.push_back({{{0, 0}, theta * deg}, 0.5});
        set.particles.push_back({{{0, 0}, -theta * deg}, 0.5});
        ok = ok && std::abs(estimate(set).pose.heading) <= 1e-9;
    }

    ParticleSet wrap;
    wrap.particles.push_back({{{0, 0}, 170.0 * deg}, 0.5});
    wrap.particles.push_back({{{0, 0}, -170.0 * deg}, 0.5});
    const double h = estimate(wrap).pose.heading;
    ok = ok && std::abs(normalize_angle(h - 180.0 * deg)) <= 1e-9;

    char buf[64];
    std::snprintf(buf, sizeof buf, "wrap-around mean %.6f rad", h);
    report(9, "heading estimate is the circular mean, including the wrap-around case", ok, buf);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
