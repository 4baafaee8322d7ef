#include "lrfmap/lidar.hpp"

#include <algorithm>
#include <stdexcept>

namespace lrfmap {

namespace {

double median(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Sweep scan(const EnvironmentModel& model, const Pose& pose, SweepArc arc,
           const LidarConfig& cfg, RngStream& rng) {
    if (cfg.realizations < 1) throw std::invalid_argument("lidar realizations must be >= 1");
    if (!(cfg.max_range > 0.0)) throw std::invalid_argument("lidar max_range must be > 0");

    Sweep sweep;
    sweep.origin_pose = pose;
    sweep.arc = arc;

    std::vector<double> draws;
    draws.reserve(static_cast<std::size_t>(cfg.realizations));

    for (int d = 0; d < 360; ++d) {
        if (!degree_in_arc(arc, d)) continue;
        const double b = sweep.bearing(d);
        const auto hit = kernels::nearest_hit(model.batch, pose.position, std::cos(b),
                                              std::sin(b), cfg.max_range);
        if (!hit.hit()) continue;

        draws.clear();
        int dropped = 0;
        for (int r = 0; r < cfg.realizations; ++r) {
            const double u = rng.uniform01();
            const double g = rng.gaussian();
            if (u < cfg.dropout_probability) {
                ++dropped;
                continue;
            }
            double value = hit.t * (1.0 + cfg.noise_sigma_fraction * g);
            value = std::clamp(value, 1e-9, cfg.max_range);
            draws.push_back(value);
        }
        if (2 * dropped > cfg.realizations) continue;  // mostly lost to reflectivity

        sweep.samples[d].range = median(draws);
        sweep.samples[d].valid = true;
    }
    return sweep;
}

std::vector<Point2> sweep_to_points(const Sweep& sweep, const Pose& assumed_pose) {
    std::vector<Point2> points;
    points.reserve(sweep.valid_count());
    for (int d = 0; d < 360; ++d) {
        const SweepSample& s = sweep.samples[d];
        if (!s.valid) continue;
        const double b = normalize_angle(assumed_pose.heading + d * (M_PI / 180.0));
        points.push_back(assumed_pose.position + Point2{std::cos(b), std::sin(b)} * s.range);
    }
    return points;
}

Sweep rebased(const Sweep& sweep, const Pose& pose) {
    Sweep out = sweep;
    out.origin_pose = pose;
    return out;
}

}  // namespace lrfmap
