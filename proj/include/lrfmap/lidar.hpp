#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lrfmap/environment.hpp"
#include "lrfmap/geometry.hpp"
#include "lrfmap/rng.hpp"

namespace lrfmap {

enum class SweepArc { full, forward };

// Forward sweeps cover +/-150 degrees around the heading; degree d is the
// offset from the heading, counted counter-clockwise.
inline bool degree_in_arc(SweepArc arc, int degree) {
    if (arc == SweepArc::full) return true;
    const int offset = degree <= 180 ? degree : degree - 360;
    return offset >= -150 && offset <= 150;
}

struct SweepSample {
    double range = 0.0;
    bool valid = false;
};

// One revolution of per-degree range samples, anchored at the pose the
// sweep was taken from.
struct Sweep {
    std::array<SweepSample, 360> samples{};
    Pose origin_pose;
    SweepArc arc = SweepArc::full;

    // World bearing of degree d under the stored origin pose.
    double bearing(int degree) const {
        return normalize_angle(origin_pose.heading + degree * (M_PI / 180.0));
    }

    std::size_t valid_count() const {
        std::size_t n = 0;
        for (const auto& s : samples) n += s.valid ? 1 : 0;
        return n;
    }
};

struct LidarConfig {
    double max_range = 3.0;                // trust region of the range finder
    double noise_sigma_fraction = 0.015;   // sigma of the multiplicative error
    int realizations = 5;                  // measurements aggregated per degree
    double dropout_probability = 0.02;     // per-realization reflectivity failure
    std::uint64_t rng_seed = 0;
};

// Simulates one sweep from `pose`. Each in-arc degree casts a ray; a hit is
// measured `realizations` times with multiplicative Gaussian noise and
// per-realization dropout, then aggregated with the median. A degree is
// invalid when the ray misses within max_range or when more than half of
// its realizations dropped out.
Sweep scan(const EnvironmentModel& model, const Pose& pose, SweepArc arc,
           const LidarConfig& cfg, RngStream& rng);

// Projects valid samples into world points under the given pose.
std::vector<Point2> sweep_to_points(const Sweep& sweep, const Pose& assumed_pose);

// Same samples, re-anchored at another pose (the agent's believed pose).
Sweep rebased(const Sweep& sweep, const Pose& pose);

}  // namespace lrfmap
