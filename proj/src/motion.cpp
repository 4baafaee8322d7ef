#include "lrfmap/motion.hpp"

#include <cmath>
#include <stdexcept>

namespace lrfmap {

MotionResult execute_path(const EnvironmentModel& model, const Pose& start,
                          std::span<const Point2> waypoints, const MotionConfig& cfg,
                          RngStream& rng) {
    if (!(cfg.step_length > 0.0)) throw std::invalid_argument("step_length must be > 0");

    MotionResult result;
    Pose truth = start;
    // Odometry error is tracked as an offset from truth so that zero noise
    // reproduces the true pose bit-for-bit.
    Point2 position_error{0.0, 0.0};
    double heading_error = 0.0;

    for (const Point2& target : waypoints) {
        const Point2 leg = target - truth.position;
        const double len = norm(leg);
        if (len < 1e-12) continue;
        const Point2 dir = leg * (1.0 / len);
        const double leg_heading = normalize_angle(std::atan2(dir.y, dir.x));
        const int steps = static_cast<int>(std::ceil(len / cfg.step_length));
        const Point2 leg_start = truth.position;

        for (int k = 0; k < steps; ++k) {
            const Point2 next = (k + 1 == steps)
                                    ? target
                                    : leg_start + dir * (len * (k + 1) / steps);
            const double dtheta = k == 0 ? normalize_angle(leg_heading - truth.heading) : 0.0;
            if (!is_pose_free(model, next)) {
                result.collided = true;
                result.last_safe = truth;
                return result;
            }
            const double dx = next.x - truth.position.x;
            const double dy = next.y - truth.position.y;
            truth.position = next;
            truth.heading = leg_heading;

            const double step_len = std::sqrt(dx * dx + dy * dy);
            position_error.x += rng.gaussian() * cfg.odo_noise_trans * step_len;
            position_error.y += rng.gaussian() * cfg.odo_noise_trans * step_len;
            heading_error += rng.gaussian() * cfg.odo_noise_rot;
            if (rng.uniform01() < cfg.slip_probability) {
                // Wheels spun without moving: odometry thinks it traveled farther.
                position_error.x += dir.x * cfg.slip_magnitude;
                position_error.y += dir.y * cfg.slip_magnitude;
            }

            Pose odo;
            odo.position = truth.position + position_error;
            odo.heading = normalize_angle(truth.heading + heading_error);
            result.log.push_back({dx, dy, dtheta, truth, odo});
        }
    }
    result.last_safe = truth;
    return result;
}

}  // namespace lrfmap
