#include "lrfmap/particle_filter.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrfmap {

namespace {

double gaussian_density(double x, double sigma) {
    const double z = x / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

void normalize_weights(ParticleSet& set) {
    double sum = 0.0;
    for (const Particle& p : set.particles) sum += p.weight;
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        const double uniform = 1.0 / static_cast<double>(set.particles.size());
        for (Particle& p : set.particles) p.weight = uniform;
        set.weight_degenerate = true;
        return;
    }
    for (Particle& p : set.particles) p.weight /= sum;
}

}  // namespace

ParticleSet initialize(std::size_t n, const Pose& pose, const FilterNoise& spread,
                       RngStream& rng) {
    if (n < 1) throw std::invalid_argument("particle count must be >= 1");
    ParticleSet set;
    set.particles.reserve(n);
    const double w = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        Particle p;
        p.pose.position.x = pose.position.x + spread.sigma_trans * rng.gaussian();
        p.pose.position.y = pose.position.y + spread.sigma_trans * rng.gaussian();
        p.pose.heading = normalize_angle(pose.heading + spread.sigma_rot * rng.gaussian());
        p.weight = w;
        set.particles.push_back(p);
    }
    return set;
}

void predict(ParticleSet& set, double dx, double dy, double dtheta, const FilterNoise& noise,
             RngStream& rng) {
    for (Particle& p : set.particles) {
        p.pose.position.x += dx + noise.sigma_trans * rng.gaussian();
        p.pose.position.y += dy + noise.sigma_trans * rng.gaussian();
        p.pose.heading =
            normalize_angle(p.pose.heading + dtheta + noise.sigma_rot * rng.gaussian());
    }
}

void weigh(ParticleSet& set, std::span<const RangeBearing> features,
           std::span<const Point2> landmarks, const FilterNoise& noise, double gate) {
    if (!(noise.sigma_d > 0.0) || !(noise.sigma_alpha > 0.0))
        throw std::invalid_argument("weigh: sigma_d and sigma_alpha must be > 0");
    if (features.empty()) {
        normalize_weights(set);
        return;
    }
    const double floor_likelihood =
        gaussian_density(5.0 * noise.sigma_d, noise.sigma_d) *
        gaussian_density(5.0 * noise.sigma_alpha, noise.sigma_alpha);

    for (Particle& p : set.particles) {
        double likelihood = 1.0;
        for (const RangeBearing& f : features) {
            // Where the particle expects this feature to sit in the world.
            const double fb = p.pose.heading + f.bearing;
            const Point2 projected = p.pose.position +
                                     Point2{std::cos(fb), std::sin(fb)} * f.range;
            std::ptrdiff_t best = -1;
            double best_d = gate;
            for (std::size_t j = 0; j < landmarks.size(); ++j) {
                const double d = distance(projected, landmarks[j]);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<std::ptrdiff_t>(j);
                }
            }
            if (best < 0) {
                likelihood *= floor_likelihood;
                continue;
            }
            const Point2 rel = landmarks[best] - p.pose.position;
            const double d_hat = norm(rel);
            const double alpha_hat =
                normalize_angle(std::atan2(rel.y, rel.x) - p.pose.heading);
            likelihood *= gaussian_density(f.range - d_hat, noise.sigma_d) *
                          gaussian_density(normalize_angle(f.bearing - alpha_hat),
                                           noise.sigma_alpha);
        }
        p.weight *= likelihood;
    }
    normalize_weights(set);
}

void resample(ParticleSet& set, RngStream& rng) {
    const std::size_t n = set.particles.size();
    std::vector<Particle> out;
    out.reserve(n);
    double max_weight = 0.0;
    for (const Particle& p : set.particles) max_weight = std::max(max_weight, p.weight);

    std::size_t index = rng.uniform_index(n);
    double beta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        beta += rng.uniform01() * 2.0 * max_weight;
        while (beta > set.particles[index].weight) {
            beta -= set.particles[index].weight;
            index = (index + 1) % n;
        }
        out.push_back(set.particles[index]);
    }
    const double w = 1.0 / static_cast<double>(n);
    for (Particle& p : out) p.weight = w;
    set.particles = std::move(out);
    set.weight_degenerate = false;
}

double effective_sample_size(const ParticleSet& set) {
    double sum_sq = 0.0;
    for (const Particle& p : set.particles) sum_sq += p.weight * p.weight;
    if (sum_sq <= 0.0) return 0.0;
    return 1.0 / sum_sq;
}

PoseEstimate estimate(const ParticleSet& set, double fallback_heading) {
    if (set.particles.empty()) throw std::invalid_argument("estimate: empty particle set");
    PoseEstimate est;
    double sx = 0.0, sy = 0.0, ssin = 0.0, scos = 0.0;
    for (const Particle& p : set.particles) {
        sx += p.pose.position.x;
        sy += p.pose.position.y;
        ssin += std::sin(p.pose.heading);
        scos += std::cos(p.pose.heading);
    }
    const double n = static_cast<double>(set.particles.size());
    est.pose.position = {sx / n, sy / n};
    if (std::sqrt(ssin * ssin + scos * scos) < 1e-12 * n) {
        est.pose.heading = normalize_angle(fallback_heading);
        est.heading_degenerate = true;
    } else {
        est.pose.heading = normalize_angle(std::atan2(ssin, scos));
    }
    return est;
}

}  // namespace lrfmap
