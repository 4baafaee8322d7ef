#pragma once

#include <span>
#include <vector>

#include "lrfmap/geometry.hpp"
#include "lrfmap/rng.hpp"

namespace lrfmap {

struct Particle {
    Pose pose;
    double weight = 0.0;
};

struct ParticleSet {
    std::vector<Particle> particles;
    bool weight_degenerate = false;  // set when every weight underflowed
};

struct FilterNoise {
    double sigma_trans = 0.02;  // meters per prediction step, per axis
    double sigma_rot = 0.01;    // radians per prediction step
    double sigma_d = 0.05;      // range measurement sigma, meters
    double sigma_alpha = 0.02;  // bearing measurement sigma, radians
};

// A feature seen by the sensor, in the agent frame.
struct RangeBearing {
    double range = 0.0;
    double bearing = 0.0;  // relative to the agent heading
};

// n particles sampled around the pose (sigma_trans on each axis, sigma_rot
// on the heading), uniform weights.
ParticleSet initialize(std::size_t n, const Pose& pose, const FilterNoise& spread,
                       RngStream& rng);

// Advances every particle by the control plus independent Gaussian
// perturbation. Weights are untouched.
void predict(ParticleSet& set, double dx, double dy, double dtheta, const FilterNoise& noise,
             RngStream& rng);

// Multiplies each weight by the product over features of the range and
// bearing likelihoods against the associated landmark (nearest landmark to
// the feature's world projection, within gate). Features with no gated
// landmark contribute the density value at five sigma. Normalizes at the
// end; a full underflow resets to uniform and flags the set degenerate.
void weigh(ParticleSet& set, std::span<const RangeBearing> features,
           std::span<const Point2> landmarks, const FilterNoise& noise, double gate = 0.5);

// Resampling wheel: n draws with replacement, probability proportional to
// weight, then uniform weights.
void resample(ParticleSet& set, RngStream& rng);

double effective_sample_size(const ParticleSet& set);

struct PoseEstimate {
    Pose pose;
    bool heading_degenerate = false;  // sin/cos sums cancelled
};

// Mean position and circular-mean heading. When the heading resultant is
// zero the fallback heading is reported and the degeneracy flagged.
PoseEstimate estimate(const ParticleSet& set, double fallback_heading = 0.0);

}  // namespace lrfmap
