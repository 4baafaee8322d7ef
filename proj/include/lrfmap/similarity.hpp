#pragma once

#include <span>
#include <vector>

#include "lrfmap/geometry.hpp"
#include "lrfmap/scan_analysis.hpp"

namespace lrfmap {

// Scaled rotation plus translation: p -> scale * R(rotation) * p + translation.
struct SimilarityTransform {
    double scale = 1.0;
    double rotation = 0.0;  // radians
    Point2 translation;

    Point2 apply(const Point2& p) const {
        const double c = std::cos(rotation);
        const double s = std::sin(rotation);
        return {scale * (c * p.x - s * p.y) + translation.x,
                scale * (s * p.x + c * p.y) + translation.y};
    }

    SimilarityTransform inverse() const {
        const double inv_scale = 1.0 / scale;
        const double c = std::cos(-rotation);
        const double s = std::sin(-rotation);
        return {inv_scale, -rotation,
                {-inv_scale * (c * translation.x - s * translation.y),
                 -inv_scale * (s * translation.x + c * translation.y)}};
    }
};

struct Correspondence {
    Point2 observed;   // drifted feature position
    Point2 reference;  // previously determined position of the same feature
};

// Mutual-nearest-neighbour pairing within gate_radius; everything else is
// dropped.
std::vector<Correspondence> match_features(std::span<const Feature> observed,
                                           std::span<const Feature> reference,
                                           double gate_radius);

// Fits the transform minimizing the sum of Euclidean residual norms
// (sum of absolute error) by iteratively reweighted least squares over the
// closed-form similarity fit. The scale is clamped to [0.9, 1.1]; odometry
// scale error is small and an unbounded scale destabilizes sparse fits.
// Throws std::invalid_argument on fewer than two pairs or coincident
// observed points.
SimilarityTransform estimate_transform(std::span<const Correspondence> pairs,
                                       int max_iterations = 50, double tolerance = 1e-10);

std::vector<Point2> apply_transform(const SimilarityTransform& transform,
                                    std::span<const Point2> points);

// Sum of residual norms under the transform; exposed for the convergence
// checks in the tests.
double transform_objective(const SimilarityTransform& transform,
                           std::span<const Correspondence> pairs);

}  // namespace lrfmap
