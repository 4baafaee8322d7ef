#include "lrfmap/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrfmap {

namespace {

constexpr double kScaleMin = 0.9;
constexpr double kScaleMax = 1.1;
constexpr double kReweightEpsilon = 1e-6;

// Closed-form weighted least-squares similarity fit.
SimilarityTransform weighted_fit(std::span<const Correspondence> pairs,
                                 std::span<const double> weights) {
    double wsum = 0.0;
    Point2 lc{0, 0}, rc{0, 0};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        wsum += weights[i];
        lc = lc + pairs[i].observed * weights[i];
        rc = rc + pairs[i].reference * weights[i];
    }
    lc = lc * (1.0 / wsum);
    rc = rc * (1.0 / wsum);

    double sxx = 0.0, sxy = 0.0, lnorm = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Point2 l = pairs[i].observed - lc;
        const Point2 r = pairs[i].reference - rc;
        sxx += weights[i] * dot(l, r);
        sxy += weights[i] * cross(l, r);
        lnorm += weights[i] * dot(l, l);
    }
    if (lnorm < 1e-18)
        throw std::invalid_argument("estimate_transform: observed points are coincident");

    SimilarityTransform t;
    t.rotation = std::atan2(sxy, sxx);
    t.scale = std::clamp(std::sqrt(sxx * sxx + sxy * sxy) / lnorm, kScaleMin, kScaleMax);
    const double c = std::cos(t.rotation);
    const double s = std::sin(t.rotation);
    t.translation = {rc.x - t.scale * (c * lc.x - s * lc.y),
                     rc.y - t.scale * (s * lc.x + c * lc.y)};
    return t;
}

}  // namespace

std::vector<Correspondence> match_features(std::span<const Feature> observed,
                                           std::span<const Feature> reference,
                                           double gate_radius) {
    if (!(gate_radius > 0.0)) throw std::invalid_argument("gate_radius must be > 0");

    auto nearest = [](const Point2& p, auto&& candidates) {
        std::ptrdiff_t best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < candidates.size(); ++j) {
            const double d = distance(p, candidates[j].position);
            if (d < best_d) {
                best_d = d;
                best = static_cast<std::ptrdiff_t>(j);
            }
        }
        return std::pair{best, best_d};
    };

    std::vector<Correspondence> pairs;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const auto [j, d] = nearest(observed[i].position, reference);
        if (j < 0 || d > gate_radius) continue;
        if (nearest(reference[j].position, observed).first == static_cast<std::ptrdiff_t>(i))
            pairs.push_back({observed[i].position, reference[j].position});
    }
    return pairs;
}

double transform_objective(const SimilarityTransform& transform,
                           std::span<const Correspondence> pairs) {
    double sum = 0.0;
    for (const Correspondence& p : pairs)
        sum += distance(transform.apply(p.observed), p.reference);
    return sum;
}

SimilarityTransform estimate_transform(std::span<const Correspondence> pairs,
                                       int max_iterations, double tolerance) {
    if (pairs.size() < 2)
        throw std::invalid_argument("estimate_transform: need at least two correspondences");

    std::vector<double> weights(pairs.size(), 1.0);
    SimilarityTransform current = weighted_fit(pairs, weights);

    for (int iter = 1; iter < max_iterations; ++iter) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double r = distance(current.apply(pairs[i].observed), pairs[i].reference);
            weights[i] = 1.0 / std::max(r, kReweightEpsilon);
        }
        const SimilarityTransform next = weighted_fit(pairs, weights);
        const double change = std::max({std::abs(next.scale - current.scale),
                                        std::abs(normalize_angle(next.rotation - current.rotation)),
                                        distance(next.translation, current.translation)});
        current = next;
        if (change < tolerance) break;
    }
    return current;
}

std::vector<Point2> apply_transform(const SimilarityTransform& transform,
                                    std::span<const Point2> points) {
    std::vector<Point2> out;
    out.reserve(points.size());
    for (const Point2& p : points) out.push_back(transform.apply(p));
    return out;
}

}  // namespace lrfmap
