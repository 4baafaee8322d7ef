#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lrfmap/rng.hpp"
#include "lrfmap/similarity.hpp"

using namespace lrfmap;

namespace {

std::vector<Point2> spread_points(RngStream& rng, std::size_t n) {
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({rng.uniform(-3, 3), rng.uniform(-3, 3)});
    return pts;
}

std::vector<Correspondence> synthesize(const SimilarityTransform& t,
                                       const std::vector<Point2>& observed) {
    std::vector<Correspondence> pairs;
    for (const Point2& p : observed) pairs.push_back({p, t.apply(p)});
    return pairs;
}

std::vector<Feature> as_features(const std::vector<Point2>& pts) {
    std::vector<Feature> f;
    for (const Point2& p : pts) f.push_back({p, 0, 0.0});
    return f;
}

}  // namespace

TEST_CASE("identity transform is recovered") {
    RngStream rng(1);
    const auto pts = spread_points(rng, 6);
    const auto pairs = synthesize({1.0, 0.0, {0, 0}}, pts);
    const SimilarityTransform t = estimate_transform(pairs);
    CHECK(std::abs(t.scale - 1.0) <= 1e-9);
    CHECK(std::abs(t.rotation) <= 1e-9);
    CHECK(norm(t.translation) <= 1e-9);
}

TEST_CASE("forward-synthesized transform is recovered to 1e-6") {
    RngStream rng(2);
    const auto pts = spread_points(rng, 6);
    const SimilarityTransform truth{1.02, 0.05, {0.3, -0.1}};
    const SimilarityTransform t = estimate_transform(synthesize(truth, pts));
    CHECK(std::abs(t.scale - truth.scale) <= 1e-6);
    CHECK(std::abs(t.rotation - truth.rotation) <= 1e-6);
    CHECK(distance(t.translation, truth.translation) <= 1e-6);
}

TEST_CASE("one gross outlier barely moves the fit") {
    RngStream rng(3);
    const auto pts = spread_points(rng, 10);
    const SimilarityTransform truth{1.02, 0.05, {0.3, -0.1}};
    auto pairs = synthesize(truth, pts);
    pairs[4].reference = pairs[4].reference + Point2{2.5, -3.0};  // gross outlier
    const SimilarityTransform t = estimate_transform(pairs, 200, 1e-12);
    CHECK(std::abs(t.scale - truth.scale) <= 1e-2);
    CHECK(std::abs(t.rotation - truth.rotation) <= 1e-2);
    CHECK(distance(t.translation, truth.translation) <= 1e-2);
}

TEST_CASE("noiseless residual objective is tiny") {
    RngStream rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pts = spread_points(rng, 5 + static_cast<std::size_t>(rng.uniform01() * 5));
        const SimilarityTransform truth{rng.uniform(0.95, 1.05), rng.uniform(-0.3, 0.3),
                                        {rng.uniform(-1, 1), rng.uniform(-1, 1)}};
        const auto pairs = synthesize(truth, pts);
        const SimilarityTransform t = estimate_transform(pairs);
        CHECK(transform_objective(t, pairs) <= 1e-9);
    }
}

TEST_CASE("objective never increases across IRLS rounds") {
    RngStream rng(5);
    const auto pts = spread_points(rng, 12);
    const SimilarityTransform truth{0.98, -0.2, {0.5, 0.8}};
    auto pairs = synthesize(truth, pts);
    pairs[2].reference = pairs[2].reference + Point2{1.0, 1.5};
    pairs[7].reference = pairs[7].reference + Point2{-2.0, 0.3};

    double previous = std::numeric_limits<double>::infinity();
    for (int rounds = 1; rounds <= 12; ++rounds) {
        // tolerance 0 forces exactly `rounds` rounds
        const SimilarityTransform t = estimate_transform(pairs, rounds, 0.0);
        const double objective = transform_objective(t, pairs);
        CHECK(objective <= previous + 1e-9);
        previous = objective;
    }
}

TEST_CASE("estimated rotation matrix is orthonormal") {
    RngStream rng(6);
    const auto pts = spread_points(rng, 8);
    const SimilarityTransform t =
        estimate_transform(synthesize({1.01, 0.4, {1.0, -0.5}}, pts));
    const double c = std::cos(t.rotation), s = std::sin(t.rotation);
    CHECK(std::abs(c * c + s * s - 1.0) <= 1e-12);            // unit columns
    CHECK(std::abs(c * (-s) + s * c) <= 1e-12);               // orthogonal columns
    CHECK(std::abs((c * c + s * s) - 1.0) <= 1e-12);          // det(R) = +1
}

TEST_CASE("apply_transform basics") {
    const SimilarityTransform identity;
    const std::vector<Point2> pts = {{1, 2}, {-0.5, 0.25}};
    const auto same = apply_transform(identity, pts);
    CHECK(same[0].x == 1.0);
    CHECK(same[1].y == 0.25);

    const SimilarityTransform quarter{1.0, M_PI / 2, {0, 0}};
    const auto rotated = apply_transform(quarter, std::vector<Point2>{{1, 0}});
    CHECK(rotated[0].x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rotated[0].y == doctest::Approx(1.0));
}

TEST_CASE("inverse transform restores the points") {
    RngStream rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const SimilarityTransform t{rng.uniform(0.9, 1.1), rng.uniform(-M_PI, M_PI),
                                    {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
        const auto pts = spread_points(rng, 5);
        const auto there = apply_transform(t, pts);
        const auto back = apply_transform(t.inverse(), there);
        for (std::size_t i = 0; i < pts.size(); ++i)
            CHECK(distance(back[i], pts[i]) <= 1e-9);
    }
}

TEST_CASE("match_features pairs mutual nearest neighbours") {
    RngStream rng(8);
    const auto pts = spread_points(rng, 7);
    SUBCASE("identical sets pair fully") {
        const auto pairs = match_features(as_features(pts), as_features(pts), 0.5);
        CHECK(pairs.size() == pts.size());
        for (const auto& p : pairs) CHECK(distance(p.observed, p.reference) == 0.0);
    }
    SUBCASE("a small shift pairs fully") {
        std::vector<Point2> shifted;
        for (const Point2& p : pts) shifted.push_back(p + Point2{0.1, 0.0});
        const auto pairs = match_features(as_features(shifted), as_features(pts), 0.5);
        CHECK(pairs.size() == pts.size());
    }
    SUBCASE("ties keep only the mutual pair") {
        const std::vector<Point2> observed = {{0.0, 0.3}, {0.0, -0.3}};
        const std::vector<Point2> reference = {{0.0, 0.0}};
        const auto pairs = match_features(as_features(observed), as_features(reference), 0.5);
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0].observed.y == 0.3);  // first observed wins the tie
    }
    SUBCASE("outside the gate nothing pairs") {
        const auto pairs = match_features(as_features({{10, 10}}), as_features(pts), 0.5);
        CHECK(pairs.empty());
    }
}

TEST_CASE("degenerate inputs throw") {
    CHECK_THROWS_AS(estimate_transform(std::vector<Correspondence>{{{0, 0}, {1, 1}}}),
                    std::invalid_argument);
    const std::vector<Correspondence> coincident = {
        {{1, 1}, {0, 0}}, {{1, 1}, {2, 2}}, {{1, 1}, {3, 0}}};
    CHECK_THROWS_AS(estimate_transform(coincident), std::invalid_argument);
}
