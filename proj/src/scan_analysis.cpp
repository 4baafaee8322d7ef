#include "lrfmap/scan_analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace lrfmap {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

std::vector<int> arc_order(const Sweep& sweep) {
    std::vector<int> order;
    if (sweep.arc == SweepArc::full) {
        order.reserve(360);
        for (int d = 0; d < 360; ++d) order.push_back(d);
    } else {
        order.reserve(301);
        for (int d = 210; d < 360; ++d) order.push_back(d);  // -150..-1 degrees
        for (int d = 0; d <= 150; ++d) order.push_back(d);
    }
    return order;
}

Point2 sample_point(const Sweep& sweep, int degree) {
    const double b = sweep.bearing(degree);
    return sweep.origin_pose.position +
           Point2{std::cos(b), std::sin(b)} * sweep.samples[degree].range;
}

Point2 clamped_point(const Sweep& sweep, int degree, double range) {
    const double b = sweep.bearing(degree);
    return sweep.origin_pose.position + Point2{std::cos(b), std::sin(b)} * range;
}

struct Run {
    std::size_t start = 0;  // index into the arc order
    std::size_t length = 0;
    bool gap = false;
};

std::vector<Run> find_runs(const std::vector<char>& label, bool circular) {
    const std::size_t n = label.size();
    std::vector<Run> runs;
    std::size_t first = 0;
    if (circular) {
        // Start at a label change so the wrap-around run stays in one piece.
        std::size_t k = 0;
        while (k < n && label[k] == label[(k + n - 1) % n]) ++k;
        if (k == n) return {{0, n, label[0] != 0}};  // uniform sweep
        first = k;
    }
    std::size_t run_start = first, run_len = 1;
    for (std::size_t step = 1; step < n; ++step) {
        const std::size_t k = circular ? (first + step) % n : step;
        if (label[k] == label[run_start]) {
            ++run_len;
        } else {
            runs.push_back({run_start, run_len, label[run_start] != 0});
            run_start = k;
            run_len = 1;
        }
    }
    runs.push_back({run_start, run_len, label[run_start] != 0});
    return runs;
}

}  // namespace

Classification classify(const Sweep& sweep, double gap_threshold, int min_gap_degrees) {
    if (!(gap_threshold > 0.0)) throw std::invalid_argument("gap_threshold must be > 0");
    if (min_gap_degrees < 1) throw std::invalid_argument("min_gap_degrees must be >= 1");

    Classification out;
    if (sweep.valid_count() == 0) {
        out.degenerate = true;
        return out;
    }

    const std::vector<int> order = arc_order(sweep);
    const bool circular = sweep.arc == SweepArc::full;
    const std::size_t n = order.size();

    std::vector<char> is_gap(n);
    for (std::size_t k = 0; k < n; ++k) {
        const SweepSample& s = sweep.samples[order[k]];
        is_gap[k] = (!s.valid || s.range > gap_threshold) ? 1 : 0;
    }

    // Gap runs too short to matter are folded into the flanking walls.
    for (const Run& r : find_runs(is_gap, circular)) {
        if (r.gap && r.length < static_cast<std::size_t>(min_gap_degrees)) {
            for (std::size_t j = 0; j < r.length; ++j) is_gap[(r.start + j) % n] = 0;
        }
    }

    const std::vector<Run> runs = find_runs(is_gap, circular);
    const bool all_gap = runs.size() == 1 && runs[0].gap;

    for (const Run& r : runs) {
        const int start_d = order[r.start];
        const int end_d = order[(r.start + r.length - 1) % n];
        if (!r.gap) {
            WallDescriptor w;
            w.start_degree = start_d;
            w.end_degree = end_d;
            for (std::size_t j = 0; j < r.length; ++j) {
                const int d = order[(r.start + j) % n];
                if (sweep.samples[d].valid) w.points.push_back(sample_point(sweep, d));
            }
            out.walls.push_back(std::move(w));
            continue;
        }

        GapDescriptor g;
        g.start_degree = start_d;
        g.end_degree = end_d;

        auto bound_for = [&](std::size_t adjacent, int edge_degree) {
            if (!all_gap) {
                const bool has_adjacent =
                    circular || (adjacent < n);  // linear arcs have no sample past the ends
                if (has_adjacent) {
                    const int d = order[adjacent % n];
                    if (sweep.samples[d].valid && !is_gap[adjacent % n])
                        return sample_point(sweep, d);
                }
            }
            return clamped_point(sweep, edge_degree, gap_threshold);
        };
        const std::size_t before = (r.start + n - 1) % n;
        const std::size_t after = r.start + r.length;  // may run off a linear arc
        g.bound_a = (circular || r.start > 0) ? bound_for(before, start_d)
                                              : clamped_point(sweep, start_d, gap_threshold);
        g.bound_b = bound_for(after, end_d);
        g.width = distance(g.bound_a, g.bound_b);

        const double mid_bearing = normalize_angle(
            sweep.bearing(start_d) + 0.5 * static_cast<double>(r.length - 1) * kDegToRad);
        g.centroid = sweep.origin_pose.position +
                     Point2{std::cos(mid_bearing), std::sin(mid_bearing)} * gap_threshold;
        out.gaps.push_back(g);
    }
    return out;
}

std::vector<Feature> extract_features(const Sweep& sweep, double jump_threshold) {
    if (!(jump_threshold > 0.0)) throw std::invalid_argument("jump_threshold must be > 0");

    const std::vector<int> order = arc_order(sweep);
    const bool circular = sweep.arc == SweepArc::full;
    const std::size_t n = order.size();

    struct Detection {
        std::size_t k;  // pair index, for adjacency merging
        int degree;
        double range;
    };
    std::vector<Detection> detections;

    const std::size_t pairs = circular ? n : n - 1;
    for (std::size_t k = 0; k < pairs; ++k) {
        const int d1 = order[k];
        const int d2 = order[(k + 1) % n];
        const SweepSample& s1 = sweep.samples[d1];
        const SweepSample& s2 = sweep.samples[d2];
        if (!s1.valid || !s2.valid) continue;
        if (std::abs(s2.range - s1.range) <= jump_threshold) continue;
        if (s1.range <= s2.range)
            detections.push_back({k, d1, s1.range});
        else
            detections.push_back({k, d2, s2.range});
    }
    if (detections.empty()) return {};

    // Group detections closer than two degrees, keep the nearest per group.
    std::vector<std::vector<Detection>> groups;
    for (const Detection& det : detections) {
        if (!groups.empty() && det.k - groups.back().back().k <= 2)
            groups.back().push_back(det);
        else
            groups.push_back({det});
    }
    if (circular && groups.size() > 1) {
        const std::size_t wrap_gap = detections.front().k + n - groups.back().back().k;
        if (wrap_gap <= 2) {
            for (const Detection& det : groups.back()) groups.front().push_back(det);
            groups.pop_back();
        }
    }

    std::vector<Feature> features;
    features.reserve(groups.size());
    for (const auto& group : groups) {
        const Detection* best = &group.front();
        for (const Detection& det : group)
            if (det.range < best->range) best = &det;
        features.push_back({sample_point(sweep, best->degree), best->degree, best->range});
    }
    return features;
}

}  // namespace lrfmap
