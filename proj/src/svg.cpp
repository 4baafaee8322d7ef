#include "lrfmap/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lrfmap {

namespace {

struct Box {
    double min_x = 0, min_y = 0, max_x = 1, max_y = 1;
};

Box bounding_box(const EnvironmentModel& model) {
    Box b{model.boundary[0].x, model.boundary[0].y, model.boundary[0].x, model.boundary[0].y};
    for (const Point2& p : model.boundary) {
        b.min_x = std::min(b.min_x, p.x);
        b.min_y = std::min(b.min_y, p.y);
        b.max_x = std::max(b.max_x, p.x);
        b.max_y = std::max(b.max_y, p.y);
    }
    return b;
}

void polygon_path(std::ostringstream& out, const std::vector<Point2>& poly) {
    char buf[64];
    out << "<path d=\"";
    for (std::size_t i = 0; i < poly.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%c%.4f %.4f ", i == 0 ? 'M' : 'L', poly[i].x, poly[i].y);
        out << buf;
    }
    out << "Z\" fill=\"none\" stroke=\"black\" stroke-width=\"0.03\"/>\n";
}

template <typename GetPose>
void trajectory_path(std::ostringstream& out, const GlobalMap& map, GetPose get,
                     const char* color) {
    if (map.trajectory.empty()) return;
    char buf[64];
    out << "<path d=\"";
    for (std::size_t i = 0; i < map.trajectory.size(); ++i) {
        const Pose& p = get(map.trajectory[i]);
        std::snprintf(buf, sizeof buf, "%c%.4f %.4f ", i == 0 ? 'M' : 'L', p.position.x,
                      p.position.y);
        out << buf;
    }
    out << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"0.02\"/>\n";
}

}  // namespace

std::string render_svg(const EnvironmentModel& model, const GlobalMap& map) {
    const Box b = bounding_box(model);
    const double margin = 0.5;
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.3f %.3f %.3f %.3f\">\n",
                  b.min_x - margin, b.min_y - margin, (b.max_x - b.min_x) + 2 * margin,
                  (b.max_y - b.min_y) + 2 * margin);
    out << buf;
    // Flip y so the world's +y points up on screen.
    std::snprintf(buf, sizeof buf, "<g transform=\"translate(0 %.3f) scale(1 -1)\">\n",
                  b.min_y + b.max_y);
    out << buf;

    polygon_path(out, model.boundary);
    for (const auto& obs : model.obstacles) polygon_path(out, obs);

    for (const MapPoint& p : map.points) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.4f\" cy=\"%.4f\" r=\"0.015\" fill=\"#777\"/>\n",
                      p.position.x, p.position.y);
        out << buf;
    }

    trajectory_path(out, map, [](const TrajectoryEntry& t) -> const Pose& { return t.truth; },
                    "green");
    trajectory_path(out, map, [](const TrajectoryEntry& t) -> const Pose& { return t.odometry; },
                    "red");
    trajectory_path(out, map, [](const TrajectoryEntry& t) -> const Pose& { return t.corrected; },
                    "blue");

    out << "</g>\n</svg>\n";
    return out.str();
}

void write_svg_file(const std::string& path, const EnvironmentModel& model,
                    const GlobalMap& map) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write svg file: " + path);
    f << render_svg(model, map);
}

}  // namespace lrfmap
