#include "lrfmap/environment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lrfmap {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& tok, int line, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v))
            throw std::invalid_argument("trailing characters or non-finite");
        return v;
    } catch (const std::exception&) {
        throw EnvParseError("line " + std::to_string(line) + ": bad " + what + " '" + tok + "'");
    }
}

std::vector<Point2> parse_point_list(const std::string& body, int line) {
    std::vector<Point2> pts;
    std::istringstream iss(body);
    std::string tok;
    while (iss >> tok) {
        const auto comma = tok.find(',');
        if (comma == std::string::npos)
            throw EnvParseError("line " + std::to_string(line) + ": expected 'x,y' pair, got '" +
                                tok + "'");
        pts.push_back({parse_double(tok.substr(0, comma), line, "x coordinate"),
                       parse_double(tok.substr(comma + 1), line, "y coordinate")});
    }
    return pts;
}

void append_polygon_edges(const std::vector<Point2>& poly, std::vector<Segment2>& out) {
    for (std::size_t i = 0; i < poly.size(); ++i)
        out.push_back({poly[i], poly[(i + 1) % poly.size()]});
}

void check_polygon(const std::vector<Point2>& poly, const std::string& name) {
    if (poly.size() < 3)
        throw EnvValidationError(name + ": polygon needs >= 3 vertices");
    for (const Point2& p : poly)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw EnvValidationError(name + ": non-finite vertex");
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % poly.size()];
        if (distance(a, b) < 1e-12)
            throw EnvValidationError(name + ": zero-length edge at vertex " + std::to_string(i));
    }
}

void check_simple(const std::vector<Point2>& poly, const std::string& name) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip edges sharing a vertex (consecutive, including the wrap pair).
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            const Segment2 e1{poly[i], poly[(i + 1) % n]};
            const Segment2 e2{poly[j], poly[(j + 1) % n]};
            if (segments_intersect(e1, e2))
                throw EnvValidationError(name + " is not simple: edges " + std::to_string(i) +
                                         " and " + std::to_string(j) + " intersect");
        }
    }
}

void validate(EnvironmentModel& m) {
    check_polygon(m.boundary, "boundary");
    check_simple(m.boundary, "boundary");
    for (std::size_t k = 0; k < m.obstacles.size(); ++k) {
        const std::string name = "obstacle " + std::to_string(k);
        check_polygon(m.obstacles[k], name);
        check_simple(m.obstacles[k], name);
        for (const Point2& v : m.obstacles[k])
            if (!point_in_polygon(m.boundary, v))
                throw EnvValidationError(name + ": vertex outside boundary");
    }
    // Reject nested obstacles; touching is fine.
    for (std::size_t i = 0; i < m.obstacles.size(); ++i) {
        for (std::size_t j = 0; j < m.obstacles.size(); ++j) {
            if (i == j) continue;
            bool inside_strict = true;
            for (const Point2& v : m.obstacles[i]) {
                bool on_border = false;
                for (std::size_t e = 0; e < m.obstacles[j].size(); ++e) {
                    const Segment2 edge{m.obstacles[j][e],
                                        m.obstacles[j][(e + 1) % m.obstacles[j].size()]};
                    if (point_segment_distance(v, edge) < 1e-9) {
                        on_border = true;
                        break;
                    }
                }
                if (on_border || !point_in_polygon(m.obstacles[j], v)) {
                    inside_strict = false;
                    break;
                }
            }
            if (inside_strict && !m.obstacles[i].empty())
                throw EnvValidationError("obstacle " + std::to_string(i) +
                                         " is nested inside obstacle " + std::to_string(j));
        }
    }
    if (!(m.agent_radius > 0.0))
        throw EnvValidationError("agent_radius must be > 0");

    m.segments.clear();
    append_polygon_edges(m.boundary, m.segments);
    for (const auto& obs : m.obstacles) append_polygon_edges(obs, m.segments);
    m.batch = kernels::SegmentBatch(m.segments);

    if (!std::isfinite(m.start_pose.heading))
        throw EnvValidationError("start heading must be finite");
    m.start_pose.heading = normalize_angle(m.start_pose.heading);
    if (!is_pose_free(m, m.start_pose.position))
        throw EnvValidationError("start pose violates the clearance rule (inside an obstacle, "
                                 "outside the boundary, or closer than agent_radius to a wall)");
}

}  // namespace

EnvironmentModel load_environment(const std::string& text) {
    EnvironmentModel m;
    enum class Section { boundary, obstacles, start, radius, done };
    Section next = Section::boundary;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool have_start = false, have_radius = false;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        const auto colon = s.find(':');
        if (colon == std::string::npos)
            throw EnvParseError("line " + std::to_string(line) + ": expected 'key: ...'");
        const std::string key = trim(s.substr(0, colon));
        const std::string body = trim(s.substr(colon + 1));

        if (key == "boundary") {
            if (next != Section::boundary)
                throw EnvParseError("line " + std::to_string(line) + ": boundary out of order");
            m.boundary = parse_point_list(body, line);
            next = Section::obstacles;
        } else if (key == "obstacle") {
            if (next != Section::obstacles)
                throw EnvParseError("line " + std::to_string(line) + ": obstacle out of order");
            m.obstacles.push_back(parse_point_list(body, line));
        } else if (key == "start") {
            if (next != Section::obstacles)
                throw EnvParseError("line " + std::to_string(line) + ": start out of order");
            std::istringstream bs(body);
            std::string tok;
            std::vector<double> vals;
            while (std::getline(bs, tok, ','))
                vals.push_back(parse_double(trim(tok), line, "start field"));
            if (vals.size() != 3)
                throw EnvParseError("line " + std::to_string(line) +
                                    ": start needs 'x,y,heading_rad'");
            m.start_pose = {{vals[0], vals[1]}, vals[2]};
            have_start = true;
            next = Section::radius;
        } else if (key == "agent_radius") {
            if (next != Section::radius)
                throw EnvParseError("line " + std::to_string(line) +
                                    ": agent_radius out of order");
            m.agent_radius = parse_double(body, line, "agent_radius");
            have_radius = true;
            next = Section::done;
        } else {
            throw EnvParseError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }
    if (m.boundary.empty()) throw EnvParseError("missing boundary");
    if (!have_start) throw EnvParseError("missing start");
    if (!have_radius) throw EnvParseError("missing agent_radius");

    validate(m);
    return m;
}

EnvironmentModel load_environment_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw EnvParseError("cannot open environment file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_environment(ss.str());
}

std::string serialize(const EnvironmentModel& model) {
    std::ostringstream out;
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    auto put_poly = [&](const std::vector<Point2>& poly) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            if (i) out << ' ';
            put(poly[i].x);
            out << ',';
            put(poly[i].y);
        }
        out << '\n';
    };
    out << "boundary: ";
    put_poly(model.boundary);
    for (const auto& obs : model.obstacles) {
        out << "obstacle: ";
        put_poly(obs);
    }
    out << "start: ";
    put(model.start_pose.position.x);
    out << ',';
    put(model.start_pose.position.y);
    out << ',';
    put(model.start_pose.heading);
    out << '\n';
    out << "agent_radius: ";
    put(model.agent_radius);
    out << '\n';
    return out.str();
}

std::span<const Segment2> all_segments(const EnvironmentModel& model) {
    return model.segments;
}

bool point_in_polygon(std::span<const Point2> polygon, const Point2& p) {
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Segment2 edge{polygon[i], polygon[(i + 1) % n]};
        if (point_segment_distance(p, edge) < 1e-12) return true;
    }
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = polygon[i];
        const Point2& b = polygon[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

bool is_pose_free(const EnvironmentModel& model, const Point2& p) {
    if (!point_in_polygon(model.boundary, p)) return false;
    for (const auto& obs : model.obstacles)
        if (point_in_polygon(obs, p)) return false;
    return kernels::min_distance(model.batch, p) >= model.agent_radius;
}

}  // namespace lrfmap
