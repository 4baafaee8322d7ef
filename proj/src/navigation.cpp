#include "lrfmap/navigation.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace lrfmap {

namespace {

constexpr double kForwardHalfArcRad = 150.0 * M_PI / 180.0;

void add_edge(NavGraph& graph, int a, int b, double length) {
    graph.nodes[a].neighbours[b] = length;
    graph.nodes[b].neighbours[a] = length;
}

// Whether node `n` can vouch for straight travel along `join` leaving it:
// the direction must lie inside its scan arc, the join must not cross any
// sensed wall, and any gap mouth it crosses must be wide enough.
bool side_traversable(const NavNode& n, const Point2& other_position, const Segment2& join,
                      double agent_diameter) {
    if (n.arc == SweepArc::forward) {
        const double bearing = std::atan2(other_position.y - n.pose.position.y,
                                          other_position.x - n.pose.position.x);
        if (std::abs(normalize_angle(bearing - n.pose.heading)) > kForwardHalfArcRad + 1e-9)
            return false;  // join leaves through the blind arc
    }
    for (const WallDescriptor& w : n.walls) {
        for (std::size_t i = 0; i + 1 < w.points.size(); ++i) {
            if (segments_intersect({w.points[i], w.points[i + 1]}, join)) return false;
        }
    }
    for (const GapDescriptor& g : n.gaps) {
        if (segments_intersect({g.bound_a, g.bound_b}, join) && g.width <= agent_diameter)
            return false;
    }
    return true;
}

}  // namespace

int add_node(NavGraph& graph, const Pose& pose, std::vector<GapDescriptor> gaps,
             std::vector<WallDescriptor> walls, SweepArc arc) {
    const int id = static_cast<int>(graph.nodes.size());
    NavNode node;
    node.id = id;
    node.pose = pose;
    node.gaps = std::move(gaps);
    node.walls = std::move(walls);
    node.arc = arc;
    graph.nodes.push_back(std::move(node));

    if (graph.current_node >= 0) {
        const double len = distance(graph.nodes[graph.current_node].pose.position,
                                    pose.position);
        if (len > 0.0) add_edge(graph, graph.current_node, id, len);
    }
    graph.current_node = id;
    return id;
}

NeighbourMutations identify_neighbours(NavGraph& graph, int new_node, double scan_range,
                                       double agent_diameter) {
    NeighbourMutations mut;
    if (new_node < 0 || new_node >= static_cast<int>(graph.nodes.size()))
        throw std::out_of_range("identify_neighbours: unknown node");
    NavNode& nn = graph.nodes[new_node];

    for (NavNode& p : graph.nodes) {
        if (p.id == new_node) continue;
        const double d = distance(p.pose.position, nn.pose.position);
        if (d >= 2.0 * scan_range || d <= 0.0) continue;

        const Segment2 join{p.pose.position, nn.pose.position};
        for (NavNode* side : {&p, &nn}) {
            for (std::size_t gi = 0; gi < side->gaps.size(); ++gi) {
                GapDescriptor& g = side->gaps[gi];
                if (!g.explored &&
                    segments_intersect({g.bound_a, g.bound_b}, join)) {
                    g.explored = true;
                    mut.gaps_explored.push_back({side->id, static_cast<int>(gi)});
                }
            }
        }

        if (p.neighbours.count(new_node)) continue;
        if (side_traversable(p, nn.pose.position, join, agent_diameter) &&
            side_traversable(nn, p.pose.position, join, agent_diameter)) {
            add_edge(graph, p.id, new_node, d);
            const auto e = std::minmax(p.id, new_node);
            mut.edges_added.push_back({e.first, e.second});
            graph.inferred_edges.push_back({e.first, e.second});
        }
    }
    return mut;
}

void update_cost_table(NavGraph& graph) {
    const std::size_t n = graph.nodes.size();
    graph.cost_table.assign(n, kInfiniteCost);
    graph.parent.assign(n, -1);
    if (graph.current_node < 0 || graph.current_node >= static_cast<int>(n)) return;

    using Item = std::pair<double, int>;  // (cost, id); ties pop the lower id
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    graph.cost_table[graph.current_node] = 0.0;
    queue.push({0.0, graph.current_node});
    while (!queue.empty()) {
        const auto [cost, u] = queue.top();
        queue.pop();
        if (cost > graph.cost_table[u]) continue;
        for (const auto& [v, len] : graph.nodes[u].neighbours) {
            const double alt = cost + len;
            if (alt < graph.cost_table[v]) {
                graph.cost_table[v] = alt;
                graph.parent[v] = u;
                queue.push({alt, v});
            }
        }
    }
}

std::optional<Target> select_target(const NavGraph& graph, double agent_diameter,
                                    Strategy strategy) {
    int best_node = -1;
    for (const NavNode& node : graph.nodes) {
        if (graph.cost_table[node.id] == kInfiniteCost) continue;
        bool has_open_gap = false;
        for (const GapDescriptor& g : node.gaps) {
            if (!g.explored && g.width > agent_diameter) {
                has_open_gap = true;
                break;
            }
        }
        if (!has_open_gap) continue;
        if (best_node < 0 || graph.cost_table[node.id] < graph.cost_table[best_node])
            best_node = node.id;  // ids ascend, so ties keep the lowest id
    }
    if (best_node < 0) return std::nullopt;

    const NavNode& node = graph.nodes[best_node];
    int best_gap = -1;
    for (std::size_t gi = 0; gi < node.gaps.size(); ++gi) {
        const GapDescriptor& g = node.gaps[gi];
        if (g.explored || g.width <= agent_diameter) continue;
        if (best_gap < 0) {
            best_gap = static_cast<int>(gi);
            continue;
        }
        const double best_width = node.gaps[best_gap].width;
        if (strategy == Strategy::min_gap ? g.width < best_width : g.width > best_width)
            best_gap = static_cast<int>(gi);
    }

    Target target;
    target.node_id = best_node;
    target.gap_index = best_gap;
    std::vector<int> chain;
    for (int v = best_node; v != graph.current_node && v >= 0; v = graph.parent[v])
        chain.push_back(v);
    std::reverse(chain.begin(), chain.end());
    for (int v : chain) target.waypoints.push_back(graph.nodes[v].pose.position);
    target.waypoints.push_back(node.gaps[best_gap].centroid);
    return target;
}

void mark_gap_explored(NavGraph& graph, int node, int gap_index) {
    if (node < 0 || node >= static_cast<int>(graph.nodes.size()))
        throw std::out_of_range("mark_gap_explored: unknown node " + std::to_string(node));
    auto& gaps = graph.nodes[node].gaps;
    if (gap_index < 0 || gap_index >= static_cast<int>(gaps.size()))
        throw std::out_of_range("mark_gap_explored: unknown gap " + std::to_string(gap_index));
    gaps[gap_index].explored = true;
}

std::string dump_graph(const NavGraph& graph) {
    std::ostringstream out;
    char buf[160];
    for (const NavNode& n : graph.nodes) {
        std::snprintf(buf, sizeof buf, "node %d %.9g %.9g %.9g\n", n.id, n.pose.position.x,
                      n.pose.position.y, n.pose.heading);
        out << buf;
    }
    for (const NavNode& n : graph.nodes) {
        for (const auto& [other, len] : n.neighbours) {
            if (other < n.id) continue;  // each undirected edge once
            std::snprintf(buf, sizeof buf, "edge %d %d %.9g\n", n.id, other, len);
            out << buf;
        }
    }
    for (const NavNode& n : graph.nodes) {
        for (std::size_t gi = 0; gi < n.gaps.size(); ++gi) {
            const GapDescriptor& g = n.gaps[gi];
            std::snprintf(buf, sizeof buf, "gap %d %zu %.9g %.9g %.9g %d\n", n.id, gi, g.width,
                          g.centroid.x, g.centroid.y, g.explored ? 1 : 0);
            out << buf;
        }
    }
    return out.str();
}

}  // namespace lrfmap
