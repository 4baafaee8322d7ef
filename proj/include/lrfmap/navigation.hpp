#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrfmap/geometry.hpp"
#include "lrfmap/lidar.hpp"
#include "lrfmap/scan_analysis.hpp"

namespace lrfmap {

// An anchor pose where a sweep was taken. Wall arcs are kept alongside the
// gaps so neighbour identification can tell a join that crosses sensed
// obstacle surface from one that crosses open space.
struct NavNode {
    int id = 0;
    Pose pose;
    std::vector<GapDescriptor> gaps;
    std::vector<WallDescriptor> walls;
    SweepArc arc = SweepArc::full;
    std::map<int, double> neighbours;  // node id -> edge length (symmetric)
};

struct NavGraph {
    std::vector<NavNode> nodes;
    int current_node = -1;
    std::vector<double> cost_table;  // travel cost from current_node, +inf unreachable
    std::vector<int> parent;         // shortest-path tree for waypoint chains
    std::vector<std::pair<int, int>> inferred_edges;  // edges added without a travel leg
};

// Appends a node at `pose`. The node the agent is currently anchored at
// (if any) becomes a mutual neighbour with the straight-line distance as
// edge length, and the new node becomes current.
int add_node(NavGraph& graph, const Pose& pose, std::vector<GapDescriptor> gaps,
             std::vector<WallDescriptor> walls, SweepArc arc);

struct NeighbourMutations {
    std::vector<std::pair<int, int>> edges_added;    // (smaller id, larger id)
    std::vector<std::pair<int, int>> gaps_explored;  // (node id, gap index)
};

// Pairwise analysis of the new node against every node closer than twice
// the scan range: gaps whose mouth chord crosses the joining segment are
// marked explored, and the pair becomes neighbours when the join is
// traversable from both sides (it crosses no sensed wall, every gap chord
// it crosses is wider than the agent, and neither scan is blind in the
// join's direction).
NeighbourMutations identify_neighbours(NavGraph& graph, int new_node, double scan_range,
                                       double agent_diameter);

// Dijkstra from current_node over the neighbour edges.
void update_cost_table(NavGraph& graph);

enum class Strategy { min_gap, max_gap };

struct Target {
    int node_id = 0;
    int gap_index = 0;
    std::vector<Point2> waypoints;  // node chain after the current node, then the centroid
};

// Picks the cheapest node that still has an unexplored gap wide enough to
// pass through, then the narrowest (or widest, under max_gap) qualifying
// gap of that node. Empty optional means exploration is complete.
std::optional<Target> select_target(const NavGraph& graph, double agent_diameter,
                                    Strategy strategy = Strategy::min_gap);

void mark_gap_explored(NavGraph& graph, int node, int gap_index);

// Text dump: `node <id> <x> <y> <heading>`, `edge <id1> <id2> <length>`,
// `gap <node> <idx> <width> <cx> <cy> <explored>`.
std::string dump_graph(const NavGraph& graph);

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

}  // namespace lrfmap
