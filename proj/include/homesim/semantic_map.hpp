#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homesim/sensors.hpp"

namespace homesim {

enum class CellKnowledge : uint8_t { Unknown, Free, Blocked };

enum class AgentKind : uint8_t { VisionOnly, MapDepth, MapGtDepth };

const char* to_string(AgentKind k);
std::optional<AgentKind> agent_kind_from_string(std::string_view s);

struct AgentProfile {
    AgentKind kind = AgentKind::VisionOnly;
    SensorConfig cfg;
    int fail_limit = 10;
};

/// The agent's accumulated world knowledge: occupancy and exploration
/// grids, per-class sighting counts, movement-learned blocked edges, and
/// wall edges registered from depth terminations.
struct SemanticMap {
    int width = 0;
    int height = 0;
    std::vector<CellKnowledge> occupancy;  // row-major, index y*width+x
    std::vector<uint8_t> explored;
    std::map<std::string, std::vector<uint16_t>> class_counts;
    std::set<GridEdge> blocked_edges;  // learned from bumps
    std::set<GridEdge> wall_edges;     // sensed from depth/gt-depth stops

    SemanticMap() = default;
    SemanticMap(int w, int h)
        : width(w), height(h), occupancy(static_cast<size_t>(w) * h, CellKnowledge::Unknown),
          explored(static_cast<size_t>(w) * h, 0) {}

    bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
    size_t index(Cell c) const { return static_cast<size_t>(c.y) * width + c.x; }

    CellKnowledge at(Cell c) const { return occupancy[index(c)]; }
    bool is_explored(Cell c) const { return explored[index(c)] != 0; }

    void mark_free(Cell c) {
        if (!in_bounds(c)) return;
        occupancy[index(c)] = CellKnowledge::Free;
        explored[index(c)] = 1;
    }
    void mark_blocked(Cell c) {
        if (!in_bounds(c)) return;
        occupancy[index(c)] = CellKnowledge::Blocked;
        explored[index(c)] = 1;
    }

    uint16_t count(const std::string& cls, Cell c) const {
        auto it = class_counts.find(cls);
        if (it == class_counts.end() || !in_bounds(c)) return 0;
        return it->second[index(c)];
    }
    void add_count(const std::string& cls, Cell c) {
        if (!in_bounds(c)) return;
        auto& grid = class_counts[cls];
        if (grid.empty()) grid.assign(static_cast<size_t>(width) * height, 0);
        if (grid[index(c)] < 0xffff) ++grid[index(c)];
    }
    void clear_count(const std::string& cls, Cell c) {
        auto it = class_counts.find(cls);
        if (it != class_counts.end() && in_bounds(c)) it->second[index(c)] = 0;
    }

    /// Known-impassable edge: learned by bump or sensed as a wall.
    bool edge_blocked(const GridEdge& e) const {
        return blocked_edges.count(e) > 0 || wall_edges.count(e) > 0;
    }
};

/// Pure grid traversal of a straight ray that ignores walls: the cells the
/// segment [0, max_dist] passes through and the grid edges it crosses.
/// Used by agents to rasterize sensed free space. Stops at the grid hull.
struct StraightWalk {
    std::vector<CellVisit> cells;
    struct Crossing {
        double t;
        GridEdge edge;
    };
    std::vector<Crossing> crossings;
};

StraightWalk straight_walk(Vec2 origin, Vec2 dir, double max_dist, int width, int height);

/// Folds one observation into the map. All profiles record semantic counts
/// at detection apparent cells (phantoms included — the agent cannot tell)
/// and learn the bumped edge when obs.bump is set. Free space is marked
/// along non-phantom detection rays; depth-bearing profiles additionally
/// mark free space along each depth ray and register the terminating edge
/// as a wall (MapDepth uses depth, MapGtDepth uses gt_depth).
void update_map(SemanticMap& map, const ObservationBundle& obs, const AgentPose& pose,
                const AgentProfile& profile);

/// Shortest 4-connected path from `from` to `to` avoiding Blocked cells and
/// known-blocked edges, treating Unknown cells as traversable. Ties break
/// by the fixed direction order N,E,S,W. Returns the inclusive cell
/// sequence, or nullopt when unreachable.
std::optional<std::vector<Cell>> plan_path(const SemanticMap& map, Cell from, Cell to);

/// Nearest (by planned path length) explored-Free cell from which an
/// Unknown neighbour is reachable across an unblocked edge; ties break in
/// row-major order. nullopt when no frontier remains reachable.
std::optional<Cell> next_frontier(const SemanticMap& map, const AgentPose& pose);

/// BFS distance field from `start` under the same traversal rules as
/// plan_path. Unreachable cells get -1.
std::vector<int> distance_field(const SemanticMap& map, Cell start);

}  // namespace homesim
