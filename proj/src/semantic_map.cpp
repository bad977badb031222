#include "homesim/semantic_map.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace homesim {

const char* to_string(AgentKind k) {
    switch (k) {
        case AgentKind::VisionOnly: return "visiononly";
        case AgentKind::MapDepth: return "mapdepth";
        case AgentKind::MapGtDepth: return "mapgtdepth";
    }
    return "visiononly";
}

std::optional<AgentKind> agent_kind_from_string(std::string_view s) {
    if (s == "visiononly") return AgentKind::VisionOnly;
    if (s == "mapdepth") return AgentKind::MapDepth;
    if (s == "mapgtdepth") return AgentKind::MapGtDepth;
    return std::nullopt;
}

StraightWalk straight_walk(Vec2 origin, Vec2 dir, double max_dist, int width, int height) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    StraightWalk out;
    Cell c = cell_of(origin);
    c.x = std::clamp(c.x, 0, width - 1);
    c.y = std::clamp(c.y, 0, height - 1);
    Vec2 p = origin;
    Vec2 d = dir.normalized();
    double t = 0.0, entry = 0.0;

    const int guard_limit = 4 * (width + height) + 16;
    for (int guard = 0; guard <= guard_limit; ++guard) {
        double tx = kInf, ty = kInf;
        int sx = 0, sy = 0;
        if (d.x > 0.0) {
            tx = (static_cast<double>(c.x + 1) - p.x) / d.x;
            sx = 1;
        } else if (d.x < 0.0) {
            tx = (static_cast<double>(c.x) - p.x) / d.x;
            sx = -1;
        }
        if (d.y > 0.0) {
            ty = (static_cast<double>(c.y + 1) - p.y) / d.y;
            sy = 1;
        } else if (d.y < 0.0) {
            ty = (static_cast<double>(c.y) - p.y) / d.y;
            sy = -1;
        }
        double step = std::min(tx, ty);
        if (t + step >= max_dist) {
            out.cells.push_back({c, entry, max_dist, 0});
            break;
        }
        bool vertical = tx <= ty;
        Cell next = vertical ? Cell{c.x + sx, c.y} : Cell{c.x, c.y + sy};
        GridEdge edge = GridEdge::between(c, next);
        if (vertical) {
            p.y += d.y * step;
            p.x = static_cast<double>(sx > 0 ? c.x + 1 : c.x);
        } else {
            p.x += d.x * step;
            p.y = static_cast<double>(sy > 0 ? c.y + 1 : c.y);
        }
        t += step;
        out.crossings.push_back({t, edge});
        out.cells.push_back({c, entry, t, 0});
        if (next.x < 0 || next.y < 0 || next.x >= width || next.y >= height) break;
        c = next;
        entry = t;
    }
    return out;
}

namespace {

constexpr double kEps = 1e-9;

void mark_free_line(SemanticMap& map, Vec2 origin, Vec2 dir, double dist) {
    StraightWalk walk = straight_walk(origin, dir, dist, map.width, map.height);
    for (const auto& visit : walk.cells)
        if (visit.t_entry < dist - kEps) map.mark_free(visit.cell);
}

void fold_depth_ray(SemanticMap& map, Vec2 origin, Vec2 dir, double range, double max_range) {
    mark_free_line(map, origin, dir, range);
    if (range >= max_range - kEps) return;  // ran out, no surface
    StraightWalk walk = straight_walk(origin, dir, range + 1.0, map.width, map.height);
    // The ray stopped at the crossing at t == range; when two crossings
    // coincide (corner graze) the traversal stops on the later one.
    const GridEdge* hit = nullptr;
    for (const auto& cr : walk.crossings)
        if (std::fabs(cr.t - range) < 1e-6) hit = &cr.edge;
    if (hit) map.wall_edges.insert(*hit);
}

}  // namespace

void update_map(SemanticMap& map, const ObservationBundle& obs, const AgentPose& pose,
                const AgentProfile& profile) {
    map.mark_free(pose.cell);

    if (obs.bump) map.blocked_edges.insert(GridEdge::ahead(pose.cell, pose.heading));

    Vec2 origin = cell_center(pose.cell);
    for (const auto& det : obs.vision) {
        Vec2 dir = bearing_direction(pose.heading, det.apparent_bearing);
        if (!det.phantom) mark_free_line(map, origin, dir, det.apparent_range);
        Cell apparent = cell_of(apparent_point(pose, det));
        if (map.in_bounds(apparent)) map.add_count(det.object_class, apparent);
    }

    const std::vector<double>* ranges = nullptr;
    if (profile.kind == AgentKind::MapDepth && !obs.depth.empty()) ranges = &obs.depth;
    if (profile.kind == AgentKind::MapGtDepth && obs.gt_depth) ranges = &*obs.gt_depth;
    if (ranges) {
        auto bearings = ray_bearings(profile.cfg);
        size_t n = std::min(bearings.size(), ranges->size());
        for (size_t i = 0; i < n; ++i) {
            Vec2 dir = bearing_direction(pose.heading, bearings[i]);
            fold_depth_ray(map, origin, dir, (*ranges)[i], profile.cfg.max_range);
        }
    }
}

namespace {

bool traversable(const SemanticMap& map, Cell from, Cell to) {
    if (!map.in_bounds(to)) return false;
    if (map.at(to) == CellKnowledge::Blocked) return false;
    return !map.edge_blocked(GridEdge::between(from, to));
}

}  // namespace

std::vector<int> distance_field(const SemanticMap& map, Cell start) {
    std::vector<int> dist(static_cast<size_t>(map.width) * map.height, -1);
    if (!map.in_bounds(start)) return dist;
    std::deque<Cell> q{start};
    dist[map.index(start)] = 0;
    while (!q.empty()) {
        Cell c = q.front();
        q.pop_front();
        for (Direction d : kDirectionOrder) {
            Cell n = c + delta(d);
            if (!traversable(map, c, n)) continue;
            if (dist[map.index(n)] != -1) continue;
            dist[map.index(n)] = dist[map.index(c)] + 1;
            q.push_back(n);
        }
    }
    return dist;
}

std::optional<std::vector<Cell>> plan_path(const SemanticMap& map, Cell from, Cell to) {
    if (!map.in_bounds(from) || !map.in_bounds(to)) return std::nullopt;
    if (map.at(to) == CellKnowledge::Blocked) return std::nullopt;
    if (from == to) return std::vector<Cell>{from};

    std::vector<int> parent(static_cast<size_t>(map.width) * map.height, -1);
    std::vector<uint8_t> seen(parent.size(), 0);
    std::deque<Cell> q{from};
    seen[map.index(from)] = 1;
    while (!q.empty()) {
        Cell c = q.front();
        q.pop_front();
        if (c == to) break;
        for (Direction d : kDirectionOrder) {
            Cell n = c + delta(d);
            if (!traversable(map, c, n)) continue;
            if (seen[map.index(n)]) continue;
            seen[map.index(n)] = 1;
            parent[map.index(n)] = static_cast<int>(map.index(c));
            q.push_back(n);
        }
    }
    if (!seen[map.index(to)]) return std::nullopt;

    std::vector<Cell> path;
    Cell c = to;
    while (true) {
        path.push_back(c);
        if (c == from) break;
        int p = parent[map.index(c)];
        c = {p % map.width, p / map.width};
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::optional<Cell> next_frontier(const SemanticMap& map, const AgentPose& pose) {
    std::vector<int> dist = distance_field(map, pose.cell);
    std::optional<Cell> best;
    int best_dist = std::numeric_limits<int>::max();
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            Cell c{x, y};
            int dc = dist[map.index(c)];
            if (dc < 0 || dc >= best_dist) continue;  // row-major scan: first hit wins ties
            if (!map.is_explored(c) || map.at(c) != CellKnowledge::Free) continue;
            bool frontier = false;
            for (Direction d : kDirectionOrder) {
                Cell n = c + delta(d);
                if (map.in_bounds(n) && map.at(n) == CellKnowledge::Unknown &&
                    !map.edge_blocked(GridEdge::between(c, n))) {
                    frontier = true;
                    break;
                }
            }
            if (frontier) {
                best = c;
                best_dist = dc;
            }
        }
    }
    return best;
}

}  // namespace homesim
