#pragma once

// Test-only oracles, kept independent of the library's edge-walking and
// path-planning code paths.

#include <cmath>
#include <queue>

#include "homesim/semantic_map.hpp"

namespace homesim::oracle {

/// Fine-step ray marcher: samples the ray at 1e-3 cell steps, bisects each
/// detected cell transition to locate the crossing, and applies the same
/// material interaction table as the sensor modes. Returns the path length.
inline double march_ray_length(const Scene& scene, Vec2 origin, Vec2 dir, SensorMode mode,
                               double max_range, int reflection_cap) {
    const double h = 1e-3;
    Vec2 p = origin;
    Vec2 d = dir.normalized();
    double t = 0.0;
    int refl = 0;
    Cell cur = cell_of(p);
    cur.x = std::max(0, std::min(cur.x, scene.width - 1));
    cur.y = std::max(0, std::min(cur.y, scene.height - 1));

    auto cell_at = [&](double tau) { return cell_of({p.x + d.x * tau, p.y + d.y * tau}); };

    int guard = static_cast<int>(max_range / h) + 4096;
    while (guard-- > 0) {
        double step = std::min(h, max_range - t);
        if (step <= 0.0) return max_range;
        Cell probe = cell_at(step);
        if (probe == cur) {
            p = {p.x + d.x * step, p.y + d.y * step};
            t += step;
            if (t >= max_range) return max_range;
            continue;
        }
        // bisect the transition out of `cur` within (0, step]
        double lo = 0.0, hi = step;
        for (int it = 0; it < 64; ++it) {
            double mid = 0.5 * (lo + hi);
            if (cell_at(mid) == cur) lo = mid;
            else hi = mid;
        }
        double tau = hi;
        Cell next = cell_at(tau);
        // a corner graze may change both coordinates; take the x step first
        if (next.x != cur.x && next.y != cur.y) next = {next.x, cur.y};
        GridEdge edge = GridEdge::between(cur, next);
        auto mat = scene.surface(edge);

        bool stop = false, reflect = false;
        if (mat) {
            switch (mode) {
                case SensorMode::Vision:
                    if (*mat == Material::Opaque) stop = true;
                    else if (*mat == Material::Mirror) {
                        if (refl < reflection_cap) reflect = true;
                        else stop = true;
                    }
                    break;
                case SensorMode::Depth:
                    stop = (*mat != Material::Glass);
                    break;
                case SensorMode::GroundTruth:
                    stop = true;
                    break;
            }
        }
        if (t + tau >= max_range) return max_range;
        if (stop) return t + tau;
        p = {p.x + d.x * tau, p.y + d.y * tau};
        t += tau;
        if (reflect) {
            if (edge.vertical) d.x = -d.x;
            else d.y = -d.y;
            ++refl;
            // nudge the sample base off the edge so the next probe starts
            // inside the incident cell again
            continue;
        }
        cur = next;
    }
    return t;
}

/// Plain breadth-first shortest-path length over a semantic map (edge
/// count), honouring Blocked cells and known-blocked edges. -1 when
/// unreachable.
inline int bfs_shortest_len(const SemanticMap& m, Cell from, Cell to) {
    if (!m.in_bounds(from) || !m.in_bounds(to)) return -1;
    if (m.at(to) == CellKnowledge::Blocked) return -1;
    if (from == to) return 0;
    std::vector<int> dist(static_cast<size_t>(m.width) * m.height, -1);
    std::queue<Cell> q;
    q.push(from);
    dist[m.index(from)] = 0;
    while (!q.empty()) {
        Cell c = q.front();
        q.pop();
        for (Direction dd : kDirectionOrder) {
            Cell n = c + delta(dd);
            if (!m.in_bounds(n)) continue;
            if (m.at(n) == CellKnowledge::Blocked) continue;
            if (m.edge_blocked(GridEdge::between(c, n))) continue;
            if (dist[m.index(n)] != -1) continue;
            dist[m.index(n)] = dist[m.index(c)] + 1;
            if (n == to) return dist[m.index(n)];
            q.push(n);
        }
    }
    return dist[m.index(to)];
}

}  // namespace homesim::oracle
