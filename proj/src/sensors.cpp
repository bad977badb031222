#include "homesim/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace homesim {

const char* to_string(SensorMode m) {
    switch (m) {
        case SensorMode::Vision: return "vision";
        case SensorMode::Depth: return "depth";
        case SensorMode::GroundTruth: return "gt_depth";
    }
    return "vision";
}

std::vector<Violation> validate(const SensorConfig& cfg) {
    std::vector<Violation> out;
    if (!(cfg.fov_deg > 0.0 && cfg.fov_deg <= 180.0))
        out.push_back({"FovOutOfRange", "", "fov must be in (0,180]"});
    if (cfg.ray_count < 1 || cfg.ray_count % 2 == 0)
        out.push_back({"RayCountInvalid", "", "ray_count must be odd and >= 1"});
    if (cfg.max_range < 1.0) out.push_back({"MaxRangeInvalid", "", "max_range must be >= 1"});
    if (!(cfg.light_floor > 0.0 && cfg.light_floor <= 1.0))
        out.push_back({"LightFloorInvalid", "", "light_floor must be in (0,1]"});
    if (cfg.reflection_cap < 0)
        out.push_back({"ReflectionCapInvalid", "", "reflection_cap must be >= 0"});
    return out;
}

// ---------------------------------------------------------------------------
// Ray traversal

RayTrace trace_ray(const Scene& scene, Vec2 origin, Vec2 dir, SensorMode mode,
                   double max_range, int reflection_cap) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    RayTrace tr;
    tr.hit.mode = mode;

    Cell c = cell_of(origin);
    c.x = std::clamp(c.x, 0, scene.width - 1);
    c.y = std::clamp(c.y, 0, scene.height - 1);
    Vec2 p = origin;
    Vec2 d = dir.normalized();
    double t = 0.0;
    double entry = 0.0;
    int refl = 0;

    const int guard_limit = 16 * (scene.width + scene.height + static_cast<int>(max_range)) + 64;
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
        if (t + step >= max_range) {
            tr.cells.push_back({c, entry, max_range, refl});
            tr.hit.path_length = max_range;
            tr.hit.terminal = TerminalKind::MaxRange;
            break;
        }

        bool vertical_cross = tx <= ty;  // exact tie: vertical first, horizontal follows at step 0
        Cell next = vertical_cross ? Cell{c.x + sx, c.y} : Cell{c.x, c.y + sy};
        GridEdge edge = GridEdge::between(c, next);
        if (vertical_cross) {
            p.y += d.y * step;
            p.x = static_cast<double>(sx > 0 ? c.x + 1 : c.x);
        } else {
            p.x += d.x * step;
            p.y = static_cast<double>(sy > 0 ? c.y + 1 : c.y);
        }
        t += step;

        std::optional<Material> mat = scene.surface(edge);
        if (!mat) {
            tr.cells.push_back({c, entry, t, refl});
            c = next;
            entry = t;
            continue;
        }

        Material m = *mat;
        bool stop = false, reflect = false;
        switch (mode) {
            case SensorMode::Vision:
                if (m == Material::Opaque) stop = true;
                else if (m == Material::Mirror) {
                    if (refl < reflection_cap) reflect = true;
                    else stop = true;
                }
                break;
            case SensorMode::Depth:
                stop = (m != Material::Glass);
                break;
            case SensorMode::GroundTruth:
                stop = true;
                break;
        }

        if (stop) {
            tr.events.push_back({t, edge, m, RayEventKind::Stopped});
            tr.cells.push_back({c, entry, t, refl});
            tr.hit.path_length = t;
            tr.hit.terminal = TerminalKind::Surface;
            tr.hit.surface_material = m;
            tr.hit.surface_edge = edge;
            break;
        }
        if (reflect) {
            tr.events.push_back({t, edge, m, RayEventKind::Reflected});
            tr.cells.push_back({c, entry, t, refl});
            if (edge.vertical) d.x = -d.x;
            else d.y = -d.y;
            ++refl;
            tr.hit.reflected = true;
            entry = t;  // ray re-enters the same cell
            continue;
        }
        tr.events.push_back({t, edge, m, RayEventKind::Passed});
        tr.cells.push_back({c, entry, t, refl});
        c = next;
        entry = t;
    }

    tr.reflection_count = refl;
    return tr;
}

RayHit cast_ray(const Scene& scene, Vec2 origin, Vec2 dir, SensorMode mode, double max_range,
                int reflection_cap) {
    return trace_ray(scene, origin, dir, mode, max_range, reflection_cap).hit;
}

// ---------------------------------------------------------------------------
// Channels

double DetectionSampler::uniform(std::string_view entity_id) const {
    uint64_t h = fnv1a_u64(seed);
    h = fnv1a_u64(static_cast<uint64_t>(step), h);
    h = fnv1a(entity_id, h);
    return hash_uniform01(h);
}

std::vector<double> ray_bearings(const SensorConfig& cfg) {
    // Bin-centre sampling: one ray per fov/ray_count slice, so the middle
    // ray points exactly along the heading and no ray sits on the fov rim
    // (rim rays at 45 degrees would walk exactly through grid corners).
    std::vector<double> out;
    out.reserve(cfg.ray_count);
    double step = cfg.fov_deg / cfg.ray_count;
    int mid = (cfg.ray_count - 1) / 2;
    for (int i = 0; i < cfg.ray_count; ++i) out.push_back(step * (i - mid));
    return out;
}

Vec2 heading_vector(Direction h) {
    Cell d = delta(h);
    return {static_cast<double>(d.x), static_cast<double>(d.y)};
}

Vec2 bearing_direction(Direction heading, double bearing_deg) {
    return rotate_deg(heading_vector(heading), bearing_deg).normalized();
}

namespace {

struct EntityAt {
    const std::string* id;
    const std::string* cls;
};

const std::string& kind_name(ApplianceKind k) {
    static const std::string names[] = {"Microwave", "Sink", "Fridge", "Lamp", "CounterTop"};
    return names[static_cast<size_t>(k)];
}

/// Entities (objects and appliances) occupying each cell that vision can
/// notice: held objects are excluded, as are objects inside a closed
/// openable container. Appliances are detectable under their kind name.
std::map<Cell, std::vector<EntityAt>> visible_entities(const Scene& scene) {
    std::map<Cell, std::vector<EntityAt>> out;
    for (const auto& o : scene.objects) {
        if (o.held || !o.cell) continue;
        if (o.inside_id) {
            const Appliance* host = scene.find_appliance(*o.inside_id);
            if (host && host->is_open.has_value() && !*host->is_open) continue;
        }
        out[*o.cell].push_back({&o.id, &o.object_class});
    }
    for (const auto& a : scene.appliances) out[a.cell].push_back({&a.id, &kind_name(a.kind)});
    return out;
}

struct Candidate {
    RayHit hit;  // mode Vision, terminal ObjectCell, reflected = phantom sighting
    std::string cls;
    double bearing = 0.0;
    int ray_idx = 0;
};

// Direct sightings beat reflections; among rays crossing the same cell the
// most central one gives the representative range/bearing.
bool better(const Candidate& a, const Candidate& b) {
    if (a.hit.reflected != b.hit.reflected) return !a.hit.reflected;
    if (std::fabs(a.bearing) != std::fabs(b.bearing))
        return std::fabs(a.bearing) < std::fabs(b.bearing);
    if (a.hit.path_length != b.hit.path_length) return a.hit.path_length < b.hit.path_length;
    return a.ray_idx < b.ray_idx;
}

std::map<std::string, Candidate> vision_candidates(const Scene& scene, const AgentPose& pose,
                                                   const SensorConfig& cfg) {
    auto entities = visible_entities(scene);
    auto bearings = ray_bearings(cfg);
    Vec2 origin = cell_center(pose.cell);
    std::map<std::string, Candidate> best;
    for (size_t i = 0; i < bearings.size(); ++i) {
        Vec2 dir = bearing_direction(pose.heading, bearings[i]);
        RayTrace tr = trace_ray(scene, origin, dir, SensorMode::Vision, cfg.max_range,
                                cfg.reflection_cap);
        for (const auto& visit : tr.cells) {
            auto it = entities.find(visit.cell);
            if (it == entities.end()) continue;
            for (const auto& ent : it->second) {
                Candidate cand;
                cand.hit.mode = SensorMode::Vision;
                cand.hit.path_length = (visit.t_entry + visit.t_exit) / 2.0;
                cand.hit.terminal = TerminalKind::ObjectCell;
                cand.hit.object_id = *ent.id;
                cand.hit.reflected = visit.reflections_before > 0;
                cand.cls = *ent.cls;
                cand.bearing = bearings[i];
                cand.ray_idx = static_cast<int>(i);
                auto [slot, inserted] = best.emplace(*ent.id, cand);
                if (!inserted && better(cand, slot->second)) slot->second = cand;
            }
        }
    }
    return best;
}

}  // namespace

std::vector<std::string> candidate_visible(const Scene& scene, const AgentPose& pose,
                                           const SensorConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& [id, cand] : vision_candidates(scene, pose, cfg)) out.push_back(id);
    return out;
}

std::vector<Detection> sense_vision(const Scene& scene, const AgentPose& pose,
                                    const SensorConfig& cfg, const DetectionSampler& sampler) {
    std::vector<Detection> out;
    double p = std::min(1.0, scene.light_level / cfg.light_floor);
    for (const auto& [id, cand] : vision_candidates(scene, pose, cfg)) {
        if (sampler.uniform(id) < p)
            out.push_back({cand.cls, cand.hit.path_length, cand.bearing, cand.hit.reflected});
    }
    return out;
}

namespace {

std::vector<double> sense_ranges(const Scene& scene, const AgentPose& pose,
                                 const SensorConfig& cfg, SensorMode mode) {
    std::vector<double> out;
    Vec2 origin = cell_center(pose.cell);
    for (double b : ray_bearings(cfg)) {
        Vec2 dir = bearing_direction(pose.heading, b);
        out.push_back(cast_ray(scene, origin, dir, mode, cfg.max_range, cfg.reflection_cap)
                          .path_length);
    }
    return out;
}

}  // namespace

std::vector<double> sense_depth(const Scene& scene, const AgentPose& pose,
                                const SensorConfig& cfg) {
    return sense_ranges(scene, pose, cfg, SensorMode::Depth);
}

std::vector<double> sense_gt_depth(const Scene& scene, const AgentPose& pose,
                                   const SensorConfig& cfg) {
    return sense_ranges(scene, pose, cfg, SensorMode::GroundTruth);
}

Vec2 apparent_point(const AgentPose& pose, const Detection& det) {
    Vec2 dir = bearing_direction(pose.heading, det.apparent_bearing);
    return cell_center(pose.cell) + dir * det.apparent_range;
}

}  // namespace homesim
