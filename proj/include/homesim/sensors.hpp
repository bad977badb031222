#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homesim/scene.hpp"

namespace homesim {

enum class SensorMode : uint8_t { Vision, Depth, GroundTruth };

const char* to_string(SensorMode m);

struct SensorConfig {
    double fov_deg = 90.0;      // in (0, 180]
    int ray_count = 31;         // odd, so a center ray exists
    double max_range = 8.0;     // cells
    double light_floor = 0.25;  // full detection at light >= this
    int reflection_cap = 2;     // mirrors beyond this terminate the ray
};

std::vector<Violation> validate(const SensorConfig& cfg);

enum class TerminalKind : uint8_t { Surface, ObjectCell, MaxRange };

struct RayHit {
    SensorMode mode = SensorMode::Vision;
    double path_length = 0.0;
    TerminalKind terminal = TerminalKind::MaxRange;
    std::optional<Material> surface_material;  // Surface terminals
    std::optional<GridEdge> surface_edge;      // Surface terminals
    std::optional<std::string> object_id;      // ObjectCell terminals
    bool reflected = false;                    // Vision only: crossed >= 1 mirror
};

struct CellVisit {
    Cell cell;
    double t_entry = 0.0;
    double t_exit = 0.0;
    int reflections_before = 0;
};

enum class RayEventKind : uint8_t { Passed, Reflected, Stopped };

struct RayEvent {
    double t = 0.0;
    GridEdge edge;
    Material material = Material::Opaque;
    RayEventKind kind = RayEventKind::Passed;
};

/// Full traversal record of one ray: every cell visited (in order, with
/// path-length entry/exit), every wall interaction, and the summary hit.
struct RayTrace {
    RayHit hit;
    std::vector<CellVisit> cells;
    std::vector<RayEvent> events;
    int reflection_count = 0;
};

/// Exact edge-walking ray traversal. At each crossed wall edge the material
/// interaction table for `mode` applies:
///   Vision:      opaque stops; glass passes; mirror reflects (up to
///                reflection_cap, then stops at the mirror surface)
///   Depth:       opaque stops; glass passes; mirror stops
///   GroundTruth: every material stops
/// The ray stops at max_range otherwise. Origin must lie inside the grid and
/// dir must be normalized.
RayTrace trace_ray(const Scene& scene, Vec2 origin, Vec2 dir, SensorMode mode,
                   double max_range, int reflection_cap = 2);

RayHit cast_ray(const Scene& scene, Vec2 origin, Vec2 dir, SensorMode mode,
                double max_range, int reflection_cap = 2);

struct Detection {
    std::string object_class;
    double apparent_range = 0.0;    // along the emitted bearing
    double apparent_bearing = 0.0;  // degrees, positive = counterclockwise
    bool phantom = false;           // produced via a reflected ray

    friend bool operator==(const Detection&, const Detection&) = default;
};

/// Counter-based per-object detection draws keyed by (seed, step, id):
/// order-independent and replayable.
struct DetectionSampler {
    uint64_t seed = 0;
    int step = 0;
    double uniform(std::string_view entity_id) const;
};

/// Bearings of the ray fan, evenly spaced across the fov with ray
/// (ray_count-1)/2 at exactly 0.
std::vector<double> ray_bearings(const SensorConfig& cfg);

Vec2 heading_vector(Direction h);
Vec2 bearing_direction(Direction heading, double bearing_deg);

/// Entity ids (objects and appliances) whose cell lies on some vision ray's
/// path before termination. Sorted by id.
std::vector<std::string> candidate_visible(const Scene& scene, const AgentPose& pose,
                                           const SensorConfig& cfg);

/// Semantic vision channel. Each candidate-visible entity is emitted with
/// probability min(1, light_level / light_floor), drawn as a threshold test
/// against the sampler's per-entity uniform, so the detection set grows
/// monotonically with light for a fixed seed stream.
std::vector<Detection> sense_vision(const Scene& scene, const AgentPose& pose,
                                    const SensorConfig& cfg, const DetectionSampler& sampler);

std::vector<double> sense_depth(const Scene& scene, const AgentPose& pose,
                                const SensorConfig& cfg);
std::vector<double> sense_gt_depth(const Scene& scene, const AgentPose& pose,
                                   const SensorConfig& cfg);

struct ObservationBundle {
    std::vector<Detection> vision;
    std::vector<double> depth;                  // empty when the channel is disabled
    bool bump = false;                          // did the last Move fail
    std::optional<std::vector<double>> gt_depth;
};

/// Apparent world position of a detection relative to the observing pose.
Vec2 apparent_point(const AgentPose& pose, const Detection& det);

}  // namespace homesim
