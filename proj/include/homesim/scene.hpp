#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "homesim/geometry.hpp"
#include "homesim/util.hpp"

namespace homesim {

enum class Material : uint8_t { Opaque, Glass, Mirror };

const char* to_string(Material m);
std::optional<Material> material_from_string(std::string_view s);

struct EdgeWall {
    GridEdge edge;
    Material material = Material::Opaque;
};

/// A movable household object. A held object has no cell and travels with
/// the agent; an object inside a receptacle sits at the receptacle's cell.
struct ObjectInstance {
    std::string id;
    std::string object_class;  // open registry: "Plate", "Bottle", ...
    std::optional<Cell> cell;
    bool heated = false;
    bool cleaned = false;
    bool cooled = false;
    bool examined = false;
    bool held = false;
    std::optional<std::string> inside_id;
};

enum class ApplianceKind : uint8_t { Microwave, Sink, Fridge, Lamp, CounterTop };

const char* to_string(ApplianceKind k);
std::optional<ApplianceKind> appliance_kind_from_string(std::string_view s);
bool is_openable(ApplianceKind k);   // Microwave, Fridge
bool is_toggleable(ApplianceKind k); // Microwave, Lamp

struct Appliance {
    std::string id;
    ApplianceKind kind = ApplianceKind::CounterTop;
    Cell cell;
    std::optional<bool> is_open;  // openable kinds only
    std::optional<bool> is_on;    // toggleable kinds only
};

struct AgentPose {
    Cell cell;
    Direction heading = Direction::North;
    friend constexpr auto operator<=>(const AgentPose&, const AgentPose&) = default;
};

/// The discrete household world. Walls live on cell edges; the perimeter is
/// implicitly opaque and never appears in `walls`.
struct Scene {
    int width = 1;
    int height = 1;
    double light_level = 1.0;
    std::map<GridEdge, Material> walls;
    std::vector<ObjectInstance> objects;
    std::vector<Appliance> appliances;

    bool in_bounds(Cell c) const {
        return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height;
    }

    /// True when exactly one endpoint of the edge lies inside the grid.
    bool is_boundary(const GridEdge& e) const {
        auto [a, b] = e.cells();
        return in_bounds(a) != in_bounds(b);
    }

    /// Explicitly declared wall on this edge, if any.
    std::optional<Material> wall_at(const GridEdge& e) const {
        auto it = walls.find(e);
        if (it == walls.end()) return std::nullopt;
        return it->second;
    }

    /// Effective surface on this edge: explicit wall, else the implicit
    /// opaque perimeter, else nothing (open passage).
    std::optional<Material> surface(const GridEdge& e) const {
        if (auto m = wall_at(e)) return m;
        auto [a, b] = e.cells();
        if (!in_bounds(a) || !in_bounds(b)) return Material::Opaque;
        return std::nullopt;
    }

    const ObjectInstance* find_object(std::string_view id) const;
    ObjectInstance* find_object(std::string_view id);
    const Appliance* find_appliance(std::string_view id) const;
    Appliance* find_appliance(std::string_view id);
};

/// Wall (or implicit perimeter) between two adjacent cells; nullopt means
/// open passage. Throws std::invalid_argument for non-adjacent cells.
std::optional<EdgeWall> edge_between(Cell a, Cell b, const Scene& scene);
std::optional<EdgeWall> edge_between(Cell a, Direction boundary_side, const Scene& scene);

std::vector<Violation> validate_scene(const Scene& scene);

/// Parses the line-oriented scene format (see docs/FORMATS.md). Throws
/// ParseError on syntax errors and SemanticError when an invariant fails.
Scene parse_scene(std::string_view text);

/// Canonical serialization; parse(serialize(s)) == s and the result is
/// byte-stable for round-trip comparison.
std::string serialize_scene(const Scene& scene);

/// FNV-1a digest of the canonical serialization, as "fnv1a:<hex>".
std::string scene_digest(const Scene& scene);

}  // namespace homesim
