#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "homesim/scene.hpp"

namespace homesim {

struct DimLight {
    double level = 1.0;  // in [0,1]
};

struct GlassWall {
    std::vector<GridEdge> edges;
};

struct MirrorWall {
    std::vector<GridEdge> edges;
};

using Disturbance = std::variant<DimLight, GlassWall, MirrorWall>;

std::string disturbance_name(const Disturbance& d);

std::vector<Violation> validate(const Scene& scene, const Disturbance& d);

/// Pure scene transform: dims the light or overlays glass/mirror walls on
/// the given edges (overwriting any wall already there). Throws
/// SemanticError when validate() reports violations.
Scene apply(const Scene& scene, const Disturbance& d);

/// Left fold of apply over an ordered disturbance list. A validation
/// failure names the failing index.
Scene compose(const Scene& scene, std::span<const Disturbance> ds);

/// Parses a disturbance spec file: `dimlight L`, `glasswall x1 y1 x2 y2 ...`,
/// `mirror x1 y1 x2 y2 ...` (coordinate quadruples, one edge each).
std::vector<Disturbance> parse_disturbances(std::string_view text);

std::string serialize_disturbances(std::span<const Disturbance> ds);

}  // namespace homesim
