#include "homesim/disturbance.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace homesim {

std::string disturbance_name(const Disturbance& d) {
    if (std::holds_alternative<DimLight>(d)) return "dimlight";
    if (std::holds_alternative<GlassWall>(d)) return "glasswall";
    return "mirror";
}

namespace {

void validate_edges(const Scene& scene, const std::vector<GridEdge>& edges,
                    std::vector<Violation>& out) {
    if (edges.empty()) {
        out.push_back({"EmptyEdgeList", "", "disturbance edge list must be non-empty"});
        return;
    }
    std::set<GridEdge> seen;
    for (const auto& e : edges) {
        auto [a, b] = e.cells();
        if (!scene.in_bounds(a) || !scene.in_bounds(b))
            out.push_back({"EdgeOutOfBounds", to_string(e),
                           "disturbance edges must join in-bounds adjacent cells"});
        if (!seen.insert(e).second)
            out.push_back({"DuplicateEdge", to_string(e), "edge listed twice"});
    }
}

}  // namespace

std::vector<Violation> validate(const Scene& scene, const Disturbance& d) {
    std::vector<Violation> out;
    if (const auto* dim = std::get_if<DimLight>(&d)) {
        if (!(dim->level >= 0.0 && dim->level <= 1.0))
            out.push_back({"LightOutOfRange", "", "dimlight level must be in [0,1]"});
    } else if (const auto* g = std::get_if<GlassWall>(&d)) {
        validate_edges(scene, g->edges, out);
    } else if (const auto* m = std::get_if<MirrorWall>(&d)) {
        validate_edges(scene, m->edges, out);
    }
    return out;
}

Scene apply(const Scene& scene, const Disturbance& d) {
    if (auto v = validate(scene, d); !v.empty()) throw SemanticError(std::move(v));
    Scene out = scene;
    if (const auto* dim = std::get_if<DimLight>(&d)) {
        out.light_level = dim->level;
    } else if (const auto* g = std::get_if<GlassWall>(&d)) {
        for (const auto& e : g->edges) out.walls[e] = Material::Glass;
    } else if (const auto* m = std::get_if<MirrorWall>(&d)) {
        for (const auto& e : m->edges) out.walls[e] = Material::Mirror;
    }
    return out;
}

Scene compose(const Scene& scene, std::span<const Disturbance> ds) {
    Scene out = scene;
    for (size_t i = 0; i < ds.size(); ++i) {
        if (auto v = validate(out, ds[i]); !v.empty()) {
            for (auto& viol : v)
                viol.message = "disturbance " + std::to_string(i) + ": " + viol.message;
            throw SemanticError(std::move(v));
        }
        out = homesim::apply(out, ds[i]);
    }
    return out;
}

std::vector<Disturbance> parse_disturbances(std::string_view text) {
    std::vector<Disturbance> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto tok = split_ws(line);
        const std::string& kw = tok[0];
        if (kw == "dimlight") {
            DimLight d;
            if (tok.size() != 2 || !parse_double(tok[1], d.level))
                throw ParseError(line_no, "usage: dimlight L");
            out.emplace_back(d);
        } else if (kw == "glasswall" || kw == "mirror") {
            if (tok.size() < 5 || (tok.size() - 1) % 4 != 0)
                throw ParseError(line_no, "usage: " + kw + " x1 y1 x2 y2 [x1 y1 x2 y2 ...]");
            std::vector<GridEdge> edges;
            for (size_t i = 1; i + 3 < tok.size(); i += 4) {
                Cell a, b;
                if (!parse_int(tok[i], a.x) || !parse_int(tok[i + 1], a.y) ||
                    !parse_int(tok[i + 2], b.x) || !parse_int(tok[i + 3], b.y))
                    throw ParseError(line_no, "expected integer edge coordinates");
                try {
                    edges.push_back(GridEdge::between(a, b));
                } catch (const std::invalid_argument&) {
                    throw ParseError(line_no, "edge cells must be 4-adjacent");
                }
            }
            if (kw == "glasswall") out.emplace_back(GlassWall{std::move(edges)});
            else out.emplace_back(MirrorWall{std::move(edges)});
        } else {
            throw ParseError(line_no, "unknown directive: " + kw);
        }
    }
    return out;
}

std::string serialize_disturbances(std::span<const Disturbance> ds) {
    std::ostringstream os;
    auto emit_edges = [&](const char* kw, const std::vector<GridEdge>& edges) {
        os << kw;
        for (const auto& e : edges) {
            auto [a, b] = e.cells();
            os << " " << a.x << " " << a.y << " " << b.x << " " << b.y;
        }
        os << "\n";
    };
    for (const auto& d : ds) {
        if (const auto* dim = std::get_if<DimLight>(&d))
            os << "dimlight " << format_double(dim->level) << "\n";
        else if (const auto* g = std::get_if<GlassWall>(&d))
            emit_edges("glasswall", g->edges);
        else if (const auto* m = std::get_if<MirrorWall>(&d))
            emit_edges("mirror", m->edges);
    }
    return os.str();
}

}  // namespace homesim
