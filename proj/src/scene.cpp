#include "homesim/scene.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace homesim {

const char* to_string(Material m) {
    switch (m) {
        case Material::Opaque: return "opaque";
        case Material::Glass: return "glass";
        case Material::Mirror: return "mirror";
    }
    return "opaque";
}

std::optional<Material> material_from_string(std::string_view s) {
    if (s == "opaque") return Material::Opaque;
    if (s == "glass") return Material::Glass;
    if (s == "mirror") return Material::Mirror;
    return std::nullopt;
}

const char* to_string(ApplianceKind k) {
    switch (k) {
        case ApplianceKind::Microwave: return "Microwave";
        case ApplianceKind::Sink: return "Sink";
        case ApplianceKind::Fridge: return "Fridge";
        case ApplianceKind::Lamp: return "Lamp";
        case ApplianceKind::CounterTop: return "CounterTop";
    }
    return "CounterTop";
}

std::optional<ApplianceKind> appliance_kind_from_string(std::string_view s) {
    if (s == "Microwave") return ApplianceKind::Microwave;
    if (s == "Sink") return ApplianceKind::Sink;
    if (s == "Fridge") return ApplianceKind::Fridge;
    if (s == "Lamp") return ApplianceKind::Lamp;
    if (s == "CounterTop") return ApplianceKind::CounterTop;
    return std::nullopt;
}

bool is_openable(ApplianceKind k) {
    return k == ApplianceKind::Microwave || k == ApplianceKind::Fridge;
}

bool is_toggleable(ApplianceKind k) {
    return k == ApplianceKind::Microwave || k == ApplianceKind::Lamp;
}

const ObjectInstance* Scene::find_object(std::string_view id) const {
    for (const auto& o : objects)
        if (o.id == id) return &o;
    return nullptr;
}

ObjectInstance* Scene::find_object(std::string_view id) {
    return const_cast<ObjectInstance*>(std::as_const(*this).find_object(id));
}

const Appliance* Scene::find_appliance(std::string_view id) const {
    for (const auto& a : appliances)
        if (a.id == id) return &a;
    return nullptr;
}

Appliance* Scene::find_appliance(std::string_view id) {
    return const_cast<Appliance*>(std::as_const(*this).find_appliance(id));
}

std::optional<EdgeWall> edge_between(Cell a, Cell b, const Scene& scene) {
    GridEdge e = GridEdge::between(a, b);  // throws on non-adjacent cells
    if (auto m = scene.surface(e)) return EdgeWall{e, *m};
    return std::nullopt;
}

std::optional<EdgeWall> edge_between(Cell a, Direction boundary_side, const Scene& scene) {
    return edge_between(a, a + delta(boundary_side), scene);
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Violation> validate_scene(const Scene& s) {
    std::vector<Violation> out;
    if (s.width < 1) out.push_back({"WidthPositive", "", "width must be >= 1"});
    if (s.height < 1) out.push_back({"HeightPositive", "", "height must be >= 1"});
    if (!(s.light_level >= 0.0 && s.light_level <= 1.0))
        out.push_back({"LightOutOfRange", "", "light_level must be in [0,1]"});

    for (const auto& [edge, mat] : s.walls) {
        auto [a, b] = edge.cells();
        if (!s.in_bounds(a) && !s.in_bounds(b))
            out.push_back({"WallEdgeOutOfBounds", to_string(edge),
                           "wall edge must touch at least one in-bounds cell"});
        (void)mat;
    }

    std::set<std::string> ids;
    auto check_id = [&](const std::string& id) {
        if (id.empty()) out.push_back({"EmptyId", id, "ids must be non-empty"});
        if (!ids.insert(id).second)
            out.push_back({"DuplicateId", id, "object/appliance ids must be unique"});
    };

    for (const auto& a : s.appliances) {
        check_id(a.id);
        if (!s.in_bounds(a.cell))
            out.push_back({"ApplianceCellOutOfBounds", a.id, "appliance cell out of bounds"});
        if (a.is_open.has_value() && !is_openable(a.kind))
            out.push_back({"ApplianceOpenFlagInvalid", a.id, "kind is not openable"});
        if (a.is_on.has_value() && !is_toggleable(a.kind))
            out.push_back({"ApplianceOnFlagInvalid", a.id, "kind is not toggleable"});
    }

    for (const auto& o : s.objects) {
        check_id(o.id);
        if (o.held && o.cell.has_value())
            out.push_back({"HeldObjectHasCell", o.id, "held objects carry no cell"});
        if (!o.held && !o.cell.has_value())
            out.push_back({"ObjectMissingCell", o.id, "non-held objects need a cell"});
        if (o.cell && !s.in_bounds(*o.cell))
            out.push_back({"ObjectCellOutOfBounds", o.id, "object cell out of bounds"});
        if (o.inside_id) {
            bool exists = s.find_appliance(*o.inside_id) != nullptr;
            if (!exists) {
                const ObjectInstance* host = s.find_object(*o.inside_id);
                exists = host != nullptr && host->id != o.id;
            }
            if (!exists)
                out.push_back({"InsideReceptacleMissing", o.id,
                               "inside_id references no appliance or object"});
        }
        // An object must not be walled in on all four sides unless it sits
        // inside a closed receptacle.
        bool in_closed_receptacle = false;
        if (o.inside_id) {
            const Appliance* host = s.find_appliance(*o.inside_id);
            in_closed_receptacle = host && host->is_open.has_value() && !*host->is_open;
        }
        if (o.cell && s.in_bounds(*o.cell) && !in_closed_receptacle) {
            bool enclosed = true;
            for (Direction d : kDirectionOrder) {
                auto m = s.surface(GridEdge::ahead(*o.cell, d));
                if (!m || *m != Material::Opaque) {
                    enclosed = false;
                    break;
                }
            }
            if (enclosed)
                out.push_back({"ObjectEnclosed", o.id,
                               "object cell is opaque-walled on all four edges"});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void fail(int line, const std::string& msg) { throw ParseError(line, msg); }

Cell parse_cell(const std::vector<std::string>& tok, size_t i, int line) {
    Cell c;
    if (i + 1 >= tok.size() || !parse_int(tok[i], c.x) || !parse_int(tok[i + 1], c.y))
        fail(line, "expected integer cell coordinates");
    return c;
}

GridEdge parse_edge(const std::vector<std::string>& tok, size_t i, int line) {
    Cell a = parse_cell(tok, i, line);
    Cell b = parse_cell(tok, i + 2, line);
    try {
        return GridEdge::between(a, b);
    } catch (const std::invalid_argument&) {
        fail(line, "wall edge cells must be 4-adjacent");
    }
}

}  // namespace

Scene parse_scene(std::string_view text) {
    Scene scene;
    bool saw_size = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    std::vector<std::pair<GridEdge, Material>> wall_list;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto tok = split_ws(line);
        const std::string& kw = tok[0];

        if (kw == "size") {
            if (tok.size() != 3 || !parse_int(tok[1], scene.width) || !parse_int(tok[2], scene.height))
                fail(line_no, "usage: size W H");
            saw_size = true;
        } else if (kw == "light") {
            if (tok.size() != 2 || !parse_double(tok[1], scene.light_level))
                fail(line_no, "usage: light L");
        } else if (kw == "wall") {
            if (tok.size() != 6) fail(line_no, "usage: wall x1 y1 x2 y2 MATERIAL");
            GridEdge e = parse_edge(tok, 1, line_no);
            auto m = material_from_string(tok[5]);
            if (!m) fail(line_no, "unknown material: " + tok[5]);
            wall_list.emplace_back(e, *m);
        } else if (kw == "object") {
            if (tok.size() < 4) fail(line_no, "usage: object ID CLASS (x y | held) [STATE...]");
            ObjectInstance o;
            o.id = tok[1];
            o.object_class = tok[2];
            size_t i = 3;
            if (tok[3] == "held") {
                o.held = true;
                i = 4;
            } else {
                o.cell = parse_cell(tok, 3, line_no);
                i = 5;
            }
            for (; i < tok.size(); ++i) {
                const std::string& st = tok[i];
                if (st == "heated") o.heated = true;
                else if (st == "cleaned") o.cleaned = true;
                else if (st == "cooled") o.cooled = true;
                else if (st == "examined") o.examined = true;
                else if (st.rfind("in=", 0) == 0) o.inside_id = st.substr(3);
                else fail(line_no, "unknown object state: " + st);
            }
            scene.objects.push_back(std::move(o));
        } else if (kw == "appliance") {
            if (tok.size() < 5) fail(line_no, "usage: appliance ID KIND x y [open|closed] [on|off]");
            Appliance a;
            a.id = tok[1];
            auto k = appliance_kind_from_string(tok[2]);
            if (!k) fail(line_no, "unknown appliance kind: " + tok[2]);
            a.kind = *k;
            a.cell = parse_cell(tok, 3, line_no);
            for (size_t i = 5; i < tok.size(); ++i) {
                const std::string& st = tok[i];
                if (st == "open") a.is_open = true;
                else if (st == "closed") a.is_open = false;
                else if (st == "on") a.is_on = true;
                else if (st == "off") a.is_on = false;
                else fail(line_no, "unknown appliance state: " + st);
            }
            scene.appliances.push_back(std::move(a));
        } else {
            fail(line_no, "unknown directive: " + kw);
        }
    }

    if (!saw_size) fail(line_no == 0 ? 1 : line_no, "missing size directive");

    for (const auto& [e, m] : wall_list) {
        if (scene.walls.count(e))
            throw SemanticError({{"DuplicateWallEdge", to_string(e), "wall edge declared twice"}});
        scene.walls.emplace(e, m);
    }

    if (auto v = validate_scene(scene); !v.empty()) throw SemanticError(std::move(v));
    return scene;
}

// ---------------------------------------------------------------------------
// Canonical serialization

std::string serialize_scene(const Scene& s) {
    std::ostringstream os;
    os << "size " << s.width << " " << s.height << "\n";
    os << "light " << format_double(s.light_level) << "\n";
    for (const auto& [e, m] : s.walls) {
        auto [a, b] = e.cells();
        os << "wall " << a.x << " " << a.y << " " << b.x << " " << b.y << " " << to_string(m)
           << "\n";
    }
    std::vector<const Appliance*> apps;
    for (const auto& a : s.appliances) apps.push_back(&a);
    std::sort(apps.begin(), apps.end(), [](auto* l, auto* r) { return l->id < r->id; });
    for (const auto* a : apps) {
        os << "appliance " << a->id << " " << to_string(a->kind) << " " << a->cell.x << " "
           << a->cell.y;
        if (a->is_open.has_value()) os << (*a->is_open ? " open" : " closed");
        if (a->is_on.has_value()) os << (*a->is_on ? " on" : " off");
        os << "\n";
    }
    std::vector<const ObjectInstance*> objs;
    for (const auto& o : s.objects) objs.push_back(&o);
    std::sort(objs.begin(), objs.end(), [](auto* l, auto* r) { return l->id < r->id; });
    for (const auto* o : objs) {
        os << "object " << o->id << " " << o->object_class;
        if (o->held) os << " held";
        else os << " " << o->cell->x << " " << o->cell->y;
        if (o->heated) os << " heated";
        if (o->cleaned) os << " cleaned";
        if (o->cooled) os << " cooled";
        if (o->examined) os << " examined";
        if (o->inside_id) os << " in=" << *o->inside_id;
        os << "\n";
    }
    return os.str();
}

std::string scene_digest(const Scene& scene) {
    uint64_t h = fnv1a(serialize_scene(scene));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace homesim
