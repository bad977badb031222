#include "homesim/task.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace homesim {

std::string to_string(const GoalCondition& g) {
    switch (g.kind) {
        case GoalCondition::Kind::ObjectIn:
            return "objectin " + g.object_class + " " + g.container_kind;
        case GoalCondition::Kind::ObjectState:
            return "state " + g.object_class + " " + g.flag;
        case GoalCondition::Kind::TwoObjectsIn:
            return "twoin " + g.object_class + " " + g.container_kind;
        case GoalCondition::Kind::ExaminedInLight:
            return "examined " + g.object_class;
    }
    return "";
}

TaskSpec parse_task(std::string_view text) {
    TaskSpec t;
    std::vector<std::string> variants;
    std::vector<AgentPose> starts;
    bool saw_task = false;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto tok = split_ws(line);
        const std::string& kw = tok[0];

        if (kw == "task") {
            if (tok.size() != 3 || tok[2].rfind("floorplan=", 0) != 0)
                throw ParseError(line_no, "usage: task ID floorplan=FILE");
            t.id = tok[1];
            t.floorplan = tok[2].substr(10);
            saw_task = true;
        } else if (kw == "goal") {
            if (tok.size() < 3) throw ParseError(line_no, "usage: goal KIND CLASS (...)");
            GoalCondition g;
            if (tok[1] == "objectin" && tok.size() == 4) {
                g.kind = GoalCondition::Kind::ObjectIn;
                g.object_class = tok[2];
                g.container_kind = tok[3];
            } else if (tok[1] == "state" && tok.size() == 4) {
                g.kind = GoalCondition::Kind::ObjectState;
                g.object_class = tok[2];
                g.flag = tok[3];
            } else if (tok[1] == "twoin" && tok.size() == 4) {
                g.kind = GoalCondition::Kind::TwoObjectsIn;
                g.object_class = tok[2];
                g.container_kind = tok[3];
            } else if (tok[1] == "examined" && tok.size() == 3) {
                g.kind = GoalCondition::Kind::ExaminedInLight;
                g.object_class = tok[2];
            } else {
                throw ParseError(line_no, "unknown goal form: " + tok[1]);
            }
            t.goals.push_back(std::move(g));
        } else if (kw == "variant") {
            auto q1 = raw.find('"');
            auto q2 = raw.rfind('"');
            if (q1 == std::string::npos || q2 <= q1)
                throw ParseError(line_no, "usage: variant \"text\"");
            variants.push_back(raw.substr(q1 + 1, q2 - q1 - 1));
        } else if (kw == "start") {
            if (tok.size() != 4) throw ParseError(line_no, "usage: start x y heading");
            AgentPose p;
            if (!parse_int(tok[1], p.cell.x) || !parse_int(tok[2], p.cell.y))
                throw ParseError(line_no, "expected integer start coordinates");
            auto h = direction_from_string(tok[3]);
            if (!h) throw ParseError(line_no, "unknown heading: " + tok[3]);
            p.heading = *h;
            starts.push_back(p);
        } else {
            throw ParseError(line_no, "unknown directive: " + kw);
        }
    }

    if (!saw_task) throw ParseError(1, "missing task directive");
    if (variants.size() != 3)
        throw SemanticError({{"VariantCount", t.id, "a task needs exactly 3 variants"}});
    if (starts.size() != 4)
        throw SemanticError({{"StartCount", t.id, "a task needs exactly 4 start positions"}});
    std::copy(variants.begin(), variants.end(), t.variants.begin());
    std::copy(starts.begin(), starts.end(), t.starts.begin());
    return t;
}

std::string serialize_task(const TaskSpec& t) {
    std::ostringstream os;
    os << "task " << t.id << " floorplan=" << t.floorplan << "\n";
    for (const auto& g : t.goals) os << "goal " << to_string(g) << "\n";
    for (const auto& v : t.variants) os << "variant \"" << v << "\"\n";
    for (const auto& s : t.starts)
        os << "start " << s.cell.x << " " << s.cell.y << " " << to_string(s.heading) << "\n";
    return os.str();
}

std::vector<Violation> validate_task(const TaskSpec& t, const Scene* scene, int min_start_dist) {
    std::vector<Violation> out;
    if (t.id.empty()) out.push_back({"EmptyId", "", "task id must be non-empty"});
    for (size_t i = 0; i < t.starts.size(); ++i) {
        for (size_t j = i + 1; j < t.starts.size(); ++j) {
            if (t.starts[i].cell == t.starts[j].cell)
                out.push_back({"StartsNotDistinct", t.id, "start cells must differ"});
            else if (manhattan(t.starts[i].cell, t.starts[j].cell) < min_start_dist)
                out.push_back({"StartsTooClose", t.id,
                               "start cells closer than min distance " +
                                   std::to_string(min_start_dist)});
        }
    }
    if (scene) {
        for (const auto& s : t.starts)
            if (!scene->in_bounds(s.cell))
                out.push_back({"StartOutOfBounds", t.id, "start cell outside floorplan"});
        std::set<std::string> classes;
        std::set<std::string> kinds;
        for (const auto& o : scene->objects) classes.insert(o.object_class);
        for (const auto& a : scene->appliances) kinds.insert(to_string(a.kind));
        for (const auto& g : t.goals) {
            if (!classes.count(g.object_class))
                out.push_back({"GoalClassMissing", t.id,
                               "floorplan has no object of class " + g.object_class});
            if (!g.container_kind.empty() && !kinds.count(g.container_kind))
                out.push_back({"GoalContainerMissing", t.id,
                               "floorplan has no appliance of kind " + g.container_kind});
        }
    }
    return out;
}

namespace {

bool object_in(const Scene& scene, const ObjectInstance& o, const std::string& kind) {
    if (!o.inside_id) return false;
    const Appliance* host = scene.find_appliance(*o.inside_id);
    return host && to_string(host->kind) == kind;
}

bool has_flag(const ObjectInstance& o, const std::string& flag) {
    if (flag == "heated") return o.heated;
    if (flag == "cleaned") return o.cleaned;
    if (flag == "cooled") return o.cooled;
    if (flag == "examined") return o.examined;
    return false;
}

}  // namespace

std::vector<bool> check_goal(const Scene& scene, const TaskSpec& task) {
    std::vector<bool> out;
    out.reserve(task.goals.size());
    for (const auto& g : task.goals) {
        bool ok = false;
        switch (g.kind) {
            case GoalCondition::Kind::ObjectIn:
                for (const auto& o : scene.objects)
                    if (o.object_class == g.object_class && object_in(scene, o, g.container_kind)) {
                        ok = true;
                        break;
                    }
                break;
            case GoalCondition::Kind::ObjectState:
                for (const auto& o : scene.objects)
                    if (o.object_class == g.object_class && has_flag(o, g.flag)) {
                        ok = true;
                        break;
                    }
                break;
            case GoalCondition::Kind::TwoObjectsIn: {
                int n = 0;
                for (const auto& o : scene.objects)
                    if (o.object_class == g.object_class && object_in(scene, o, g.container_kind))
                        ++n;
                ok = n >= 2;
                break;
            }
            case GoalCondition::Kind::ExaminedInLight:
                for (const auto& o : scene.objects)
                    if (o.object_class == g.object_class && o.examined) {
                        ok = true;
                        break;
                    }
                break;
        }
        out.push_back(ok);
    }
    return out;
}

bool task_success(const Scene& scene, const TaskSpec& task) {
    auto flags = check_goal(scene, task);
    return std::all_of(flags.begin(), flags.end(), [](bool b) { return b; });
}

std::vector<AgentPose> generate_start_positions(const Scene& scene, int n, int min_dist,
                                                Rng& rng) {
    auto occupied = [&](Cell c) {
        for (const auto& a : scene.appliances)
            if (a.cell == c) return true;
        return false;
    };

    // Scene-truth connectivity (walls of any material block).
    auto component_of = [&](Cell start) {
        std::vector<uint8_t> seen(static_cast<size_t>(scene.width) * scene.height, 0);
        std::deque<Cell> q{start};
        seen[static_cast<size_t>(start.y) * scene.width + start.x] = 1;
        while (!q.empty()) {
            Cell c = q.front();
            q.pop_front();
            for (Direction d : kDirectionOrder) {
                Cell m = c + delta(d);
                if (!scene.in_bounds(m)) continue;
                if (scene.surface(GridEdge::between(c, m))) continue;
                size_t idx = static_cast<size_t>(m.y) * scene.width + m.x;
                if (!seen[idx]) {
                    seen[idx] = 1;
                    q.push_back(m);
                }
            }
        }
        return seen;
    };

    std::vector<AgentPose> accepted;
    std::vector<uint8_t> component;
    const int kMaxDraws = 10000;
    for (int draw = 0; draw < kMaxDraws && static_cast<int>(accepted.size()) < n; ++draw) {
        Cell c{rng.uniform_int(0, scene.width - 1), rng.uniform_int(0, scene.height - 1)};
        Direction h = static_cast<Direction>(rng.uniform_int(0, 3));
        if (occupied(c)) continue;
        bool ok = true;
        for (const auto& p : accepted) {
            if (p.cell == c || manhattan(p.cell, c) < min_dist) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (accepted.empty()) {
            component = component_of(c);
        } else if (!component[static_cast<size_t>(c.y) * scene.width + c.x]) {
            continue;  // not reachable from the first pose
        }
        accepted.push_back({c, h});
    }
    if (static_cast<int>(accepted.size()) < n)
        throw SemanticError({{"StartSamplingInfeasible", "",
                              "could not place " + std::to_string(n) + " poses with min_dist " +
                                  std::to_string(min_dist) + " within 10000 draws"}});
    return accepted;
}

}  // namespace homesim
