#include "homesim/agent.hpp"

#include <algorithm>
#include <limits>

namespace homesim {

namespace {

const char* kind_word(ActionKind k) {
    switch (k) {
        case ActionKind::MoveAhead: return "MoveAhead";
        case ActionKind::RotateLeft: return "RotateLeft";
        case ActionKind::RotateRight: return "RotateRight";
        case ActionKind::Pickup: return "Pickup";
        case ActionKind::Put: return "Put";
        case ActionKind::Open: return "Open";
        case ActionKind::Close: return "Close";
        case ActionKind::ToggleOn: return "ToggleOn";
        case ActionKind::ToggleOff: return "ToggleOff";
        case ActionKind::Examine: return "Examine";
        case ActionKind::Stop: return "Stop";
    }
    return "Stop";
}

}  // namespace

std::string to_string(const Action& a) {
    std::string s = kind_word(a.kind);
    if (!a.target.empty()) s += " " + a.target;
    return s;
}

std::optional<Action> action_from_string(std::string_view s) {
    auto tok = split_ws(s);
    if (tok.empty()) return std::nullopt;
    static const ActionKind kinds[] = {ActionKind::MoveAhead, ActionKind::RotateLeft,
                                       ActionKind::RotateRight, ActionKind::Pickup,
                                       ActionKind::Put, ActionKind::Open, ActionKind::Close,
                                       ActionKind::ToggleOn, ActionKind::ToggleOff,
                                       ActionKind::Examine, ActionKind::Stop};
    for (ActionKind k : kinds) {
        if (tok[0] == kind_word(k)) {
            Action a{k, tok.size() > 1 ? tok[1] : ""};
            return a;
        }
    }
    return std::nullopt;
}

std::string to_string(const Subgoal& s) {
    switch (s.kind) {
        case Subgoal::Kind::Find: return "Find " + s.target;
        case Subgoal::Kind::GoTo: return "GoTo " + s.target;
        case Subgoal::Kind::Pickup: return "Pickup " + s.target;
        case Subgoal::Kind::PlaceIn: return "PlaceIn " + s.target;
        case Subgoal::Kind::Heat: return "Heat " + s.target;
        case Subgoal::Kind::Examine: return "Examine " + s.target;
    }
    return "";
}

// ---------------------------------------------------------------------------
// Environment transition

namespace {

ActionResult ok() { return {true, false, ""}; }
ActionResult failed(const std::string& reason, bool bump = false) {
    return {false, bump, reason};
}

Appliance* appliance_at(WorldState& w, Cell cell, const std::string& target) {
    for (auto& a : w.scene.appliances)
        if (a.cell == cell && (to_string(a.kind) == target || a.id == target)) return &a;
    return nullptr;
}

/// Cells within interaction reach: the faced cell (unless a wall of any
/// material separates it — no grabbing through glass) and the agent's own.
std::vector<Cell> reach_cells(const WorldState& w) {
    std::vector<Cell> out;
    Cell faced = w.pose.cell + delta(w.pose.heading);
    if (w.scene.in_bounds(faced) &&
        !w.scene.surface(GridEdge::between(w.pose.cell, faced)))
        out.push_back(faced);
    out.push_back(w.pose.cell);
    return out;
}

/// Resolve an appliance named by kind or id at the faced cell, then the
/// agent's own cell.
Appliance* resolve_appliance(WorldState& w, const std::string& target, Cell* where = nullptr) {
    for (Cell c : reach_cells(w)) {
        if (Appliance* a = appliance_at(w, c, target)) {
            if (where) *where = c;
            return a;
        }
    }
    return nullptr;
}

bool reachable_inside(const Scene& scene, const ObjectInstance& o) {
    if (!o.inside_id) return true;
    const Appliance* host = scene.find_appliance(*o.inside_id);
    if (!host) return true;  // object-in-object: treated as an open basket
    return !host->is_open.has_value() || *host->is_open;
}

}  // namespace

ActionResult execute_action(WorldState& w, const Action& action) {
    switch (action.kind) {
        case ActionKind::MoveAhead: {
            Cell target = w.pose.cell + delta(w.pose.heading);
            if (!w.scene.in_bounds(target)) return failed("blocked", true);
            if (w.scene.surface(GridEdge::between(w.pose.cell, target)))
                return failed("blocked", true);  // any material blocks movement
            w.pose.cell = target;
            return ok();
        }
        case ActionKind::RotateLeft:
            w.pose.heading = rotate_left(w.pose.heading);
            return ok();
        case ActionKind::RotateRight:
            w.pose.heading = rotate_right(w.pose.heading);
            return ok();

        case ActionKind::Pickup: {
            if (w.held_id) return failed("already_holding");
            for (Cell c : reach_cells(w)) {
                ObjectInstance* best = nullptr;
                for (auto& o : w.scene.objects) {
                    if (o.held || !o.cell || *o.cell != c) continue;
                    if (o.object_class != action.target) continue;
                    if (!reachable_inside(w.scene, o)) continue;
                    if (!best) {
                        best = &o;
                        continue;
                    }
                    bool o_free = !o.inside_id, b_free = !best->inside_id;
                    if (o_free != b_free ? o_free : o.id < best->id) best = &o;
                }
                if (best) {
                    best->cell.reset();
                    best->held = true;
                    best->inside_id.reset();
                    w.held_id = best->id;
                    return ok();
                }
            }
            return failed("no_target");
        }

        case ActionKind::Put: {
            if (!w.held_id) return failed("hands_empty");
            Cell where;
            Appliance* app = resolve_appliance(w, action.target, &where);
            if (app) {
                if (app->is_open.has_value() && !*app->is_open) return failed("closed_container");
                ObjectInstance* held = w.scene.find_object(*w.held_id);
                held->cell = app->cell;
                held->held = false;
                held->inside_id = app->id;
                w.held_id.reset();
                return ok();
            }
            // receptacle object of the named class
            for (Cell c : reach_cells(w)) {
                for (auto& o : w.scene.objects) {
                    if (o.held || !o.cell || *o.cell != c) continue;
                    if (o.object_class != action.target || o.id == *w.held_id) continue;
                    ObjectInstance* held = w.scene.find_object(*w.held_id);
                    held->cell = *o.cell;
                    held->held = false;
                    held->inside_id = o.id;
                    w.held_id.reset();
                    return ok();
                }
            }
            return failed("no_target");
        }

        case ActionKind::Open: {
            Appliance* app = resolve_appliance(w, action.target);
            if (!app) return failed("no_target");
            if (!is_openable(app->kind)) return failed("not_openable");
            if (app->is_open.value_or(false)) return failed("already_open");
            app->is_open = true;
            return ok();
        }
        case ActionKind::Close: {
            Appliance* app = resolve_appliance(w, action.target);
            if (!app) return failed("no_target");
            if (!is_openable(app->kind)) return failed("not_openable");
            if (!app->is_open.value_or(false)) return failed("already_closed");
            app->is_open = false;
            return ok();
        }

        case ActionKind::ToggleOn: {
            Appliance* app = resolve_appliance(w, action.target);
            if (!app) return failed("no_target");
            if (!is_toggleable(app->kind)) return failed("not_toggleable");
            if (app->is_on.value_or(false)) return failed("already_on");
            app->is_on = true;
            return ok();
        }
        case ActionKind::ToggleOff: {
            Appliance* app = resolve_appliance(w, action.target);
            if (!app) return failed("no_target");
            if (!is_toggleable(app->kind)) return failed("not_toggleable");
            if (!app->is_on.value_or(false)) return failed("already_off");
            app->is_on = false;
            // Completing an on/off cycle heats whatever sits inside.
            if (app->kind == ApplianceKind::Microwave)
                for (auto& o : w.scene.objects)
                    if (o.inside_id == app->id) o.heated = true;
            return ok();
        }

        case ActionKind::Examine: {
            ObjectInstance* subject = nullptr;
            if (w.held_id) {
                ObjectInstance* held = w.scene.find_object(*w.held_id);
                if (held && held->object_class == action.target) subject = held;
            }
            if (!subject) {
                for (Cell c : reach_cells(w)) {
                    for (auto& o : w.scene.objects) {
                        if (o.held || !o.cell || *o.cell != c) continue;
                        if (o.object_class != action.target) continue;
                        if (!reachable_inside(w.scene, o)) continue;
                        subject = &o;
                        break;
                    }
                    if (subject) break;
                }
            }
            if (!subject) return failed("no_target");
            Cell subject_pos = subject->held ? w.pose.cell : *subject->cell;
            bool lit = false;
            for (const auto& a : w.scene.appliances)
                if (a.kind == ApplianceKind::Lamp && a.is_on.value_or(false) &&
                    manhattan(a.cell, subject_pos) <= 2) {
                    lit = true;
                    break;
                }
            if (!lit) return failed("no_light");
            subject->examined = true;
            return ok();
        }

        case ActionKind::Stop:
            return ok();
    }
    return failed("unknown");
}

// ---------------------------------------------------------------------------
// Goal decomposition

namespace {

void push_pick_place(std::vector<Subgoal>& out, const std::string& cls, const std::string& dest) {
    out.push_back({Subgoal::Kind::Find, cls});
    out.push_back({Subgoal::Kind::GoTo, cls});
    out.push_back({Subgoal::Kind::Pickup, cls});
    out.push_back({Subgoal::Kind::GoTo, dest});
    out.push_back({Subgoal::Kind::PlaceIn, dest});
}

}  // namespace

SubgoalPlan decompose(const TaskSpec& task) {
    SubgoalPlan plan;
    const auto& goals = task.goals;
    if (goals.empty()) return plan;

    if (goals.size() == 1 && goals[0].kind == GoalCondition::Kind::ObjectIn) {
        push_pick_place(plan.subgoals, goals[0].object_class, goals[0].container_kind);
        return plan;
    }
    if (goals.size() == 1 && goals[0].kind == GoalCondition::Kind::TwoObjectsIn) {
        push_pick_place(plan.subgoals, goals[0].object_class, goals[0].container_kind);
        push_pick_place(plan.subgoals, goals[0].object_class, goals[0].container_kind);
        return plan;
    }
    if (goals.size() == 1 && goals[0].kind == GoalCondition::Kind::ExaminedInLight) {
        const std::string& cls = goals[0].object_class;
        plan.subgoals.push_back({Subgoal::Kind::Find, cls});
        plan.subgoals.push_back({Subgoal::Kind::GoTo, cls});
        plan.subgoals.push_back({Subgoal::Kind::Pickup, cls});
        plan.subgoals.push_back({Subgoal::Kind::GoTo, "Lamp"});
        plan.subgoals.push_back({Subgoal::Kind::Examine, cls});
        return plan;
    }
    if (goals.size() == 2) {
        const GoalCondition* heat = nullptr;
        const GoalCondition* in = nullptr;
        for (const auto& g : goals) {
            if (g.kind == GoalCondition::Kind::ObjectState && g.flag == "heated") heat = &g;
            if (g.kind == GoalCondition::Kind::ObjectIn) in = &g;
        }
        if (heat && in && heat->object_class == in->object_class) {
            const std::string& cls = heat->object_class;
            plan.subgoals.push_back({Subgoal::Kind::Find, cls});
            plan.subgoals.push_back({Subgoal::Kind::GoTo, cls});
            plan.subgoals.push_back({Subgoal::Kind::Pickup, cls});
            plan.subgoals.push_back({Subgoal::Kind::Find, "Microwave"});
            plan.subgoals.push_back({Subgoal::Kind::GoTo, "Microwave"});
            plan.subgoals.push_back({Subgoal::Kind::Heat, cls});
            plan.subgoals.push_back({Subgoal::Kind::Find, in->container_kind});
            plan.subgoals.push_back({Subgoal::Kind::GoTo, in->container_kind});
            plan.subgoals.push_back({Subgoal::Kind::PlaceIn, in->container_kind});
            return plan;
        }
    }
    throw SemanticError({{"UnknownGoalKind", task.id, "no subgoal template for this goal list"}});
}

// ---------------------------------------------------------------------------
// Observation assembly

ObservationBundle observe(const Scene& scene, const AgentPose& pose, const AgentProfile& profile,
                          const DetectionSampler& sampler, bool last_bump) {
    ObservationBundle obs;
    obs.vision = sense_vision(scene, pose, profile.cfg, sampler);
    obs.bump = last_bump;
    if (profile.kind == AgentKind::MapDepth || profile.kind == AgentKind::MapGtDepth)
        obs.depth = sense_depth(scene, pose, profile.cfg);
    if (profile.kind == AgentKind::MapGtDepth)
        obs.gt_depth = sense_gt_depth(scene, pose, profile.cfg);
    return obs;
}

// ---------------------------------------------------------------------------
// Agent policy

Agent::Agent(AgentProfile profile, const TaskSpec& task, AgentPose start, int grid_width,
             int grid_height)
    : profile_(std::move(profile)), plan_(decompose(task)), pose_(start),
      map_(grid_width, grid_height) {}

void Agent::digest_result(const ActionResult& last) {
    if (!last_action_) return;
    const Action& a = *last_action_;

    switch (a.kind) {
        case ActionKind::MoveAhead:
            if (last.success) pose_.cell = pose_.cell + delta(pose_.heading);
            break;
        case ActionKind::RotateLeft:
            pose_.heading = rotate_left(pose_.heading);
            break;
        case ActionKind::RotateRight:
            pose_.heading = rotate_right(pose_.heading);
            break;
        case ActionKind::Pickup:
            if (last.success) {
                held_class_ = a.target;
                if (heat_stage_ == 3) heat_stage_ = 4;
            } else if (last.reason == "no_target" && last_interact_cell_) {
                map_.clear_count(a.target, *last_interact_cell_);
            }
            break;
        case ActionKind::Put:
            if (last.success) {
                if (held_class_ && last_interact_cell_) {
                    deposit_masks_.insert({*held_class_, *last_interact_cell_});
                    map_.clear_count(*held_class_, *last_interact_cell_);
                }
                held_class_.reset();
                if (heat_stage_ == 0) heat_stage_ = 1;
                placed_done_ = true;
            } else if (last.reason == "no_target" && last_interact_cell_) {
                map_.clear_count(a.target, *last_interact_cell_);
            }
            break;
        case ActionKind::ToggleOn:
            if (last.success || last.reason == "already_on") {
                if (a.target == "Lamp") lamp_on_ = true;
                if (heat_stage_ == 1) heat_stage_ = 2;
            } else if (last.reason == "no_target" && last_interact_cell_) {
                map_.clear_count(a.target, *last_interact_cell_);
            }
            break;
        case ActionKind::ToggleOff:
            if (last.success || last.reason == "already_off") {
                if (heat_stage_ == 2) heat_stage_ = 3;
            }
            break;
        case ActionKind::Examine:
            if (last.success) examined_done_ = true;
            else if (last.reason == "no_light") lamp_on_ = false;  // retry the toggle
            break;
        default:
            break;
    }
}

bool Agent::has_sighting(const std::string& cls) const {
    auto it = map_.class_counts.find(cls);
    if (it == map_.class_counts.end()) return false;
    for (uint16_t c : it->second)
        if (c > 0) return true;
    return false;
}

int Agent::reach_cost(Cell target, const std::vector<int>& dist) const {
    int best = std::numeric_limits<int>::max();
    auto consider = [&](Cell c) {
        if (!map_.in_bounds(c)) return;
        int d = dist[map_.index(c)];
        if (d >= 0) best = std::min(best, d);
    };
    for (Direction d : kDirectionOrder) consider(target + delta(d));
    consider(target);
    return best;
}

std::optional<Cell> Agent::best_sighting(const std::string& cls,
                                         const std::vector<int>& dist) const {
    auto it = map_.class_counts.find(cls);
    if (it == map_.class_counts.end()) return std::nullopt;
    std::optional<Cell> best;
    int best_cost = std::numeric_limits<int>::max();
    for (int y = 0; y < map_.height; ++y) {
        for (int x = 0; x < map_.width; ++x) {
            Cell c{x, y};
            if (it->second[map_.index(c)] == 0) continue;
            int cost = reach_cost(c, dist);
            if (cost < best_cost) {  // row-major scan keeps first at equal cost
                best = c;
                best_cost = cost;
            }
        }
    }
    return best;
}

Action Agent::emit(Action a, std::optional<Cell> target) {
    if (a.kind == ActionKind::Pickup || a.kind == ActionKind::Put ||
        a.kind == ActionKind::Open || a.kind == ActionKind::Close ||
        a.kind == ActionKind::ToggleOn || a.kind == ActionKind::ToggleOff ||
        a.kind == ActionKind::Examine) {
        last_interact_cell_ = target ? *target : pose_.cell + delta(pose_.heading);
    } else {
        last_interact_cell_.reset();
    }
    last_action_ = a;
    return a;
}

namespace {

Action rotate_toward(Direction cur, Direction want) {
    int diff = (static_cast<int>(want) - static_cast<int>(cur) + 4) % 4;
    return {diff == 3 ? ActionKind::RotateLeft : ActionKind::RotateRight, ""};
}

}  // namespace

Action Agent::move_along(const std::vector<Cell>& path) {
    if (path.size() < 2) return emit({ActionKind::RotateRight, ""});
    auto dir = direction_between(path[0], path[1]);
    if (!dir) return emit({ActionKind::RotateRight, ""});
    if (pose_.heading == *dir) return emit({ActionKind::MoveAhead, ""});
    return emit(rotate_toward(pose_.heading, *dir));
}

Action Agent::face_or(Cell target, Action when_facing) {
    auto dir = direction_between(pose_.cell, target);
    if (!dir) return emit(std::move(when_facing), target);  // target is the agent's own cell
    if (pose_.heading == *dir) return emit(std::move(when_facing), target);
    return emit(rotate_toward(pose_.heading, *dir));
}

Action Agent::navigate_to_adjacent(const std::string& cls) {
    std::vector<int> dist = distance_field(map_, pose_.cell);
    while (true) {
        auto target = best_sighting(cls, dist);
        if (!target) return explore();
        nav_target_ = target;
        if (manhattan(pose_.cell, *target) <= 1)
            return face_or(*target, {ActionKind::RotateRight, ""});
        int cost = reach_cost(*target, dist);
        if (cost == std::numeric_limits<int>::max()) {
            map_.clear_count(cls, *target);  // unreachable sighting, give it up
            continue;
        }
        // stand on the cheapest reachable cell adjacent to (or on) the target
        Cell stand = *target;
        int stand_cost = std::numeric_limits<int>::max();
        auto consider = [&](Cell c) {
            if (!map_.in_bounds(c)) return;
            int d = dist[map_.index(c)];
            if (d >= 0 && d < stand_cost) {
                stand = c;
                stand_cost = d;
            }
        };
        for (Direction d : kDirectionOrder) consider(*target + delta(d));
        consider(*target);
        auto path = plan_path(map_, pose_.cell, stand);
        if (!path) {
            map_.clear_count(cls, *target);
            continue;
        }
        return move_along(*path);
    }
}

Action Agent::explore() {
    auto frontier = next_frontier(map_, pose_);
    if (!frontier) return patrol();
    nav_target_ = frontier;
    if (*frontier == pose_.cell) {
        for (Direction d : kDirectionOrder) {
            Cell n = pose_.cell + delta(d);
            if (!map_.in_bounds(n)) continue;
            if (map_.at(n) != CellKnowledge::Unknown) continue;
            if (map_.edge_blocked(GridEdge::between(pose_.cell, n))) continue;
            if (pose_.heading == d) return emit({ActionKind::MoveAhead, ""});
            return emit(rotate_toward(pose_.heading, d));
        }
        return emit({ActionKind::RotateRight, ""});
    }
    auto path = plan_path(map_, pose_.cell, *frontier);
    if (!path) return patrol();
    return move_along(*path);
}

// Geometry fully explored but the target still unsighted (detection draws
// under dim light, or a cleared phantom): pace between far corners so the
// ray fan keeps sweeping fresh viewpoints.
Action Agent::patrol() {
    if (patrol_target_ && *patrol_target_ != pose_.cell) {
        auto path = plan_path(map_, pose_.cell, *patrol_target_);
        if (path && path->size() >= 2) {
            nav_target_ = patrol_target_;
            return move_along(*path);
        }
    }
    std::vector<int> dist = distance_field(map_, pose_.cell);
    std::optional<Cell> farthest;
    int best = 0;
    for (int y = 0; y < map_.height; ++y)
        for (int x = 0; x < map_.width; ++x) {
            int d = dist[map_.index({x, y})];
            if (d > best) {
                best = d;
                farthest = Cell{x, y};
            }
        }
    if (!farthest) {
        patrol_target_.reset();
        return emit({ActionKind::RotateRight, ""});
    }
    patrol_target_ = farthest;
    nav_target_ = farthest;
    auto path = plan_path(map_, pose_.cell, *farthest);
    if (!path || path->size() < 2) return emit({ActionKind::RotateRight, ""});
    return move_along(*path);
}

bool Agent::subgoal_complete(const Subgoal& s) const {
    switch (s.kind) {
        case Subgoal::Kind::Find:
            return has_sighting(s.target);
        case Subgoal::Kind::GoTo: {
            auto it = map_.class_counts.find(s.target);
            if (it == map_.class_counts.end()) return false;
            for (int y = 0; y < map_.height; ++y)
                for (int x = 0; x < map_.width; ++x)
                    if (it->second[map_.index({x, y})] > 0 &&
                        manhattan(pose_.cell, {x, y}) <= 1)
                        return true;
            return false;
        }
        case Subgoal::Kind::Pickup:
            return held_class_ == s.target;
        case Subgoal::Kind::PlaceIn:
            return placed_done_;
        case Subgoal::Kind::Heat:
            return heat_stage_ >= 4;
        case Subgoal::Kind::Examine:
            return examined_done_;
    }
    return false;
}

void Agent::advance_cursor() {
    while (plan_.cursor < plan_.subgoals.size() &&
           subgoal_complete(plan_.subgoals[plan_.cursor])) {
        ++plan_.cursor;
        placed_done_ = false;
        if (plan_.cursor < plan_.subgoals.size() &&
            plan_.subgoals[plan_.cursor].kind == Subgoal::Kind::Heat)
            heat_stage_ = 0;
    }
}

Action Agent::act_on_subgoal(const Subgoal& s) {
    switch (s.kind) {
        case Subgoal::Kind::Find:
            return explore();
        case Subgoal::Kind::GoTo:
            return navigate_to_adjacent(s.target);
        case Subgoal::Kind::Pickup: {
            std::vector<int> dist = distance_field(map_, pose_.cell);
            auto target = best_sighting(s.target, dist);
            if (!target) return explore();
            nav_target_ = target;
            if (manhattan(pose_.cell, *target) <= 1)
                return face_or(*target, {ActionKind::Pickup, s.target});
            return navigate_to_adjacent(s.target);
        }
        case Subgoal::Kind::PlaceIn: {
            std::vector<int> dist = distance_field(map_, pose_.cell);
            auto target = best_sighting(s.target, dist);
            if (!target) return explore();
            nav_target_ = target;
            if (manhattan(pose_.cell, *target) <= 1)
                return face_or(*target, {ActionKind::Put, s.target});
            return navigate_to_adjacent(s.target);
        }
        case Subgoal::Kind::Heat: {
            std::vector<int> dist = distance_field(map_, pose_.cell);
            auto mw = best_sighting("Microwave", dist);
            if (!mw) return explore();
            nav_target_ = mw;
            if (manhattan(pose_.cell, *mw) > 1) return navigate_to_adjacent("Microwave");
            Action stage_action;
            switch (heat_stage_) {
                case 0: stage_action = {ActionKind::Put, "Microwave"}; break;
                case 1: stage_action = {ActionKind::ToggleOn, "Microwave"}; break;
                case 2: stage_action = {ActionKind::ToggleOff, "Microwave"}; break;
                default: stage_action = {ActionKind::Pickup, s.target}; break;
            }
            return face_or(*mw, std::move(stage_action));
        }
        case Subgoal::Kind::Examine: {
            std::vector<int> dist = distance_field(map_, pose_.cell);
            auto lamp = best_sighting("Lamp", dist);
            if (!lamp) return explore();
            nav_target_ = lamp;
            if (manhattan(pose_.cell, *lamp) > 1) return navigate_to_adjacent("Lamp");
            if (!lamp_on_) return face_or(*lamp, {ActionKind::ToggleOn, "Lamp"});
            return face_or(*lamp, {ActionKind::Examine, s.target});
        }
    }
    return emit({ActionKind::Stop, ""});
}

Action Agent::step(const ObservationBundle& obs, const ActionResult& last_result) {
    digest_result(last_result);
    update_map(map_, obs, pose_, profile_);
    for (const auto& [cls, cell] : deposit_masks_) map_.clear_count(cls, cell);
    advance_cursor();
    nav_target_.reset();
    if (plan_.cursor >= plan_.subgoals.size()) return emit({ActionKind::Stop, ""});
    return act_on_subgoal(plan_.subgoals[plan_.cursor]);
}

}  // namespace homesim
