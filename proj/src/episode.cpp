#include "homesim/episode.hpp"

#include <algorithm>

#include "json.hpp"

namespace homesim {

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Success: return "success";
        case Outcome::FailLimit: return "fail_limit";
        case Outcome::StepBudget: return "step_budget";
    }
    return "step_budget";
}

std::optional<Outcome> outcome_from_string(std::string_view s) {
    if (s == "success") return Outcome::Success;
    if (s == "fail_limit") return Outcome::FailLimit;
    if (s == "step_budget") return Outcome::StepBudget;
    return std::nullopt;
}

EpisodeLog run_episode(const Scene& scene, const TaskSpec& task, int variant, int start_idx,
                       const std::string& condition_label, const AgentProfile& profile,
                       uint64_t seed, int step_budget, EpisodeArtifacts* artifacts) {
    EpisodeLog log;
    log.task_id = task.id;
    log.variant = variant;
    log.start = start_idx;
    log.condition = condition_label;
    log.profile = to_string(profile.kind);
    log.seed = seed;
    log.sensor = profile.cfg;
    log.fail_limit = profile.fail_limit;
    log.step_budget = step_budget;
    log.scene_text = serialize_scene(scene);
    log.task_text = serialize_task(task);
    log.start_pose = task.starts.at(static_cast<size_t>(start_idx));

    WorldState world{scene, log.start_pose, std::nullopt};
    Agent agent(profile, task, world.pose, scene.width, scene.height);
    ActionResult last{true, false, ""};
    std::vector<Cell> trajectory{world.pose.cell};

    log.outcome = Outcome::StepBudget;
    for (int step = 0; step < step_budget; ++step) {
        if (task_success(world.scene, task)) {
            log.outcome = Outcome::Success;
            break;
        }
        DetectionSampler sampler{seed, step};
        ObservationBundle obs = observe(world.scene, world.pose, profile, sampler, last.bump);

        StepRecord rec;
        rec.detections = static_cast<int>(obs.vision.size());
        for (const auto& det : obs.vision) {
            if (!det.phantom) continue;
            ++rec.phantoms;
            if (!rec.phantom_cell) rec.phantom_cell = cell_of(apparent_point(world.pose, det));
        }

        Action act = agent.step(obs, last);
        rec.action = act;
        rec.nav_target = agent.nav_target();
        if (act.kind == ActionKind::Stop) {
            rec.success = true;
            rec.pose_after = world.pose;
            rec.cursor_after = static_cast<int>(agent.cursor());
            log.steps.push_back(std::move(rec));
            break;  // agent gave up; remaining budget is forfeited
        }
        last = execute_action(world, act);
        if (!last.success) ++log.failed_actions;

        rec.success = last.success;
        rec.bump = last.bump;
        rec.pose_after = world.pose;
        rec.cursor_after = static_cast<int>(agent.cursor());
        log.steps.push_back(std::move(rec));
        trajectory.push_back(world.pose.cell);

        if (log.failed_actions >= profile.fail_limit) {
            log.outcome = Outcome::FailLimit;
            break;
        }
    }
    if (log.outcome == Outcome::StepBudget && task_success(world.scene, task))
        log.outcome = Outcome::Success;

    size_t total = agent.plan().subgoals.size();
    log.subgoals_done.assign(total, false);
    size_t done = log.outcome == Outcome::Success ? total : std::min(agent.cursor(), total);
    for (size_t i = 0; i < done; ++i) log.subgoals_done[i] = true;

    log.final_scene_digest = scene_digest(world.scene);

    if (artifacts) {
        artifacts->final_map = agent.map();
        artifacts->trajectory = std::move(trajectory);
        artifacts->final_scene = std::move(world.scene);
    }
    return log;
}

EpisodeLog replay(const EpisodeLog& log, EpisodeArtifacts* artifacts) {
    Scene scene = parse_scene(log.scene_text);
    TaskSpec task = parse_task(log.task_text);
    AgentProfile profile;
    auto kind = agent_kind_from_string(log.profile);
    if (!kind) throw SemanticError({{"UnknownProfile", log.profile, "unknown agent profile"}});
    profile.kind = *kind;
    profile.cfg = log.sensor;
    profile.fail_limit = log.fail_limit;
    return run_episode(scene, task, log.variant, log.start, log.condition, profile, log.seed,
                       log.step_budget, artifacts);
}

double subgoal_progress(const EpisodeLog& log) {
    if (log.subgoals_done.empty()) return 1.0;
    size_t done = static_cast<size_t>(
        std::count(log.subgoals_done.begin(), log.subgoals_done.end(), true));
    return static_cast<double>(done) / static_cast<double>(log.subgoals_done.size());
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json pose_to_json(const AgentPose& p) {
    return json{{"x", p.cell.x}, {"y", p.cell.y}, {"heading", to_string(p.heading)}};
}

AgentPose pose_from_json(const json& j) {
    AgentPose p;
    p.cell = {j.at("x").get<int>(), j.at("y").get<int>()};
    auto h = direction_from_string(j.at("heading").get<std::string>());
    if (!h) throw ParseError(1, "bad heading in log");
    p.heading = *h;
    return p;
}

json cell_to_json(const Cell& c) { return json::array({c.x, c.y}); }

Cell cell_from_json(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

}  // namespace

std::string log_to_json(const EpisodeLog& log) {
    json j;
    j["schema_version"] = log.schema_version;
    j["task_id"] = log.task_id;
    j["variant"] = log.variant;
    j["start"] = log.start;
    j["condition"] = log.condition;
    j["profile"] = log.profile;
    j["seed"] = log.seed;
    j["sensor"] = json{{"fov", log.sensor.fov_deg},
                       {"ray_count", log.sensor.ray_count},
                       {"max_range", log.sensor.max_range},
                       {"light_floor", log.sensor.light_floor},
                       {"reflection_cap", log.sensor.reflection_cap}};
    j["fail_limit"] = log.fail_limit;
    j["step_budget"] = log.step_budget;
    j["scene"] = log.scene_text;
    j["task"] = log.task_text;
    j["start_pose"] = pose_to_json(log.start_pose);
    json steps = json::array();
    for (const auto& s : log.steps) {
        json js;
        js["action"] = to_string(s.action);
        js["ok"] = s.success;
        js["bump"] = s.bump;
        js["pose"] = pose_to_json(s.pose_after);
        js["cursor"] = s.cursor_after;
        js["det"] = s.detections;
        js["phantoms"] = s.phantoms;
        js["phantom_cell"] = s.phantom_cell ? cell_to_json(*s.phantom_cell) : json(nullptr);
        js["nav_target"] = s.nav_target ? cell_to_json(*s.nav_target) : json(nullptr);
        steps.push_back(std::move(js));
    }
    j["steps"] = std::move(steps);
    j["failed_actions"] = log.failed_actions;
    j["outcome"] = to_string(log.outcome);
    j["subgoals_done"] = log.subgoals_done;
    j["final_scene_digest"] = log.final_scene_digest;
    return j.dump(1) + "\n";
}

EpisodeLog log_from_json(const std::string& text) {
    EpisodeLog log;
    try {
        json j = json::parse(text);
        log.schema_version = j.at("schema_version").get<int>();
        if (log.schema_version != 1)
            throw ParseError(1, "unsupported log schema_version " +
                                    std::to_string(log.schema_version));
        log.task_id = j.at("task_id").get<std::string>();
        log.variant = j.at("variant").get<int>();
        log.start = j.at("start").get<int>();
        log.condition = j.at("condition").get<std::string>();
        log.profile = j.at("profile").get<std::string>();
        log.seed = j.at("seed").get<uint64_t>();
        const json& s = j.at("sensor");
        log.sensor.fov_deg = s.at("fov").get<double>();
        log.sensor.ray_count = s.at("ray_count").get<int>();
        log.sensor.max_range = s.at("max_range").get<double>();
        log.sensor.light_floor = s.at("light_floor").get<double>();
        log.sensor.reflection_cap = s.at("reflection_cap").get<int>();
        log.fail_limit = j.at("fail_limit").get<int>();
        log.step_budget = j.at("step_budget").get<int>();
        log.scene_text = j.at("scene").get<std::string>();
        log.task_text = j.at("task").get<std::string>();
        log.start_pose = pose_from_json(j.at("start_pose"));
        for (const json& js : j.at("steps")) {
            StepRecord rec;
            auto act = action_from_string(js.at("action").get<std::string>());
            if (!act) throw ParseError(1, "bad action in log");
            rec.action = *act;
            rec.success = js.at("ok").get<bool>();
            rec.bump = js.at("bump").get<bool>();
            rec.pose_after = pose_from_json(js.at("pose"));
            rec.cursor_after = js.at("cursor").get<int>();
            rec.detections = js.at("det").get<int>();
            rec.phantoms = js.at("phantoms").get<int>();
            if (!js.at("phantom_cell").is_null())
                rec.phantom_cell = cell_from_json(js.at("phantom_cell"));
            if (!js.at("nav_target").is_null())
                rec.nav_target = cell_from_json(js.at("nav_target"));
            log.steps.push_back(std::move(rec));
        }
        log.failed_actions = j.at("failed_actions").get<int>();
        auto oc = outcome_from_string(j.at("outcome").get<std::string>());
        if (!oc) throw ParseError(1, "bad outcome in log");
        log.outcome = *oc;
        log.subgoals_done = j.at("subgoals_done").get<std::vector<bool>>();
        log.final_scene_digest = j.at("final_scene_digest").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("log json: ") + e.what());
    }
    return log;
}

}  // namespace homesim
