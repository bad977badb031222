#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homesim/agent.hpp"
#include "homesim/disturbance.hpp"

namespace homesim {

enum class Outcome : uint8_t { Success, FailLimit, StepBudget };

const char* to_string(Outcome o);
std::optional<Outcome> outcome_from_string(std::string_view s);

struct StepRecord {
    Action action;
    bool success = true;
    bool bump = false;
    AgentPose pose_after;
    int cursor_after = 0;
    int detections = 0;
    int phantoms = 0;
    std::optional<Cell> phantom_cell;  // apparent cell of the first phantom detection
    std::optional<Cell> nav_target;
};

/// Self-contained, replayable record of one episode: the disturbed initial
/// scene and the task are embedded verbatim so a log file alone suffices to
/// reproduce the run.
struct EpisodeLog {
    int schema_version = 1;
    std::string task_id;
    int variant = 0;
    int start = 0;
    std::string condition;
    std::string profile;
    uint64_t seed = 0;
    SensorConfig sensor;
    int fail_limit = 10;
    int step_budget = 500;
    std::string scene_text;  // canonical serialization of the initial scene
    std::string task_text;   // canonical serialization of the task
    AgentPose start_pose;
    std::vector<StepRecord> steps;
    int failed_actions = 0;
    Outcome outcome = Outcome::StepBudget;
    std::vector<bool> subgoals_done;
    std::string final_scene_digest;
};

/// Side products of a run that the log does not carry.
struct EpisodeArtifacts {
    SemanticMap final_map;
    std::vector<Cell> trajectory;  // start cell plus pose after every step
    Scene final_scene;
};

/// Runs one seeded episode to termination: goal success, fail_limit failed
/// actions, or the step budget (an agent Stop forfeits the remaining
/// budget and counts as StepBudget).
EpisodeLog run_episode(const Scene& scene, const TaskSpec& task, int variant, int start_idx,
                       const std::string& condition_label, const AgentProfile& profile,
                       uint64_t seed, int step_budget, EpisodeArtifacts* artifacts = nullptr);

/// Re-executes a log from its embedded inputs; the returned log must equal
/// the input byte-for-byte when serialized.
EpisodeLog replay(const EpisodeLog& log, EpisodeArtifacts* artifacts = nullptr);

/// Fraction of subgoals completed (1.0 for an empty plan).
double subgoal_progress(const EpisodeLog& log);

// JSON serialization (schema_version 1).
std::string log_to_json(const EpisodeLog& log);
EpisodeLog log_from_json(const std::string& text);

}  // namespace homesim
