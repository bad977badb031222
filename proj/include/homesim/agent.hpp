#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homesim/semantic_map.hpp"
#include "homesim/task.hpp"

namespace homesim {

enum class ActionKind : uint8_t {
    MoveAhead,
    RotateLeft,
    RotateRight,
    Pickup,
    Put,
    Open,
    Close,
    ToggleOn,
    ToggleOff,
    Examine,
    Stop,
};

/// A discrete agent action. `target` names an object class, an appliance
/// kind, or an appliance id, resolved against the faced/current cell.
struct Action {
    ActionKind kind = ActionKind::Stop;
    std::string target;

    friend bool operator==(const Action&, const Action&) = default;
};

std::string to_string(const Action& a);
std::optional<Action> action_from_string(std::string_view s);

struct ActionResult {
    bool success = true;
    bool bump = false;       // a blocked MoveAhead
    std::string reason;      // failure cause, empty on success
};

/// Environment-side world state owned by one episode.
struct WorldState {
    Scene scene;
    AgentPose pose;
    std::optional<std::string> held_id;
};

/// Applies one action to the world. Failures leave the state unchanged and
/// report success=false (bump=true for blocked moves); malformed actions
/// fail the same way rather than throwing.
ActionResult execute_action(WorldState& world, const Action& action);

// ---------------------------------------------------------------------------
// Subgoals

struct Subgoal {
    enum class Kind : uint8_t { Find, GoTo, Pickup, PlaceIn, Heat, Examine };
    Kind kind = Kind::Find;
    std::string target;  // object class or appliance kind

    friend bool operator==(const Subgoal&, const Subgoal&) = default;
};

std::string to_string(const Subgoal& s);

struct SubgoalPlan {
    std::vector<Subgoal> subgoals;
    size_t cursor = 0;
};

/// Deterministic template expansion of a task's goal list; see
/// docs/FORMATS.md for the template table. Throws SemanticError for goal
/// combinations with no template.
SubgoalPlan decompose(const TaskSpec& task);

// ---------------------------------------------------------------------------
// Observation assembly

/// Builds the observation bundle for a profile: vision always; depth for
/// MapDepth and MapGtDepth; gt_depth for MapGtDepth only.
ObservationBundle observe(const Scene& scene, const AgentPose& pose, const AgentProfile& profile,
                          const DetectionSampler& sampler, bool last_bump);

// ---------------------------------------------------------------------------
// Agent

/// Classical mapping-and-search agent. Dead-reckons its pose (moves either
/// succeed or leave it in place), folds observations into a semantic map,
/// and works through the subgoal plan with BFS navigation and frontier
/// exploration. Deterministic given (profile, task, start, seed).
class Agent {
public:
    /// Grid dimensions size the semantic map; the scene itself stays
    /// hidden. The policy is deterministic and carries no private RNG.
    Agent(AgentProfile profile, const TaskSpec& task, AgentPose start, int grid_width,
          int grid_height);

    /// One decision step: digest the previous action's result plus the new
    /// observation, then emit the next action.
    Action step(const ObservationBundle& obs, const ActionResult& last_result);

    const AgentProfile& profile() const { return profile_; }
    const SemanticMap& map() const { return map_; }
    const SubgoalPlan& plan() const { return plan_; }
    size_t cursor() const { return plan_.cursor; }
    AgentPose pose() const { return pose_; }
    std::optional<Cell> nav_target() const { return nav_target_; }

private:
    void digest_result(const ActionResult& last);
    void advance_cursor();
    bool subgoal_complete(const Subgoal& s) const;

    bool has_sighting(const std::string& cls) const;
    std::optional<Cell> best_sighting(const std::string& cls, const std::vector<int>& dist) const;
    int reach_cost(Cell target, const std::vector<int>& dist) const;

    Action emit(Action a, std::optional<Cell> target = std::nullopt);
    Action move_along(const std::vector<Cell>& path);
    Action face_or(Cell target, Action when_facing);
    Action navigate_to_adjacent(const std::string& cls);
    Action explore();
    Action patrol();
    Action act_on_subgoal(const Subgoal& s);

    AgentProfile profile_;
    SubgoalPlan plan_;
    AgentPose pose_;
    SemanticMap map_;
    std::optional<std::string> held_class_;
    std::set<std::pair<std::string, Cell>> deposit_masks_;  // own placements, ignored as targets
    int heat_stage_ = 0;
    bool lamp_on_ = false;
    bool examined_done_ = false;
    bool placed_done_ = false;
    std::optional<Action> last_action_;
    std::optional<Cell> last_interact_cell_;
    std::optional<Cell> nav_target_;
    std::optional<Cell> patrol_target_;
};

}  // namespace homesim
