#pragma once

#include <array>
#include <string>
#include <vector>

#include "homesim/scene.hpp"
#include "homesim/util.hpp"

namespace homesim {

struct GoalCondition {
    enum class Kind : uint8_t { ObjectIn, ObjectState, TwoObjectsIn, ExaminedInLight };
    Kind kind = Kind::ObjectIn;
    std::string object_class;
    std::string container_kind;  // ObjectIn / TwoObjectsIn
    std::string flag;            // ObjectState: heated|cleaned|cooled|examined

    friend bool operator==(const GoalCondition&, const GoalCondition&) = default;
};

std::string to_string(const GoalCondition& g);

/// A declarative task: goals over one floorplan, three labelled goal
/// phrasings (metadata only), and four fixed start poses.
struct TaskSpec {
    std::string id;
    std::string floorplan;  // path as written in the task file
    std::vector<GoalCondition> goals;
    std::array<std::string, 3> variants;
    std::array<AgentPose, 4> starts;
};

TaskSpec parse_task(std::string_view text);
std::string serialize_task(const TaskSpec& task);

/// Structural checks; pass the floorplan scene to also verify starts are in
/// bounds and referenced classes/kinds exist.
std::vector<Violation> validate_task(const TaskSpec& task, const Scene* scene = nullptr,
                                     int min_start_dist = 3);

/// Evaluates each goal condition against the scene state, in order.
std::vector<bool> check_goal(const Scene& scene, const TaskSpec& task);

bool task_success(const Scene& scene, const TaskSpec& task);

/// Rejection-samples n distinct reachable poses (not on appliance cells,
/// pairwise Manhattan distance >= min_dist, mutually connected). Throws
/// SemanticError naming the constraint when 10,000 draws do not suffice.
std::vector<AgentPose> generate_start_positions(const Scene& scene, int n, int min_dist,
                                                Rng& rng);

}  // namespace homesim
