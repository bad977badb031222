#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "homesim/episode.hpp"

using namespace homesim;

namespace {

TaskSpec mini_task(std::string goals, const std::string& floorplan = "x.scene") {
    std::string text = "task mini floorplan=" + floorplan + "\n" + goals +
                       "variant \"a\"\nvariant \"b\"\nvariant \"c\"\n"
                       "start 0 0 east\nstart 3 0 west\nstart 0 3 south\nstart 3 3 north\n";
    return parse_task(text);
}

}  // namespace

TEST_CASE("execute_action: moving into glass bumps and leaves the pose alone") {
    Scene s = parse_scene("size 4 1\nwall 1 0 2 0 glass\n");
    WorldState w{s, {{1, 0}, Direction::East}, std::nullopt};
    ActionResult r = execute_action(w, {ActionKind::MoveAhead, ""});
    CHECK(!r.success);
    CHECK(r.bump);
    CHECK(w.pose.cell == Cell{1, 0});
    // sideways moves blocked by the boundary bump as well
    w.pose.heading = Direction::North;
    r = execute_action(w, {ActionKind::MoveAhead, ""});
    CHECK(r.bump);
}

TEST_CASE("execute_action: pickup moves the instance into the hand") {
    Scene s = parse_scene("size 4 1\nobject plate_1 Plate 2 0\n");
    WorldState w{s, {{1, 0}, Direction::East}, std::nullopt};
    ActionResult r = execute_action(w, {ActionKind::Pickup, "Plate"});
    CHECK(r.success);
    REQUIRE(w.held_id.has_value());
    CHECK(*w.held_id == "plate_1");
    const ObjectInstance* o = w.scene.find_object("plate_1");
    CHECK(o->held);
    CHECK(!o->cell.has_value());
    // a second pickup fails: hands full
    CHECK(!execute_action(w, {ActionKind::Pickup, "Plate"}).success);
}

TEST_CASE("execute_action: put with empty hands fails instead of crashing") {
    Scene s = parse_scene("size 4 1\nappliance sink Sink 2 0\n");
    WorldState w{s, {{1, 0}, Direction::East}, std::nullopt};
    ActionResult r = execute_action(w, {ActionKind::Put, "Sink"});
    CHECK(!r.success);
    CHECK(r.reason == "hands_empty");
}

TEST_CASE("execute_action: the microwave cycle heats whatever is inside") {
    Scene s = parse_scene(
        "size 4 1\nappliance mw Microwave 2 0 open off\nobject plate_1 Plate 1 0\n");
    WorldState w{s, {{1, 0}, Direction::East}, std::nullopt};
    REQUIRE(execute_action(w, {ActionKind::Pickup, "Plate"}).success);  // own cell works
    REQUIRE(execute_action(w, {ActionKind::Put, "Microwave"}).success);
    CHECK(!w.scene.find_object("plate_1")->heated);
    REQUIRE(execute_action(w, {ActionKind::ToggleOn, "Microwave"}).success);
    CHECK(!execute_action(w, {ActionKind::ToggleOn, "Microwave"}).success);  // already_on
    REQUIRE(execute_action(w, {ActionKind::ToggleOff, "Microwave"}).success);
    CHECK(w.scene.find_object("plate_1")->heated);
    REQUIRE(execute_action(w, {ActionKind::Pickup, "Plate"}).success);
    CHECK(w.scene.find_object("plate_1")->held);
    CHECK(w.scene.find_object("plate_1")->heated);
}

TEST_CASE("execute_action: closed containers block put, pickup, and sight of contents") {
    Scene s = parse_scene("size 4 1\nappliance fr Fridge 2 0 closed\nobject b Bottle 2 0 in=fr\n");
    WorldState w{s, {{1, 0}, Direction::East}, std::nullopt};
    CHECK(execute_action(w, {ActionKind::Pickup, "Bottle"}).reason == "no_target");
    REQUIRE(execute_action(w, {ActionKind::Open, "Fridge"}).success);
    CHECK(execute_action(w, {ActionKind::Open, "Fridge"}).reason == "already_open");
    CHECK(execute_action(w, {ActionKind::Pickup, "Bottle"}).success);
    CHECK(execute_action(w, {ActionKind::Put, "Fridge"}).success);
    REQUIRE(execute_action(w, {ActionKind::Close, "Fridge"}).success);
    CHECK(execute_action(w, {ActionKind::Pickup, "Bottle"}).reason == "no_target");
}

TEST_CASE("execute_action: examine needs a lit lamp within reach") {
    Scene s = parse_scene(
        "size 6 1\nappliance lamp Lamp 2 0 off\nobject book_1 Book 1 0\n");
    WorldState w{s, {{1, 0}, Direction::East}, std::nullopt};
    CHECK(execute_action(w, {ActionKind::Examine, "Book"}).reason == "no_light");
    REQUIRE(execute_action(w, {ActionKind::ToggleOn, "Lamp"}).success);
    CHECK(execute_action(w, {ActionKind::Examine, "Book"}).success);
    CHECK(w.scene.find_object("book_1")->examined);
}

TEST_CASE("decompose: pick-and-place expands to five subgoals ending in PlaceIn") {
    auto plan = decompose(mini_task("goal objectin Bottle CounterTop\n"));
    REQUIRE(plan.subgoals.size() == 5);
    CHECK(plan.subgoals.front() == Subgoal{Subgoal::Kind::Find, "Bottle"});
    CHECK(plan.subgoals.back() == Subgoal{Subgoal::Kind::PlaceIn, "CounterTop"});
}

TEST_CASE("decompose: heat-and-place expands to the nine-step template") {
    auto plan = decompose(mini_task("goal state Plate heated\ngoal objectin Plate Sink\n"));
    std::vector<Subgoal> want{
        {Subgoal::Kind::Find, "Plate"},     {Subgoal::Kind::GoTo, "Plate"},
        {Subgoal::Kind::Pickup, "Plate"},   {Subgoal::Kind::Find, "Microwave"},
        {Subgoal::Kind::GoTo, "Microwave"}, {Subgoal::Kind::Heat, "Plate"},
        {Subgoal::Kind::Find, "Sink"},      {Subgoal::Kind::GoTo, "Sink"},
        {Subgoal::Kind::PlaceIn, "Sink"}};
    CHECK(plan.subgoals == want);
}

TEST_CASE("decompose: pick-two doubles the cycle, examine ends in Examine, empty stays empty") {
    CHECK(decompose(mini_task("goal twoin Mug CounterTop\n")).subgoals.size() == 10);
    auto exam = decompose(mini_task("goal examined Book\n")).subgoals;
    REQUIRE(exam.size() == 5);
    CHECK(exam.back() == Subgoal{Subgoal::Kind::Examine, "Book"});
    CHECK(decompose(mini_task("")).subgoals.empty());
    CHECK_THROWS_AS(decompose(mini_task("goal state Plate cleaned\ngoal objectin Mug Sink\n")),
                    SemanticError);
}

namespace {

EpisodeLog run_mini(const std::string& scene_text, const std::string& goals, AgentKind kind,
                    AgentPose start, int budget = 120) {
    Scene scene = parse_scene(scene_text);
    TaskSpec task = mini_task(goals);
    task.starts[0] = start;
    AgentProfile profile{kind, SensorConfig{}, 10};
    return run_episode(scene, task, 0, 0, "test", profile, 42, budget);
}

}  // namespace

TEST_CASE("agent steps straight at a visible target one cell ahead") {
    EpisodeLog log = run_mini("size 6 3\nlight 1\nobject b Bottle 3 1\nappliance c CounterTop 5 1\n",
                              "goal objectin Bottle CounterTop\n", AgentKind::VisionOnly,
                              {{1, 1}, Direction::East});
    REQUIRE(!log.steps.empty());
    CHECK(log.steps[0].action == Action{ActionKind::MoveAhead, ""});
    CHECK(log.outcome == Outcome::Success);
}

TEST_CASE("vision-only agent walks into unseen glass; gt-depth agent never does") {
    std::string scene_text =
        "size 6 2\nlight 1\nwall 2 0 3 0 glass\nobject b Bottle 4 0\nappliance c CounterTop 5 0\n";
    EpisodeLog blind = run_mini(scene_text, "goal objectin Bottle CounterTop\n",
                                AgentKind::VisionOnly, {{1, 0}, Direction::East});
    bool bumped_glass = false;
    for (const auto& st : blind.steps)
        if (st.bump && st.pose_after.cell == Cell{2, 0}) bumped_glass = true;
    CHECK(bumped_glass);
    CHECK(blind.outcome == Outcome::Success);  // bump learning routes it around

    EpisodeLog sighted = run_mini(scene_text, "goal objectin Bottle CounterTop\n",
                                  AgentKind::MapGtDepth, {{1, 0}, Direction::East});
    for (const auto& st : sighted.steps) CHECK(!st.bump);
    CHECK(sighted.outcome == Outcome::Success);
}

TEST_CASE("bump learning is permanent: no edge is bumped twice") {
    std::string scene_text =
        "size 6 2\nlight 1\nwall 2 0 3 0 glass\nwall 2 1 3 1 glass\nobject b Bottle 4 0\n"
        "appliance c CounterTop 5 0\n";
    EpisodeLog log = run_mini(scene_text, "goal objectin Bottle CounterTop\n",
                              AgentKind::VisionOnly, {{1, 0}, Direction::East}, 200);
    std::set<std::pair<Cell, Direction>> bumped;
    for (const auto& st : log.steps) {
        if (!st.bump) continue;
        auto key = std::make_pair(st.pose_after.cell, st.pose_after.heading);
        CHECK(bumped.insert(key).second);
    }
}

TEST_CASE("pick-two task places two distinct mugs") {
    EpisodeLog log = run_mini(
        "size 6 3\nlight 1\nobject m1 Mug 2 0\nobject m2 Mug 4 2\nappliance c CounterTop 5 1\n",
        "goal twoin Mug CounterTop\n", AgentKind::MapGtDepth, {{0, 1}, Direction::East}, 200);
    CHECK(log.outcome == Outcome::Success);
    Scene final_scene = parse_scene(log.scene_text);
    // replay to regain the final scene and count mugs in the counter
    EpisodeArtifacts art;
    replay(log, &art);
    int inside = 0;
    for (const auto& o : art.final_scene.objects)
        if (o.inside_id == "c") ++inside;
    CHECK(inside == 2);
}

TEST_CASE("examine task turns the lamp on and flags the book") {
    EpisodeLog log = run_mini(
        "size 6 3\nlight 1\nobject book_1 Book 2 0\nappliance lamp Lamp 5 2 off\n",
        "goal examined Book\n", AgentKind::MapGtDepth, {{0, 0}, Direction::East}, 200);
    CHECK(log.outcome == Outcome::Success);
    EpisodeArtifacts art;
    replay(log, &art);
    CHECK(art.final_scene.find_object("book_1")->examined);
    CHECK(art.final_scene.find_appliance("lamp")->is_on.value_or(false));
}

TEST_CASE("episode terminates only by success, fail limit, or step budget") {
    // hopeless goal: no Bottle exists, so the agent explores, then patrols
    // viewpoints until the step budget runs out
    EpisodeLog log = run_mini("size 4 2\nlight 1\nobject p Plate 2 0\nappliance c CounterTop 3 1\n",
                              "goal objectin Bottle CounterTop\n", AgentKind::MapGtDepth,
                              {{0, 0}, Direction::East}, 300);
    CHECK(log.outcome == Outcome::StepBudget);
    CHECK(log.failed_actions < 10);
    CHECK(log.steps.size() == 300);
}

TEST_CASE("fail limit cuts the episode at exactly the configured count") {
    // a box of glass around the goal: every approach bumps
    std::string scene_text =
        "size 6 6\nlight 1\n"
        "wall 2 2 2 1 glass\nwall 2 2 2 3 glass\nwall 2 2 1 2 glass\nwall 2 2 3 2 glass\n"
        "object b Bottle 2 2\nappliance c CounterTop 5 5\n";
    Scene scene = parse_scene(scene_text);
    TaskSpec task = mini_task("goal objectin Bottle CounterTop\n");
    task.starts[0] = {{0, 0}, Direction::East};
    AgentProfile profile{AgentKind::VisionOnly, SensorConfig{}, 4};
    EpisodeLog log = run_episode(scene, task, 0, 0, "test", profile, 7, 400);
    CHECK(log.outcome == Outcome::FailLimit);
    CHECK(log.failed_actions == 4);
}

TEST_CASE("a failed own-cell pickup clears the stale sighting under the agent") {
    // fabricate a sighting at the agent's own cell with no object behind it;
    // after the failed grab the agent must stop re-targeting that cell
    Scene scene = parse_scene("size 5 1\nlight 0\nappliance c CounterTop 4 0\n");
    TaskSpec task = mini_task("goal objectin Bottle CounterTop\n");
    AgentProfile profile{AgentKind::VisionOnly, SensorConfig{}, 10};
    Agent agent(profile, task, {{1, 0}, Direction::East}, 5, 1);

    ObservationBundle obs;
    obs.vision.push_back({"Bottle", 0.2, 0.0, false});  // apparent cell = own cell
    Action first = agent.step(obs, {true, false, ""});
    CHECK(first == Action{ActionKind::Pickup, "Bottle"});

    WorldState world{scene, {{1, 0}, Direction::East}, std::nullopt};
    ActionResult fail = execute_action(world, first);
    CHECK(fail.reason == "no_target");

    ObservationBundle empty;
    Action second = agent.step(empty, fail);
    CHECK(second.kind != ActionKind::Pickup);
    CHECK(agent.map().count("Bottle", {1, 0}) == 0);
}

TEST_CASE("action strings round-trip") {
    for (Action a : {Action{ActionKind::MoveAhead, ""}, Action{ActionKind::Pickup, "Plate"},
                     Action{ActionKind::ToggleOn, "Microwave"}, Action{ActionKind::Stop, ""}}) {
        auto back = action_from_string(to_string(a));
        REQUIRE(back.has_value());
        CHECK(*back == a);
    }
    CHECK(!action_from_string("Fly away").has_value());
}
