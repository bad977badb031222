#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "homesim/episode.hpp"
#include "homesim/harness.hpp"

using namespace homesim;

namespace {

const char* kTaskDir = "data/tasks";

std::vector<std::string> corpus_task_files() {
    std::vector<std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(kTaskDir))
        if (entry.path().extension() == ".task") out.push_back(entry.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

Scene floorplan_of(const std::string& task_file, const TaskSpec& task) {
    auto path = std::filesystem::path(task_file).parent_path() / task.floorplan;
    return parse_scene(read_file(path.string()));
}

}  // namespace

TEST_CASE("every bundled task parses, validates, and serializes canonically") {
    auto files = corpus_task_files();
    REQUIRE(files.size() == 7);  // six kitchen tasks plus the mirror fixture
    for (const auto& f : files) {
        INFO("task file: " << f);
        std::string text = read_file(f);
        TaskSpec t = parse_task(text);
        CHECK(serialize_task(t) == text);
        Scene scene = floorplan_of(f, t);
        CHECK(validate_task(t, &scene).empty());
        CHECK_NOTHROW(decompose(t));
    }
}

TEST_CASE("task grammar rejects wrong variant/start counts") {
    CHECK_THROWS_AS(parse_task("task t floorplan=x\nvariant \"a\"\nstart 0 0 north\n"),
                    SemanticError);
    CHECK_THROWS_AS(parse_task("nonsense\n"), ParseError);
}

TEST_CASE("check_goal on the warm-plate task flips with the microwave sequence") {
    TaskSpec task = parse_task(read_file("data/tasks/heat_place_plate.task"));
    Scene scene = floorplan_of("data/tasks/heat_place_plate.task", task);
    CHECK(check_goal(scene, task) == std::vector<bool>{false, false});

    // drive the world directly through pickup -> microwave cycle -> sink
    WorldState w{scene, {{3, 1}, Direction::North}, std::nullopt};
    REQUIRE(execute_action(w, {ActionKind::Pickup, "Plate"}).success);  // plate_1 at (3,2)
    w.pose = {{6, 8}, Direction::North};                                // in front of the microwave
    REQUIRE(execute_action(w, {ActionKind::Put, "Microwave"}).success);
    REQUIRE(execute_action(w, {ActionKind::ToggleOn, "Microwave"}).success);
    REQUIRE(execute_action(w, {ActionKind::ToggleOff, "Microwave"}).success);
    REQUIRE(execute_action(w, {ActionKind::Pickup, "Plate"}).success);
    CHECK(check_goal(w.scene, task) == std::vector<bool>{true, false});
    w.pose = {{1, 8}, Direction::North};  // in front of the sink
    REQUIRE(execute_action(w, {ActionKind::Put, "Sink"}).success);
    CHECK(check_goal(w.scene, task) == std::vector<bool>{true, true});
    CHECK(task_success(w.scene, task));
}

TEST_CASE("empty goal list is vacuously successful") {
    TaskSpec t;
    t.id = "empty";
    Scene s = parse_scene("size 2 2\n");
    CHECK(check_goal(s, t).empty());
    CHECK(task_success(s, t));
}

TEST_CASE("subgoal progress counts the completed prefix") {
    EpisodeLog log;
    log.subgoals_done = {true, true, false, false, false, false, false, false, false};
    CHECK(subgoal_progress(log) == doctest::Approx(2.0 / 9.0));
    log.subgoals_done.assign(9, true);
    CHECK(subgoal_progress(log) == doctest::Approx(1.0));
    log.subgoals_done.clear();
    CHECK(subgoal_progress(log) == doctest::Approx(1.0));  // empty plan
    log.subgoals_done.assign(5, false);
    CHECK(subgoal_progress(log) == doctest::Approx(0.0));  // zero-step episode
}

TEST_CASE("generate_start_positions: feasible requests hold their contract") {
    Scene scene = parse_scene(read_file("data/scenes/kitchen.scene"));
    Rng rng(2718);
    auto one = generate_start_positions(scene, 1, 3, rng);
    REQUIRE(one.size() == 1);
    CHECK(scene.in_bounds(one[0].cell));

    Rng rng2(3141);
    auto four = generate_start_positions(scene, 4, 3, rng2);
    REQUIRE(four.size() == 4);
    for (size_t i = 0; i < four.size(); ++i) {
        CHECK(scene.in_bounds(four[i].cell));
        for (const auto& a : scene.appliances) CHECK(four[i].cell != a.cell);
        for (size_t j = i + 1; j < four.size(); ++j)
            CHECK(manhattan(four[i].cell, four[j].cell) >= 3);
    }

    // determinism per seed
    Rng rng3(3141);
    auto again = generate_start_positions(scene, 4, 3, rng3);
    for (size_t i = 0; i < 4; ++i) CHECK(four[i] == again[i]);
}

TEST_CASE("generate_start_positions: impossible spacing reports infeasibility") {
    Scene scene = parse_scene(read_file("data/scenes/kitchen.scene"));
    Rng rng(1);
    CHECK_THROWS_WITH_AS(generate_start_positions(scene, 4, 100, rng),
                         doctest::Contains("min_dist"), SemanticError);
}

TEST_CASE("corpus matrix arithmetic: six tasks make 72 episodes per condition") {
    RunConfig cfg = load_run_config("data/experiments/glasswall.cfg");
    CHECK(cfg.tasks.size() == 6);
    CHECK(matrix_cardinality(cfg) ==
          6 * 3 * 4 * cfg.conditions.size() * cfg.profiles.size());
    CHECK(matrix_cardinality(cfg) / (cfg.conditions.size() * cfg.profiles.size()) == 72);
}

TEST_CASE("selection criterion: the gt-depth agent solves every bundled task undisturbed") {
    RunConfig cfg = load_run_config("data/experiments/glasswall.cfg");
    TaskSpec mirror_task = parse_task(read_file("data/tasks/mirror_fetch.task"));
    std::vector<std::pair<TaskSpec, Scene>> all;
    for (const auto& t : cfg.tasks) all.emplace_back(t, cfg.floorplan_of(t));
    all.emplace_back(mirror_task, parse_scene(read_file("data/scenes/mirror_hall.scene")));

    for (const auto& [task, scene] : all) {
        AgentProfile profile{AgentKind::MapGtDepth, cfg.sensor, cfg.fail_limit};
        bool solved = false;
        for (int start = 0; start < 4 && !solved; ++start) {
            EpisodeLog log = run_episode(scene, task, 0, start, "baseline", profile,
                                         episode_seed(1, task.id, 0, start, "baseline", "mapgtdepth"),
                                         cfg.step_budget);
            solved = log.outcome == Outcome::Success;
        }
        INFO("task: " << task.id);
        CHECK(solved);
    }
}

TEST_CASE("selection criterion: every disturbance pairing perturbs some channel on the solution path") {
    struct Pairing {
        std::string cfg_path;
        std::string condition;
    };
    for (const Pairing& p : {Pairing{"data/experiments/glasswall.cfg", "glasswall"},
                             Pairing{"data/experiments/dimlight.cfg", "dim"},
                             Pairing{"data/experiments/dimlight.cfg", "dark"},
                             Pairing{"data/experiments/mirror.cfg", "mirror"}}) {
        RunConfig cfg = load_run_config(p.cfg_path);
        const Condition* cond = nullptr;
        for (const auto& c : cfg.conditions)
            if (c.label == p.condition) cond = &c;
        REQUIRE(cond != nullptr);
        for (const auto& task : cfg.tasks) {
            const Scene& base = cfg.floorplan_of(task);
            Scene disturbed = compose(base, cond->disturbances);
            AgentProfile profile{AgentKind::MapGtDepth, cfg.sensor, cfg.fail_limit};
            EpisodeLog log = run_episode(base, task, 0, 0, "baseline", profile,
                                         episode_seed(1, task.id, 0, 0, "baseline", "mapgtdepth"),
                                         cfg.step_budget);
            REQUIRE(log.outcome == Outcome::Success);

            bool differs = false;
            AgentPose pose = log.start_pose;
            std::vector<AgentPose> poses{pose};
            for (const auto& st : log.steps) poses.push_back(st.pose_after);
            for (const auto& pz : poses) {
                if (sense_depth(base, pz, cfg.sensor) != sense_depth(disturbed, pz, cfg.sensor) ||
                    sense_gt_depth(base, pz, cfg.sensor) !=
                        sense_gt_depth(disturbed, pz, cfg.sensor) ||
                    candidate_visible(base, pz, cfg.sensor) !=
                        candidate_visible(disturbed, pz, cfg.sensor)) {
                    differs = true;
                    break;
                }
                // dim light: detection probability differs even when geometry agrees
                DetectionSampler sampler{log.seed, 0};
                if (sense_vision(base, pz, cfg.sensor, sampler) !=
                    sense_vision(disturbed, pz, cfg.sensor, sampler)) {
                    differs = true;
                    break;
                }
            }
            INFO("pairing: " << p.condition << " x " << task.id);
            CHECK(differs);
        }
    }
}
