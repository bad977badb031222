"""Smoke tests for the python bindings: exercise the main operations
end to end against the bundled data files (run from the repo root)."""

import pytest

import homesim as hs

KITCHEN = "data/scenes/kitchen.scene"
GLASS = "data/disturbances/glass_doorways.dist"
CONFIG = "data/experiments/glasswall.cfg"
TASK = "data/tasks/heat_place_plate.task"


def read(path):
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def test_scene_roundtrip_and_validation():
    scene = hs.parse_scene(read(KITCHEN))
    assert scene.width == 10 and scene.height == 10
    assert hs.validate_scene(scene) == []
    canon = hs.serialize_scene(scene)
    assert hs.serialize_scene(hs.parse_scene(canon)) == canon
    with pytest.raises(hs.ParseError):
        hs.parse_scene("size 5 5\nwall 0 0 2 0 opaque\n")


def test_disturbances_change_only_what_they_should():
    scene = hs.parse_scene(read(KITCHEN))
    glassy = hs.apply_disturbances(scene, read(GLASS))
    assert hs.wall_between(scene, 2, 4, 2, 5) is None
    assert hs.wall_between(glassy, 2, 4, 2, 5) == "glass"
    dim = hs.dim_light(scene, 0.1)
    assert dim.light_level == pytest.approx(0.1)
    # depth channels ignore the light level entirely
    pose = (5, 2, "north")
    assert hs.sense_depth(dim, pose) == hs.sense_depth(scene, pose)


def test_material_interaction_through_channels():
    scene = hs.parse_scene(read(KITCHEN))
    glassy = hs.apply_disturbances(scene, read(GLASS))
    pose = (2, 3, "north")
    depth = hs.sense_depth(glassy, pose)
    gt = hs.sense_gt_depth(glassy, pose)
    assert all(g <= d + 1e-9 for g, d in zip(gt, depth))
    mid = len(depth) // 2
    assert gt[mid] == pytest.approx(1.5)  # glass line at y=4/5 stops ground truth
    assert depth[mid] > gt[mid]           # plain depth sails through

    hit = hs.cast_ray(glassy, 2.5, 3.5, 0.0, 1.0, "gt_depth")
    assert hit["material"] == "glass"


def test_vision_dimming_and_phantoms():
    scene = hs.parse_scene(read(KITCHEN))
    pose = (3, 1, "north")
    dark = hs.dim_light(scene, 0.0)
    assert hs.sense_vision(dark, pose, hs.SensorConfig(), 1, 0) == []
    lit = hs.sense_vision(scene, pose, hs.SensorConfig(), 1, 0)
    assert lit, "full light should detect something from the kitchen floor"

    hall = hs.parse_scene(read("data/scenes/mirror_hall.scene"))
    mirrored = hs.apply_disturbances(hall, read("data/disturbances/mirror_wall.dist"))
    dets = hs.sense_vision(mirrored, (2, 2, "east"), hs.SensorConfig(), 1, 0)
    assert any(d["phantom"] for d in dets)


def test_task_decomposition_and_goal_check():
    task = hs.parse_task(read(TASK))
    plan = hs.decompose(task)
    assert len(plan) == 9
    assert plan[0] == "Find Plate" and plan[-1] == "PlaceIn Sink"
    scene = hs.parse_scene(read(KITCHEN))
    assert hs.check_goal(scene, task) == [False, False]
    assert not hs.task_success(scene, task)


def test_episode_determinism_and_replay():
    scene = hs.parse_scene(read(KITCHEN))
    task = hs.parse_task(read(TASK))
    log1 = hs.run_episode(scene, task, profile="mapgtdepth", seed=7)
    log2 = hs.run_episode(scene, task, profile="mapgtdepth", seed=7)
    assert log1.to_json() == log2.to_json()
    assert log1.outcome == "success"
    assert hs.replay(log1).to_json() == log1.to_json()
    ascii_map = hs.render_ascii(log1)
    assert "A" in ascii_map


def test_matrix_and_aggregation():
    cfg = hs.load_run_config(CONFIG)
    assert cfg.num_tasks == 6 and cfg.num_conditions == 2 and cfg.num_profiles == 3
    assert hs.matrix_cardinality(cfg) == 432
    cfg.workers = 4
    logs = hs.run_matrix(cfg)
    assert len(logs) == 432
    csv = hs.aggregate_csv(logs)
    header = csv.splitlines()[0].split(",")
    assert header[:5] == ["profile", "condition", "episodes", "successes", "success_rate"]
    rows = {tuple(line.split(",")[:2]): line.split(",") for line in csv.splitlines()[1:]}
    assert rows[("mapgtdepth", "baseline")][2] == "72"


def test_start_generation_contract():
    scene = hs.parse_scene(read(KITCHEN))
    starts = hs.generate_start_positions(scene, 4, min_dist=3, seed=11)
    assert len(starts) == 4
    cells = [(x, y) for x, y, _ in starts]
    for i, a in enumerate(cells):
        for b in cells[i + 1:]:
            assert abs(a[0] - b[0]) + abs(a[1] - b[1]) >= 3
    with pytest.raises(hs.ValidationError):
        hs.generate_start_positions(scene, 4, min_dist=100, seed=11)
