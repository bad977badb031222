"""Grid-world household simulator for sensor-disturbance robustness studies.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._homesim import (  # noqa: F401
    EpisodeLog,
    IoError,
    ParseError,
    RunConfig,
    Scene,
    SensorConfig,
    TaskSpec,
    ValidationError,
    aggregate_csv,
    aggregate_json,
    apply_disturbances,
    cast_ray,
    check_goal,
    decompose,
    dim_light,
    episode_seed,
    export_run,
    generate_start_positions,
    load_logs,
    load_run_config,
    matrix_cardinality,
    parse_scene,
    parse_task,
    render_ascii,
    render_pgm,
    replay,
    run_episode,
    run_matrix,
    scene_digest,
    sense_depth,
    sense_gt_depth,
    sense_vision,
    serialize_scene,
    serialize_task,
    task_success,
    validate_scene,
    wall_between,
)

__all__ = [
    "EpisodeLog",
    "IoError",
    "ParseError",
    "RunConfig",
    "Scene",
    "SensorConfig",
    "TaskSpec",
    "ValidationError",
    "aggregate_csv",
    "aggregate_json",
    "apply_disturbances",
    "cast_ray",
    "check_goal",
    "decompose",
    "dim_light",
    "episode_seed",
    "export_run",
    "generate_start_positions",
    "load_logs",
    "load_run_config",
    "matrix_cardinality",
    "parse_scene",
    "parse_task",
    "render_ascii",
    "render_pgm",
    "replay",
    "run_episode",
    "run_matrix",
    "scene_digest",
    "sense_depth",
    "sense_gt_depth",
    "sense_vision",
    "serialize_scene",
    "serialize_task",
    "task_success",
    "validate_scene",
    "wall_between",
]

__version__ = "0.1.0"
