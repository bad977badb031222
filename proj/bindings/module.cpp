#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "homesim/harness.hpp"
#include "homesim/render.hpp"

namespace py = pybind11;
using namespace homesim;

namespace {

AgentPose pose_from_tuple(const py::tuple& t) {
    if (t.size() != 3) throw py::value_error("pose must be (x, y, heading)");
    auto h = direction_from_string(t[2].cast<std::string>());
    if (!h) throw py::value_error("unknown heading: " + t[2].cast<std::string>());
    return {{t[0].cast<int>(), t[1].cast<int>()}, *h};
}

py::tuple pose_tuple(const AgentPose& p) {
    return py::make_tuple(p.cell.x, p.cell.y, std::string(to_string(p.heading)));
}

AgentKind kind_or_throw(const std::string& name) {
    auto k = agent_kind_from_string(name);
    if (!k) throw py::value_error("unknown profile: " + name +
                                  " (expected visiononly|mapdepth|mapgtdepth)");
    return *k;
}

SensorMode mode_or_throw(const std::string& name) {
    if (name == "vision") return SensorMode::Vision;
    if (name == "depth") return SensorMode::Depth;
    if (name == "gt_depth") return SensorMode::GroundTruth;
    throw py::value_error("unknown sensor mode: " + name);
}

py::list violations_list(const std::vector<Violation>& vs) {
    py::list out;
    for (const auto& v : vs) {
        py::dict d;
        d["invariant"] = v.invariant;
        d["entity"] = v.entity;
        d["message"] = v.message;
        out.append(std::move(d));
    }
    return out;
}

py::list detections_list(const std::vector<Detection>& dets) {
    py::list out;
    for (const auto& d : dets) {
        py::dict jd;
        jd["object_class"] = d.object_class;
        jd["apparent_range"] = d.apparent_range;
        jd["apparent_bearing"] = d.apparent_bearing;
        jd["phantom"] = d.phantom;
        out.append(std::move(jd));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_homesim, m) {
    m.doc() = "Grid-world household simulator for sensor-disturbance robustness studies";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<SemanticError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);

    py::class_<Scene>(m, "Scene")
        .def_readonly("width", &Scene::width)
        .def_readonly("height", &Scene::height)
        .def_readonly("light_level", &Scene::light_level)
        .def_property_readonly("objects",
                               [](const Scene& s) {
                                   py::list out;
                                   for (const auto& o : s.objects) {
                                       py::dict d;
                                       d["id"] = o.id;
                                       d["object_class"] = o.object_class;
                                       d["cell"] = o.cell ? py::object(py::make_tuple(
                                                                o.cell->x, o.cell->y))
                                                          : py::object(py::none());
                                       d["held"] = o.held;
                                       d["heated"] = o.heated;
                                       d["examined"] = o.examined;
                                       if (o.inside_id) d["inside"] = *o.inside_id;
                                       out.append(std::move(d));
                                   }
                                   return out;
                               })
        .def_property_readonly("appliances",
                               [](const Scene& s) {
                                   py::list out;
                                   for (const auto& a : s.appliances) {
                                       py::dict d;
                                       d["id"] = a.id;
                                       d["kind"] = std::string(to_string(a.kind));
                                       d["cell"] = py::make_tuple(a.cell.x, a.cell.y);
                                       if (a.is_open) d["is_open"] = *a.is_open;
                                       if (a.is_on) d["is_on"] = *a.is_on;
                                       out.append(std::move(d));
                                   }
                                   return out;
                               })
        .def("__repr__", [](const Scene& s) {
            return "<Scene " + std::to_string(s.width) + "x" + std::to_string(s.height) + ", " +
                   std::to_string(s.objects.size()) + " objects, " +
                   std::to_string(s.appliances.size()) + " appliances>";
        });

    m.def("parse_scene", [](const std::string& text) { return parse_scene(text); },
          py::arg("text"));
    m.def("serialize_scene", &serialize_scene, py::arg("scene"));
    m.def("validate_scene", [](const Scene& s) { return violations_list(validate_scene(s)); },
          py::arg("scene"));
    m.def("scene_digest", &scene_digest, py::arg("scene"));
    m.def(
        "wall_between",
        [](const Scene& s, int x1, int y1, int x2, int y2) -> py::object {
            auto w = edge_between({x1, y1}, {x2, y2}, s);
            if (!w) return py::none();
            return py::str(to_string(w->material));
        },
        py::arg("scene"), py::arg("x1"), py::arg("y1"), py::arg("x2"), py::arg("y2"),
        "Material between two adjacent cells, or None for open passage");

    m.def(
        "apply_disturbances",
        [](const Scene& s, const std::string& text) {
            auto ds = parse_disturbances(text);
            return compose(s, ds);
        },
        py::arg("scene"), py::arg("disturbance_text"),
        "Apply a disturbance spec (dimlight / glasswall / mirror lines) to a scene");
    m.def("dim_light",
          [](const Scene& s, double level) { return homesim::apply(s, DimLight{level}); },
          py::arg("scene"), py::arg("level"));

    py::class_<SensorConfig>(m, "SensorConfig")
        .def(py::init<>())
        .def_readwrite("fov_deg", &SensorConfig::fov_deg)
        .def_readwrite("ray_count", &SensorConfig::ray_count)
        .def_readwrite("max_range", &SensorConfig::max_range)
        .def_readwrite("light_floor", &SensorConfig::light_floor)
        .def_readwrite("reflection_cap", &SensorConfig::reflection_cap);

    m.def(
        "cast_ray",
        [](const Scene& s, double ox, double oy, double dx, double dy, const std::string& mode,
           double max_range, int reflection_cap) {
            RayHit hit = cast_ray(s, {ox, oy}, {dx, dy}, mode_or_throw(mode), max_range,
                                  reflection_cap);
            py::dict d;
            d["path_length"] = hit.path_length;
            d["reflected"] = hit.reflected;
            d["terminal"] = hit.terminal == TerminalKind::Surface
                                ? "surface"
                                : (hit.terminal == TerminalKind::MaxRange ? "max_range"
                                                                          : "object");
            if (hit.surface_material)
                d["material"] = std::string(to_string(*hit.surface_material));
            return d;
        },
        py::arg("scene"), py::arg("ox"), py::arg("oy"), py::arg("dx"), py::arg("dy"),
        py::arg("mode"), py::arg("max_range") = 8.0, py::arg("reflection_cap") = 2);

    m.def(
        "sense_depth",
        [](const Scene& s, const py::tuple& pose, const SensorConfig& cfg) {
            return sense_depth(s, pose_from_tuple(pose), cfg);
        },
        py::arg("scene"), py::arg("pose"), py::arg("config") = SensorConfig{});
    m.def(
        "sense_gt_depth",
        [](const Scene& s, const py::tuple& pose, const SensorConfig& cfg) {
            return sense_gt_depth(s, pose_from_tuple(pose), cfg);
        },
        py::arg("scene"), py::arg("pose"), py::arg("config") = SensorConfig{});
    m.def(
        "sense_vision",
        [](const Scene& s, const py::tuple& pose, const SensorConfig& cfg, uint64_t seed,
           int step) {
            return detections_list(sense_vision(s, pose_from_tuple(pose), cfg, {seed, step}));
        },
        py::arg("scene"), py::arg("pose"), py::arg("config") = SensorConfig{},
        py::arg("seed") = 0, py::arg("step") = 0);

    py::class_<TaskSpec>(m, "TaskSpec")
        .def_readonly("id", &TaskSpec::id)
        .def_readonly("floorplan", &TaskSpec::floorplan)
        .def_property_readonly("variants",
                               [](const TaskSpec& t) {
                                   return std::vector<std::string>(t.variants.begin(),
                                                                   t.variants.end());
                               })
        .def_property_readonly("starts",
                               [](const TaskSpec& t) {
                                   py::list out;
                                   for (const auto& p : t.starts) out.append(pose_tuple(p));
                                   return out;
                               })
        .def("__repr__",
             [](const TaskSpec& t) { return "<TaskSpec " + t.id + ">"; });

    m.def("parse_task", [](const std::string& text) { return parse_task(text); },
          py::arg("text"));
    m.def("serialize_task", &serialize_task, py::arg("task"));
    m.def("check_goal", &check_goal, py::arg("scene"), py::arg("task"));
    m.def("task_success", &task_success, py::arg("scene"), py::arg("task"));
    m.def(
        "decompose",
        [](const TaskSpec& t) {
            std::vector<std::string> out;
            for (const auto& s : decompose(t).subgoals) out.push_back(to_string(s));
            return out;
        },
        py::arg("task"), "Subgoal plan as a list of strings");
    m.def(
        "generate_start_positions",
        [](const Scene& s, int n, int min_dist, uint64_t seed) {
            Rng rng(seed);
            py::list out;
            for (const auto& p : generate_start_positions(s, n, min_dist, rng))
                out.append(pose_tuple(p));
            return out;
        },
        py::arg("scene"), py::arg("n"), py::arg("min_dist") = 3, py::arg("seed") = 1);

    py::class_<EpisodeLog>(m, "EpisodeLog")
        .def_readonly("task_id", &EpisodeLog::task_id)
        .def_readonly("variant", &EpisodeLog::variant)
        .def_readonly("start", &EpisodeLog::start)
        .def_readonly("condition", &EpisodeLog::condition)
        .def_readonly("profile", &EpisodeLog::profile)
        .def_readonly("seed", &EpisodeLog::seed)
        .def_readonly("failed_actions", &EpisodeLog::failed_actions)
        .def_property_readonly("outcome",
                               [](const EpisodeLog& l) { return std::string(to_string(l.outcome)); })
        .def_property_readonly("num_steps",
                               [](const EpisodeLog& l) { return l.steps.size(); })
        .def_readonly("subgoals_done", &EpisodeLog::subgoals_done)
        .def_property_readonly("subgoal_progress",
                               [](const EpisodeLog& l) { return subgoal_progress(l); })
        .def("to_json", &log_to_json)
        .def_static("from_json", &log_from_json)
        .def("__repr__", [](const EpisodeLog& l) {
            return "<EpisodeLog " + log_filename(l) + " outcome=" +
                   std::string(to_string(l.outcome)) + ">";
        });

    m.def(
        "run_episode",
        [](const Scene& scene, const TaskSpec& task, int variant, int start,
           const std::string& condition, const std::string& profile, uint64_t seed,
           int step_budget, int fail_limit, const SensorConfig& cfg) {
            AgentProfile p{kind_or_throw(profile), cfg, fail_limit};
            return run_episode(scene, task, variant, start, condition, p, seed, step_budget);
        },
        py::arg("scene"), py::arg("task"), py::arg("variant") = 0, py::arg("start") = 0,
        py::arg("condition") = "baseline", py::arg("profile") = "mapgtdepth",
        py::arg("seed") = 1, py::arg("step_budget") = 500, py::arg("fail_limit") = 10,
        py::arg("config") = SensorConfig{});
    m.def("replay", [](const EpisodeLog& log) { return replay(log); }, py::arg("log"));
    m.def("episode_seed", &episode_seed, py::arg("master_seed"), py::arg("task_id"),
          py::arg("variant"), py::arg("start"), py::arg("condition"), py::arg("profile"));

    py::class_<RunConfig>(m, "RunConfig")
        .def_readonly("master_seed", &RunConfig::master_seed)
        .def_readwrite("workers", &RunConfig::workers)
        .def_readwrite("output_dir", &RunConfig::output_dir)
        .def_property_readonly("num_tasks",
                               [](const RunConfig& c) { return c.tasks.size(); })
        .def_property_readonly("num_conditions",
                               [](const RunConfig& c) { return c.conditions.size(); })
        .def_property_readonly("num_profiles",
                               [](const RunConfig& c) { return c.profiles.size(); });

    m.def("load_run_config", &load_run_config, py::arg("path"));
    m.def("matrix_cardinality", &matrix_cardinality, py::arg("config"));
    m.def("run_matrix", [](const RunConfig& cfg) { return run_matrix(cfg); }, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "aggregate_csv",
        [](const std::vector<EpisodeLog>& logs) { return report_csv(aggregate(logs)); },
        py::arg("logs"), "Aggregate logs and return the report as CSV text");
    m.def(
        "aggregate_json",
        [](const std::vector<EpisodeLog>& logs) { return report_json(aggregate(logs)); },
        py::arg("logs"));
    m.def(
        "export_run",
        [](const std::vector<EpisodeLog>& logs, const std::string& out_dir) {
            export_run(aggregate(logs), logs, out_dir);
        },
        py::arg("logs"), py::arg("out_dir"));
    m.def("load_logs", &load_logs, py::arg("dir"));

    m.def(
        "render_ascii",
        [](const EpisodeLog& log) { return render_ascii(reconstruct(log)); },
        py::arg("log"), "Replay a log and render the agent's final semantic map as text");
    m.def(
        "render_pgm",
        [](const EpisodeLog& log) { return render_pgm(reconstruct(log)); },
        py::arg("log"));
}
