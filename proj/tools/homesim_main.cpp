#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "homesim/harness.hpp"
#include "homesim/render.hpp"

namespace fs = std::filesystem;
using namespace homesim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

int cmd_run(const std::string& config_path, int workers_override, const std::string& out_override,
            bool dry_run) {
    RunConfig cfg = load_run_config(config_path);
    if (workers_override > 0) cfg.workers = workers_override;
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (dry_run) {
        std::cout << "tasks=" << cfg.tasks.size() << " variants=3 starts=4 conditions="
                  << cfg.conditions.size() << " profiles=" << cfg.profiles.size()
                  << " episodes=" << matrix_cardinality(cfg) << "\n";
        return kExitOk;
    }
    auto logs = run_matrix(cfg);
    Report rep = aggregate(logs);
    export_run(rep, logs, cfg.output_dir);
    std::cout << report_table(rep);
    std::cout << "wrote " << logs.size() << " episode logs to " << cfg.output_dir << "/logs\n";
    return kExitOk;
}

int cmd_mutate(const std::string& scene_path, const std::string& dist_path,
               const std::string& out_path) {
    Scene scene = parse_scene(read_file(scene_path));
    auto ds = parse_disturbances(read_file(dist_path));
    Scene mutated = compose(scene, ds);
    write_file(out_path, serialize_scene(mutated));

    int added = 0, changed = 0;
    for (const auto& [e, m] : mutated.walls) {
        auto it = scene.walls.find(e);
        if (it == scene.walls.end()) ++added;
        else if (it->second != m) ++changed;
    }
    std::cout << "walls: +" << added << " added, " << changed << " changed; light "
              << format_double(scene.light_level) << " -> "
              << format_double(mutated.light_level) << "\n";
    return kExitOk;
}

int cmd_render(const std::string& log_path, const std::string& out_base) {
    EpisodeLog log = log_from_json(read_file(log_path));
    RenderInput in = reconstruct(log);
    write_file(out_base + ".pgm", render_pgm(in));
    write_file(out_base + ".txt", render_ascii(in));
    std::cout << "wrote " << out_base << ".pgm and " << out_base << ".txt\n";
    return kExitOk;
}

int cmd_validate(const std::string& path) {
    std::string ext = fs::path(path).extension().string();
    std::vector<Violation> violations;
    if (ext == ".scene") {
        violations = validate_scene(parse_scene(read_file(path)));
    } else if (ext == ".task") {
        TaskSpec t = parse_task(read_file(path));
        fs::path scene_path = fs::path(path).parent_path() / t.floorplan;
        Scene s = parse_scene(read_file(scene_path.string()));
        violations = validate_task(t, &s);
    } else if (ext == ".dist") {
        parse_disturbances(read_file(path));  // grammar-level check only
    } else if (ext == ".cfg") {
        load_run_config(path);
    } else {
        std::cerr << "unknown file type: " << path << " (expected .scene/.task/.dist/.cfg)\n";
        return kExitUsage;
    }
    if (!violations.empty()) {
        for (const auto& v : violations)
            std::cerr << v.invariant << (v.entity.empty() ? "" : " [" + v.entity + "]") << ": "
                      << v.message << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

int cmd_report(const std::string& dir, const std::string& out_dir) {
    auto logs = load_logs(dir);
    Report rep = aggregate(logs);
    std::cout << report_table(rep);
    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create output directory: " + out_dir);
        write_file((fs::path(out_dir) / "report.csv").string(), report_csv(rep));
        write_file((fs::path(out_dir) / "report_tasks.csv").string(), report_tasks_csv(rep));
        write_file((fs::path(out_dir) / "report.json").string(), report_json(rep));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"homesim: disturbance-robustness harness for grid-world household agents"};
    app.require_subcommand(1);

    std::string config_path, scene_path, dist_path, out_path, log_path, in_path, logs_dir;
    int workers = 0;
    bool dry_run = false;

    auto* run = app.add_subcommand("run", "run the experiment matrix from a config file");
    run->add_option("config", config_path, "run config file")->required();
    run->add_option("--workers", workers, "override worker count");
    run->add_option("--out", out_path, "override output directory");
    run->add_flag("--dry-run", dry_run, "print matrix cardinality and exit");

    auto* mutate = app.add_subcommand("mutate", "apply a disturbance file to a scene");
    mutate->add_option("scene", scene_path, "input scene file")->required();
    mutate->add_option("disturbance", dist_path, "disturbance file")->required();
    mutate->add_option("out", out_path, "output scene file")->required();

    auto* render = app.add_subcommand("render", "render an episode log's semantic map");
    render->add_option("log", log_path, "episode log (json)")->required();
    render->add_option("out", out_path, "output base path (writes .pgm and .txt)")->required();

    auto* validate = app.add_subcommand("validate", "validate a scene/task/dist/cfg file");
    validate->add_option("path", in_path, "file to validate")->required();

    auto* report = app.add_subcommand("report", "re-aggregate exported episode logs");
    report->add_option("logs", logs_dir, "output dir of a previous run (or its logs/)")
        ->required();
    report->add_option("--out", out_path, "also write report files here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, workers, out_path, dry_run);
        if (mutate->parsed()) return cmd_mutate(scene_path, dist_path, out_path);
        if (render->parsed()) return cmd_render(log_path, out_path);
        if (validate->parsed()) return cmd_validate(in_path);
        if (report->parsed()) return cmd_report(logs_dir, out_path);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const SemanticError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitUsage;
}
