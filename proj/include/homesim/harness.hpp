#pragma once

#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "homesim/episode.hpp"

namespace homesim {

/// One evaluation condition: a label plus the ordered disturbances applied
/// to every floorplan before the episodes run (empty list = baseline).
struct Condition {
    std::string label;
    std::vector<Disturbance> disturbances;
};

struct RunConfig {
    uint64_t master_seed = 1;
    std::vector<TaskSpec> tasks;
    // Scenes keyed by resolved path (or by the task's floorplan string for
    // configs assembled in code); task_floorplans maps task id -> key.
    std::map<std::string, Scene> floorplans;
    std::map<std::string, std::string> task_floorplans;
    std::vector<Condition> conditions;

    const Scene& floorplan_of(const TaskSpec& task) const {
        auto it = task_floorplans.find(task.id);
        return floorplans.at(it != task_floorplans.end() ? it->second : task.floorplan);
    }
    std::vector<AgentKind> profiles;
    SensorConfig sensor;
    int fail_limit = 10;
    int step_budget = 500;
    int min_start_dist = 3;  // pairwise Manhattan floor for task start poses
    int workers = 1;
    std::string output_dir = "out";
};

/// Parses a run config file, resolving task/disturbance paths relative to
/// the config file and loading + validating everything they reference.
RunConfig load_run_config(const std::string& path);

std::vector<Violation> validate_run_config(const RunConfig& config);

/// Stable per-episode seed from the matrix coordinates, so any single cell
/// of the matrix reruns identically on its own.
uint64_t episode_seed(uint64_t master_seed, const std::string& task_id, int variant, int start,
                      const std::string& condition, const std::string& profile);

size_t matrix_cardinality(const RunConfig& config);

/// Runs the full tasks x variants x starts x conditions x profiles product.
/// Episodes may execute on config.workers threads; the result order is the
/// enumeration order regardless of scheduling.
std::vector<EpisodeLog> run_matrix(const RunConfig& config);

struct GroupStats {
    int episodes = 0;
    int successes = 0;
    long subgoals_total = 0;
    long subgoals_done = 0;
    double success_rate = 0.0;   // percent, two decimals half-up
    double gc_rate_micro = 0.0;  // pooled subgoals
    double gc_rate_macro = 0.0;  // mean of per-episode fractions
    double frac_sum = 0.0;       // internal accumulator for the macro rate
};

struct Report {
    std::map<std::pair<std::string, std::string>, GroupStats> groups;  // (profile, condition)
    std::map<std::tuple<std::string, std::string, std::string>, GroupStats> by_task;
};

/// Aggregates Task Success and Goal Condition rates per (profile,
/// condition). Throws SemanticError on duplicate matrix keys.
Report aggregate(std::span<const EpisodeLog> logs);

std::string report_csv(const Report& report);
std::string report_tasks_csv(const Report& report);
std::string report_json(const Report& report);
std::string report_table(const Report& report);  // human-readable console table

std::string log_filename(const EpisodeLog& log);

/// Writes report.csv, report_tasks.csv, report.json and one JSON file per
/// episode under <out_dir>/logs/.
void export_run(const Report& report, std::span<const EpisodeLog> logs,
                const std::string& out_dir);

std::vector<EpisodeLog> load_logs(const std::string& dir);

}  // namespace homesim
