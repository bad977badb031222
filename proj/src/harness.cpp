#include "homesim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <filesystem>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace fs = std::filesystem;

namespace homesim {

namespace {

struct ConfigParseState {
    RunConfig cfg;
    std::vector<std::string> task_paths;
    std::vector<std::pair<std::string, std::vector<std::string>>> condition_paths;
};

}  // namespace

RunConfig load_run_config(const std::string& path) {
    std::string text = read_file(path);
    fs::path base = fs::path(path).parent_path();
    ConfigParseState st;
    st.cfg.conditions.clear();

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto tok = split_ws(line);
        const std::string& kw = tok[0];
        auto need = [&](size_t n, const char* usage) {
            if (tok.size() != n) throw ParseError(line_no, std::string("usage: ") + usage);
        };
        if (kw == "master_seed") {
            need(2, "master_seed N");
            try {
                st.cfg.master_seed = std::stoull(tok[1]);
            } catch (...) {
                throw ParseError(line_no, "master_seed must be an unsigned integer");
            }
        } else if (kw == "task") {
            need(2, "task FILE");
            st.task_paths.push_back((base / tok[1]).string());
        } else if (kw == "condition") {
            if (tok.size() < 2) throw ParseError(line_no, "usage: condition LABEL [DISTFILE...]");
            std::vector<std::string> files;
            for (size_t i = 2; i < tok.size(); ++i) files.push_back((base / tok[i]).string());
            st.condition_paths.emplace_back(tok[1], std::move(files));
        } else if (kw == "profile") {
            need(2, "profile visiononly|mapdepth|mapgtdepth");
            auto k = agent_kind_from_string(tok[1]);
            if (!k) throw ParseError(line_no, "unknown profile: " + tok[1]);
            st.cfg.profiles.push_back(*k);
        } else if (kw == "fail_limit") {
            need(2, "fail_limit N");
            if (!parse_int(tok[1], st.cfg.fail_limit))
                throw ParseError(line_no, "fail_limit must be an integer");
        } else if (kw == "step_budget") {
            need(2, "step_budget N");
            if (!parse_int(tok[1], st.cfg.step_budget))
                throw ParseError(line_no, "step_budget must be an integer");
        } else if (kw == "workers") {
            need(2, "workers N");
            if (!parse_int(tok[1], st.cfg.workers))
                throw ParseError(line_no, "workers must be an integer");
        } else if (kw == "min_start_dist") {
            need(2, "min_start_dist N");
            if (!parse_int(tok[1], st.cfg.min_start_dist))
                throw ParseError(line_no, "min_start_dist must be an integer");
        } else if (kw == "output") {
            need(2, "output DIR");
            st.cfg.output_dir = tok[1];
        } else if (kw == "sensor") {
            need(3, "sensor KEY VALUE");
            double v = 0.0;
            if (!parse_double(tok[2], v))
                throw ParseError(line_no, "sensor value must be numeric");
            if (tok[1] == "fov") st.cfg.sensor.fov_deg = v;
            else if (tok[1] == "rays") st.cfg.sensor.ray_count = static_cast<int>(v);
            else if (tok[1] == "range") st.cfg.sensor.max_range = v;
            else if (tok[1] == "light_floor") st.cfg.sensor.light_floor = v;
            else if (tok[1] == "reflection_cap") st.cfg.sensor.reflection_cap = static_cast<int>(v);
            else throw ParseError(line_no, "unknown sensor key: " + tok[1]);
        } else {
            throw ParseError(line_no, "unknown directive: " + kw);
        }
    }

    RunConfig& cfg = st.cfg;
    for (const auto& tp : st.task_paths) {
        TaskSpec task = parse_task(read_file(tp));
        fs::path scene_path = fs::path(tp).parent_path() / task.floorplan;
        std::error_code ec;
        fs::path resolved = fs::weakly_canonical(scene_path, ec);
        std::string key = ec ? scene_path.string() : resolved.string();
        if (!cfg.floorplans.count(key))
            cfg.floorplans.emplace(key, parse_scene(read_file(scene_path.string())));
        cfg.task_floorplans[task.id] = key;
        cfg.tasks.push_back(std::move(task));
    }
    for (auto& [label, files] : st.condition_paths) {
        Condition c{label, {}};
        for (const auto& f : files) {
            auto ds = parse_disturbances(read_file(f));
            c.disturbances.insert(c.disturbances.end(), ds.begin(), ds.end());
        }
        cfg.conditions.push_back(std::move(c));
    }

    if (auto v = validate_run_config(cfg); !v.empty()) throw SemanticError(std::move(v));
    return cfg;
}

std::vector<Violation> validate_run_config(const RunConfig& cfg) {
    // Empty task/condition/profile lists are legal and yield an empty matrix.
    std::vector<Violation> out;
    bool has_baseline = false;
    std::set<std::string> labels;
    for (const auto& c : cfg.conditions) {
        if (c.disturbances.empty()) has_baseline = true;
        if (!labels.insert(c.label).second)
            out.push_back({"DuplicateConditionLabel", c.label, "condition labels must be unique"});
    }
    if (!cfg.conditions.empty() && !has_baseline)
        out.push_back({"NoBaselineCondition", "",
                       "at least one condition must carry no disturbances"});
    if (cfg.fail_limit < 1) out.push_back({"FailLimitInvalid", "", "fail_limit must be >= 1"});
    if (cfg.step_budget < 1) out.push_back({"StepBudgetInvalid", "", "step_budget must be >= 1"});
    if (cfg.workers < 1) out.push_back({"WorkersInvalid", "", "workers must be >= 1"});
    for (auto v = validate(cfg.sensor); const auto& viol : v) out.push_back(viol);

    std::set<std::string> task_ids;
    for (const auto& t : cfg.tasks) {
        if (!task_ids.insert(t.id).second)
            out.push_back({"DuplicateTaskId", t.id, "task ids must be unique"});
        auto key_it = cfg.task_floorplans.find(t.id);
        const std::string& key = key_it != cfg.task_floorplans.end() ? key_it->second
                                                                     : t.floorplan;
        auto it = cfg.floorplans.find(key);
        if (it == cfg.floorplans.end()) {
            out.push_back({"FloorplanMissing", t.id, "floorplan not loaded: " + t.floorplan});
            continue;
        }
        for (auto tv = validate_task(t, &it->second, cfg.min_start_dist); const auto& viol : tv)
            out.push_back(viol);
        // every condition must compose cleanly on this floorplan
        for (const auto& c : cfg.conditions) {
            Scene s = it->second;
            for (size_t i = 0; i < c.disturbances.size(); ++i) {
                for (auto dv = validate(s, c.disturbances[i]); const auto& viol : dv)
                    out.push_back({viol.invariant, c.label + "/" + t.id, viol.message});
                if (!validate(s, c.disturbances[i]).empty()) break;
                s = homesim::apply(s, c.disturbances[i]);
            }
        }
    }
    return out;
}

uint64_t episode_seed(uint64_t master_seed, const std::string& task_id, int variant, int start,
                      const std::string& condition, const std::string& profile) {
    uint64_t h = fnv1a_u64(master_seed);
    h = fnv1a(task_id, h);
    h = fnv1a_u64(static_cast<uint64_t>(variant), h);
    h = fnv1a_u64(static_cast<uint64_t>(start), h);
    h = fnv1a(condition, h);
    h = fnv1a(profile, h);
    return h;
}

size_t matrix_cardinality(const RunConfig& cfg) {
    size_t variants = 3, starts = 4;
    return cfg.tasks.size() * variants * starts * cfg.conditions.size() * cfg.profiles.size();
}

std::vector<EpisodeLog> run_matrix(const RunConfig& cfg) {
    if (auto v = validate_run_config(cfg); !v.empty()) throw SemanticError(std::move(v));

    struct Job {
        const TaskSpec* task;
        const Scene* scene;
        int variant;
        int start;
        const Condition* condition;
        AgentKind kind;
        uint64_t seed;
    };

    // Disturbed scene per (floorplan, condition), composed once.
    std::map<std::pair<const Scene*, std::string>, Scene> scenes;
    for (const auto& [key, scene] : cfg.floorplans)
        for (const auto& c : cfg.conditions)
            scenes.emplace(std::make_pair(&scene, c.label), compose(scene, c.disturbances));

    std::vector<Job> jobs;
    for (const auto& task : cfg.tasks)
        for (int variant = 0; variant < 3; ++variant)
            for (int start = 0; start < 4; ++start)
                for (const auto& c : cfg.conditions)
                    for (AgentKind kind : cfg.profiles)
                        jobs.push_back({&task,
                                        &scenes.at({&cfg.floorplan_of(task), c.label}), variant,
                                        start, &c, kind,
                                        episode_seed(cfg.master_seed, task.id, variant, start,
                                                     c.label, to_string(kind))});

    std::vector<EpisodeLog> logs(jobs.size());
    auto run_one = [&](size_t i) {
        const Job& job = jobs[i];
        AgentProfile profile{job.kind, cfg.sensor, cfg.fail_limit};
        logs[i] = run_episode(*job.scene, *job.task, job.variant, job.start,
                              job.condition->label, profile, job.seed, cfg.step_budget);
    };

    int workers = std::min<int>(cfg.workers, static_cast<int>(jobs.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < jobs.size(); ++i) run_one(i);
    } else {
        std::atomic<size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                while (true) {
                    size_t i = next.fetch_add(1);
                    if (i >= jobs.size()) break;
                    try {
                        run_one(i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                }
            });
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    return logs;
}

// ---------------------------------------------------------------------------
// Aggregation

namespace {

void finalize(GroupStats& g) {
    if (g.episodes > 0)
        g.success_rate = round2_half_up(100.0 * g.successes / g.episodes);
    if (g.subgoals_total > 0)
        g.gc_rate_micro =
            round2_half_up(100.0 * static_cast<double>(g.subgoals_done) / g.subgoals_total);
    if (g.episodes > 0) g.gc_rate_macro = round2_half_up(100.0 * g.frac_sum / g.episodes);
}

void accumulate(GroupStats& g, const EpisodeLog& log) {
    ++g.episodes;
    if (log.outcome == Outcome::Success) ++g.successes;
    long total = static_cast<long>(log.subgoals_done.size());
    long done = std::count(log.subgoals_done.begin(), log.subgoals_done.end(), true);
    g.subgoals_total += total;
    g.subgoals_done += done;
    g.frac_sum += subgoal_progress(log);
}

}  // namespace

Report aggregate(std::span<const EpisodeLog> logs) {
    Report rep;
    std::set<std::tuple<std::string, int, int, std::string, std::string>> keys;
    for (const auto& log : logs) {
        auto key = std::make_tuple(log.task_id, log.variant, log.start, log.condition,
                                   log.profile);
        if (!keys.insert(key).second)
            throw SemanticError({{"DuplicateMatrixKey",
                                  log.task_id + "/v" + std::to_string(log.variant) + "/s" +
                                      std::to_string(log.start) + "/" + log.condition + "/" +
                                      log.profile,
                                  "duplicate episode in aggregation input"}});
        accumulate(rep.groups[{log.profile, log.condition}], log);
        accumulate(rep.by_task[{log.profile, log.condition, log.task_id}], log);
    }
    for (auto& [k, g] : rep.groups) finalize(g);
    for (auto& [k, g] : rep.by_task) finalize(g);
    return rep;
}

// ---------------------------------------------------------------------------
// Report rendering and export

namespace {

void csv_stats_row(std::ostringstream& os, const GroupStats& g) {
    os << g.episodes << "," << g.successes << "," << format_fixed2(g.success_rate) << ","
       << g.subgoals_total << "," << g.subgoals_done << "," << format_fixed2(g.gc_rate_micro)
       << "," << format_fixed2(g.gc_rate_macro) << "\n";
}

}  // namespace

std::string report_csv(const Report& rep) {
    std::ostringstream os;
    os << "profile,condition,episodes,successes,success_rate,subgoals_total,subgoals_done,"
          "gc_rate_micro,gc_rate_macro\n";
    for (const auto& [key, g] : rep.groups) {
        os << key.first << "," << key.second << ",";
        csv_stats_row(os, g);
    }
    return os.str();
}

std::string report_tasks_csv(const Report& rep) {
    std::ostringstream os;
    os << "profile,condition,task,episodes,successes,success_rate,subgoals_total,subgoals_done,"
          "gc_rate_micro,gc_rate_macro\n";
    for (const auto& [key, g] : rep.by_task) {
        os << std::get<0>(key) << "," << std::get<1>(key) << "," << std::get<2>(key) << ",";
        csv_stats_row(os, g);
    }
    return os.str();
}

std::string report_json(const Report& rep) {
    nlohmann::json j;
    j["schema_version"] = 1;
    auto stats_json = [](const GroupStats& g) {
        return nlohmann::json{{"episodes", g.episodes},
                              {"successes", g.successes},
                              {"success_rate", g.success_rate},
                              {"subgoals_total", g.subgoals_total},
                              {"subgoals_done", g.subgoals_done},
                              {"gc_rate_micro", g.gc_rate_micro},
                              {"gc_rate_macro", g.gc_rate_macro}};
    };
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& [key, g] : rep.groups) {
        nlohmann::json row = stats_json(g);
        row["profile"] = key.first;
        row["condition"] = key.second;
        groups.push_back(std::move(row));
    }
    j["groups"] = std::move(groups);
    nlohmann::json by_task = nlohmann::json::array();
    for (const auto& [key, g] : rep.by_task) {
        nlohmann::json row = stats_json(g);
        row["profile"] = std::get<0>(key);
        row["condition"] = std::get<1>(key);
        row["task"] = std::get<2>(key);
        by_task.push_back(std::move(row));
    }
    j["by_task"] = std::move(by_task);
    return j.dump(1) + "\n";
}

std::string report_table(const Report& rep) {
    std::ostringstream os;
    os << "profile      condition     episodes  SR%      GC%(micro)  GC%(macro)\n";
    for (const auto& [key, g] : rep.groups) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-12s %-13s %8d  %-8s %-11s %s\n", key.first.c_str(),
                      key.second.c_str(), g.episodes, format_fixed2(g.success_rate).c_str(),
                      format_fixed2(g.gc_rate_micro).c_str(),
                      format_fixed2(g.gc_rate_macro).c_str());
        os << buf;
    }
    return os.str();
}

std::string log_filename(const EpisodeLog& log) {
    return log.task_id + "__v" + std::to_string(log.variant) + "__s" +
           std::to_string(log.start) + "__" + log.condition + "__" + log.profile + ".json";
}

void export_run(const Report& rep, std::span<const EpisodeLog> logs,
                const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "logs", ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);
    write_file((fs::path(out_dir) / "report.csv").string(), report_csv(rep));
    write_file((fs::path(out_dir) / "report_tasks.csv").string(), report_tasks_csv(rep));
    write_file((fs::path(out_dir) / "report.json").string(), report_json(rep));
    for (const auto& log : logs)
        write_file((fs::path(out_dir) / "logs" / log_filename(log)).string(), log_to_json(log));
}

std::vector<EpisodeLog> load_logs(const std::string& dir) {
    fs::path p(dir);
    if (fs::is_directory(p / "logs")) p /= "logs";
    if (!fs::is_directory(p)) throw IoError("no such log directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(p))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<EpisodeLog> logs;
    logs.reserve(files.size());
    for (const auto& f : files) logs.push_back(log_from_json(read_file(f.string())));
    return logs;
}

}  // namespace homesim
