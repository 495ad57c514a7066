#include "oas/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "oas/error.hpp"

namespace oas {

using nlohmann::json;

const char* version() { return "0.1.0"; }

namespace {

constexpr int kManifestVersion = 1;

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
        out << content;
        if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string sanitize_name(const std::string& name) {
    std::string out;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? "row" : out;
}

std::string model_label(const TransitionModelConfig& model) {
    if (!model.matrix.empty()) return "custom";
    return "stay" + fmt(model.stay_prob);
}

AbstractionTransitionModel build_model(const TransitionModelConfig& model, int n) {
    if (model.matrix.empty()) return AbstractionTransitionModel::stay(n, model.stay_prob);
    const std::size_t expected = static_cast<std::size_t>(n) * n;
    if (model.matrix.size() != expected) {
        throw Error(ErrorCode::kValidation, "transition matrix size does not match the catalog");
    }
    return AbstractionTransitionModel::from_matrix(n, model.matrix);
}

struct TrialJob {
    int row = 0;
    int seed_index = 0;
};

struct TrialOutput {
    TrialMetrics metrics;
    TrialTrace trace;
};

std::string trace_csv(const TrialTrace& trace, bool discrete) {
    std::ostringstream out;
    out << "t,true_ctx,ml";
    for (int i = 0; i < trace.n_abstractions; ++i) out << ",belief_" << i;
    if (discrete) {
        out << ",state,obs";
    } else {
        out << ",state_0,state_1,state_2,state_3,obs_0,obs_1,obs_2,obs_3";
    }
    out << ",action,reward\n";
    for (int t = 0; t < trace.horizon(); ++t) {
        const StepRecord& step = trace.steps[static_cast<std::size_t>(t)];
        out << t << ',' << step.true_context << ',' << step.ml;
        for (double p : step.belief) out << ',' << fmt(p);
        for (double v : step.state) out << ',' << fmt(v);
        for (double v : step.observed) out << ',' << fmt(v);
        out << ',' << step.action << ',' << fmt(step.reward) << '\n';
    }
    return out.str();
}

}  // namespace

SuiteResult run_suite(const ExperimentConfig& base_config, const SuiteOptions& options) {
    ExperimentConfig config = base_config;
    if (options.out_dir) config.out_dir = *options.out_dir;
    if (options.seeds) config.seeds = *options.seeds;
    if (options.traces) config.traces = *options.traces;
    if (config.seeds.empty()) throw Error(ErrorCode::kValidation, "no seeds configured");
    const int parallel = std::max(1, options.parallel);

    const bool discrete = config.is_discrete();
    const int n_contexts = 2;

    // Shared immutable scenario per row (discrete rows may override sigma).
    std::vector<DiscreteScenario> discrete_scenarios;
    ContinuousScenario continuous_template;
    if (discrete) {
        const auto& sc = std::get<DiscreteScenarioConfig>(config.scenario);
        for (const ExperimentRowConfig& rc : config.rows) {
            if (rc.sigma && (*rc.sigma < 0.0 || *rc.sigma > 1.0)) {
                throw Error(ErrorCode::kValidation, "row sigma out of range");
            }
            discrete_scenarios.push_back(build_discrete_scenario(
                sc.transitions, rc.sigma ? *rc.sigma : sc.sigma, sc.noise_kind));
        }
    } else {
        const auto& sc = std::get<ContinuousScenarioConfig>(config.scenario);
        continuous_template.params = sc.params;
        continuous_template.robot = sc.robot_start;
        for (const HumanTrackConfig& h : sc.humans) {
            continuous_template.humans.push_back(HumanTrack{h.waypoints, h.speed});
        }
        for (const ExperimentRowConfig& rc : config.rows) {
            if (rc.sigma) {
                throw Error(ErrorCode::kValidation,
                            "sigma overrides apply to discrete rows only");
            }
        }
    }

    // Schedules and filter configs per row; schedules per (row, seed) for the
    // random pattern so replays are exact.
    const int n_rows = static_cast<int>(config.rows.size());
    const int n_seeds = static_cast<int>(config.seeds.size());
    std::vector<TrialJob> jobs;
    jobs.reserve(static_cast<std::size_t>(n_rows) * n_seeds);
    for (int r = 0; r < n_rows; ++r) {
        for (int s = 0; s < n_seeds; ++s) jobs.push_back(TrialJob{r, s});
    }

    std::vector<TrialOutput> outputs(jobs.size());
    std::vector<SwitchSchedule> schedules(jobs.size());
    std::atomic<std::size_t> next_job{0};
    std::atomic<bool> failed{false};
    std::string failure_message;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t index = next_job.fetch_add(1);
            if (index >= jobs.size() || failed.load()) return;
            const TrialJob& job = jobs[index];
            try {
                const ExperimentRowConfig& rc = config.rows[static_cast<std::size_t>(job.row)];
                const std::uint64_t seed = config.seeds[static_cast<std::size_t>(job.seed_index)];
                SwitchSchedule schedule =
                    build_schedule(rc.pattern, config.horizon, n_contexts, seed, job.row);
                FilterConfig filter;
                filter.transition = build_model(rc.model, n_contexts);
                filter.prior = config.prior;
                filter.epsilon = config.epsilon;
                TrialOptions trial_options;
                trial_options.policy_mode = config.policy;
                trial_options.vi.gamma = config.gamma;
                trial_options.vi.tol = config.vi_tol;

                TrialTrace trace =
                    discrete
                        ? run_trial(discrete_scenarios[static_cast<std::size_t>(job.row)], schedule,
                                    filter, trial_options, seed)
                        : run_trial(continuous_template, schedule, filter, trial_options, seed);
                outputs[index].metrics = compute_metrics(trace, schedule);
                if (config.traces) outputs[index].trace = std::move(trace);
                schedules[index] = std::move(schedule);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                if (failure_message.empty()) {
                    failure_message = "trial (row " + std::to_string(job.row) + ", seed index " +
                                      std::to_string(job.seed_index) + ") failed: " + e.what();
                }
            }
        }
    };

    if (parallel == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < parallel; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (failed.load()) throw Error(ErrorCode::kRuntime, failure_message);

    // Lag columns: steps for the discrete suite, seconds for the continuous.
    const double lag_scale = discrete ? 1.0 : kControlPeriodSec;

    std::ostringstream metrics_csv;
    metrics_csv << "pattern,model,accuracy_mean,accuracy_std,avg_lag_mean,avg_lag_std,"
                   "max_lag_mean,max_lag_std,normalized_reward_mean,normalized_reward_std\n";
    for (int r = 0; r < n_rows; ++r) {
        std::vector<TrialMetrics> row_metrics;
        for (int s = 0; s < n_seeds; ++s) {
            row_metrics.push_back(outputs[static_cast<std::size_t>(r) * n_seeds + s].metrics);
        }
        const AggregateMetrics agg = aggregate(row_metrics);
        const ExperimentRowConfig& rc = config.rows[static_cast<std::size_t>(r)];
        metrics_csv << rc.name << ',' << model_label(rc.model) << ',' << fmt(agg.accuracy.mean)
                    << ',' << fmt(agg.accuracy.std) << ',' << fmt(agg.avg_lag.mean * lag_scale)
                    << ',' << fmt(agg.avg_lag.std * lag_scale) << ','
                    << fmt(agg.max_lag.mean * lag_scale) << ',' << fmt(agg.max_lag.std * lag_scale)
                    << ',' << fmt(agg.normalized_reward.mean) << ','
                    << fmt(agg.normalized_reward.std) << '\n';
    }

    const std::filesystem::path out_dir(config.out_dir);
    std::filesystem::create_directories(out_dir);

    SuiteResult result;
    result.out_dir = out_dir.string();
    result.rows = n_rows;

    const std::filesystem::path metrics_path = out_dir / "metrics.csv";
    write_file_atomic(metrics_path, metrics_csv.str());
    result.metrics_path = metrics_path.string();

    if (config.traces) {
        std::filesystem::create_directories(out_dir / "traces");
        for (int r = 0; r < n_rows; ++r) {
            const std::string name = sanitize_name(config.rows[static_cast<std::size_t>(r)].name);
            for (int s = 0; s < n_seeds; ++s) {
                const std::size_t index = static_cast<std::size_t>(r) * n_seeds + s;
                const std::filesystem::path path =
                    out_dir / "traces" /
                    (name + "_seed" + std::to_string(config.seeds[static_cast<std::size_t>(s)]) +
                     ".csv");
                write_file_atomic(path, trace_csv(outputs[index].trace, discrete));
                result.trace_paths.push_back(path.string());
            }
        }
    }

    json manifest;
    manifest["manifest_version"] = kManifestVersion;
    manifest["app_version"] = version();
    manifest["config"] = json::parse(write_config_json(config));
    manifest["seeds"] = config.seeds;
    manifest["lag_units"] = discrete ? "steps" : "seconds";
    json outputs_json;
    outputs_json["metrics"] = "metrics.csv";
    json traces_json = json::array();
    for (const std::string& path : result.trace_paths) {
        traces_json.push_back(std::filesystem::path(path).lexically_relative(out_dir).string());
    }
    outputs_json["traces"] = traces_json;
    manifest["outputs"] = outputs_json;
    const std::filesystem::path manifest_path = out_dir / "manifest.json";
    write_file_atomic(manifest_path, manifest.dump(2) + "\n");
    result.manifest_path = manifest_path.string();
    return result;
}

Mdp mdp_from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse, std::string("invalid MDP JSON: ") + e.what());
    }
    if (!root.is_object()) throw Error(ErrorCode::kParse, "MDP JSON must be an object");

    Mdp m;
    try {
        m.n_states = root.at("n_states").get<int>();
        m.n_actions = root.at("n_actions").get<int>();
        const json& transitions = root.at("transitions");
        for (const json& matrix : transitions) {
            std::vector<double> flat;
            for (const json& row : matrix) {
                for (const json& e : row) flat.push_back(e.get<double>());
            }
            m.transitions.push_back(std::move(flat));
        }
        const json& rewards = root.at("rewards");
        for (const json& row : rewards) {
            for (const json& e : row) m.rewards.push_back(e.get<double>());
        }
        if (root.contains("state_labels")) {
            m.state_labels = root.at("state_labels").get<std::vector<std::string>>();
        }
        if (root.contains("action_labels")) {
            m.action_labels = root.at("action_labels").get<std::vector<std::string>>();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse, std::string("invalid MDP JSON: ") + e.what());
    }
    return normalized_valid(std::move(m));
}

std::string mdp_to_json(const Mdp& m) {
    json root;
    root["n_states"] = m.n_states;
    root["n_actions"] = m.n_actions;
    json transitions = json::array();
    for (int a = 0; a < m.n_actions; ++a) {
        json matrix = json::array();
        for (int s = 0; s < m.n_states; ++s) {
            json row = json::array();
            for (int t = 0; t < m.n_states; ++t) row.push_back(m.transition(s, a, t));
            matrix.push_back(row);
        }
        transitions.push_back(matrix);
    }
    root["transitions"] = transitions;
    json rewards = json::array();
    for (int s = 0; s < m.n_states; ++s) {
        json row = json::array();
        for (int a = 0; a < m.n_actions; ++a) row.push_back(m.reward(s, a));
        rewards.push_back(row);
    }
    root["rewards"] = rewards;
    if (!m.state_labels.empty()) root["state_labels"] = m.state_labels;
    if (!m.action_labels.empty()) root["action_labels"] = m.action_labels;
    return root.dump(2);
}

std::string quotient_report_json(const std::string& mdp_path) {
    const Mdp m = mdp_from_json_file(mdp_path);
    const Partition partition = coarsest_bisimulation(m);
    const Abstraction ab = build_abstraction(m, partition, 0);

    json report;
    report["n_states"] = m.n_states;
    report["n_blocks"] = partition.num_blocks();
    report["block_of"] = partition.block_of;
    json blocks = json::array();
    for (const auto& block : partition.blocks) {
        json b = json::array();
        for (int s : block) {
            if (!m.state_labels.empty()) {
                b.push_back(m.state_labels[static_cast<std::size_t>(s)]);
            } else {
                b.push_back(s);
            }
        }
        blocks.push_back(b);
    }
    report["blocks"] = blocks;
    report["quotient"] = json::parse(mdp_to_json(ab.quotient));
    return report.dump(2);
}

std::string trace_stats_json(const std::string& trace_path) {
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + trace_path);

    std::string header;
    if (!std::getline(in, header)) throw Error(ErrorCode::kParse, "trace file is empty");
    std::vector<std::string> columns;
    {
        std::stringstream ss(header);
        std::string column;
        while (std::getline(ss, column, ',')) columns.push_back(column);
    }
    auto column_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return static_cast<int>(i);
        }
        throw Error(ErrorCode::kParse, "trace file lacks column " + name);
    };
    const int ctx_col = column_index("true_ctx");
    const int ml_col = column_index("ml");
    const int reward_col = column_index("reward");
    const bool continuous =
        std::find(columns.begin(), columns.end(), "state_0") != columns.end();

    TrialTrace trace;
    std::vector<int> active;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != columns.size()) {
            throw Error(ErrorCode::kParse, "trace row has wrong column count");
        }
        StepRecord step;
        step.true_context = std::stoi(cells[static_cast<std::size_t>(ctx_col)]);
        step.ml = std::stoi(cells[static_cast<std::size_t>(ml_col)]);
        step.reward = std::stod(cells[static_cast<std::size_t>(reward_col)]);
        active.push_back(step.true_context);
        trace.steps.push_back(std::move(step));
    }
    if (trace.steps.empty()) throw Error(ErrorCode::kParse, "trace file has no rows");

    const int n_contexts = *std::max_element(active.begin(), active.end()) + 1;
    const SwitchSchedule schedule = make_scripted_schedule(active, std::max(n_contexts, 1));
    const TrialMetrics metrics = compute_metrics(trace, schedule);

    json out;
    out["horizon"] = trace.horizon();
    out["accuracy"] = metrics.accuracy;
    out["avg_lag_steps"] = metrics.avg_lag;
    out["max_lag_steps"] = metrics.max_lag;
    if (continuous) {
        out["avg_lag_seconds"] = metrics.avg_lag * kControlPeriodSec;
        out["max_lag_seconds"] = metrics.max_lag * kControlPeriodSec;
    }
    out["normalized_reward"] = metrics.normalized_reward;
    out["switch_count"] = metrics.switch_count;
    return out.dump(2);
}

}  // namespace oas
