#include "oas/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oas/error.hpp"

namespace oas {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw Error(ErrorCode::kParse, "config: " + path + ": " + message);
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
        }
    }
}

double get_number(const json& obj, const std::string& path, const std::string& key,
                  double fallback, double lo, double hi) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < lo || x > hi) {
        std::ostringstream msg;
        msg << "value " << x << " out of range [" << lo << ", " << hi << "]";
        fail(path + key, msg.str());
    }
    return x;
}

int get_int(const json& obj, const std::string& path, const std::string& key, int fallback,
            int lo, int hi) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + key, "expected an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi) {
        std::ostringstream msg;
        msg << "value " << x << " out of range [" << lo << ", " << hi << "]";
        fail(path + key, msg.str());
    }
    return static_cast<int>(x);
}

std::string get_string(const json& obj, const std::string& path, const std::string& key,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(path + key, "expected a string");
    return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(path + key, "expected a boolean");
    return v.get<bool>();
}

std::vector<int> get_int_sequence(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of integers");
    std::vector<int> out;
    for (const json& e : v) {
        if (!e.is_number_integer()) fail(path, "expected an array of integers");
        out.push_back(e.get<int>());
    }
    return out;
}

PatternConfig parse_pattern(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    reject_unknown_keys(obj, path, {"type", "switch_at", "period", "sequence", "handoff_steps"});
    PatternConfig pattern;
    pattern.type = get_string(obj, path + ".", "type", "step");
    if (pattern.type != "step" && pattern.type != "periodic" && pattern.type != "random" &&
        pattern.type != "scripted" && pattern.type != "handoffs") {
        fail(path + ".type", "expected one of step|periodic|random|scripted|handoffs");
    }
    pattern.switch_at = get_int(obj, path + ".", "switch_at", 100, 1, 1 << 28);
    pattern.period = get_int(obj, path + ".", "period", 10, 1, 1 << 28);
    if (obj.contains("sequence")) pattern.sequence = get_int_sequence(obj.at("sequence"), path + ".sequence");
    if (obj.contains("handoff_steps")) {
        pattern.handoff_steps = get_int_sequence(obj.at("handoff_steps"), path + ".handoff_steps");
        for (std::size_t i = 1; i < pattern.handoff_steps.size(); ++i) {
            if (pattern.handoff_steps[i] <= pattern.handoff_steps[i - 1]) {
                fail(path + ".handoff_steps", "steps must be strictly increasing");
            }
        }
    }
    if (pattern.type == "scripted" && pattern.sequence.empty()) {
        fail(path + ".sequence", "scripted pattern needs a sequence");
    }
    if (pattern.type == "handoffs" && pattern.handoff_steps.empty()) {
        fail(path + ".handoff_steps", "handoffs pattern needs handoff_steps");
    }
    return pattern;
}

TransitionModelConfig parse_model(const json& obj, const std::string& path,
                                  const TransitionModelConfig& fallback) {
    TransitionModelConfig model = fallback;
    if (obj.contains("stay_prob")) {
        model.stay_prob = get_number(obj, path + ".", "stay_prob", 0.8, 0.0, 1.0);
        model.matrix.clear();
    }
    if (obj.contains("transition_matrix")) {
        const json& v = obj.at("transition_matrix");
        if (!v.is_array()) fail(path + ".transition_matrix", "expected an array of rows");
        model.matrix.clear();
        std::size_t n = v.size();
        for (const json& row : v) {
            if (!row.is_array() || row.size() != n) {
                fail(path + ".transition_matrix", "expected a square matrix");
            }
            for (const json& e : row) {
                if (!e.is_number()) fail(path + ".transition_matrix", "expected numbers");
                model.matrix.push_back(e.get<double>());
            }
        }
        // Validation of ranges/column sums happens when the model is built.
    }
    return model;
}

DiscreteTransitionsConfig parse_transitions(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object with left/right matrices");
    reject_unknown_keys(v, path, {"left", "right"});
    DiscreteTransitionsConfig config;
    config.matrices.resize(2);
    const char* names[2] = {"left", "right"};
    for (int a = 0; a < 2; ++a) {
        if (!v.contains(names[a])) fail(path + "." + names[a], "missing matrix");
        const json& mat = v.at(names[a]);
        if (!mat.is_array() || mat.size() != kDiscreteStates) {
            fail(path + "." + names[a], "expected a 3x3 matrix");
        }
        for (const json& row : mat) {
            if (!row.is_array() || row.size() != kDiscreteStates) {
                fail(path + "." + names[a], "expected a 3x3 matrix");
            }
            for (const json& e : row) {
                if (!e.is_number()) fail(path + "." + names[a], "expected numbers");
                config.matrices[static_cast<std::size_t>(a)].push_back(e.get<double>());
            }
        }
    }
    return config;
}

StateNoiseKind parse_noise_kind(const json& obj, const std::string& path) {
    const std::string kind = get_string(obj, path, "state_noise_kind", "uniform");
    if (kind == "uniform") return StateNoiseKind::kUniform;
    if (kind == "inward") return StateNoiseKind::kInward;
    fail(path + "state_noise_kind", "expected uniform|inward");
}

DiscreteScenarioConfig parse_discrete_scenario(const json& obj) {
    reject_unknown_keys(obj, "scenario",
                        {"type", "transitions", "sigma", "state_noise_kind"});
    DiscreteScenarioConfig sc;
    sc.transitions = obj.contains("transitions")
                         ? parse_transitions(obj.at("transitions"), "scenario.transitions")
                         : default_discrete_transitions();
    sc.sigma = get_number(obj, "scenario.", "sigma", 0.0, 0.0, 1.0);
    sc.noise_kind = parse_noise_kind(obj, "scenario.");
    return sc;
}

ContinuousScenarioConfig parse_continuous_scenario(const json& obj) {
    reject_unknown_keys(obj, "scenario", {"type", "rho", "forward_speed", "turn_rate", "noise",
                                          "robot", "humans"});
    ContinuousScenarioConfig sc;
    sc.params.rho = get_number(obj, "scenario.", "rho", 1.0, 1e-9, 1e6);
    sc.params.forward_speed = get_number(obj, "scenario.", "forward_speed", 0.8, 0.0, 100.0);
    sc.params.turn_rate = get_number(obj, "scenario.", "turn_rate", 0.8, 0.0, 100.0);
    if (obj.contains("noise")) {
        const json& noise = obj.at("noise");
        if (!noise.is_object()) fail("scenario.noise", "expected an object");
        reject_unknown_keys(noise, "scenario.noise", {"a", "b"});
        sc.params.noise.a = get_number(noise, "scenario.noise.", "a", 0.02, 0.0, 1e3);
        sc.params.noise.b = get_number(noise, "scenario.noise.", "b", 0.01, 0.0, 1e3);
    }
    if (obj.contains("robot")) {
        const json& robot = obj.at("robot");
        if (!robot.is_object()) fail("scenario.robot", "expected an object");
        reject_unknown_keys(robot, "scenario.robot", {"x", "y", "heading"});
        sc.robot_start.x = get_number(robot, "scenario.robot.", "x", 0.0, -1e6, 1e6);
        sc.robot_start.y = get_number(robot, "scenario.robot.", "y", 0.0, -1e6, 1e6);
        sc.robot_start.heading = get_number(robot, "scenario.robot.", "heading", 0.0, -1e3, 1e3);
    }
    if (!obj.contains("humans")) fail("scenario.humans", "continuous scenario needs two humans");
    const json& humans = obj.at("humans");
    if (!humans.is_array() || humans.size() != 2) {
        fail("scenario.humans", "expected exactly two humans");
    }
    for (std::size_t h = 0; h < humans.size(); ++h) {
        const std::string hpath = "scenario.humans[" + std::to_string(h) + "]";
        const json& human = humans[h];
        if (!human.is_object()) fail(hpath, "expected an object");
        reject_unknown_keys(human, hpath, {"waypoints", "speed"});
        HumanTrackConfig track;
        track.speed = get_number(human, hpath + ".", "speed", 0.5, 0.0, 100.0);
        if (!human.contains("waypoints")) fail(hpath + ".waypoints", "missing waypoints");
        const json& wps = human.at("waypoints");
        if (!wps.is_array() || wps.empty()) fail(hpath + ".waypoints", "expected a non-empty array");
        for (const json& wp : wps) {
            if (!wp.is_array() || wp.size() != 2 || !wp[0].is_number() || !wp[1].is_number()) {
                fail(hpath + ".waypoints", "expected [x, y] pairs");
            }
            track.waypoints.push_back({wp[0].get<double>(), wp[1].get<double>()});
        }
        sc.humans.push_back(std::move(track));
    }
    return sc;
}

json pattern_to_json(const PatternConfig& pattern) {
    json o;
    o["type"] = pattern.type;
    if (pattern.type == "step") o["switch_at"] = pattern.switch_at;
    if (pattern.type == "periodic") o["period"] = pattern.period;
    if (pattern.type == "scripted") o["sequence"] = pattern.sequence;
    if (pattern.type == "handoffs") o["handoff_steps"] = pattern.handoff_steps;
    return o;
}

json model_to_json(const TransitionModelConfig& model) {
    json o;
    if (model.matrix.empty()) {
        o["stay_prob"] = model.stay_prob;
    } else {
        const std::size_t n = static_cast<std::size_t>(std::lround(std::sqrt(
            static_cast<double>(model.matrix.size()))));
        json rows = json::array();
        for (std::size_t i = 0; i < n; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < n; ++j) row.push_back(model.matrix[i * n + j]);
            rows.push_back(row);
        }
        o["transition_matrix"] = rows;
    }
    return o;
}

}  // namespace

bool ContinuousScenarioConfig::operator==(const ContinuousScenarioConfig& other) const {
    return params.rho == other.params.rho && params.forward_speed == other.params.forward_speed &&
           params.turn_rate == other.params.turn_rate && params.noise.a == other.params.noise.a &&
           params.noise.b == other.params.noise.b && robot_start.x == other.robot_start.x &&
           robot_start.y == other.robot_start.y && robot_start.heading == other.robot_start.heading &&
           humans == other.humans;
}

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
    return scenario == other.scenario && horizon == other.horizon && epsilon == other.epsilon &&
           prior == other.prior && policy == other.policy && gamma == other.gamma &&
           vi_tol == other.vi_tol && seeds == other.seeds && traces == other.traces &&
           out_dir == other.out_dir && rows == other.rows;
}

ExperimentConfig parse_config_json(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse, std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw Error(ErrorCode::kParse, "config: top level must be an object");

    // A run manifest wraps the resolved config it was produced from.
    if (root.contains("manifest_version")) {
        if (!root.contains("config")) {
            throw Error(ErrorCode::kParse, "config: manifest lacks an embedded config");
        }
        root = root.at("config");
        if (!root.is_object()) throw Error(ErrorCode::kParse, "config: manifest config must be an object");
    }

    reject_unknown_keys(root, "",
                        {"scenario", "horizon", "epsilon", "prior", "policy", "gamma", "vi_tol",
                         "seeds", "traces", "out_dir", "pattern", "stay_prob", "transition_matrix",
                         "sigma", "experiments"});

    ExperimentConfig config;

    if (!root.contains("scenario")) throw Error(ErrorCode::kParse, "config: scenario: missing");
    const json& scenario = root.at("scenario");
    if (!scenario.is_object()) fail("scenario", "expected an object");
    const std::string type = get_string(scenario, "scenario.", "type", "");
    if (type == "discrete") {
        config.scenario = parse_discrete_scenario(scenario);
    } else if (type == "continuous") {
        config.scenario = parse_continuous_scenario(scenario);
    } else {
        fail("scenario.type", "expected discrete|continuous");
    }

    config.horizon = get_int(root, "", "horizon", 500, 1, 1 << 28);
    config.epsilon = get_number(root, "", "epsilon", 1e-3, 0.0, 1.0);
    config.gamma = get_number(root, "", "gamma", 0.95, 0.0, 0.999999999);
    config.vi_tol = get_number(root, "", "vi_tol", 1e-8, 1e-15, 1.0);
    config.traces = get_bool(root, "", "traces", false);
    config.out_dir = get_string(root, "", "out_dir", "out");

    const std::string policy =
        get_string(root, "", "policy", config.is_discrete() ? "random" : "pursuit");
    if (policy == "random") config.policy = PolicyMode::kRandom;
    else if (policy == "abstract") config.policy = PolicyMode::kAbstract;
    else if (policy == "pursuit") config.policy = PolicyMode::kPursuit;
    else fail("policy", "expected random|abstract|pursuit");
    if (config.policy == PolicyMode::kPursuit && config.is_discrete()) {
        fail("policy", "pursuit applies to the continuous scenario");
    }
    if (config.policy == PolicyMode::kAbstract && !config.is_discrete()) {
        fail("policy", "abstract applies to the discrete scenario");
    }

    if (root.contains("prior")) {
        const json& prior = root.at("prior");
        if (!prior.is_array()) fail("prior", "expected an array of probabilities");
        double sum = 0.0;
        for (const json& e : prior) {
            if (!e.is_number()) fail("prior", "expected numbers");
            const double p = e.get<double>();
            if (p < 0.0 || p > 1.0) fail("prior", "entries must be in [0, 1]");
            config.prior.push_back(p);
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) fail("prior", "entries must sum to 1");
    }

    if (root.contains("seeds")) {
        const json& seeds = root.at("seeds");
        if (!seeds.is_array() || seeds.empty()) fail("seeds", "expected a non-empty array");
        config.seeds.clear();
        for (const json& e : seeds) {
            if (!e.is_number_integer() || e.get<long long>() < 0) {
                fail("seeds", "expected non-negative integers");
            }
            config.seeds.push_back(e.get<std::uint64_t>());
        }
    }

    const PatternConfig default_pattern =
        root.contains("pattern") ? parse_pattern(root.at("pattern"), "pattern") : PatternConfig{};
    TransitionModelConfig default_model;
    default_model = parse_model(root, "", default_model);
    if (root.contains("sigma")) {
        if (!config.is_discrete()) fail("sigma", "applies to discrete scenarios only");
        std::get<DiscreteScenarioConfig>(config.scenario).sigma =
            get_number(root, "", "sigma", 0.0, 0.0, 1.0);
    }

    if (root.contains("experiments")) {
        const json& rows = root.at("experiments");
        if (!rows.is_array() || rows.empty()) fail("experiments", "expected a non-empty array");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string rpath = "experiments[" + std::to_string(i) + "]";
            const json& row = rows[i];
            if (!row.is_object()) fail(rpath, "expected an object");
            reject_unknown_keys(row, rpath,
                                {"name", "pattern", "stay_prob", "transition_matrix", "sigma"});
            ExperimentRowConfig rc;
            rc.name = get_string(row, rpath + ".", "name", "");
            rc.pattern = row.contains("pattern") ? parse_pattern(row.at("pattern"), rpath + ".pattern")
                                                 : default_pattern;
            rc.model = parse_model(row, rpath, default_model);
            if (row.contains("sigma")) {
                rc.sigma = get_number(row, rpath + ".", "sigma", 0.0, 0.0, 1.0);
            }
            config.rows.push_back(std::move(rc));
        }
    } else {
        ExperimentRowConfig rc;
        rc.pattern = default_pattern;
        rc.model = default_model;
        config.rows.push_back(std::move(rc));
    }

    // Fill in deterministic names for unnamed rows.
    for (std::size_t i = 0; i < config.rows.size(); ++i) {
        if (config.rows[i].name.empty()) {
            config.rows[i].name = "row" + std::to_string(i) + "_" + config.rows[i].pattern.type;
        }
    }

    // Row names key output files, so they must be unique.
    for (std::size_t i = 0; i < config.rows.size(); ++i) {
        for (std::size_t j = i + 1; j < config.rows.size(); ++j) {
            if (config.rows[i].name == config.rows[j].name) {
                fail("experiments", "duplicate row name '" + config.rows[i].name + "'");
            }
        }
    }
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

std::string write_config_json(const ExperimentConfig& config) {
    json root;
    json scenario;
    if (config.is_discrete()) {
        const auto& sc = std::get<DiscreteScenarioConfig>(config.scenario);
        scenario["type"] = "discrete";
        json transitions;
        auto matrix_to_json = [](const std::vector<double>& m) {
            json rows = json::array();
            for (int s = 0; s < kDiscreteStates; ++s) {
                json row = json::array();
                for (int t = 0; t < kDiscreteStates; ++t) {
                    row.push_back(m[static_cast<std::size_t>(s) * kDiscreteStates + t]);
                }
                rows.push_back(row);
            }
            return rows;
        };
        transitions["left"] = matrix_to_json(sc.transitions.matrices[0]);
        transitions["right"] = matrix_to_json(sc.transitions.matrices[1]);
        scenario["transitions"] = transitions;
        scenario["sigma"] = sc.sigma;
        scenario["state_noise_kind"] = sc.noise_kind == StateNoiseKind::kUniform ? "uniform" : "inward";
    } else {
        const auto& sc = std::get<ContinuousScenarioConfig>(config.scenario);
        scenario["type"] = "continuous";
        scenario["rho"] = sc.params.rho;
        scenario["forward_speed"] = sc.params.forward_speed;
        scenario["turn_rate"] = sc.params.turn_rate;
        scenario["noise"] = {{"a", sc.params.noise.a}, {"b", sc.params.noise.b}};
        scenario["robot"] = {{"x", sc.robot_start.x},
                             {"y", sc.robot_start.y},
                             {"heading", sc.robot_start.heading}};
        json humans = json::array();
        for (const auto& h : sc.humans) {
            json wps = json::array();
            for (const auto& wp : h.waypoints) wps.push_back({wp[0], wp[1]});
            humans.push_back({{"waypoints", wps}, {"speed", h.speed}});
        }
        scenario["humans"] = humans;
    }
    root["scenario"] = scenario;
    root["horizon"] = config.horizon;
    root["epsilon"] = config.epsilon;
    if (!config.prior.empty()) root["prior"] = config.prior;
    root["policy"] = config.policy == PolicyMode::kRandom
                         ? "random"
                         : (config.policy == PolicyMode::kAbstract ? "abstract" : "pursuit");
    root["gamma"] = config.gamma;
    root["vi_tol"] = config.vi_tol;
    root["seeds"] = config.seeds;
    root["traces"] = config.traces;
    root["out_dir"] = config.out_dir;
    json rows = json::array();
    for (const auto& rc : config.rows) {
        json row;
        row["name"] = rc.name;
        row["pattern"] = pattern_to_json(rc.pattern);
        json model = model_to_json(rc.model);
        for (auto it = model.begin(); it != model.end(); ++it) row[it.key()] = it.value();
        if (rc.sigma) row["sigma"] = *rc.sigma;
        rows.push_back(row);
    }
    root["experiments"] = rows;
    return root.dump(2);
}

SwitchSchedule build_schedule(const PatternConfig& pattern, int horizon, int n_contexts,
                              std::uint64_t seed, int row_index) {
    if (pattern.type == "step") return make_step_schedule(pattern.switch_at, horizon);
    if (pattern.type == "periodic") return make_periodic_schedule(pattern.period, horizon);
    if (pattern.type == "random") {
        RandomStream rng = RandomStream::for_trial(seed, 0x5c4edu + static_cast<std::uint64_t>(row_index));
        return make_uniform_random_schedule(n_contexts, horizon, rng);
    }
    if (pattern.type == "scripted") {
        std::vector<int> seq = pattern.sequence;
        if (static_cast<int>(seq.size()) != horizon) {
            throw Error(ErrorCode::kParse, "config: scripted sequence length must equal horizon");
        }
        return make_scripted_schedule(std::move(seq), n_contexts);
    }
    if (pattern.type == "handoffs") {
        std::vector<int> seq(static_cast<std::size_t>(horizon), 0);
        int context = 0;
        std::size_t next = 0;
        for (int t = 0; t < horizon; ++t) {
            if (next < pattern.handoff_steps.size() && t == pattern.handoff_steps[next]) {
                context = 1 - context;
                ++next;
            }
            seq[static_cast<std::size_t>(t)] = context;
        }
        if (next != pattern.handoff_steps.size()) {
            throw Error(ErrorCode::kParse, "config: handoff step beyond horizon");
        }
        SwitchSchedule s = make_scripted_schedule(std::move(seq), n_contexts);
        s.descriptor = "handoffs";
        return s;
    }
    throw Error(ErrorCode::kParse, "config: unknown pattern type " + pattern.type);
}

}  // namespace oas
