#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oas/config.hpp"
#include "oas/error.hpp"
#include "oas/suite.hpp"

using namespace oas;

namespace {

const char* kMinimalDiscrete = R"({
  "scenario": {"type": "discrete"},
  "pattern": {"type": "step", "switch_at": 100}
})";

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const std::filesystem::path path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("minimal discrete config fills the documented defaults") {
    const ExperimentConfig config = parse_config_json(kMinimalDiscrete);
    CHECK(config.horizon == 500);
    CHECK(config.seeds == std::vector<std::uint64_t>{0, 1, 2, 3, 4});
    CHECK(config.epsilon == doctest::Approx(1e-3));
    CHECK(config.policy == PolicyMode::kRandom);
    REQUIRE(config.rows.size() == 1);
    CHECK(config.rows[0].model.stay_prob == doctest::Approx(0.8));
    CHECK(config.rows[0].pattern.type == "step");
    const auto& scenario = std::get<DiscreteScenarioConfig>(config.scenario);
    CHECK(scenario.sigma == 0.0);
    CHECK(scenario.noise_kind == StateNoiseKind::kUniform);
    CHECK(scenario.transitions.matrices == default_discrete_transitions().matrices);
}

TEST_CASE("out-of-range stay probability names the key") {
    const char* bad = R"({
      "scenario": {"type": "discrete"},
      "stay_prob": 1.2
    })";
    CHECK_THROWS_WITH_AS(parse_config_json(bad), doctest::Contains("stay_prob"), Error);
}

TEST_CASE("unknown keys are rejected with their path") {
    const char* bad = R"({
      "scenario": {"type": "discrete", "sgima": 0.7}
    })";
    CHECK_THROWS_WITH_AS(parse_config_json(bad), doctest::Contains("sgima"), Error);
}

TEST_CASE("sigma on a continuous config is rejected") {
    const char* bad = R"({
      "scenario": {"type": "continuous",
                   "humans": [{"waypoints": [[1, 0]]}, {"waypoints": [[2, 0]]}]},
      "sigma": 0.5
    })";
    CHECK_THROWS_WITH_AS(parse_config_json(bad), doctest::Contains("sigma"), Error);
}

TEST_CASE("continuous config needs exactly two humans") {
    const char* bad = R"({
      "scenario": {"type": "continuous", "humans": [{"waypoints": [[1, 0]]}]}
    })";
    CHECK_THROWS_WITH_AS(parse_config_json(bad), doctest::Contains("humans"), Error);
}

TEST_CASE("the shipped tracking suite has ten experiment rows") {
    const ExperimentConfig config = parse_config_file(std::string(OAS_SOURCE_DIR) +
                                                      "/configs/discrete_tracking.json");
    CHECK(config.rows.size() == 10);
    int stay_high = 0;
    int stay_uniform = 0;
    for (const auto& row : config.rows) {
        if (row.model.stay_prob == 0.8) ++stay_high;
        if (row.model.stay_prob == 0.5) ++stay_uniform;
    }
    CHECK(stay_high == 5);
    CHECK(stay_uniform == 5);
    const auto& scenario = std::get<DiscreteScenarioConfig>(config.scenario);
    CHECK(scenario.noise_kind == StateNoiseKind::kInward);
}

TEST_CASE("configs round-trip through write and parse") {
    for (const char* name : {"discrete_tracking.json", "continuous_handoff.json", "smoke.json"}) {
        const ExperimentConfig config =
            parse_config_file(std::string(OAS_SOURCE_DIR) + "/configs/" + name);
        const ExperimentConfig reparsed = parse_config_json(write_config_json(config));
        CHECK(config == reparsed);
    }
}

TEST_CASE("a run manifest is accepted as a config source") {
    ExperimentConfig config = parse_config_json(kMinimalDiscrete);
    config.horizon = 40;
    config.rows[0].pattern.switch_at = 10;
    config.seeds = {1, 2};
    config.out_dir = (std::filesystem::temp_directory_path() / "oas_manifest_test").string();
    SuiteOptions options;
    const SuiteResult result = run_suite(config, options);
    const ExperimentConfig from_manifest = parse_config_file(result.manifest_path);
    CHECK(from_manifest == config);
}

TEST_CASE("scripted sequence length must match the horizon") {
    const char* bad = R"({
      "scenario": {"type": "discrete"},
      "horizon": 5,
      "pattern": {"type": "scripted", "sequence": [0, 1]}
    })";
    const ExperimentConfig config = parse_config_json(bad);
    CHECK_THROWS_AS(build_schedule(config.rows[0].pattern, config.horizon, 2, 0, 0), Error);
}

TEST_CASE("handoff pattern toggles at each listed step") {
    PatternConfig pattern;
    pattern.type = "handoffs";
    pattern.handoff_steps = {3, 6};
    const SwitchSchedule schedule = build_schedule(pattern, 9, 2, 0, 0);
    CHECK(schedule.active_sequence == std::vector<int>{0, 0, 0, 1, 1, 1, 0, 0, 0});
}

TEST_CASE("random patterns replay per (seed, row)") {
    PatternConfig pattern;
    pattern.type = "random";
    const SwitchSchedule a = build_schedule(pattern, 100, 2, 7, 1);
    const SwitchSchedule b = build_schedule(pattern, 100, 2, 7, 1);
    const SwitchSchedule c = build_schedule(pattern, 100, 2, 8, 1);
    CHECK(a.active_sequence == b.active_sequence);
    CHECK(a.active_sequence != c.active_sequence);
}

TEST_CASE("missing files raise an io error") {
    CHECK_THROWS_AS(parse_config_file("/nonexistent/config.json"), Error);
}

TEST_CASE("malformed JSON raises a parse error") {
    const auto path = write_temp("oas_bad_config.json", "{ not json");
    CHECK_THROWS_AS(parse_config_file(path.string()), Error);
}

TEST_CASE("quotient report format") {
    const std::string mdp_path = std::string(OAS_SOURCE_DIR) + "/configs/examples/corridor_context0.json";
    const std::string report = quotient_report_json(mdp_path);
    CHECK(report.find("\"n_blocks\": 2") != std::string::npos);
    CHECK(report.find("quotient") != std::string::npos);
}
