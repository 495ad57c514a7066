#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "oas/oas.h"

namespace {

// Shipped corridor dynamics with the reward on s3 (context 0).
struct CorridorData {
    std::vector<double> transitions = {
        // left
        0.75, 0.25, 0.00, 0.75, 0.25, 0.00, 0.75, 0.25, 0.00,
        // right
        0.00, 0.25, 0.75, 0.00, 0.25, 0.75, 0.00, 0.25, 0.75};
    std::vector<double> rewards = {0, 0, 0, 0, 1, 1};
};

}  // namespace

TEST_CASE("C API: version and initial error state") {
    CHECK(oas_version() != nullptr);
    CHECK(oas_last_error() != nullptr);
}

TEST_CASE("C API: mdp lifecycle, partition, quotient, filter") {
    CorridorData data;
    oas_mdp* mdp = nullptr;
    REQUIRE(oas_mdp_create(3, 2, data.transitions.data(), data.rewards.data(), &mdp) == OAS_OK);
    CHECK(oas_mdp_num_states(mdp) == 3);
    CHECK(oas_mdp_num_actions(mdp) == 2);

    double row[3];
    REQUIRE(oas_mdp_transition_row(mdp, 0, 1, row) == OAS_OK);
    CHECK(row[2] == doctest::Approx(0.75));
    double reward = -1;
    REQUIRE(oas_mdp_reward(mdp, 2, 0, &reward) == OAS_OK);
    CHECK(reward == 1.0);

    int32_t block_of[3];
    int32_t n_blocks = 0;
    REQUIRE(oas_mdp_coarsest_partition(mdp, block_of, &n_blocks) == OAS_OK);
    CHECK(n_blocks == 2);
    CHECK(block_of[0] == block_of[1]);
    CHECK(block_of[2] != block_of[0]);

    oas_abstraction* ab = nullptr;
    REQUIRE(oas_abstraction_build(mdp, block_of, 0, &ab) == OAS_OK);
    CHECK(oas_abstraction_num_blocks(ab) == 2);
    int32_t z = -1;
    REQUIRE(oas_abstraction_map_state(ab, 1, &z) == OAS_OK);
    CHECK(z == block_of[1]);
    const oas_mdp* quotient = oas_abstraction_quotient(ab);
    REQUIRE(quotient != nullptr);
    CHECK(oas_mdp_num_states(quotient) == 2);

    // two-abstraction filter fed by the detection helper
    std::vector<double> stay(4);
    REQUIRE(oas_stay_matrix(2, 0.8, stay.data()) == OAS_OK);
    oas_filter* filter = nullptr;
    REQUIRE(oas_filter_create(2, nullptr, stay.data(), 1e-3, &filter) == OAS_OK);
    CHECK(oas_filter_size(filter) == 2);

    const oas_abstraction* catalog[2] = {ab, ab};
    double likelihoods[2];
    REQUIRE(oas_detect_discrete(catalog, 2, 1.0, 2, 1e-3, likelihoods) == OAS_OK);
    CHECK(likelihoods[0] == doctest::Approx(0.999));

    int32_t ml = -1;
    REQUIRE(oas_filter_step(filter, likelihoods, &ml) == OAS_OK);
    CHECK(ml == 0);
    double belief[2];
    REQUIRE(oas_filter_belief(filter, belief) == OAS_OK);
    CHECK(belief[0] + belief[1] == doctest::Approx(1.0));

    oas_filter_free(filter);
    oas_abstraction_free(ab);
    oas_mdp_free(mdp);
}

TEST_CASE("C API: sampling through an rng handle is reproducible") {
    CorridorData data;
    oas_mdp* mdp = nullptr;
    REQUIRE(oas_mdp_create(3, 2, data.transitions.data(), data.rewards.data(), &mdp) == OAS_OK);
    oas_rng* a = nullptr;
    oas_rng* b = nullptr;
    REQUIRE(oas_rng_create(42, &a) == OAS_OK);
    REQUIRE(oas_rng_create(42, &b) == OAS_OK);
    for (int i = 0; i < 50; ++i) {
        int32_t next_a = -1;
        int32_t next_b = -1;
        REQUIRE(oas_mdp_sample_transition(mdp, i % 3, 1, a, &next_a) == OAS_OK);
        REQUIRE(oas_mdp_sample_transition(mdp, i % 3, 1, b, &next_b) == OAS_OK);
        CHECK(next_a == next_b);
    }
    oas_rng_free(a);
    oas_rng_free(b);
    oas_mdp_free(mdp);
}

TEST_CASE("C API: errors carry codes and messages") {
    CHECK(oas_mdp_create(3, 2, nullptr, nullptr, nullptr) == OAS_ERR_INVALID_ARGUMENT);

    // row sums off by far more than the tolerance
    std::vector<double> bad_transitions = {0.5, 0.6, 0.0, 1, 0, 0, 0, 1, 0,
                                           0, 1, 0, 0, 0, 1, 0, 0, 1};
    std::vector<double> rewards = {0, 0, 0, 0, 1, 1};
    oas_mdp* mdp = nullptr;
    CHECK(oas_mdp_create(3, 2, bad_transitions.data(), rewards.data(), &mdp) ==
          OAS_ERR_VALIDATION);
    CHECK(std::strlen(oas_last_error()) > 0);

    oas_mdp* missing = nullptr;
    CHECK(oas_mdp_load_json("/nonexistent/mdp.json", &missing) == OAS_ERR_IO);

    oas_config* config = nullptr;
    CHECK(oas_config_load("/nonexistent/config.json", &config) == OAS_ERR_IO);

    // a non-bisimulation partition is rejected
    CorridorData data;
    REQUIRE(oas_mdp_create(3, 2, data.transitions.data(), data.rewards.data(), &mdp) == OAS_OK);
    const int32_t merged[3] = {0, 0, 0};
    oas_abstraction* ab = nullptr;
    CHECK(oas_abstraction_build(mdp, merged, 0, &ab) == OAS_ERR_VALIDATION);
    oas_mdp_free(mdp);
}

TEST_CASE("C API: config load, echo, and a tiny suite run") {
    const std::string config_path = std::string(OAS_SOURCE_DIR) + "/configs/smoke.json";
    oas_config* config = nullptr;
    REQUIRE(oas_config_load(config_path.c_str(), &config) == OAS_OK);

    char* echo = nullptr;
    REQUIRE(oas_config_json(config, &echo) == OAS_OK);
    CHECK(std::string(echo).find("\"scenario\"") != std::string::npos);
    oas_string_free(echo);

    const std::filesystem::path out_dir =
        std::filesystem::temp_directory_path() / "oas_capi_suite";
    std::filesystem::remove_all(out_dir);
    oas_run_options options;
    options.out_dir = out_dir.c_str();
    options.seeds_csv = "0,1";
    options.traces = 1;
    options.parallel = 2;
    char* metrics_path = nullptr;
    REQUIRE(oas_run_suite(config, &options, &metrics_path) == OAS_OK);
    CHECK(std::filesystem::exists(metrics_path));

    // recompute stats from one of the traces
    const std::filesystem::path trace =
        out_dir / "traces" / "smoke_seed0.csv";
    REQUIRE(std::filesystem::exists(trace));
    char* stats = nullptr;
    REQUIRE(oas_trace_stats_json(trace.c_str(), &stats) == OAS_OK);
    CHECK(std::string(stats).find("accuracy") != std::string::npos);
    oas_string_free(stats);
    oas_string_free(metrics_path);
    oas_config_free(config);
}

TEST_CASE("C API: quotient report from an MDP file") {
    const std::string mdp_path =
        std::string(OAS_SOURCE_DIR) + "/configs/examples/corridor_context0.json";
    char* report = nullptr;
    REQUIRE(oas_quotient_report_json(mdp_path.c_str(), &report) == OAS_OK);
    CHECK(std::string(report).find("\"n_blocks\": 2") != std::string::npos);
    oas_string_free(report);
}
