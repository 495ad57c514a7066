#include <doctest.h>

#include <cmath>

#include "oas/error.hpp"
#include "oas/scenario_continuous.hpp"
#include "oas/scenario_discrete.hpp"

using namespace oas;

TEST_CASE("default discrete scenario reproduces the required partition structure") {
    const DiscreteScenario scenario =
        build_discrete_scenario(default_discrete_transitions(), 0.0);
    REQUIRE(scenario.abstractions.size() == 2);
    CHECK(scenario.abstractions[0].partition.blocks == std::vector<std::vector<int>>{{0, 1}, {2}});
    CHECK(scenario.abstractions[1].partition.blocks == std::vector<std::vector<int>>{{0}, {1, 2}});
}

TEST_CASE("contexts share dynamics and carry one-state indicator rewards") {
    const DiscreteScenario scenario =
        build_discrete_scenario(default_discrete_transitions(), 0.3);
    const Mdp& c0 = scenario.catalog.contexts[0];
    const Mdp& c1 = scenario.catalog.contexts[1];
    CHECK(c0.transitions == c1.transitions);
    // context 0 rewards s3, context 1 rewards s1, action-constant
    for (int a = 0; a < 2; ++a) {
        CHECK(c0.reward(2, a) == 1.0);
        CHECK(c0.reward(0, a) == 0.0);
        CHECK(c1.reward(0, a) == 1.0);
        CHECK(c1.reward(2, a) == 0.0);
    }
}

TEST_CASE("context-0 quotient puts the unit reward on the s3 block only") {
    const DiscreteScenario scenario =
        build_discrete_scenario(default_discrete_transitions(), 0.0);
    const Mdp& quotient = scenario.abstractions[0].quotient;
    CHECK(quotient.reward(0, 0) == 0.0);
    CHECK(quotient.reward(1, 0) == 1.0);
}

TEST_CASE("one-cell clamped moves are rejected by the consistency check") {
    // Strictly local stepping splits {s1, s2} under the reward-on-s3 context,
    // so this config cannot express the intended attention structure.
    DiscreteTransitionsConfig one_cell;
    one_cell.matrices = {
        {1, 0, 0, 1, 0, 0, 0, 1, 0},  // left: move one cell, clamped
        {0, 1, 0, 0, 0, 1, 0, 0, 1},  // right
    };
    CHECK_THROWS_WITH_AS(build_discrete_scenario(one_cell, 0.0),
                         doctest::Contains("scenario-consistency"), Error);
}

TEST_CASE("sigma 0 observation is the identity") {
    RandomStream rng(1);
    for (int s = 0; s < 3; ++s) {
        CHECK(observe_state_discrete(s, 0.0, StateNoiseKind::kUniform, rng) == s);
        CHECK(observe_state_discrete(s, 0.0, StateNoiseKind::kInward, rng) == s);
    }
}

TEST_CASE("sigma 1 uniform noise hits the other two states evenly") {
    RandomStream rng(2);
    const int draws = 100000;
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < draws; ++i) {
        ++counts[observe_state_discrete(0, 1.0, StateNoiseKind::kUniform, rng)];
    }
    CHECK(counts[0] == 0);
    CHECK(static_cast<double>(counts[1]) / draws == doctest::Approx(0.5).epsilon(0.02));
    CHECK(static_cast<double>(counts[2]) / draws == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("sigma 0.7 uniform noise keeps the true state 30% of the time") {
    RandomStream rng(3);
    const int draws = 100000;
    int correct = 0;
    for (int i = 0; i < draws; ++i) {
        if (observe_state_discrete(1, 0.7, StateNoiseKind::kUniform, rng) == 1) ++correct;
    }
    CHECK(static_cast<double>(correct) / draws == doctest::Approx(0.3).epsilon(0.034));
}

TEST_CASE("inward noise confuses ends toward the middle and leaves it alone") {
    RandomStream rng(4);
    const int draws = 100000;
    int middle_from_end = 0;
    for (int i = 0; i < draws; ++i) {
        const int obs = observe_state_discrete(2, 0.7, StateNoiseKind::kInward, rng);
        CHECK((obs == 1 || obs == 2));
        if (obs == 1) ++middle_from_end;
    }
    CHECK(static_cast<double>(middle_from_end) / draws == doctest::Approx(0.7).epsilon(0.02));
    for (int i = 0; i < 100; ++i) {
        CHECK(observe_state_discrete(1, 0.7, StateNoiseKind::kInward, rng) == 1);
    }
}

TEST_CASE("discrete likelihoods follow the epsilon-smoothed indicator") {
    const DiscreteScenario scenario =
        build_discrete_scenario(default_discrete_transitions(), 0.0);
    const double eps = 1e-3;
    // observed s3, reward 1: context-0 abstraction predicts 1 there, the
    // context-1 abstraction predicts 0.
    auto L = discrete_likelihoods(scenario, 1.0, 2, eps);
    CHECK(L[0] == doctest::Approx(1.0 - eps));
    CHECK(L[1] == doctest::Approx(eps));
    // observed s2, reward 0: both predict 0
    L = discrete_likelihoods(scenario, 0.0, 1, eps);
    CHECK(L[0] == doctest::Approx(1.0 - eps));
    CHECK(L[1] == doctest::Approx(1.0 - eps));
}

// ---------------------------------------------------------------------------
// continuous scenario
// ---------------------------------------------------------------------------

namespace {

ContinuousScenario hallway_scenario() {
    ContinuousScenario scenario;
    scenario.params.rho = 1.0;
    scenario.params.forward_speed = 1.0;
    scenario.params.turn_rate = 1.0;
    scenario.params.noise = DepthNoiseParams{0.0, 0.0};
    scenario.robot = Pose{0.0, 0.0, 0.0};
    scenario.humans = {
        HumanTrack{{{2.0, 0.6}, {60.0, 0.6}}, 0.5},
        HumanTrack{{{2.0, -0.6}, {60.0, -0.6}}, 0.5},
    };
    return scenario;
}

}  // namespace

TEST_CASE("stop leaves the robot pose unchanged") {
    ContinuousScenario scenario = hallway_scenario();
    const Pose before = scenario.robot;
    step_continuous(scenario, DriveAction::kStop, 0);
    CHECK(scenario.robot.x == before.x);
    CHECK(scenario.robot.y == before.y);
    CHECK(scenario.robot.heading == before.heading);
}

TEST_CASE("straight advances 0.2 * v along the heading") {
    ContinuousScenario scenario = hallway_scenario();
    scenario.params.forward_speed = 0.8;
    step_continuous(scenario, DriveAction::kStraight, 0);
    CHECK(scenario.robot.x == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(scenario.robot.y == doctest::Approx(0.0));
}

TEST_CASE("humans advance along their tracks at configured speed") {
    ContinuousScenario scenario = hallway_scenario();
    for (int i = 0; i < 10; ++i) step_continuous(scenario, DriveAction::kStop, 0);
    // 2 seconds at 0.5 m/s
    const double t = scenario.step_index * kControlPeriodSec;
    const auto p = scenario.humans[0].position(t);
    CHECK(p[0] == doctest::Approx(3.0));
    CHECK(p[1] == doctest::Approx(0.6));
}

TEST_CASE("reward uses a closed ball on the true treat-holder distance") {
    ContinuousScenario scenario = hallway_scenario();
    // place the robot so human 0 sits exactly at distance rho after one tick
    scenario.humans[0].speed = 0.0;
    scenario.humans[0].waypoints = {{1.0, 0.0}};
    scenario.humans[1].speed = 0.0;
    scenario.humans[1].waypoints = {{10.0, 10.0}};
    const ContinuousStepResult result = step_continuous(scenario, DriveAction::kStop, 0);
    CHECK(scenario.human_distance(0) == doctest::Approx(1.0));
    CHECK(result.reward == 1.0);  // boundary rewards
    const ContinuousStepResult other = step_continuous(scenario, DriveAction::kStop, 1);
    CHECK(other.reward == 0.0);
}

TEST_CASE("zero noise observation is the identity") {
    RandomStream rng(7);
    const std::array<double, 4> state = {1.0, -2.0, 3.5, 0.25};
    const auto obs = observe_state_continuous(state, DepthNoiseParams{0.0, 0.0}, rng);
    CHECK(obs == state);
}

TEST_CASE("depth noise std grows linearly with distance") {
    RandomStream rng(8);
    const DepthNoiseParams noise{0.02, 0.01};
    // human 0 at distance 4 -> per-coordinate std 0.06
    const std::array<double, 4> state = {4.0, 0.0, 0.0, 0.0};
    const int draws = 100000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const auto obs = observe_state_continuous(state, noise, rng);
        const double d = obs[1];  // y-coordinate error of human 0
        sum += d;
        sq += d * d;
    }
    const double mean = sum / draws;
    const double std_dev = std::sqrt(sq / draws - mean * mean);
    CHECK(std_dev == doctest::Approx(0.06).epsilon(0.05));
}

TEST_CASE("the linear law doubles the std between 1 m and a/b + 2 m") {
    const DepthNoiseParams noise{0.02, 0.01};
    const auto std_at = [&](double d) { return noise.a + noise.b * d; };
    CHECK(std_at(noise.a / noise.b + 2.0) == doctest::Approx(2.0 * std_at(1.0)).epsilon(1e-12));
}

TEST_CASE("pursuit drives straight at a human directly ahead") {
    const ProjectionAbstraction ab{0, 1.0};
    ContinuousParams params;
    const std::array<double, 4> obs = {3.0, 0.0, -5.0, 2.0};
    CHECK(pursuit_policy(ab, obs, params) == DriveAction::kStraight);
}

TEST_CASE("pursuit stops inside 0.8 rho") {
    const ProjectionAbstraction ab{0, 1.0};
    ContinuousParams params;
    const std::array<double, 4> obs = {0.5, 0.0, -5.0, 2.0};
    CHECK(pursuit_policy(ab, obs, params) == DriveAction::kStop);
}

TEST_CASE("pursuit ignores the masked-out human entirely") {
    const ProjectionAbstraction ab{0, 1.0};
    ContinuousParams params;
    RandomStream rng(88);
    for (int i = 0; i < 200; ++i) {
        const std::array<double, 4> obs = {rng.uniform01() * 6 - 3, rng.uniform01() * 6 - 3,
                                           rng.uniform01() * 6 - 3, rng.uniform01() * 6 - 3};
        std::array<double, 4> perturbed = obs;
        perturbed[2] += rng.gaussian(0.0, 10.0);
        perturbed[3] += rng.gaussian(0.0, 10.0);
        CHECK(pursuit_policy(ab, obs, params) == pursuit_policy(ab, perturbed, params));
    }
}

TEST_CASE("projection abstraction for human 1 mirrors the mask") {
    const ProjectionAbstraction ab{1, 1.0};
    const std::array<double, 4> near = {9.0, 9.0, 0.5, 0.0};
    const std::array<double, 4> far = {0.1, 0.0, 4.0, 4.0};
    CHECK(projection_predicted_reward(ab, near) == 1.0);
    CHECK(projection_predicted_reward(ab, far) == 0.0);
}

TEST_CASE("continuous likelihoods mirror the reward match per projection") {
    const std::vector<ProjectionAbstraction> catalog = {{0, 1.0}, {1, 1.0}};
    const double eps = 1e-3;
    const std::array<double, 4> obs = {0.5, 0.0, 3.0, 0.0};  // human0 inside, human1 outside
    auto L = continuous_likelihoods(catalog, 1.0, obs, eps);
    CHECK(L[0] == doctest::Approx(1.0 - eps));
    CHECK(L[1] == doctest::Approx(eps));
    L = continuous_likelihoods(catalog, 0.0, obs, eps);
    CHECK(L[0] == doctest::Approx(eps));
    CHECK(L[1] == doctest::Approx(1.0 - eps));
}

TEST_CASE("turn-in-place displacement is pure rotation") {
    ContinuousParams params;
    params.turn_rate = 0.8;
    const auto d = drive_displacement(DriveAction::kLeft, params);
    CHECK(d[0] == doctest::Approx(0.0));
    CHECK(d[1] == doctest::Approx(0.0));
    CHECK(d[2] == doctest::Approx(0.16).epsilon(1e-12));
    const auto r = drive_displacement(DriveAction::kRight, params);
    CHECK(r[2] == doctest::Approx(-0.16).epsilon(1e-12));
}

TEST_CASE("arc displacement follows the constant-twist solution") {
    ContinuousParams params;
    params.forward_speed = 1.0;
    params.turn_rate = 1.0;
    const auto d = drive_displacement(DriveAction::kLeftStraight, params);
    CHECK(d[0] == doctest::Approx(std::sin(0.2)).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(1.0 - std::cos(0.2)).epsilon(1e-12));
    CHECK(d[2] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("relative state is expressed in the robot frame") {
    ContinuousScenario scenario = hallway_scenario();
    scenario.robot = Pose{1.0, 0.0, M_PI / 2.0};  // facing +y
    scenario.humans[0].waypoints = {{1.0, 2.0}};
    scenario.humans[0].speed = 0.0;
    const auto state = scenario.relative_state();
    CHECK(state[0] == doctest::Approx(2.0));  // ahead
    CHECK(state[1] == doctest::Approx(0.0).epsilon(1e-12));
}
