#include "oas/scenario_continuous.hpp"

#include <cmath>

#include "oas/error.hpp"
#include "oas/filter.hpp"

namespace oas {

std::array<double, 2> HumanTrack::position(double time_sec) const {
    if (waypoints.empty()) {
        throw Error(ErrorCode::kValidation, "human track needs at least one waypoint");
    }
    double remaining = speed * time_sec;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        const double dx = waypoints[i + 1][0] - waypoints[i][0];
        const double dy = waypoints[i + 1][1] - waypoints[i][1];
        const double len = std::hypot(dx, dy);
        if (remaining <= len || len == 0.0) {
            const double f = len == 0.0 ? 0.0 : remaining / len;
            return {waypoints[i][0] + f * dx, waypoints[i][1] + f * dy};
        }
        remaining -= len;
    }
    return waypoints.back();  // path exhausted, hold position
}

namespace {

std::array<double, 2> to_robot_frame(const Pose& robot, const std::array<double, 2>& world) {
    const double dx = world[0] - robot.x;
    const double dy = world[1] - robot.y;
    const double c = std::cos(robot.heading);
    const double s = std::sin(robot.heading);
    return {c * dx + s * dy, -s * dx + c * dy};
}

}  // namespace

std::array<double, 4> ContinuousScenario::relative_state() const {
    const double t = step_index * kControlPeriodSec;
    const auto p0 = to_robot_frame(robot, humans[0].position(t));
    const auto p1 = to_robot_frame(robot, humans[1].position(t));
    return {p0[0], p0[1], p1[0], p1[1]};
}

double ContinuousScenario::human_distance(int human) const {
    const double t = step_index * kControlPeriodSec;
    const auto p = humans[static_cast<std::size_t>(human)].position(t);
    return std::hypot(p[0] - robot.x, p[1] - robot.y);
}

std::array<double, 3> drive_displacement(DriveAction action, const ContinuousParams& params) {
    double v = 0.0;
    double w = 0.0;
    switch (action) {
        case DriveAction::kLeft: w = params.turn_rate; break;
        case DriveAction::kRight: w = -params.turn_rate; break;
        case DriveAction::kStraight: v = params.forward_speed; break;
        case DriveAction::kRightStraight: v = params.forward_speed; w = -params.turn_rate; break;
        case DriveAction::kLeftStraight: v = params.forward_speed; w = params.turn_rate; break;
        case DriveAction::kStop: break;
    }
    const double dt = kControlPeriodSec;
    if (std::abs(w) < 1e-12) {
        return {v * dt, 0.0, 0.0};
    }
    const double dtheta = w * dt;
    // Exact constant-twist arc.
    return {v / w * std::sin(dtheta), v / w * (1.0 - std::cos(dtheta)), dtheta};
}

ContinuousStepResult step_continuous(ContinuousScenario& scenario, DriveAction action,
                                     int treat_holder) {
    if (treat_holder < 0 || treat_holder >= static_cast<int>(scenario.humans.size())) {
        throw Error(ErrorCode::kInvalidArgument, "treat holder index out of range");
    }
    const auto d = drive_displacement(action, scenario.params);
    const double c = std::cos(scenario.robot.heading);
    const double s = std::sin(scenario.robot.heading);
    scenario.robot.x += c * d[0] - s * d[1];
    scenario.robot.y += s * d[0] + c * d[1];
    scenario.robot.heading += d[2];
    scenario.step_index += 1;

    ContinuousStepResult result;
    result.true_state = scenario.relative_state();
    // Closed ball: the boundary counts as rewarding. True positions only.
    result.reward = scenario.human_distance(treat_holder) <= scenario.params.rho ? 1.0 : 0.0;
    return result;
}

std::array<double, 4> observe_state_continuous(const std::array<double, 4>& true_state,
                                               const DepthNoiseParams& noise, RandomStream& rng) {
    if (noise.a < 0.0 || noise.b < 0.0) {
        throw Error(ErrorCode::kInvalidArgument, "depth noise parameters must be >= 0");
    }
    std::array<double, 4> observed = true_state;
    for (int human = 0; human < 2; ++human) {
        const double dist = std::hypot(true_state[static_cast<std::size_t>(2 * human)],
                                       true_state[static_cast<std::size_t>(2 * human + 1)]);
        const double std_dev = noise.a + noise.b * dist;
        observed[static_cast<std::size_t>(2 * human)] += rng.gaussian(0.0, std_dev);
        observed[static_cast<std::size_t>(2 * human + 1)] += rng.gaussian(0.0, std_dev);
    }
    return observed;
}

double projection_predicted_reward(const ProjectionAbstraction& ab,
                                   const std::array<double, 4>& observed) {
    const double x = observed[static_cast<std::size_t>(2 * ab.kept_human)];
    const double y = observed[static_cast<std::size_t>(2 * ab.kept_human + 1)];
    return std::hypot(x, y) <= ab.rho ? 1.0 : 0.0;
}

DriveAction pursuit_policy(const ProjectionAbstraction& ab, const std::array<double, 4>& observed,
                           const ContinuousParams& params) {
    const double x = observed[static_cast<std::size_t>(2 * ab.kept_human)];
    const double y = observed[static_cast<std::size_t>(2 * ab.kept_human + 1)];
    const double dist = std::hypot(x, y);
    if (dist <= 0.8 * ab.rho) return DriveAction::kStop;

    DriveAction best = DriveAction::kLeft;
    double best_score = HUGE_VAL;
    for (int a = 0; a < kNumDriveActions; ++a) {
        const auto d = drive_displacement(static_cast<DriveAction>(a), params);
        // Only the translation matters for the one-tick distance; the frame
        // rotation preserves norms.
        const double score = std::hypot(x - d[0], y - d[1]);
        if (score < best_score) {  // strict: ties keep the lowest index
            best_score = score;
            best = static_cast<DriveAction>(a);
        }
    }
    return best;
}

std::vector<double> continuous_likelihoods(const std::vector<ProjectionAbstraction>& catalog,
                                           double reward, const std::array<double, 4>& observed,
                                           double epsilon) {
    std::vector<double> likelihoods;
    likelihoods.reserve(catalog.size());
    for (const ProjectionAbstraction& ab : catalog) {
        const bool matched = std::abs(projection_predicted_reward(ab, observed) - reward) <= 1e-12;
        likelihoods.push_back(matched ? matched_likelihood(epsilon) : mismatched_likelihood(epsilon));
    }
    return likelihoods;
}

}  // namespace oas
