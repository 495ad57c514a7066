#pragma once

#include <array>
#include <vector>

#include "oas/rng.hpp"

namespace oas {

/// Control period of the tracking loop (5 Hz).
inline constexpr double kControlPeriodSec = 0.2;

/// Constant-velocity drive commands. Order matters: ties in the pursuit
/// policy break toward the lowest index.
enum class DriveAction {
    kLeft = 0,          // turn in place, counter-clockwise
    kRight = 1,         // turn in place, clockwise
    kStraight = 2,
    kRightStraight = 3,
    kLeftStraight = 4,
    kStop = 5,
};
inline constexpr int kNumDriveActions = 6;

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // radians, world frame
};

/// Depth-observation noise: per-coordinate Gaussian with standard deviation
/// a + b * (distance to robot).
struct DepthNoiseParams {
    double a = 0.02;  // meters
    double b = 0.01;  // per meter
};

struct ContinuousParams {
    double rho = 1.0;           // reward radius, meters (closed ball)
    double forward_speed = 0.8; // m/s
    double turn_rate = 0.8;     // rad/s
    DepthNoiseParams noise;
};

/// Scripted waypoint path traversed at constant speed, clamped at the end.
struct HumanTrack {
    std::vector<std::array<double, 2>> waypoints;
    double speed = 0.5;  // m/s

    std::array<double, 2> position(double time_sec) const;
};

/// Two-human pursuit world. The state handed to observers and policies is
/// [x1, y1, x2, y2]: both humans' positions in the robot frame.
struct ContinuousScenario {
    ContinuousParams params;
    Pose robot;
    std::vector<HumanTrack> humans;  // exactly two
    int step_index = 0;

    std::array<double, 4> relative_state() const;
    double human_distance(int human) const;
};

struct ContinuousStepResult {
    std::array<double, 4> true_state;
    double reward = 0.0;
};

/// Advances one 0.2 s tick: the robot moves under the commanded velocities,
/// the humans advance along their tracks, and the reward is 1 iff the robot
/// is within rho (inclusive) of the human indexed by `treat_holder`.
/// Reward is computed from true positions, never observed ones.
ContinuousStepResult step_continuous(ContinuousScenario& scenario, DriveAction action,
                                     int treat_holder);

/// Adds zero-mean Gaussian noise independently per coordinate, with standard
/// deviation growing linearly in each human's true distance from the robot.
std::array<double, 4> observe_state_continuous(const std::array<double, 4>& true_state,
                                               const DepthNoiseParams& noise,
                                               RandomStream& rng);

/// Attention mechanism for the continuous world: keeps exactly one human's
/// coordinate pair and predicts reward 1 iff that human is within rho.
struct ProjectionAbstraction {
    int kept_human = 0;  // 0 or 1
    double rho = 1.0;
};

double projection_predicted_reward(const ProjectionAbstraction& ab,
                                   const std::array<double, 4>& observed);

/// Deterministic treat-seeking controller. Stops once the kept human is
/// within 0.8 * rho; otherwise picks the command minimizing the predicted
/// one-tick distance to the kept human (ties to the lowest action index).
/// Depends on the observation only through the kept human's coordinates.
DriveAction pursuit_policy(const ProjectionAbstraction& ab, const std::array<double, 4>& observed,
                           const ContinuousParams& params);

/// Epsilon-smoothed indicator likelihoods over a projection catalog.
std::vector<double> continuous_likelihoods(const std::vector<ProjectionAbstraction>& catalog,
                                           double reward, const std::array<double, 4>& observed,
                                           double epsilon);

/// Robot displacement over one tick in the robot frame: (dx, dy, dheading).
std::array<double, 3> drive_displacement(DriveAction action, const ContinuousParams& params);

}  // namespace oas
