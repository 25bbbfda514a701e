#pragma once

#include <optional>

#include "walkplan/ipm_solver.hpp"
#include "walkplan/transcription.hpp"

namespace walkplan {

struct StepThresholds {
  double f_lo = 1.0;      // N: all points below => foot unloaded
  double f_hi = 5.0;      // N: all points above (and down) => foot loaded
  double h_contact = 1e-3;  // m: height treated as touchdown
};

// Per-task affine growth along the horizon, m(k) = 1 + alpha k dt; fights
// the receding-horizon tendency to postpone the goal indefinitely.
struct WeightSchedule {
  std::array<double, kNumTasks> alpha{};

  KnotSchedule build(int horizon, double dt) const {
    KnotSchedule s(horizon);
    for (int k = 0; k < horizon; ++k)
      for (int t = 0; t < kNumTasks; ++t)
        s[k][t] = 1.0 + alpha[t] * k * dt;
    return s;
  }
};

struct PlannerConfig {
  double stride = 0.1;  // m of centroid-reference advance per completed step
  Vec3 direction = Vec3::UnitX();
  int max_iterations = 40;
  double schedule_alpha = 0.5;  // 1/s, applied to the centroid task
  // reference offset applied at reset; NaN means one stride
  double initial_advance = std::numeric_limits<double>::quiet_NaN();
  StepThresholds thresholds;

  void validate() const {
    if (stride < 0.0) throw Error("planner.stride must be non-negative");
    if (std::abs(direction.norm() - 1.0) > 1e-9)
      throw Error("planner.direction must be a unit vector");
    if (max_iterations < 1) throw Error("planner.max_iterations must be >= 1");
    if (schedule_alpha < 0.0)
      throw Error("planner.schedule_alpha must be non-negative");
  }
};

struct PlannerState {
  FullState feedback;
  Vec3 centroid_reference = Vec3::Zero();
  int steps_completed = 0;
  bool has_previous = false;
  std::vector<VecX> prev_states, prev_controls;
  std::vector<FullState> history;  // feedback states, one per iteration
};

struct IterationOutput {
  SolveResult solve;
  std::vector<VecX> states, controls;  // planned horizon
  bool used_warm_start = false;
  std::optional<int> completed_foot;
  Vec3 centroid_reference = Vec3::Zero();  // reference used by this solve
};

// Mean of all contact points of a state.
Vec3 contact_centroid(const FullState& state);

// Rigid-translation initial guess: base, points, and CoM slide toward the
// target centroid in equal increments of (target - start)/N per knot;
// joints, orientation, momentum, and forces hold their start values, and
// controls come from finite differences of the interpolation.
std::pair<std::vector<VecX>, std::vector<VecX>> initial_guess_translate(
    const KinematicModel& model, const GroundModel& ground,
    const FullState& start, const Vec3& target_centroid, int horizon,
    double dt);

// Receding-horizon shift: knots move one interval earlier, the last knot is
// duplicated, and knot 0 is overwritten with the feedback state.
std::pair<std::vector<VecX>, std::vector<VecX>> warm_start_shift(
    const std::vector<VecX>& prev_states,
    const std::vector<VecX>& prev_controls, const FullState& feedback);

// Scans the feedback history for an unload -> reload cycle of one foot.
// Returns the foot index completing a step at the most recent knot.
std::optional<int> detect_step_completion(
    const KinematicModel& model, const GroundModel& ground,
    const std::vector<FullState>& history, const StepThresholds& thresholds);

// Advances the centroid reference by one stride on step completion.
Vec3 advance_reference(const Vec3& reference, const Vec3& direction,
                       double stride, bool step_completed);

class Planner {
 public:
  Planner(std::shared_ptr<const KinematicModel> model,
          const GroundModel& ground, const ContactParams& params,
          const TaskReferences& refs, const TaskWeights& weights,
          const OcpConfig& ocp_config, const PlannerConfig& planner_config,
          const SolverOptions& solver_options);

  // Sets the feedback state and places the centroid reference one
  // initial_advance ahead of the current stance.
  void reset(const FullState& start);

  // One receding-horizon iteration. On solver failure the planner state is
  // left untouched and the failure is reported in the output.
  IterationOutput iterate();

  const PlannerState& state() const { return state_; }
  const OcpConfig& ocp_config() const { return ocp_config_; }
  double com_z_min() const { return com_z_min_; }

 private:
  std::shared_ptr<const KinematicModel> model_;
  GroundModel ground_;
  ContactParams params_;
  TaskReferences refs_;
  TaskWeights weights_;
  OcpConfig ocp_config_;
  PlannerConfig config_;
  SolverOptions solver_options_;
  WeightSchedule schedule_;
  PlannerState state_;
  double com_z_min_ = 0.0;
  bool initialized_ = false;
};

}  // namespace walkplan
