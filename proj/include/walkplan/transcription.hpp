#pragma once

#include <memory>

#include "walkplan/contact.hpp"
#include "walkplan/dynamics.hpp"
#include "walkplan/nlp_problem.hpp"
#include "walkplan/tasks.hpp"

namespace walkplan {

struct OcpConfig {
  double dt = 0.1;    // s
  int horizon = 20;   // knot count
  double d_min = 0.10;  // m, minimum lateral feet distance
  // CoM height floor; NaN resolves to half the initial CoM height.
  double com_z_min = std::numeric_limits<double>::quiet_NaN();
  double angular_momentum_bound = 10.0;  // kg m^2/s, per axis
  double gravity = kGravity;

  void validate() const {
    if (dt <= 0.0) throw Error("ocp.dt must be positive");
    if (horizon < 2) throw Error("ocp.horizon must be at least 2");
    if (d_min < 0.0) throw Error("ocp.d_min must be non-negative");
    if (angular_momentum_bound <= 0.0)
      throw Error("ocp.angular_momentum_bound must be positive");
  }
};

// Flat index map: knot-major, state block before control block, so the
// constraint Jacobian is banded across adjacent knots.
struct DecisionLayout {
  VariableLayout vars;
  int horizon = 0;

  int knot_dim() const { return vars.dim_x() + vars.dim_u(); }
  int num_vars() const { return horizon * knot_dim(); }
  int x_start(int k) const { return k * knot_dim(); }
  int u_start(int k) const { return k * knot_dim() + vars.dim_x(); }
  int x_index(int k, int offset) const { return x_start(k) + offset; }
  int u_index(int k, int offset) const { return u_start(k) + offset; }
};

// Per-knot task-weight multipliers (anti-procrastination schedule); empty
// means all ones.
using KnotSchedule = std::vector<std::array<double, kNumTasks>>;

struct Ocp {
  NlpProblem nlp;
  DecisionLayout layout;
  std::shared_ptr<const KinematicModel> model;
  GroundModel ground;
  ContactParams params;
  OcpConfig config;
  double com_z_min_resolved = 0.0;

  VecX pack(const std::vector<VecX>& states,
            const std::vector<VecX>& controls) const;
  void unpack(const VecX& z, std::vector<VecX>& states,
              std::vector<VecX>& controls) const;
};

// Assembles the walking optimal control problem: trapezoidal dynamics
// defects, kinematic consistency equalities, contact inequalities, variable
// bounds, and the scheduled task objective, with knot 0 pinned to the
// initial state.
Ocp build_ocp(std::shared_ptr<const KinematicModel> model,
              const GroundModel& ground, const ContactParams& params,
              const TaskReferences& refs, const TaskWeights& weights,
              const OcpConfig& config, const FullState& initial_state,
              const KnotSchedule& schedule = {});

// Evaluates (equality residuals, inequality values) at a decision vector.
std::pair<VecX, VecX> eval_constraints(const Ocp& ocp, const VecX& z);

// Structural Jacobian patterns (equalities stacked over inequalities).
std::pair<SparsityPattern, SparsityPattern> sparsity_pattern(const Ocp& ocp);

// A standing state on flat ground: joints at q0, base placed so the soles
// touch down exactly, zero momentum, and contact forces solving static
// equilibrium (equal vertical shares when the stance is symmetric).
FullState make_static_stance(const KinematicModel& model,
                             const GroundModel& ground,
                             const VecX& q0 = VecX());

}  // namespace walkplan
