#pragma once

#include "walkplan/contact.hpp"
#include "walkplan/kinematics.hpp"
#include "walkplan/types.hpp"

namespace walkplan {

// Flat layouts of the per-knot state X and control U vectors.
//
//   X = [f_0 p_0 ... f_{P-1} p_{P-1} | h(6) | x_com(3) | p_base(3) |
//        quat(4) | s(n)]
//   U = [uf_0 up_0 ... | v_base(3) | u_quat(4) | u_s(n)]
struct VariableLayout {
  int num_points = 0;
  int num_joints = 0;

  VariableLayout() = default;
  VariableLayout(int points, int joints)
      : num_points(points), num_joints(joints) {}

  int x_force(int i) const { return 6 * i; }
  int x_point(int i) const { return 6 * i + 3; }
  int x_momentum() const { return 6 * num_points; }
  int x_com() const { return 6 * num_points + 6; }
  int x_base_pos() const { return 6 * num_points + 9; }
  int x_base_quat() const { return 6 * num_points + 12; }
  int x_joints() const { return 6 * num_points + 16; }
  int dim_x() const { return 6 * num_points + 16 + num_joints; }

  int u_force_rate(int i) const { return 6 * i; }
  int u_point_vel(int i) const { return 6 * i + 3; }
  int u_base_vel() const { return 6 * num_points; }
  int u_quat_rate() const { return 6 * num_points + 3; }
  int u_joint_rate() const { return 6 * num_points + 7; }
  int dim_u() const { return 6 * num_points + 7 + num_joints; }
};

// Convenience view over a state vector (mutable access for building states).
struct FullState {
  VariableLayout layout;
  VecX x;

  FullState() = default;
  explicit FullState(const VariableLayout& l)
      : layout(l), x(VecX::Zero(l.dim_x())) {
    x(l.x_base_quat()) = 1.0;  // identity quaternion
  }

  auto force(int i) { return x.segment<3>(layout.x_force(i)); }
  auto force(int i) const { return x.segment<3>(layout.x_force(i)); }
  auto point(int i) { return x.segment<3>(layout.x_point(i)); }
  auto point(int i) const { return x.segment<3>(layout.x_point(i)); }
  auto momentum() { return x.segment<6>(layout.x_momentum()); }
  auto momentum() const { return x.segment<6>(layout.x_momentum()); }
  auto com() { return x.segment<3>(layout.x_com()); }
  auto com() const { return x.segment<3>(layout.x_com()); }
  auto base_pos() { return x.segment<3>(layout.x_base_pos()); }
  auto base_pos() const { return x.segment<3>(layout.x_base_pos()); }
  auto base_quat() { return x.segment<4>(layout.x_base_quat()); }
  auto base_quat() const { return x.segment<4>(layout.x_base_quat()); }
  auto joints() { return x.segment(layout.x_joints(), layout.num_joints); }
  auto joints() const {
    return x.segment(layout.x_joints(), layout.num_joints);
  }

  BasePose base_pose() const { return {base_pos(), base_quat()}; }
};

struct ControlInput {
  VariableLayout layout;
  VecX u;

  ControlInput() = default;
  explicit ControlInput(const VariableLayout& l)
      : layout(l), u(VecX::Zero(l.dim_u())) {}

  auto force_rate(int i) { return u.segment<3>(layout.u_force_rate(i)); }
  auto force_rate(int i) const { return u.segment<3>(layout.u_force_rate(i)); }
  auto point_vel(int i) { return u.segment<3>(layout.u_point_vel(i)); }
  auto point_vel(int i) const { return u.segment<3>(layout.u_point_vel(i)); }
  auto base_vel() { return u.segment<3>(layout.u_base_vel()); }
  auto base_vel() const { return u.segment<3>(layout.u_base_vel()); }
  auto quat_rate() { return u.segment<4>(layout.u_quat_rate()); }
  auto quat_rate() const { return u.segment<4>(layout.u_quat_rate()); }
  auto joint_rate() { return u.segment(layout.u_joint_rate(), layout.num_joints); }
  auto joint_rate() const {
    return u.segment(layout.u_joint_rate(), layout.num_joints);
  }
};

// Net momentum rate: gravity plus the moments of all contact forces about
// the CoM. Positions and forces are read from the state vector.
template <typename T>
Vec6T<T> momentum_rate_t(double total_mass, const VariableLayout& layout,
                         const VecXT<T>& x, double gravity = kGravity) {
  Vec6T<T> rate = Vec6T<T>::Zero();
  rate(2) = -total_mass * gravity;
  const Vec3T<T> com = x.template segment<3>(layout.x_com());
  for (int i = 0; i < layout.num_points; ++i) {
    const Vec3T<T> f = x.template segment<3>(layout.x_force(i));
    const Vec3T<T> p = x.template segment<3>(layout.x_point(i));
    rate.template head<3>() += f;
    rate.template tail<3>() += (p - com).cross(f);
  }
  return rate;
}

// Continuous-time state derivative. Rotations are built from the normalized
// quaternion so mildly infeasible iterates stay well-posed; the unit-norm
// equality constraint owns consistency.
template <typename T>
VecXT<T> state_derivative_t(const KinematicModel& model,
                            const GroundModel& ground,
                            const ContactParams& params,
                            const VariableLayout& layout, const VecXT<T>& x,
                            const VecXT<T>& u, double gravity = kGravity) {
  VecXT<T> dx(layout.dim_x());
  for (int i = 0; i < layout.num_points; ++i) {
    dx.template segment<3>(layout.x_force(i)) =
        u.template segment<3>(layout.u_force_rate(i));
    const Vec3T<T> p = x.template segment<3>(layout.x_point(i));
    dx.template segment<3>(layout.x_point(i)) =
        velocity_gate_tau(ground, params, p) *
        u.template segment<3>(layout.u_point_vel(i));
  }
  dx.template segment<6>(layout.x_momentum()) =
      momentum_rate_t(model.total_mass(), layout, x, gravity);
  dx.template segment<3>(layout.x_com()) =
      x.template segment<6>(layout.x_momentum()).template head<3>() /
      model.total_mass();
  const Vec4T<T> rho = x.template segment<4>(layout.x_base_quat());
  dx.template segment<3>(layout.x_base_pos()) =
      quat::to_rotation(rho) * u.template segment<3>(layout.u_base_vel());
  dx.template segment<4>(layout.x_base_quat()) =
      u.template segment<4>(layout.u_quat_rate());
  dx.segment(layout.x_joints(), layout.num_joints) =
      u.segment(layout.u_joint_rate(), layout.num_joints);
  return dx;
}

// Implicit-trapezoidal integration residual over one interval; zero residual
// defines the discrete dynamics.
template <typename T>
VecXT<T> trapezoidal_defect_t(const KinematicModel& model,
                              const GroundModel& ground,
                              const ContactParams& params,
                              const VariableLayout& layout, const VecXT<T>& x0,
                              const VecXT<T>& u0, const VecXT<T>& x1,
                              const VecXT<T>& u1, double dt,
                              double gravity = kGravity) {
  const VecXT<T> f0 =
      state_derivative_t(model, ground, params, layout, x0, u0, gravity);
  const VecXT<T> f1 =
      state_derivative_t(model, ground, params, layout, x1, u1, gravity);
  return x1 - x0 - (0.5 * dt) * (f0 + f1);
}

inline Vec6 momentum_rate(const KinematicModel& model, const FullState& state,
                          double gravity = kGravity) {
  return momentum_rate_t<double>(model.total_mass(), state.layout, state.x,
                                 gravity);
}

inline FullState state_derivative(const KinematicModel& model,
                                  const GroundModel& ground,
                                  const ContactParams& params,
                                  const FullState& state,
                                  const ControlInput& control,
                                  double gravity = kGravity) {
  if (std::abs(state.base_quat().norm() - 1.0) > 1e-3)
    throw Error("base quaternion norm drifted outside tolerance");
  FullState dx(state.layout);
  dx.x = state_derivative_t<double>(model, ground, params, state.layout,
                                    state.x, control.u, gravity);
  return dx;
}

inline VecX trapezoidal_defect(const KinematicModel& model,
                               const GroundModel& ground,
                               const ContactParams& params,
                               const FullState& x0, const ControlInput& u0,
                               const FullState& x1, const ControlInput& u1,
                               double dt, double gravity = kGravity) {
  if (dt <= 0.0) throw Error("integration step must be positive");
  return trapezoidal_defect_t<double>(model, ground, params, x0.layout, x0.x,
                                      u0.u, x1.x, u1.u, dt, gravity);
}

}  // namespace walkplan
