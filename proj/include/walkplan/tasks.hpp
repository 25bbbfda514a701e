#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "walkplan/dynamics.hpp"
#include "walkplan/kinematics.hpp"
#include "walkplan/types.hpp"

namespace walkplan {

// Task indices in the objective weight vector.
enum TaskId {
  kTaskCentroid = 0,
  kTaskComVelocity = 1,
  kTaskFrameOrientation = 2,
  kTaskForceRegularization = 3,
  kTaskJointRegularization = 4,
  kTaskSwingHeight = 5,
  kNumTasks = 6,
};

inline const char* task_name(int id) {
  static const char* names[kNumTasks] = {
      "centroid",       "com_velocity",         "frame_orientation",
      "force_regularization", "joint_regularization", "swing_height"};
  return names[id];
}

struct TaskReferences {
  Vec3 centroid_target = Vec3::Zero();
  Vec3 com_velocity_target = Vec3::Zero();
  std::map<std::string, Mat3> frame_targets;  // frame name -> desired rotation
  VecX joint_posture;                         // s*
  MatX posture_gain;                          // K_s, PSD
  double swing_height = 0.03;                 // m, > 0

  void validate() const {
    if (swing_height <= 0.0) throw Error("swing height target must be > 0");
    if (posture_gain.size() > 0) {
      if (posture_gain.rows() != posture_gain.cols() ||
          posture_gain.rows() != joint_posture.size())
        throw Error("posture gain dimension mismatch");
      if ((posture_gain - posture_gain.transpose()).norm() > 1e-12)
        throw Error("posture gain must be symmetric");
    }
  }
};

struct TaskWeights {
  std::array<double, kNumTasks> w{1, 1, 1, 1, 1, 1};
  Vec3 centroid_selector = Vec3::Ones();      // diagonal of W_#
  Vec3 com_velocity_selector = Vec3::Ones();  // diagonal of W_v
  VecX joint_selector;                        // diagonal of W_j
  std::map<std::string, double> frame_weights;  // scale per targeted frame

  void validate() const {
    for (double v : w)
      if (v < 0.0) throw Error("task weights must be non-negative");
    if (centroid_selector.minCoeff() < 0 ||
        com_velocity_selector.minCoeff() < 0 ||
        (joint_selector.size() > 0 && joint_selector.minCoeff() < 0))
      throw Error("selector diagonals must be non-negative");
    for (const auto& [name, v] : frame_weights)
      if (v < 0.0) throw Error("frame weight must be non-negative: " + name);
  }
};

// Smoothing for the swing-height cost (the plain norm is not differentiable
// at zero).
constexpr double kSwingEps = 1e-8;

template <typename T>
T weighted_sqnorm(const Vec3T<T>& v, const Vec3& diag) {
  return diag(0) * v(0) * v(0) + diag(1) * v(1) * v(1) + diag(2) * v(2) * v(2);
}

// 1/2 || mean(points) - target ||^2_W, mean over all contact points.
template <typename T>
T cost_centroid(const std::vector<Vec3T<T>>& points, const Vec3& target,
                const Vec3& selector) {
  if (points.empty()) throw Error("centroid cost needs at least one point");
  Vec3T<T> mean = Vec3T<T>::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  return T(0.5) * weighted_sqnorm<T>(mean - target.cast<T>(), selector);
}

// 1/2 || h_p - m v* ||^2_W.
template <typename T>
T cost_com_velocity(const Vec3T<T>& linear_momentum, double mass,
                    const Vec3& velocity_target, const Vec3& selector) {
  const Vec3T<T> err = linear_momentum - (mass * velocity_target).cast<T>();
  return T(0.5) * weighted_sqnorm<T>(err, selector);
}

// 1/2 || quat(R_target' R_actual) - I_q ||^2.
template <typename T>
T cost_frame_orientation(const Mat3T<T>& actual, const Mat3& target) {
  const Mat3T<T> rel = target.cast<T>().transpose() * actual;
  Vec4T<T> q = quat::from_rotation_t(rel);
  q(0) -= 1.0;
  return T(0.5) * q.squaredNorm();
}

// Sum over feet of the per-point deviation from the foot's mean force.
template <typename T>
T cost_force_regularization(
    const std::vector<std::vector<Vec3T<T>>>& forces_by_foot) {
  T total(0.0);
  for (const auto& foot : forces_by_foot) {
    if (foot.empty()) continue;
    Vec3T<T> mean = Vec3T<T>::Zero();
    for (const auto& f : foot) mean += f;
    mean /= static_cast<double>(foot.size());
    for (const auto& f : foot) total += T(0.5) * (f - mean).squaredNorm();
  }
  return total;
}

// 1/2 || u_s + K_s (s - s*) ||^2_W; zero exactly on the exponential
// convergence manifold u_s = -K_s (s - s*).
template <typename T>
T cost_joint_regularization(const VecXT<T>& s, const VecXT<T>& u_s,
                            const VecX& posture, const MatX& gain,
                            const VecX& selector) {
  if (s.size() != u_s.size() || s.size() != posture.size())
    throw Error("joint regularization dimension mismatch");
  if (s.size() == 0) return T(0.0);
  const VecXT<T> r = u_s + gain.cast<T>() * (s - posture.cast<T>());
  T total(0.0);
  for (int i = 0; i < r.size(); ++i) total += selector(i) * r(i) * r(i);
  return T(0.5) * total;
}

// 1/2 || (e3'p - h*) [e1 e2]' u_p ||, smoothed. Zero when the point does not
// move in the plane or when it travels at the desired height.
template <typename T>
T cost_swing_height(const std::vector<Vec3T<T>>& points,
                    const std::vector<Vec3T<T>>& point_velocities,
                    double height_target, double eps = kSwingEps) {
  T total(0.0);
  for (size_t i = 0; i < points.size(); ++i) {
    const T gap = points[i](2) - height_target;
    const T planar_sq = point_velocities[i](0) * point_velocities[i](0) +
                        point_velocities[i](1) * point_velocities[i](1);
    total += T(0.5) * smooth_norm(gap * gap * planar_sq, eps);
  }
  return total;
}

// All six task values at one knot, read out of the flat state/control pair.
template <typename T>
std::array<T, kNumTasks> task_values(const KinematicModel& model,
                                     const VariableLayout& layout,
                                     const TaskReferences& refs,
                                     const TaskWeights& weights,
                                     const VecXT<T>& x, const VecXT<T>& u) {
  std::array<T, kNumTasks> gamma;

  std::vector<Vec3T<T>> points(layout.num_points);
  std::vector<Vec3T<T>> point_vels(layout.num_points);
  for (int i = 0; i < layout.num_points; ++i) {
    points[i] = x.template segment<3>(layout.x_point(i));
    point_vels[i] = u.template segment<3>(layout.u_point_vel(i));
  }
  gamma[kTaskCentroid] =
      cost_centroid(points, refs.centroid_target, weights.centroid_selector);

  gamma[kTaskComVelocity] = cost_com_velocity<T>(
      x.template segment<3>(layout.x_momentum()), model.total_mass(),
      refs.com_velocity_target, weights.com_velocity_selector);

  gamma[kTaskFrameOrientation] = T(0.0);
  if (!refs.frame_targets.empty()) {
    const Vec3T<T> base_pos = x.template segment<3>(layout.x_base_pos());
    const Vec4T<T> base_quat = x.template segment<4>(layout.x_base_quat());
    const VecXT<T> q = x.segment(layout.x_joints(), layout.num_joints);
    auto poses = link_poses(model, base_pos, base_quat, q);
    for (const auto& [name, target] : refs.frame_targets) {
      const int idx = model.frame_index(name);
      if (idx < 0) throw Error("orientation task targets unknown frame: " + name);
      double scale = 1.0;
      if (auto it = weights.frame_weights.find(name);
          it != weights.frame_weights.end())
        scale = it->second;
      gamma[kTaskFrameOrientation] +=
          scale * cost_frame_orientation<T>(frame_pose(model, poses, idx).R,
                                            target);
    }
  }

  std::vector<std::vector<Vec3T<T>>> forces_by_foot;
  int offset = 0;
  for (const auto& foot : model.feet) {
    std::vector<Vec3T<T>> forces;
    for (size_t i = 0; i < foot.contact_offsets.size(); ++i)
      forces.push_back(x.template segment<3>(layout.x_force(offset + int(i))));
    offset += static_cast<int>(foot.contact_offsets.size());
    forces_by_foot.push_back(std::move(forces));
  }
  gamma[kTaskForceRegularization] = cost_force_regularization(forces_by_foot);

  gamma[kTaskJointRegularization] = cost_joint_regularization<T>(
      x.segment(layout.x_joints(), layout.num_joints),
      u.segment(layout.u_joint_rate(), layout.num_joints), refs.joint_posture,
      refs.posture_gain, weights.joint_selector);

  gamma[kTaskSwingHeight] =
      cost_swing_height(points, point_vels, refs.swing_height);

  return gamma;
}

// Weighted, dt-scaled sum of the task vector along a trajectory. The
// schedule multiplies each task weight per knot (identity when empty).
inline double total_cost(const KinematicModel& model,
                         const VariableLayout& layout,
                         const std::vector<VecX>& states,
                         const std::vector<VecX>& controls,
                         const TaskReferences& refs, const TaskWeights& weights,
                         double dt,
                         const std::vector<std::array<double, kNumTasks>>&
                             schedule = {}) {
  if (states.size() != controls.size())
    throw Error("trajectory state/control length mismatch");
  double total = 0.0;
  for (size_t k = 0; k < states.size(); ++k) {
    auto gamma = task_values<double>(model, layout, refs, weights, states[k],
                                     controls[k]);
    for (int t = 0; t < kNumTasks; ++t) {
      const double mult = schedule.empty() ? 1.0 : schedule[k][t];
      total += dt * weights.w[t] * mult * gamma[t];
    }
  }
  return total;
}

}  // namespace walkplan
