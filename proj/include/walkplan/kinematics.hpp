#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "walkplan/types.hpp"

namespace walkplan {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rigid transform templated on scalar so kinematics can run on dual numbers.
template <typename T>
struct TransformT {
  Mat3T<T> R = Mat3T<T>::Identity();
  Vec3T<T> p = Vec3T<T>::Zero();

  TransformT operator*(const TransformT& o) const {
    return {R * o.R, R * o.p + p};
  }
  Vec3T<T> operator*(const Vec3T<T>& x) const { return R * x + p; }
  TransformT inverse() const {
    Mat3T<T> Rt = R.transpose();
    return {Rt, Vec3T<T>(-(Rt * p))};
  }
};

using Transform = TransformT<double>;

struct Link {
  std::string name;
  double mass = 0.0;
  Mat3 inertia = Mat3::Zero();  // about the link CoM, in link frame
  Vec3 com_offset = Vec3::Zero();
};

struct Joint {
  std::string name;
  int parent = -1;
  int child = -1;
  Vec3 axis = Vec3::UnitZ();
  Transform origin;  // parent link frame -> joint frame
};

struct FrameDef {
  std::string name;
  int link = -1;
  Transform offset;
};

struct Foot {
  std::string name;
  std::string frame;
  std::vector<Vec3> contact_offsets;  // in foot frame, meters
};

struct BasePose {
  Vec3 position = Vec3::Zero();
  Vec4 quaternion = Vec4(1, 0, 0, 0);  // scalar-first (w, x, y, z)
};

using JointConfig = VecX;

// Floating-base rigid-body tree. Immutable after load; all queries are pure.
class KinematicModel {
 public:
  std::vector<Link> links;
  std::vector<Joint> joints;  // order defines the joint-configuration layout
  std::vector<FrameDef> frames;
  std::vector<Foot> feet;
  int base_link = 0;

  int num_joints() const { return static_cast<int>(joints.size()); }

  double total_mass() const {
    double m = 0.0;
    for (const auto& l : links) m += l.mass;
    return m;
  }

  int link_index(const std::string& name) const {
    for (size_t i = 0; i < links.size(); ++i)
      if (links[i].name == name) return static_cast<int>(i);
    return -1;
  }

  int frame_index(const std::string& name) const {
    for (size_t i = 0; i < frames.size(); ++i)
      if (frames[i].name == name) return static_cast<int>(i);
    return -1;
  }

  const Foot& foot(const std::string& name) const {
    for (const auto& f : feet)
      if (f.name == name) return f;
    throw Error("unknown foot: " + name);
  }

  // Indices of joints on the path base -> link, in joint-vector order.
  const std::vector<int>& supporting_joints(int link) const {
    return support_[link];
  }

  // Validates tree structure, masses, inertias, axes and foot geometry.
  // Fills traversal caches. Must be called once after construction.
  void finalize();

  // Joints in parent-before-child order.
  const std::vector<int>& traversal_order() const { return order_; }
  // Joint whose child is the given link (-1 for base).
  int parent_joint_of(int link) const { return parent_joint_[link]; }

 private:
  std::vector<int> order_;
  std::vector<int> parent_joint_;
  std::vector<std::vector<int>> support_;
};

namespace quat {

// Rotation matrix of a quaternion (scalar-first). Normalizes the input so
// mildly drifted solver iterates still yield valid rotations.
template <typename T>
Mat3T<T> to_rotation(const Vec4T<T>& rho) {
  const T inv_norm = T(1.0) / sqrt(rho.squaredNorm());
  const T w = rho(0) * inv_norm;
  Vec3T<T> v = rho.template tail<3>() * inv_norm;
  const Mat3T<T> sv = skew(v);
  return Mat3T<T>::Identity() + 2.0 * w * sv + 2.0 * (sv * sv);
}

// Map from quaternion rate to body angular velocity: w = 2 G(rho) u_rho.
template <typename T>
Eigen::Matrix<T, 3, 4> g_map(const Vec4T<T>& rho) {
  Eigen::Matrix<T, 3, 4> g;
  const Vec3T<T> v = rho.template tail<3>();
  g.col(0) = -v;
  g.template rightCols<3>() =
      rho(0) * Mat3T<T>::Identity() - skew(v);
  return g;
}

// Quaternion rate from body angular velocity: u_rho = 0.5 Q(rho) w.
inline Eigen::Matrix<double, 4, 3> rate_matrix(const Vec4& rho) {
  Eigen::Matrix<double, 4, 3> q;
  const Vec3 v = rho.tail<3>();
  q.row(0) = -v.transpose();
  q.bottomRows<3>() = rho(0) * Mat3::Identity() + skew(v);
  return q;
}

Vec4 from_rotation(const Mat3& R);

inline Mat3 to_rotation_d(const Vec4& rho) { return to_rotation<double>(rho); }

// Shepperd conversion, scalar-generic for use inside differentiated costs.
// Branch selection compares plain values; each branch is smooth inside its
// region. Scalar part is kept non-negative.
template <typename T>
Vec4T<T> from_rotation_t(const Mat3T<T>& R) {
  Vec4T<T> q;
  const double tr = scalar_value(R(0, 0)) + scalar_value(R(1, 1)) +
                    scalar_value(R(2, 2));
  if (tr > scalar_value(R(0, 0)) && tr > scalar_value(R(1, 1)) &&
      tr > scalar_value(R(2, 2))) {
    T s = sqrt(R(0, 0) + R(1, 1) + R(2, 2) + T(1.0)) * 2.0;
    q(0) = 0.25 * s;
    q(1) = (R(2, 1) - R(1, 2)) / s;
    q(2) = (R(0, 2) - R(2, 0)) / s;
    q(3) = (R(1, 0) - R(0, 1)) / s;
  } else if (scalar_value(R(0, 0)) > scalar_value(R(1, 1)) &&
             scalar_value(R(0, 0)) > scalar_value(R(2, 2))) {
    T s = sqrt(T(1.0) + R(0, 0) - R(1, 1) - R(2, 2)) * 2.0;
    q(0) = (R(2, 1) - R(1, 2)) / s;
    q(1) = 0.25 * s;
    q(2) = (R(0, 1) + R(1, 0)) / s;
    q(3) = (R(0, 2) + R(2, 0)) / s;
  } else if (scalar_value(R(1, 1)) > scalar_value(R(2, 2))) {
    T s = sqrt(T(1.0) + R(1, 1) - R(0, 0) - R(2, 2)) * 2.0;
    q(0) = (R(0, 2) - R(2, 0)) / s;
    q(1) = (R(0, 1) + R(1, 0)) / s;
    q(2) = 0.25 * s;
    q(3) = (R(1, 2) + R(2, 1)) / s;
  } else {
    T s = sqrt(T(1.0) + R(2, 2) - R(0, 0) - R(1, 1)) * 2.0;
    q(0) = (R(1, 0) - R(0, 1)) / s;
    q(1) = (R(0, 2) + R(2, 0)) / s;
    q(2) = (R(1, 2) + R(2, 1)) / s;
    q(3) = 0.25 * s;
  }
  q /= sqrt(q.squaredNorm());
  if (scalar_value(q(0)) < 0.0) q = -q;
  return q;
}

}  // namespace quat

// All link poses in world, ordered like model.links.
template <typename T>
std::vector<TransformT<T>> link_poses(const KinematicModel& model,
                                      const Vec3T<T>& base_pos,
                                      const Vec4T<T>& base_quat,
                                      const VecXT<T>& q) {
  std::vector<TransformT<T>> pose(model.links.size());
  pose[model.base_link] = {quat::to_rotation(base_quat), base_pos};
  for (int j : model.traversal_order()) {
    const Joint& joint = model.joints[j];
    TransformT<T> fixed{joint.origin.R.template cast<T>(),
                        joint.origin.p.template cast<T>()};
    // Rodrigues rotation about the (unit) joint axis.
    const T c = cos(q(j));
    const T s = sin(q(j));
    const Mat3T<T> sa = skew(Vec3T<T>(joint.axis.template cast<T>()));
    TransformT<T> rot;
    rot.R = Mat3T<T>::Identity() + s * sa + (T(1.0) - c) * (sa * sa);
    pose[joint.child] = pose[joint.parent] * fixed * rot;
  }
  return pose;
}

template <typename T>
TransformT<T> frame_pose(const KinematicModel& model,
                         const std::vector<TransformT<T>>& poses, int frame) {
  const FrameDef& f = model.frames[frame];
  TransformT<T> offset{f.offset.R.template cast<T>(),
                       f.offset.p.template cast<T>()};
  return poses[f.link] * offset;
}

template <typename T>
TransformT<T> forward_kinematics_t(const KinematicModel& model,
                                   const Vec3T<T>& base_pos,
                                   const Vec4T<T>& base_quat,
                                   const VecXT<T>& q,
                                   const std::string& frame) {
  const int idx = model.frame_index(frame);
  if (idx < 0) throw Error("unknown frame: " + frame);
  auto poses = link_poses(model, base_pos, base_quat, q);
  return frame_pose(model, poses, idx);
}

inline Transform forward_kinematics(const KinematicModel& model,
                                    const BasePose& base, const JointConfig& q,
                                    const std::string& frame) {
  return forward_kinematics_t<double>(model, base.position, base.quaternion, q,
                                      frame);
}

template <typename T>
Vec3T<T> com_position_t(const KinematicModel& model,
                        const std::vector<TransformT<T>>& poses) {
  Vec3T<T> weighted = Vec3T<T>::Zero();
  double mass = 0.0;
  for (size_t i = 0; i < model.links.size(); ++i) {
    const Link& l = model.links[i];
    weighted += l.mass * (poses[i] * Vec3T<T>(l.com_offset.template cast<T>()));
    mass += l.mass;
  }
  return weighted / mass;
}

template <typename T>
Vec3T<T> com_position_t(const KinematicModel& model, const Vec3T<T>& base_pos,
                        const Vec4T<T>& base_quat, const VecXT<T>& q) {
  return com_position_t(model, link_poses(model, base_pos, base_quat, q));
}

inline Vec3 com_position(const KinematicModel& model, const BasePose& base,
                         const JointConfig& q) {
  return com_position_t<double>(model, base.position, base.quaternion, q);
}

// Centroidal momentum matrix: maps nu = [base linear vel (body); base angular
// vel (body); joint rates] to the 6D momentum (linear over angular) expressed
// in a frame with world orientation and origin at the CoM.
template <typename T>
MatXT<T> centroidal_momentum_matrix_t(const KinematicModel& model,
                                      const Vec3T<T>& base_pos,
                                      const Vec4T<T>& base_quat,
                                      const VecXT<T>& q) {
  const int n = model.num_joints();
  const int nv = 6 + n;
  auto poses = link_poses(model, base_pos, base_quat, q);
  const Vec3T<T> com = com_position_t(model, poses);

  // Per-link geometric Jacobians in link coordinates at the link origin,
  // propagated root to leaf.
  std::vector<MatXT<T>> jac(model.links.size());
  jac[model.base_link] = MatXT<T>::Zero(6, nv);
  jac[model.base_link].template leftCols<6>() =
      Eigen::Matrix<T, 6, 6>::Identity();
  for (int j : model.traversal_order()) {
    const Joint& joint = model.joints[j];
    // child <- parent twist transform from the relative pose.
    const TransformT<T> rel =
        poses[joint.child].inverse() * poses[joint.parent];
    Eigen::Matrix<T, 6, 6> ad = Eigen::Matrix<T, 6, 6>::Zero();
    ad.template topLeftCorner<3, 3>() = rel.R;
    ad.template bottomRightCorner<3, 3>() = rel.R;
    ad.template topRightCorner<3, 3>() = skew(rel.p) * rel.R;
    jac[joint.child] = ad * jac[joint.parent];
    jac[joint.child].col(6 + j).template tail<3>() +=
        joint.axis.template cast<T>();
  }

  MatXT<T> cmm = MatXT<T>::Zero(6, nv);
  for (size_t i = 0; i < model.links.size(); ++i) {
    const Link& l = model.links[i];
    const Mat3T<T> sc = skew(Vec3T<T>(l.com_offset.template cast<T>()));
    Eigen::Matrix<T, 6, 6> inertia = Eigen::Matrix<T, 6, 6>::Zero();
    inertia.template topLeftCorner<3, 3>() =
        l.mass * Mat3T<T>::Identity();
    inertia.template topRightCorner<3, 3>() = -l.mass * sc;
    inertia.template bottomLeftCorner<3, 3>() = l.mass * sc;
    inertia.template bottomRightCorner<3, 3>() =
        l.inertia.template cast<T>() - l.mass * (sc * sc);

    // Transport link-frame momentum to the CoM-centered world-aligned frame.
    Eigen::Matrix<T, 6, 6> xform = Eigen::Matrix<T, 6, 6>::Zero();
    xform.template topLeftCorner<3, 3>() = poses[i].R;
    xform.template bottomRightCorner<3, 3>() = poses[i].R;
    xform.template bottomLeftCorner<3, 3>() =
        skew(Vec3T<T>(poses[i].p - com)) * poses[i].R;
    cmm += xform * (inertia * jac[i]);
  }
  return cmm;
}

inline MatX centroidal_momentum_matrix(const KinematicModel& model,
                                       const BasePose& base,
                                       const JointConfig& q) {
  return centroidal_momentum_matrix_t<double>(model, base.position,
                                              base.quaternion, q);
}

// Validating wrappers for the quaternion utilities.
Eigen::Matrix<double, 3, 4> quaternion_g_map(const Vec4& rho);
Vec4 rotation_to_quaternion(const Mat3& R);

}  // namespace walkplan
