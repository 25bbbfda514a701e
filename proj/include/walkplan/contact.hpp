#pragma once

#include "walkplan/kinematics.hpp"
#include "walkplan/types.hpp"

namespace walkplan {

// Analytic planar walking surface: h(p) = n0' p - d. The tangent basis is
// constant, so [t n] is the (fixed) plane rotation. Flat ground is the
// default; tilted planes exercise the same code paths.
struct GroundModel {
  Vec3 normal = Vec3::UnitZ();
  Eigen::Matrix<double, 3, 2> tangents =
      (Eigen::Matrix<double, 3, 2>() << 1, 0, 0, 1, 0, 0).finished();
  double offset = 0.0;  // signed distance of the plane from the origin

  static GroundModel flat() { return GroundModel{}; }

  // Tilted plane with tangents built from the world axis least aligned
  // with the normal ([t n] stays right-handed).
  static GroundModel plane(const Vec3& unit_normal, double offset) {
    GroundModel g;
    g.normal = unit_normal.normalized();
    int k = 0;
    g.normal.cwiseAbs().minCoeff(&k);
    Vec3 t0 = Vec3::Unit(k);
    t0 = (t0 - g.normal * g.normal.dot(t0)).normalized();
    g.tangents.col(0) = t0;
    g.tangents.col(1) = g.normal.cross(t0);
    g.offset = offset;
    g.validate();
    return g;
  }

  void validate() const {
    if (std::abs(normal.norm() - 1.0) > 1e-9)
      throw Error("ground normal is not unit length");
    Mat3 r = rotation();
    if ((r * r.transpose() - Mat3::Identity()).norm() > 1e-9 ||
        r.determinant() < 0.0)
      throw Error("ground frame [t n] is not a rotation");
  }

  template <typename T>
  T height(const Vec3T<T>& p) const {
    return normal.cast<T>().dot(p) - offset;
  }
  Vec3 normal_at(const Vec3&) const { return normal; }
  Eigen::Matrix<double, 3, 2> tangents_at(const Vec3&) const {
    return tangents;
  }
  // [t(p) n(p)], the rotation from plane coordinates to world.
  Mat3 rotation() const {
    Mat3 r;
    r.leftCols<2>() = tangents;
    r.col(2) = normal;
    return r;
  }
};

struct ContactParams {
  double k_h = 300.0;          // 1/m, activation sharpness
  double k_t = 10.0;           // 1/m, planar velocity gate sharpness
  Vec3 K_f = Vec3(10, 10, 10);  // 1/s, force decay gains (diagonal)
  Vec3 M_f = Vec3(400, 400, 400);  // N/s, force-rate bound
  Vec3 M_V = Vec3(1, 1, 1);        // m/s, point-velocity bound
  double friction_coefficient = 0.7;

  void validate() const {
    if (k_h <= 0 || k_t <= 0 || K_f.minCoeff() <= 0 || M_f.minCoeff() <= 0 ||
        M_V.minCoeff() <= 0 || friction_coefficient <= 0)
      throw Error("contact parameters must be strictly positive");
  }
};

struct ContactPoint {
  Vec3 position = Vec3::Zero();  // world
  Vec3 force = Vec3::Zero();     // world-aligned
  int foot = 0;
  Vec3 foot_offset = Vec3::Zero();
};

// Smoothing constant for the friction-cone tangential norm.
constexpr double kConeEps = 1e-8;  // N^2

// sech(k_h h(p)); 1 exactly on the surface, decays to 0 away from it but
// never reaches it, so the gated force-rate rows keep independent gradients.
template <typename T>
T activation_delta(const GroundModel& ground, const ContactParams& params,
                   const Vec3T<T>& p) {
  return sech(params.k_h * ground.height(p));
}

// tau(p) = R_plane diag(tanh(k_t h), tanh(k_t h), 1): planar components of
// the (plane-coordinates) point velocity vanish on the surface.
template <typename T>
Mat3T<T> velocity_gate_tau(const GroundModel& ground,
                           const ContactParams& params, const Vec3T<T>& p) {
  const T gate = tanh(params.k_t * ground.height(p));
  Mat3T<T> diag = Mat3T<T>::Zero();
  diag(0, 0) = gate;
  diag(1, 1) = gate;
  diag(2, 2) = T(1.0);
  return ground.rotation().cast<T>() * diag;
}

// Componentwise force-rate interval: free in [-M_f, M_f] in contact, forced
// exponential decay -K_f f far from the surface, blended by delta.
template <typename T>
std::pair<Vec3T<T>, Vec3T<T>> force_rate_bounds(const GroundModel& ground,
                                                const ContactParams& params,
                                                const Vec3T<T>& p,
                                                const Vec3T<T>& f) {
  const T delta = activation_delta(ground, params, p);
  Vec3T<T> decay = -(T(1.0) - delta) *
                   (params.K_f.cast<T>().cwiseProduct(f));
  Vec3T<T> width = delta * params.M_f.cast<T>();
  return {decay - width, decay + width};
}

// Smoothed tangential norm, C2 at zero.
template <typename T>
T smooth_norm(const T& squared, double eps) {
  return sqrt(squared + T(eps)) - std::sqrt(eps);
}

// rho n'f - ||t'f||, smoothed; >= 0 inside the friction cone.
template <typename T>
T friction_cone_residual(const GroundModel& ground,
                         const ContactParams& params, const Vec3T<T>& p,
                         const Vec3T<T>& f) {
  (void)p;  // constant normal field; kept for interface parity
  const Eigen::Matrix<T, 2, 1> ft = ground.tangents.cast<T>().transpose() * f;
  return params.friction_coefficient * (ground.normal.cast<T>().dot(f)) -
         smooth_norm(ft.squaredNorm(), kConeEps);
}

template <typename T>
T normal_force(const GroundModel& ground, const Vec3T<T>& p,
               const Vec3T<T>& f) {
  (void)p;
  return ground.normal.cast<T>().dot(f);
}

// h(p) n(p)'f: diagnostic for how well the relaxation approximates the
// exact contact complementarity; never imposed as a constraint.
inline double complementarity_residual(const GroundModel& ground,
                                       const Vec3& p, const Vec3& f) {
  return ground.height<double>(p) * normal_force<double>(ground, p, f);
}

}  // namespace walkplan
