#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "walkplan/dual.hpp"

namespace walkplan {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using MatX = Eigen::MatrixXd;

template <typename T> using Vec3T = Eigen::Matrix<T, 3, 1>;
template <typename T> using Vec4T = Eigen::Matrix<T, 4, 1>;
template <typename T> using Vec6T = Eigen::Matrix<T, 6, 1>;
template <typename T> using VecXT = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T> using Mat3T = Eigen::Matrix<T, 3, 3>;
template <typename T> using MatXT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// Cross-product matrix: skew(a) * b == a x b.
template <typename T>
Mat3T<T> skew(const Vec3T<T>& a) {
  Mat3T<T> s;
  s << T(0.0), -a.z(), a.y(),
       a.z(), T(0.0), -a.x(),
      -a.y(), a.x(), T(0.0);
  return s;
}

constexpr double kGravity = 9.80665;  // m/s^2

}  // namespace walkplan
