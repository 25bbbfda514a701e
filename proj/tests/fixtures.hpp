#pragma once

#include <random>
#include <string>

#include "walkplan/model_io.hpp"

namespace walkplan::testing {

inline std::string asset_path(const std::string& name) {
  return std::string(WALKPLAN_SOURCE_DIR) + "/assets/" + name;
}

inline KinematicModel load_biped() { return load_model(asset_path("biped.yaml")); }

// Minimal one-body model built directly (bypasses file validation on
// purpose: the transcription accepts any well-formed struct).
inline KinematicModel single_body(double mass = 1.0,
                                  const Vec3& com = Vec3::Zero()) {
  KinematicModel m;
  Link l;
  l.name = "body";
  l.mass = mass;
  l.inertia = Mat3::Identity() * 0.01;
  l.com_offset = com;
  m.links.push_back(l);
  FrameDef f;
  f.name = "body";
  f.link = 0;
  m.frames.push_back(f);
  m.finalize();
  return m;
}

inline Vec4 random_unit_quaternion(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec4 q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  if (q(0) < 0) q = -q;
  return q;
}

inline VecX random_vector(std::mt19937& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  VecX v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

}  // namespace walkplan::testing
