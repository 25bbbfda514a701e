#include "walkplan/model_io.hpp"

#include <yaml-cpp/yaml.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>

namespace walkplan {

void KinematicModel::finalize() {
  const int nl = static_cast<int>(links.size());
  if (nl == 0) throw Error("model has no links");

  std::set<std::string> names;
  for (const auto& l : links) {
    if (!names.insert(l.name).second)
      throw Error("duplicate link name: " + l.name);
    if (!(l.mass > 0.0)) throw Error("non-positive mass on link: " + l.name);
    if ((l.inertia - l.inertia.transpose()).norm() > 1e-12)
      throw Error("non-symmetric inertia on link: " + l.name);
    Eigen::SelfAdjointEigenSolver<Mat3> eig(l.inertia);
    if (eig.eigenvalues().minCoeff() <= 0.0)
      throw Error("inertia not positive definite on link: " + l.name);
  }

  parent_joint_.assign(nl, -1);
  for (size_t j = 0; j < joints.size(); ++j) {
    const Joint& joint = joints[j];
    if (joint.parent < 0 || joint.parent >= nl || joint.child < 0 ||
        joint.child >= nl)
      throw Error("joint with unknown link: " + joint.name);
    if (std::abs(joint.axis.norm() - 1.0) > 1e-10)
      throw Error("joint axis is not unit length: " + joint.name);
    if (joint.child == base_link)
      throw Error("base link cannot be a joint child: " + joint.name);
    if (parent_joint_[joint.child] >= 0)
      throw Error("link has more than one parent joint: " +
                  links[joint.child].name);
    parent_joint_[joint.child] = static_cast<int>(j);
  }

  // Root-to-leaf order; a joint left unplaced means a cycle or an island.
  order_.clear();
  std::vector<bool> placed(nl, false);
  placed[base_link] = true;
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t j = 0; j < joints.size(); ++j) {
      if (placed[joints[j].child]) continue;
      if (placed[joints[j].parent]) {
        placed[joints[j].child] = true;
        order_.push_back(static_cast<int>(j));
        progress = true;
      }
    }
  }
  for (int l = 0; l < nl; ++l)
    if (!placed[l])
      throw Error("link not reachable from base (cycle or orphan): " +
                  links[l].name);

  support_.assign(nl, {});
  for (int j : order_) {
    support_[joints[j].child] = support_[joints[j].parent];
    support_[joints[j].child].push_back(j);
  }

  for (const auto& f : frames)
    if (f.link < 0 || f.link >= nl)
      throw Error("frame attached to unknown link: " + f.name);

  for (const auto& foot : feet) {
    if (frame_index(foot.frame) < 0)
      throw Error("foot references unknown frame: " + foot.name);
    if (foot.contact_offsets.size() < 3)
      throw Error("foot needs at least 3 contact offsets: " + foot.name);
    // Non-collinear: some pair of edge vectors must have a nonzero cross.
    const Vec3& a = foot.contact_offsets[0];
    bool ok = false;
    for (size_t i = 1; i + 1 < foot.contact_offsets.size() && !ok; ++i)
      for (size_t k = i + 1; k < foot.contact_offsets.size() && !ok; ++k)
        ok = ((foot.contact_offsets[i] - a).cross(foot.contact_offsets[k] - a))
                 .norm() > 1e-12;
    if (!ok) throw Error("collinear contact offsets on foot: " + foot.name);
  }
}

namespace quat {

Vec4 from_rotation(const Mat3& R) {
  // Shepperd's method: branch on the largest of trace and diagonal entries.
  Vec4 q;
  const double tr = R.trace();
  if (tr > R(0, 0) && tr > R(1, 1) && tr > R(2, 2)) {
    double s = std::sqrt(tr + 1.0) * 2.0;
    q << 0.25 * s, (R(2, 1) - R(1, 2)) / s, (R(0, 2) - R(2, 0)) / s,
        (R(1, 0) - R(0, 1)) / s;
  } else if (R(0, 0) > R(1, 1) && R(0, 0) > R(2, 2)) {
    double s = std::sqrt(1.0 + R(0, 0) - R(1, 1) - R(2, 2)) * 2.0;
    q << (R(2, 1) - R(1, 2)) / s, 0.25 * s, (R(0, 1) + R(1, 0)) / s,
        (R(0, 2) + R(2, 0)) / s;
  } else if (R(1, 1) > R(2, 2)) {
    double s = std::sqrt(1.0 + R(1, 1) - R(0, 0) - R(2, 2)) * 2.0;
    q << (R(0, 2) - R(2, 0)) / s, (R(0, 1) + R(1, 0)) / s, 0.25 * s,
        (R(1, 2) + R(2, 1)) / s;
  } else {
    double s = std::sqrt(1.0 + R(2, 2) - R(0, 0) - R(1, 1)) * 2.0;
    q << (R(1, 0) - R(0, 1)) / s, (R(0, 2) + R(2, 0)) / s,
        (R(1, 2) + R(2, 1)) / s, 0.25 * s;
  }
  q.normalize();
  // Non-negative scalar part; at w == 0 make the first nonzero vector
  // component positive so 180-degree rotations have a deterministic sign.
  if (q(0) < 0.0) {
    q = -q;
  } else if (q(0) == 0.0) {
    for (int i = 1; i < 4; ++i) {
      if (q(i) != 0.0) {
        if (q(i) < 0.0) q = -q;
        break;
      }
    }
  }
  return q;
}

}  // namespace quat

Eigen::Matrix<double, 3, 4> quaternion_g_map(const Vec4& rho) {
  if (std::abs(rho.norm() - 1.0) > 1e-6)
    throw Error("quaternion is not unit length");
  return quat::g_map<double>(rho);
}

Vec4 rotation_to_quaternion(const Mat3& R) {
  if ((R * R.transpose() - Mat3::Identity()).norm() > 1e-6 ||
      R.determinant() < 0.0)
    throw Error("matrix is not a rotation");
  return quat::from_rotation(R);
}

namespace {

Vec3 parse_vec3(const YAML::Node& node, const std::string& where) {
  if (!node || !node.IsSequence() || node.size() != 3)
    throw Error("expected list of 3 numbers at " + where);
  return Vec3(node[0].as<double>(), node[1].as<double>(), node[2].as<double>());
}

Mat3 rpy_to_rotation(const Vec3& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) *
          Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
      .toRotationMatrix();
}

Transform parse_origin(const YAML::Node& node, const std::string& where) {
  Transform t;
  if (node["origin_xyz"]) t.p = parse_vec3(node["origin_xyz"], where);
  if (node["origin_rpy"])
    t.R = rpy_to_rotation(parse_vec3(node["origin_rpy"], where));
  return t;
}

}  // namespace

KinematicModel load_model(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw Error("cannot load model file " + path + ": " + e.what());
  }
  return parse_model(root, path);
}

KinematicModel parse_model(const YAML::Node& root, const std::string& where) {
  KinematicModel model;
  if (!root["links"] || !root["links"].IsSequence())
    throw Error("model missing links[] in " + where);

  for (const auto& n : root["links"]) {
    Link l;
    l.name = n["name"].as<std::string>("");
    if (l.name.empty()) throw Error("link without a name in " + where);
    if (!n["mass"]) throw Error("link missing mass: " + l.name);
    l.mass = n["mass"].as<double>();
    if (n["inertia"]) {
      const auto& in = n["inertia"];
      if (!in.IsSequence() || in.size() != 6)
        throw Error("inertia needs 6 upper-triangular entries on link: " +
                    l.name);
      const double xx = in[0].as<double>(), xy = in[1].as<double>(),
                   xz = in[2].as<double>(), yy = in[3].as<double>(),
                   yz = in[4].as<double>(), zz = in[5].as<double>();
      l.inertia << xx, xy, xz, xy, yy, yz, xz, yz, zz;
    } else {
      l.inertia = Mat3::Identity() * 1e-6;
    }
    if (n["com_offset"]) l.com_offset = parse_vec3(n["com_offset"], l.name);
    model.links.push_back(l);
  }

  if (root["joints"]) {
    for (const auto& n : root["joints"]) {
      Joint j;
      j.name = n["name"].as<std::string>("");
      if (j.name.empty()) throw Error("joint without a name in " + where);
      j.parent = model.link_index(n["parent"].as<std::string>(""));
      j.child = model.link_index(n["child"].as<std::string>(""));
      if (j.parent < 0 || j.child < 0)
        throw Error("joint with unknown link: " + j.name);
      j.axis = parse_vec3(n["axis"], j.name);
      j.origin = parse_origin(n, j.name);
      model.joints.push_back(j);
    }
  }

  if (root["frames"]) {
    for (const auto& n : root["frames"]) {
      FrameDef f;
      f.name = n["name"].as<std::string>("");
      f.link = model.link_index(n["link"].as<std::string>(""));
      if (f.link < 0) throw Error("frame attached to unknown link: " + f.name);
      f.offset = parse_origin(n, f.name);
      model.frames.push_back(f);
    }
  }

  if (root["feet"]) {
    for (const auto& n : root["feet"]) {
      Foot f;
      f.name = n["name"].as<std::string>("");
      f.frame = n["frame"].as<std::string>("");
      if (!n["contact_offsets"] || !n["contact_offsets"].IsSequence())
        throw Error("foot missing contact_offsets: " + f.name);
      for (const auto& o : n["contact_offsets"])
        f.contact_offsets.push_back(parse_vec3(o, f.name));
      model.feet.push_back(f);
    }
  }

  if (root["base_link"]) {
    model.base_link = model.link_index(root["base_link"].as<std::string>());
    if (model.base_link < 0)
      throw Error("base_link names an unknown link in " + where);
  } else {
    // The unique link that is never a joint child.
    std::vector<bool> is_child(model.links.size(), false);
    for (const auto& j : model.joints) is_child[j.child] = true;
    model.base_link = -1;
    for (size_t i = 0; i < model.links.size(); ++i) {
      if (!is_child[i]) {
        if (model.base_link >= 0)
          throw Error("multiple root links; set base_link in " + where);
        model.base_link = static_cast<int>(i);
      }
    }
    if (model.base_link < 0)
      throw Error("no root link found (cycle?) in " + where);
  }

  model.finalize();
  return model;
}

}  // namespace walkplan
