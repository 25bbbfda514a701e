#pragma once

#include <string>

#include "walkplan/kinematics.hpp"

namespace YAML {
class Node;
}

namespace walkplan {

// Loads and validates a kinematic model from its YAML description.
KinematicModel load_model(const std::string& path);

KinematicModel parse_model(const YAML::Node& root, const std::string& where);

}  // namespace walkplan
