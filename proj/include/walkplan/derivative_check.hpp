#pragma once

#include <map>
#include <string>

#include "walkplan/nlp_problem.hpp"

namespace walkplan {

// Forward-AD versus central finite differences, per constraint group.
struct DerivativeCheckReport {
  double objective_error = 0.0;
  std::map<std::string, double> group_errors;

  double worst() const {
    double w = objective_error;
    for (const auto& [name, e] : group_errors) w = std::max(w, e);
    return w;
  }
  bool passes(double tolerance) const { return worst() <= tolerance; }
  std::string to_string() const;
};

// Compares AD gradients/Jacobians against central differences at z with the
// given step (scaled per variable by max(1, |z_i|)); also re-derives the
// Jacobians column by column to confirm the declared sparsity patterns.
DerivativeCheckReport check_derivatives(const NlpProblem& problem,
                                        const VecX& z, double step = 1e-6,
                                        double tolerance = 1e-5);

}  // namespace walkplan
