#include "walkplan/derivative_check.hpp"

#include <cmath>
#include <sstream>

namespace walkplan {

namespace {

double rel_error(double ad, double fd) {
  return std::abs(ad - fd) / std::max(1.0, std::abs(ad));
}

// Max relative column error of a sparse AD Jacobian against central
// differences of the given evaluator, attributed to row groups.
void compare_jacobian(
    const SpMat& jac, const std::function<VecX(const VecX&)>& eval,
    const VecX& z, double step,
    const std::map<std::string, std::vector<std::pair<int, int>>>& groups,
    std::map<std::string, double>& errors) {
  const int n = static_cast<int>(z.size());
  const int m = static_cast<int>(jac.rows());
  if (m == 0) return;

  // row -> group lookup
  std::vector<const std::string*> row_group(m, nullptr);
  for (const auto& [name, ranges] : groups)
    for (auto [lo, hi] : ranges)
      for (int r = lo; r < hi; ++r) row_group[r] = &name;

  VecX zp = z, zm = z;
  for (int i = 0; i < n; ++i) {
    const double h = step * std::max(1.0, std::abs(z(i)));
    zp(i) = z(i) + h;
    zm(i) = z(i) - h;
    const VecX col_fd = (eval(zp) - eval(zm)) / (2.0 * h);
    zp(i) = z(i);
    zm(i) = z(i);

    VecX col_ad = VecX::Zero(m);
    for (SpMat::InnerIterator it(jac, i); it; ++it)
      col_ad(it.row()) = it.value();
    for (int r = 0; r < m; ++r) {
      const double e = rel_error(col_ad(r), col_fd(r));
      auto& slot = errors[*row_group[r]];
      slot = std::max(slot, e);
    }
  }
}

}  // namespace

DerivativeCheckReport check_derivatives(const NlpProblem& problem,
                                        const VecX& z, double step,
                                        double /*tolerance*/) {
  DerivativeCheckReport report;
  const int n = problem.num_vars;
  if (z.size() != n) throw Error("check point has wrong dimension");

  // objective gradient
  const VecX grad = problem.objective_gradient(z);
  VecX zp = z, zm = z;
  for (int i = 0; i < n; ++i) {
    const double h = step * std::max(1.0, std::abs(z(i)));
    zp(i) = z(i) + h;
    zm(i) = z(i) - h;
    const double fd =
        (problem.eval_objective(zp) - problem.eval_objective(zm)) / (2.0 * h);
    zp(i) = z(i);
    zm(i) = z(i);
    report.objective_error =
        std::max(report.objective_error, rel_error(grad(i), fd));
  }

  // constraint Jacobians; the verified pass raises on any value outside the
  // declared pattern
  if (problem.num_eq() > 0) {
    ad_jacobian(*problem.equality_function(), z, problem.equality_pattern(),
                /*verify_pattern=*/true);
    compare_jacobian(
        problem.equality_jacobian(z),
        [&](const VecX& v) { return problem.eval_equalities(v); }, z, step,
        problem.equality_groups(), report.group_errors);
  }
  if (problem.num_ineq() > 0) {
    ad_jacobian(*problem.inequality_function(), z,
                problem.inequality_pattern(), /*verify_pattern=*/true);
    compare_jacobian(
        problem.inequality_jacobian(z),
        [&](const VecX& v) { return problem.eval_inequalities(v); }, z, step,
        problem.inequality_groups(), report.group_errors);
  }
  return report;
}

std::string DerivativeCheckReport::to_string() const {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "  %-28s %.3e\n", "objective",
                objective_error);
  out << line;
  for (const auto& [name, e] : group_errors) {
    std::snprintf(line, sizeof line, "  %-28s %.3e\n", name.c_str(), e);
    out << line;
  }
  return out.str();
}

}  // namespace walkplan
