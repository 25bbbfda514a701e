#pragma once

#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "walkplan/ad.hpp"

namespace walkplan {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Scalar objective addend over a subset of the decision variables. Keeping
// terms local makes the gradient cost proportional to the term size rather
// than the full variable count.
struct CostTerm {
  std::string name;
  std::vector<int> vars;  // global indices, sorted
  std::shared_ptr<VectorFunction> fn;  // dim_in = vars.size(), dim_out = 1
};

// One block of equality or inequality rows over a local variable subset.
// Inequalities mean lower <= g(z) (componentwise 0 <= g by convention),
// with optional finite upper bounds per row.
struct ConstraintBlock {
  std::string group;      // reporting family, e.g. "dynamics_defect"
  std::vector<int> vars;  // global indices, sorted
  int dim = 0;
  std::shared_ptr<VectorFunction> fn;
  // Local column indices per row; empty means dense over vars.
  std::vector<std::vector<int>> row_pattern;
  VecX upper;  // inequality rows only; empty => all +inf

  std::vector<int> pattern_row(int r) const {
    if (!row_pattern.empty()) return row_pattern[r];
    std::vector<int> all(vars.size());
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
};

// The transcribed problem:
//   min f(z)  s.t.  c_eq(z) = 0,  c_ineq(z) >= 0 (<= upper where set),
//                   lb <= z <= ub
// consumed by any solver backend through the flat evaluators below.
struct NlpProblem {
  int num_vars = 0;
  VecX lb, ub;
  std::vector<CostTerm> objective_terms;
  std::vector<ConstraintBlock> equalities;
  std::vector<ConstraintBlock> inequalities;
  VecX initial_guess;

  int num_eq() const;
  int num_ineq() const;

  double eval_objective(const VecX& z) const;
  VecX eval_equalities(const VecX& z) const;
  VecX eval_inequalities(const VecX& z) const;
  VecX objective_gradient(const VecX& z) const;

  SparsityPattern equality_pattern() const;
  SparsityPattern inequality_pattern() const;

  // Block-wise forward-AD Jacobians (exact, assembled on the declared
  // patterns).
  SpMat equality_jacobian(const VecX& z) const;
  SpMat inequality_jacobian(const VecX& z) const;

  // Flat views for generic machinery (derivative checks, tests).
  std::shared_ptr<VectorFunction> objective_function() const;
  std::shared_ptr<VectorFunction> equality_function() const;
  std::shared_ptr<VectorFunction> inequality_function() const;

  // Row ranges per constraint group name, for reporting.
  std::map<std::string, std::vector<std::pair<int, int>>> equality_groups()
      const;
  std::map<std::string, std::vector<std::pair<int, int>>> inequality_groups()
      const;

  void validate() const;
};

SparsityPattern blocks_pattern(const std::vector<ConstraintBlock>& blocks,
                               int num_vars);

SpMat blocks_jacobian(const std::vector<ConstraintBlock>& blocks,
                      int num_vars, const VecX& z);

}  // namespace walkplan
