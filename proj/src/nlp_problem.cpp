#include "walkplan/nlp_problem.hpp"

#include "walkplan/kinematics.hpp"

namespace walkplan {

namespace {

int total_dim(const std::vector<ConstraintBlock>& blocks) {
  int n = 0;
  for (const auto& b : blocks) n += b.dim;
  return n;
}

VecX eval_blocks(const std::vector<ConstraintBlock>& blocks, const VecX& z) {
  VecX out(total_dim(blocks));
  int row = 0;
  VecX local, y;
  for (const auto& b : blocks) {
    local.resize(b.vars.size());
    for (size_t i = 0; i < b.vars.size(); ++i) local(i) = z(b.vars[i]);
    b.fn->eval(local, y);
    out.segment(row, b.dim) = y;
    row += b.dim;
  }
  return out;
}

std::map<std::string, std::vector<std::pair<int, int>>> group_rows(
    const std::vector<ConstraintBlock>& blocks) {
  std::map<std::string, std::vector<std::pair<int, int>>> groups;
  int row = 0;
  for (const auto& b : blocks) {
    groups[b.group].emplace_back(row, row + b.dim);
    row += b.dim;
  }
  return groups;
}

}  // namespace

int NlpProblem::num_eq() const { return total_dim(equalities); }
int NlpProblem::num_ineq() const { return total_dim(inequalities); }

double NlpProblem::eval_objective(const VecX& z) const {
  double total = 0.0;
  VecX local, y;
  for (const auto& t : objective_terms) {
    local.resize(t.vars.size());
    for (size_t i = 0; i < t.vars.size(); ++i) local(i) = z(t.vars[i]);
    t.fn->eval(local, y);
    total += y(0);
  }
  return total;
}

VecX NlpProblem::eval_equalities(const VecX& z) const {
  return eval_blocks(equalities, z);
}

VecX NlpProblem::eval_inequalities(const VecX& z) const {
  return eval_blocks(inequalities, z);
}

VecX NlpProblem::objective_gradient(const VecX& z) const {
  VecX grad = VecX::Zero(num_vars);
  VecXT<Dual> local, y;
  for (const auto& t : objective_terms) {
    const int nl = static_cast<int>(t.vars.size());
    local.resize(nl);
    for (int start = 0; start < nl; start += kAdWidth) {
      const int width = std::min(kAdWidth, nl - start);
      for (int i = 0; i < nl; ++i) local(i) = Dual(z(t.vars[i]));
      for (int k = 0; k < width; ++k) local(start + k).d[k] = 1.0;
      t.fn->eval(local, y);
      for (int k = 0; k < width; ++k) grad(t.vars[start + k]) += y(0).d[k];
    }
  }
  return grad;
}

SparsityPattern blocks_pattern(const std::vector<ConstraintBlock>& blocks,
                               int num_vars) {
  SparsityPattern pattern(total_dim(blocks), num_vars);
  int row = 0;
  for (const auto& b : blocks) {
    for (int r = 0; r < b.dim; ++r) {
      for (int local : b.pattern_row(r))
        pattern.add(row + r, b.vars[local]);
    }
    row += b.dim;
  }
  pattern.sort_rows();
  return pattern;
}

SpMat blocks_jacobian(const std::vector<ConstraintBlock>& blocks,
                      int num_vars, const VecX& z) {
  std::vector<Eigen::Triplet<double>> triplets;
  VecXT<Dual> local, y;
  int row = 0;
  for (const auto& b : blocks) {
    const int nl = static_cast<int>(b.vars.size());
    local.resize(nl);
    // one lane per local column; no compression needed at block scope
    for (int start = 0; start < nl; start += kAdWidth) {
      const int width = std::min(kAdWidth, nl - start);
      for (int i = 0; i < nl; ++i) local(i) = Dual(z(b.vars[i]));
      for (int k = 0; k < width; ++k) local(start + k).d[k] = 1.0;
      b.fn->eval(local, y);
      for (int r = 0; r < b.dim; ++r) {
        for (int c : b.pattern_row(r)) {
          const int lane = c - start;
          if (lane >= 0 && lane < width)
            triplets.emplace_back(row + r, b.vars[c], y(r).d[lane]);
        }
      }
    }
    row += b.dim;
  }
  SpMat jac(total_dim(blocks), num_vars);
  jac.setFromTriplets(triplets.begin(), triplets.end());
  return jac;
}

SparsityPattern NlpProblem::equality_pattern() const {
  return blocks_pattern(equalities, num_vars);
}
SparsityPattern NlpProblem::inequality_pattern() const {
  return blocks_pattern(inequalities, num_vars);
}
SpMat NlpProblem::equality_jacobian(const VecX& z) const {
  return blocks_jacobian(equalities, num_vars, z);
}
SpMat NlpProblem::inequality_jacobian(const VecX& z) const {
  return blocks_jacobian(inequalities, num_vars, z);
}

namespace {

// Adapts a block list (or term list) to a flat VectorFunction.
template <typename T>
void eval_blocks_generic(const std::vector<ConstraintBlock>& blocks,
                         const VecXT<T>& z, VecXT<T>& out) {
  int row = 0;
  VecXT<T> local, y;
  for (const auto& b : blocks) {
    local.resize(b.vars.size());
    for (size_t i = 0; i < b.vars.size(); ++i) local(i) = z(b.vars[i]);
    b.fn->eval(local, y);
    out.segment(row, b.dim) = y;
    row += b.dim;
  }
}

}  // namespace

std::shared_ptr<VectorFunction> NlpProblem::objective_function() const {
  auto terms = objective_terms;  // value capture keeps the view stable
  return make_function(num_vars, 1, [terms](const auto& z, auto& out) {
    using T = std::decay_t<decltype(z(0))>;
    T total(0.0);
    VecXT<T> local, y;
    for (const auto& t : terms) {
      local.resize(t.vars.size());
      for (size_t i = 0; i < t.vars.size(); ++i) local(i) = z(t.vars[i]);
      t.fn->eval(local, y);
      total += y(0);
    }
    out(0) = total;
  });
}

std::shared_ptr<VectorFunction> NlpProblem::equality_function() const {
  auto blocks = equalities;
  return make_function(num_vars, num_eq(), [blocks](const auto& z, auto& out) {
    eval_blocks_generic(blocks, z, out);
  });
}

std::shared_ptr<VectorFunction> NlpProblem::inequality_function() const {
  auto blocks = inequalities;
  return make_function(num_vars, num_ineq(),
                       [blocks](const auto& z, auto& out) {
                         eval_blocks_generic(blocks, z, out);
                       });
}

std::map<std::string, std::vector<std::pair<int, int>>>
NlpProblem::equality_groups() const {
  return group_rows(equalities);
}
std::map<std::string, std::vector<std::pair<int, int>>>
NlpProblem::inequality_groups() const {
  return group_rows(inequalities);
}

void NlpProblem::validate() const {
  if (lb.size() != num_vars || ub.size() != num_vars)
    throw Error("variable bound dimensions do not match");
  for (int i = 0; i < num_vars; ++i)
    if (lb(i) > ub(i)) throw Error("crossed variable bounds");
  auto check_blocks = [&](const std::vector<ConstraintBlock>& blocks) {
    for (const auto& b : blocks) {
      if (b.fn->dim_in() != static_cast<int>(b.vars.size()) ||
          b.fn->dim_out() != b.dim)
        throw Error("constraint block dimension mismatch in group " + b.group);
      if (!b.row_pattern.empty() &&
          static_cast<int>(b.row_pattern.size()) != b.dim)
        throw Error("row pattern size mismatch in group " + b.group);
      for (int v : b.vars)
        if (v < 0 || v >= num_vars)
          throw Error("variable index out of range in group " + b.group);
    }
  };
  check_blocks(equalities);
  check_blocks(inequalities);
  for (const auto& t : objective_terms)
    for (int v : t.vars)
      if (v < 0 || v >= num_vars)
        throw Error("variable index out of range in cost term " + t.name);
}

}  // namespace walkplan
