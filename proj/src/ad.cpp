#include "walkplan/ad.hpp"

#include <cmath>

#include "walkplan/kinematics.hpp"

namespace walkplan {

VecX ad_gradient(const VectorFunction& f, const VecX& z) {
  if (f.dim_out() != 1) throw Error("ad_gradient needs a scalar function");
  const int n = static_cast<int>(z.size());
  VecX grad(n);
  VecXT<Dual> x(n), y;
  for (int start = 0; start < n; start += kAdWidth) {
    const int width = std::min(kAdWidth, n - start);
    for (int i = 0; i < n; ++i) x(i) = Dual(z(i));
    for (int k = 0; k < width; ++k) x(start + k).d[k] = 1.0;
    f.eval(x, y);
    for (int k = 0; k < width; ++k) grad(start + k) = y(0).d[k];
  }
  return grad;
}

std::vector<int> color_columns(const SparsityPattern& pattern,
                               const std::vector<int>* column_order) {
  const int n = pattern.cols;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (column_order) order = *column_order;

  // rows_of[c]: rows where column c appears.
  std::vector<std::vector<int>> rows_of(n);
  for (int r = 0; r < pattern.rows; ++r)
    for (int c : pattern.row_cols[r]) rows_of[c].push_back(r);

  std::vector<int> color(n, -1);
  std::vector<std::vector<char>> color_rows;  // color -> row occupancy
  for (int c : order) {
    int g = 0;
    for (;; ++g) {
      if (g == static_cast<int>(color_rows.size()))
        color_rows.emplace_back(pattern.rows, 0);
      bool free_slot = true;
      for (int r : rows_of[c]) {
        if (color_rows[g][r]) {
          free_slot = false;
          break;
        }
      }
      if (free_slot) break;
    }
    color[c] = g;
    for (int r : rows_of[c]) color_rows[g][r] = 1;
  }
  return color;
}

SpMat ad_jacobian(const VectorFunction& f, const VecX& z,
                  const SparsityPattern& pattern, bool verify_pattern,
                  const std::vector<int>* column_order) {
  const int n = static_cast<int>(z.size());
  const int m = f.dim_out();
  if (pattern.rows != m || pattern.cols != n)
    throw Error("sparsity pattern dimensions do not match function");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(pattern.nnz());
  VecXT<Dual> x(n), y;

  if (verify_pattern) {
    // One lane per column; check every output row.
    for (int start = 0; start < n; start += kAdWidth) {
      const int width = std::min(kAdWidth, n - start);
      for (int i = 0; i < n; ++i) x(i) = Dual(z(i));
      for (int k = 0; k < width; ++k) x(start + k).d[k] = 1.0;
      f.eval(x, y);
      for (int r = 0; r < m; ++r) {
        for (int k = 0; k < width; ++k) {
          const double v = y(r).d[k];
          const int c = start + k;
          if (pattern.contains(r, c)) {
            triplets.emplace_back(r, c, v);
          } else if (std::abs(v) > 1e-12) {
            throw Error("jacobian value outside declared sparsity at row " +
                        std::to_string(r) + ", col " + std::to_string(c));
          }
        }
      }
    }
  } else {
    const std::vector<int> color = color_columns(pattern, column_order);
    const int num_colors =
        color.empty() ? 0 : 1 + *std::max_element(color.begin(), color.end());
    // column of each (row, color) pair is unique by construction.
    for (int base = 0; base < num_colors; base += kAdWidth) {
      const int width = std::min(kAdWidth, num_colors - base);
      for (int i = 0; i < n; ++i) x(i) = Dual(z(i));
      for (int c = 0; c < n; ++c) {
        const int lane = color[c] - base;
        if (lane >= 0 && lane < width) x(c).d[lane] = 1.0;
      }
      f.eval(x, y);
      for (int r = 0; r < m; ++r) {
        for (int c : pattern.row_cols[r]) {
          const int lane = color[c] - base;
          if (lane >= 0 && lane < width)
            triplets.emplace_back(r, c, y(r).d[lane]);
        }
      }
    }
  }

  SpMat jac(m, n);
  jac.setFromTriplets(triplets.begin(), triplets.end());
  return jac;
}

}  // namespace walkplan
