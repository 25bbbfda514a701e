#pragma once

#include <Eigen/SparseCore>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "walkplan/types.hpp"

namespace walkplan {

// Lanes carried by one dual-number sweep; each lane is an independent
// directional derivative.
constexpr int kAdWidth = 16;
using Dual = DualN<kAdWidth>;

using SpMat = Eigen::SparseMatrix<double>;

// A vector-valued map evaluable on plain doubles and on dual numbers.
class VectorFunction {
 public:
  virtual ~VectorFunction() = default;
  virtual int dim_in() const = 0;
  virtual int dim_out() const = 0;
  virtual void eval(const VecX& x, VecX& y) const = 0;
  virtual void eval(const VecXT<Dual>& x, VecXT<Dual>& y) const = 0;
};

template <class F>
class GenericFunction final : public VectorFunction {
 public:
  GenericFunction(int dim_in, int dim_out, F f)
      : nin_(dim_in), nout_(dim_out), f_(std::move(f)) {}
  int dim_in() const override { return nin_; }
  int dim_out() const override { return nout_; }
  void eval(const VecX& x, VecX& y) const override {
    y.resize(nout_);
    f_(x, y);
  }
  void eval(const VecXT<Dual>& x, VecXT<Dual>& y) const override {
    y.resize(nout_);
    f_(x, y);
  }

 private:
  int nin_, nout_;
  F f_;
};

// Wraps a scalar-generic callable f(const VecXT<T>&, VecXT<T>&).
template <class F>
std::shared_ptr<VectorFunction> make_function(int dim_in, int dim_out, F f) {
  return std::make_shared<GenericFunction<F>>(dim_in, dim_out, std::move(f));
}

// Structural nonzeros, stored per row with sorted column indices.
struct SparsityPattern {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<int>> row_cols;

  SparsityPattern() = default;
  SparsityPattern(int r, int c) : rows(r), cols(c), row_cols(r) {}

  void add(int r, int c) { row_cols[r].push_back(c); }
  void sort_rows() {
    for (auto& rc : row_cols) {
      std::sort(rc.begin(), rc.end());
      rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
    }
  }
  bool contains(int r, int c) const {
    const auto& rc = row_cols[r];
    return std::binary_search(rc.begin(), rc.end(), c);
  }
  int nnz() const {
    int n = 0;
    for (const auto& rc : row_cols) n += static_cast<int>(rc.size());
    return n;
  }
  static SparsityPattern dense(int r, int c) {
    SparsityPattern p(r, c);
    for (int i = 0; i < r; ++i) {
      p.row_cols[i].resize(c);
      std::iota(p.row_cols[i].begin(), p.row_cols[i].end(), 0);
    }
    return p;
  }
};

// Exact gradient of a scalar-valued function by forward sweeps, kAdWidth
// directions at a time.
VecX ad_gradient(const VectorFunction& f, const VecX& z);

// Greedy structural coloring: columns sharing a row never share a color.
std::vector<int> color_columns(const SparsityPattern& pattern,
                               const std::vector<int>* column_order = nullptr);

// Sparse Jacobian via compressed forward AD over the declared pattern.
// With verify_pattern, every column gets its own lane and any value outside
// the pattern above 1e-12 raises an error.
SpMat ad_jacobian(const VectorFunction& f, const VecX& z,
                  const SparsityPattern& pattern, bool verify_pattern = false,
                  const std::vector<int>* column_order = nullptr);

}  // namespace walkplan
