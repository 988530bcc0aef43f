#pragma once

#include <functional>
#include <vector>

#include "fconv/expr.hpp"
#include "fconv/partition.hpp"

namespace fconv {

/// A real function on [x_0, x_N] stored as samples on the fine grid that
/// places M+1 equally spaced points on each subinterval (shared endpoints),
/// N*M+1 values in total. Global index j = (n-1)*M + i holds the i-th
/// sample of subinterval n. Between samples the function is read by linear
/// interpolation. All stored values must be finite.
class GridFunction {
 public:
  GridFunction(Partition partition, int samples_per_cell, std::vector<double> values);

  static GridFunction zero(const Partition& partition, int samples_per_cell);
  static GridFunction constant(const Partition& partition, int samples_per_cell, double value);
  static GridFunction sample(const Partition& partition, int samples_per_cell,
                             const std::function<double(double)>& fn);
  static GridFunction sample(const Partition& partition, int samples_per_cell,
                             const Expression& expr);

  const Partition& partition() const { return partition_; }
  int samples_per_cell() const { return samples_per_cell_; }
  int size() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  double operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }

  /// 1-based subinterval that owns sample j (the shared node j = n*M counts
  /// as the right endpoint of subinterval n).
  int subinterval_of_index(int j) const;
  double abscissa(int j) const;
  std::vector<double> abscissae() const;

  /// Piecewise-linear read at any x in [x_0, x_N].
  double interpolate(double x) const;

  double max_abs() const;
  bool same_grid(const GridFunction& other) const;

  /// Keep every (factor)-th sample; requires samples_per_cell % factor == 0.
  GridFunction coarsen(int factor) const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double scalar);

  friend GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
  friend GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
  friend GridFunction operator*(GridFunction lhs, double scalar) { return lhs *= scalar; }
  friend GridFunction operator*(double scalar, GridFunction rhs) { return rhs *= scalar; }
  friend GridFunction operator-(GridFunction g) { return g *= -1.0; }

 private:
  void check_compatible(const GridFunction& other) const;
  void check_finite() const;

  Partition partition_;
  int samples_per_cell_;
  std::vector<double> values_;
};

/// The scale functions alpha_1..alpha_N of an RB operator, each defined on
/// the whole interval [x_0, x_N] and sampled on the shared coarse pullback
/// grid t_i = x_0 + i*(x_N - x_0)/M, i = 0..M. Construction rejects
/// families whose grid sup-norm is not strictly below 1.
class ScaleVector {
 public:
  static ScaleVector constant(const Partition& partition, int samples_per_cell, double value);
  static ScaleVector constants(const Partition& partition, int samples_per_cell,
                               std::vector<double> values);
  static ScaleVector from_functions(const Partition& partition, int samples_per_cell,
                                    std::vector<std::function<double(double)>> fns);
  static ScaleVector from_expressions(const Partition& partition, int samples_per_cell,
                                      const std::vector<Expression>& exprs);

  const Partition& partition() const { return partition_; }
  int samples_per_cell() const { return samples_per_cell_; }
  int count() const { return static_cast<int>(coarse_.size()); }

  /// Uniform contraction factor: the grid max of |alpha_n| over all n.
  double lambda() const { return lambda_; }

  /// alpha_n at coarse grid index i (0..M).
  double grid_value(int n, int i) const;
  /// alpha_n at an arbitrary t in [x_0, x_N]; exact when callable-backed.
  double eval(int n, double t) const;
  bool exact_eval() const { return !fns_.empty(); }

  const GridFunction& coarse_samples(int n) const;

 private:
  ScaleVector(const Partition& partition, int samples_per_cell,
              std::vector<GridFunction> coarse, std::vector<std::function<double(double)>> fns);

  Partition partition_;
  int samples_per_cell_;
  std::vector<GridFunction> coarse_;  // each on the single-interval partition of [x_0, x_N]
  std::vector<std::function<double(double)>> fns_;
  double lambda_ = 0.0;
};

/// Grid sup-norm of a scale family on the coarse pullback grid. Throws
/// std::domain_error when the result is not strictly below 1. Passing a
/// single function replicates it across all N subinterval slots.
double compute_lambda(const std::vector<std::function<double(double)>>& alphas,
                      const Partition& partition, int samples_per_cell);

}  // namespace fconv
