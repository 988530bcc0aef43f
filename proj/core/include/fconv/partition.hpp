#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fconv {

/// Strictly increasing nodes x_0 < x_1 < ... < x_N on a compact interval.
/// Subintervals are numbered 1..N with the half-open convention
/// I_1 = [x_0, x_1] and I_n = (x_{n-1}, x_n] for n >= 2, so every point of
/// [x_0, x_N] belongs to exactly one subinterval.
class Partition {
 public:
  explicit Partition(std::vector<double> nodes);

  /// N+1 equally spaced nodes on [lo, hi].
  static Partition uniform(double lo, double hi, int subintervals);

  const std::vector<double>& nodes() const { return nodes_; }
  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }
  double length() const { return hi() - lo(); }
  int subinterval_count() const { return static_cast<int>(nodes_.size()) - 1; }
  bool is_uniform() const { return uniform_; }

  /// 1-based index n of the subinterval containing x. Throws
  /// std::out_of_range for x outside [x_0, x_N].
  int locate(double x) const;

  bool operator==(const Partition& other) const { return nodes_ == other.nodes_; }

 private:
  std::vector<double> nodes_;
  bool uniform_;
};

/// The contractive affine maps L_n : [x_0, x_N] -> I_n determined by a
/// partition: L_n(x) = a_n x + b_n with L_n(x_0) = x_{n-1}, L_n(x_N) = x_n.
/// Slopes satisfy a_n = (x_n - x_{n-1}) / (x_N - x_0), so they sum to 1.
class AffineMapFamily {
 public:
  explicit AffineMapFamily(const Partition& partition);

  int count() const { return static_cast<int>(slope_.size()); }
  double slope(int n) const;
  double intercept(int n) const;

  /// L_n(t) for t in [x_0, x_N]; the result is clamped into I_n.
  double forward(int n, double t) const;
  /// L_n^{-1}(x) for x in I_n; the result is clamped into [x_0, x_N].
  /// Throws std::domain_error when x lies outside I_n beyond roundoff.
  double inverse(int n, double x) const;

  const Partition& partition() const { return partition_; }

 private:
  void check_index(int n) const;

  Partition partition_;
  std::vector<double> slope_;
  std::vector<double> intercept_;
};

/// A point produced by applying the word L_{n_1} o ... o L_{n_k} to a base
/// point. `address` holds n_1..n_k (empty at depth 0); `base_index` says
/// which base point the word was applied to.
struct AddressedPoint {
  std::vector<int> address;
  double point = 0.0;
  std::size_t base_index = 0;
};

inline constexpr std::size_t kDefaultAddressCap = std::size_t{1} << 22;

/// All depth-k images of the base points under the map family, in
/// lexicographic address order (base points cycle fastest within a word).
/// Throws std::length_error when |base| * N^k would exceed `cap`.
std::vector<AddressedPoint> address_grid(const AffineMapFamily& maps, int depth,
                                         std::span<const double> base,
                                         std::size_t cap = kDefaultAddressCap);

}  // namespace fconv
