#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fconv/grid_function.hpp"
#include "fconv/metrics.hpp"

namespace fconv {

enum class ConvolutionSide { left_null, right_null, difference };

/// A finite family of functions on a shared grid, with bookkeeping about
/// how it was produced. `schedule` holds the per-member contraction factor
/// when the family came out of convolve_family; the flags say whether the
/// scale functions were member-constant and shared across members, which
/// decides which spectral envelopes are certified.
struct FunctionFamily {
  std::vector<GridFunction> members;
  std::optional<ConvolutionSide> side;
  std::vector<double> schedule;  // Lambda_m per member (empty if not applicable)
  bool constant_scales = false;  // alpha_n^m constant in t
  bool shared_scale = false;     // one scale vector shared by every member

  int count() const { return static_cast<int>(members.size()); }
  bool uniform_schedule() const;
};

/// Orthonormal trigonometric system on [x_0, x_N]: 1/sqrt(L), then
/// sqrt(2/L)cos(2 pi k u), sqrt(2/L)sin(2 pi k u) with u = (x-x_0)/L,
/// ordered constant, cos_1, sin_1, cos_2, ...
FunctionFamily trig_basis(const Partition& partition, int samples_per_cell, int count);

/// Convolve every member with the null function on the given side, using
/// one shared scale vector. left_null: 0*b_m; right_null: f_m*0;
/// difference: b_m - 0*b_m.
FunctionFamily convolve_family(const FunctionFamily& src, ConvolutionSide side,
                               const ScaleVector& scale, double tol = 1e-10, int max_iter = 400);

/// Same, but member m uses the constant scale functions alpha_n = lambda_m.
FunctionFamily convolve_family(const FunctionFamily& src, ConvolutionSide side,
                               std::span<const double> lambda_schedule, double tol = 1e-10,
                               int max_iter = 400);

/// Concatenation of two families on the same grid (mixing classical and
/// convolved spanning systems). Provenance flags are reset.
FunctionFamily union_family(const FunctionFamily& a, const FunctionFamily& b);

/// Dense symmetric matrix of pairwise inner products.
class GramMatrix {
 public:
  explicit GramMatrix(int size);

  int size() const { return size_; }
  double at(int i, int j) const { return data_[index(i, j)]; }
  void set(int i, int j, double v) { data_[index(i, j)] = v; }
  const std::vector<double>& data() const { return data_; }

  double frobenius() const;
  double symmetry_error() const;

 private:
  std::size_t index(int i, int j) const;

  int size_;
  std::vector<double> data_;  // row-major
};

GramMatrix gram_matrix(const FunctionFamily& family);

/// Eigenvalues of a symmetric matrix, ascending, via cyclic Jacobi
/// rotations driven until the off-diagonal Frobenius mass falls below
/// 1e-12 times the Frobenius norm of the input. Rejects matrices whose
/// symmetry error exceeds that same scale.
std::vector<double> symmetric_eigenvalues(const GramMatrix& g);

/// Finite-section Riesz diagnostics: extreme Gram eigenvalues, plus the
/// certified spectral envelope when the family's provenance supports one
/// (shared scale with a single contraction factor; the left_null lower edge
/// and the difference lower edge need member-constant scales).
struct RieszBounds {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  std::optional<double> envelope_lo;
  std::optional<double> envelope_hi;
  bool within_envelope = true;  // meaningful only when an envelope is set
};

RieszBounds riesz_bounds(const FunctionFamily& family, double envelope_pad = 0.0);

/// Frame perturbation budget of a schedule against a source family:
/// bound = sum (lambda_m/(1-lambda_m))^2 ||f_m||_2^2, and the measured
/// sum ||f_m - g_m||_2^2 for the convolved members g_m.
struct PerturbationBudget {
  double bound = 0.0;
  double empirical = 0.0;
};

PerturbationBudget perturbation_R(const FunctionFamily& src, const FunctionFamily& convolved);

/// New frame bounds after a perturbation of size R: feasible iff R < A,
/// then A' = A(1-sqrt(R/A))^2 and B' = B(1+sqrt(R/B))^2.
struct FrameReport {
  double a = 0.0, b = 0.0, r = 0.0;
  double a_new = 0.0, b_new = 0.0;
  bool feasible = false;
};

FrameReport frame_perturbation_bounds(double a, double b, double r);

enum class ScheduleKind { constant, reciprocal };  // reciprocal: c/m

/// lambda_m sequence: constant or c/m, all entries validated against [0, 1).
std::vector<double> lambda_schedule(ScheduleKind kind, double param, int count);

}  // namespace fconv
