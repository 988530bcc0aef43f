#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fconv/grid_function.hpp"
#include "fconv/partition.hpp"

namespace fconv {

/// Inputs of one convolution f * b: the partition, the scale functions, the
/// two operands sampled on a shared grid, and the iteration controls.
/// `seed_eval` / `base_eval` optionally provide exact off-grid evaluators
/// for the operands (used by the address-point evaluator); grid work never
/// needs them.
struct ConvolutionConfig {
  Partition partition;
  ScaleVector scale;
  GridFunction seed;  // f
  GridFunction base;  // b
  double tol = 1e-10;
  int max_iter = 400;
  std::function<double(double)> seed_eval;
  std::function<double(double)> base_eval;

  ConvolutionConfig(Partition partition, ScaleVector scale, GridFunction seed, GridFunction base,
                    double tol = 1e-10, int max_iter = 400);
};

struct IterationLog {
  std::vector<double> sweep_deltas;  // sup|g_{k+1} - g_k| per sweep
  double residual = 0.0;             // sup|T(result) - result|
  int sweeps = 0;
  bool converged = false;
  bool interpolated_pullback = false;  // true when a non-uniform partition forced interpolation
};

struct FixedPointResult {
  GridFunction attractor;
  IterationLog log;
};

/// Raised by the convenience wrappers when the iteration does not reach the
/// stopping threshold within max_iter sweeps.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(IterationLog log);
  const IterationLog& log() const { return log_; }

 private:
  IterationLog log_;
};

/// One application of the operator behind f * b:
/// (Tg)(x) = f(x) + alpha_n(t) * (g - b)(t) with t = L_n^{-1}(x) on each
/// subinterval. On uniform partitions the pullback lands exactly on grid
/// points; otherwise grid reads interpolate linearly.
GridFunction apply_rb_operator(const ConvolutionConfig& cfg, const GridFunction& g);

/// Iterate T from g_0 = f until sup|g_{k+1} - g_k| <= tol*(1-Lambda)/Lambda,
/// which certifies sup|result - fixed point| <= tol. Never throws on
/// non-convergence; inspect log.converged.
FixedPointResult fixed_point(const ConvolutionConfig& cfg);

/// f * b. Throws ConvergenceError when the iteration does not certify tol.
GridFunction convolve(const ConvolutionConfig& cfg);

/// Exact values of f * b at the partition nodes via the closed endpoint
/// recursion; no iteration involved.
std::vector<double> node_values(const ConvolutionConfig& cfg);

/// 0 * b (seed identically zero) and f * 0 (base identically zero).
GridFunction left_null(const GridFunction& base, const ScaleVector& scale, double tol = 1e-10,
                       int max_iter = 400);
GridFunction right_null(const GridFunction& seed, const ScaleVector& scale, double tol = 1e-10,
                        int max_iter = 400);

/// The orbit b, (0*)b, (0*)^2 b, ..., (0*)^steps b of the null-seed map.
std::vector<GridFunction> iterate_left_null(const GridFunction& base, const ScaleVector& scale,
                                            int steps, double tol = 1e-10, int max_iter = 400);

/// A depth-k image of base data under the graph maps
/// (t, y) -> (L_n(t), f(L_n(t)) + alpha_n(t) * (y - b(t))).
struct AddressedValue {
  std::vector<int> address;  // n_1..n_k, outermost map first
  double point = 0.0;
  double value = 0.0;
  std::size_t base_index = 0;
};

/// Every depth-k image of the given base points/values, in lexicographic
/// address order with the base index cycling fastest. Off-grid operand
/// reads use seed_eval/base_eval when present, interpolation otherwise.
/// Throws std::length_error when |base| * N^k exceeds `cap`.
std::vector<AddressedValue> pushforward_eval(const ConvolutionConfig& cfg, int depth,
                                             std::span<const double> base_points,
                                             std::span<const double> base_values,
                                             std::size_t cap = kDefaultAddressCap);

/// Depth-k pushforward values evaluated only at fine grid indices, using
/// exact index arithmetic (the pullback of a grid point is again a grid
/// point on uniform partitions). Entry j is empty when the pullback chain
/// of length k starting at j does not terminate in `base_indices`.
/// Throws std::invalid_argument on non-uniform partitions.
std::vector<std::optional<double>> pushforward_on_grid(const ConvolutionConfig& cfg, int depth,
                                                       std::span<const std::size_t> base_indices,
                                                       std::span<const double> base_values);

}  // namespace fconv
