#pragma once

#include <limits>
#include <vector>

#include "fconv/grid_function.hpp"

namespace fconv {

/// Selects the distance used for comparisons: the Lp norm for p in [1, inf],
/// the sup norm for p = inf, and the integral metric d_p(f,g) = int |f-g|^p
/// (no root) for 0 < p < 1.
struct NormSpec {
  double p = 2.0;

  static NormSpec lp(double p);
  static NormSpec sup() { return lp(std::numeric_limits<double>::infinity()); }

  bool is_sup() const { return p == std::numeric_limits<double>::infinity(); }
  bool is_metric() const { return p < 1.0; }
};

/// Contraction factor seen by the chosen distance: lambda for p >= 1 and
/// the sup norm, lambda^p for the 0 < p < 1 metrics.
double effective_lambda(double lambda, const NormSpec& spec);

/// Lp norm for p in [1, inf]. Integrals use the composite trapezoid rule on
/// the sampled integrand |g|^p, which makes the result a weighted lp norm
/// of the sample vector: homogeneous, exact triangle inequality, and
/// lp_norm(g,2)^2 == inner_product(g,g) to rounding. The sup norm is the
/// grid max of |g|.
double lp_norm(const GridFunction& g, double p);

/// d_p(f, g) = int |f - g|^p for 0 < p < 1 (trapezoid rule, no root).
double dp_metric(const GridFunction& f, const GridFunction& g, double p);

/// int f*g by the composite trapezoid rule on the sampled product.
double inner_product(const GridFunction& f, const GridFunction& g);

/// Distance under the chosen spec: ||f-g||_p, sup|f-g|, or d_p(f,g).
double distance(const GridFunction& f, const GridFunction& g, const NormSpec& spec);

/// Distance from zero without materializing a difference.
double magnitude(const GridFunction& g, const NormSpec& spec);

using FunctionSet = std::vector<GridFunction>;

/// inf { dist(a, b) : a in A, b in B }. Not a metric; it measures how close
/// the two sets come to each other.
double set_min_distance(const FunctionSet& a, const FunctionSet& b, const NormSpec& spec);

/// Hausdorff distance max over both directions of sup-inf.
double hausdorff_distance(const FunctionSet& a, const FunctionSet& b, const NormSpec& spec);

}  // namespace fconv
