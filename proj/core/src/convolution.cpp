#include "fconv/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace fconv {

ConvolutionConfig::ConvolutionConfig(Partition partition_in, ScaleVector scale_in,
                                     GridFunction seed_in, GridFunction base_in, double tol_in,
                                     int max_iter_in)
    : partition(std::move(partition_in)),
      scale(std::move(scale_in)),
      seed(std::move(seed_in)),
      base(std::move(base_in)),
      tol(tol_in),
      max_iter(max_iter_in) {
  if (!seed.same_grid(base)) throw std::invalid_argument("seed and base live on different grids");
  if (!(seed.partition() == partition))
    throw std::invalid_argument("operands do not live on the configured partition");
  if (!(scale.partition() == partition) || scale.samples_per_cell() != seed.samples_per_cell())
    throw std::invalid_argument("scale functions do not match the operand grid");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
}

ConvergenceError::ConvergenceError(IterationLog log_in)
    : std::runtime_error("fixed point iteration missed its tolerance after " +
                         std::to_string(log_in.sweeps) + " sweeps"),
      log_(std::move(log_in)) {}

namespace {

// (g - b) read along the shared pullback grid t_i = x_0 + i*L/M. On uniform
// partitions t_i is exactly fine grid point i*N.
std::vector<double> pullback_difference(const ConvolutionConfig& cfg, const GridFunction& g) {
  const int m = cfg.seed.samples_per_cell();
  const int n = cfg.partition.subinterval_count();
  std::vector<double> u(static_cast<std::size_t>(m) + 1);
  if (cfg.partition.is_uniform()) {
    const auto& gv = g.values();
    const auto& bv = cfg.base.values();
    for (int i = 0; i <= m; ++i) {
      const std::size_t j = static_cast<std::size_t>(i) * n;
      u[static_cast<std::size_t>(i)] = gv[j] - bv[j];
    }
  } else {
    const double lo = cfg.partition.lo();
    const double span = cfg.partition.length();
    for (int i = 0; i <= m; ++i) {
      const double t = i == m ? cfg.partition.hi() : lo + span * (static_cast<double>(i) / m);
      u[static_cast<std::size_t>(i)] = g.interpolate(t) - cfg.base.interpolate(t);
    }
  }
  return u;
}

std::vector<double> sweep(const ConvolutionConfig& cfg, const GridFunction& g) {
  const int m = cfg.seed.samples_per_cell();
  const int n = cfg.partition.subinterval_count();
  const std::vector<double> u = pullback_difference(cfg, g);
  const auto& fv = cfg.seed.values();
  std::vector<double> out(fv.size());
  for (int k = 1; k <= n; ++k) {
    const auto& alpha = cfg.scale.coarse_samples(k).values();
    const int offset = (k - 1) * m;
    const int start = k == 1 ? 0 : 1;
    for (int i = start; i <= m; ++i) {
      const std::size_t j = static_cast<std::size_t>(offset + i);
      out[j] = fv[j] + alpha[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

GridFunction apply_rb_operator(const ConvolutionConfig& cfg, const GridFunction& g) {
  if (!g.same_grid(cfg.seed))
    throw std::invalid_argument("operator argument lives on a different grid");
  return GridFunction(cfg.partition, cfg.seed.samples_per_cell(), sweep(cfg, g));
}

FixedPointResult fixed_point(const ConvolutionConfig& cfg) {
  IterationLog log;
  log.interpolated_pullback = !cfg.partition.is_uniform();

  const double lambda = cfg.scale.lambda();
  // sup|g_{k+1} - g_k| <= tol*(1-Lambda)/Lambda bounds the remaining error
  // of g_{k+1} by tol via the geometric tail.
  const double threshold = lambda == 0.0 ? std::numeric_limits<double>::infinity()
                                         : cfg.tol * (1.0 - lambda) / lambda;

  GridFunction g = cfg.seed;
  for (int k = 1; k <= cfg.max_iter; ++k) {
    std::vector<double> next = sweep(cfg, g);
    const double d = sup_diff(next, g.values());
    log.sweep_deltas.push_back(d);
    log.sweeps = k;
    g = GridFunction(cfg.partition, cfg.seed.samples_per_cell(), std::move(next));
    if (d <= threshold) {
      log.converged = true;
      break;
    }
  }
  log.residual = sup_diff(sweep(cfg, g), g.values());
  return {std::move(g), std::move(log)};
}

GridFunction convolve(const ConvolutionConfig& cfg) {
  FixedPointResult result = fixed_point(cfg);
  if (!result.log.converged) throw ConvergenceError(std::move(result.log));
  return std::move(result.attractor);
}

std::vector<double> node_values(const ConvolutionConfig& cfg) {
  const int m = cfg.seed.samples_per_cell();
  const int n = cfg.partition.subinterval_count();
  const auto& fv = cfg.seed.values();
  const auto& bv = cfg.base.values();
  const std::size_t last = static_cast<std::size_t>(n) * m;

  // x_N and x_0 sit inside their own subintervals, so the self-referential
  // equation closes over them alone and the divisions below are safe
  // (|alpha| <= Lambda < 1).
  const double a_hi = cfg.scale.grid_value(n, m);
  const double a_lo = cfg.scale.grid_value(1, 0);
  const double at_hi = (fv[last] - a_hi * bv[last]) / (1.0 - a_hi);
  const double at_lo = (fv[0] - a_lo * bv[0]) / (1.0 - a_lo);

  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  out[0] = at_lo;
  out[static_cast<std::size_t>(n)] = at_hi;
  for (int k = 1; k < n; ++k)
    out[static_cast<std::size_t>(k)] =
        fv[static_cast<std::size_t>(k) * m] + cfg.scale.grid_value(k, m) * (at_hi - bv[last]);
  return out;
}

GridFunction left_null(const GridFunction& base, const ScaleVector& scale, double tol,
                       int max_iter) {
  ConvolutionConfig cfg(base.partition(), scale,
                        GridFunction::zero(base.partition(), base.samples_per_cell()), base, tol,
                        max_iter);
  return convolve(cfg);
}

GridFunction right_null(const GridFunction& seed, const ScaleVector& scale, double tol,
                        int max_iter) {
  ConvolutionConfig cfg(seed.partition(), scale, seed,
                        GridFunction::zero(seed.partition(), seed.samples_per_cell()), tol,
                        max_iter);
  return convolve(cfg);
}

std::vector<GridFunction> iterate_left_null(const GridFunction& base, const ScaleVector& scale,
                                            int steps, double tol, int max_iter) {
  if (steps < 0) throw std::invalid_argument("step count must be nonnegative");
  std::vector<GridFunction> orbit;
  orbit.reserve(static_cast<std::size_t>(steps) + 1);
  orbit.push_back(base);
  for (int s = 1; s <= steps; ++s) orbit.push_back(left_null(orbit.back(), scale, tol, max_iter));
  return orbit;
}

std::vector<AddressedValue> pushforward_eval(const ConvolutionConfig& cfg, int depth,
                                             std::span<const double> base_points,
                                             std::span<const double> base_values,
                                             std::size_t cap) {
  if (depth < 0) throw std::invalid_argument("address depth must be nonnegative");
  if (base_points.empty() || base_points.size() != base_values.size())
    throw std::invalid_argument("base points and values must be nonempty and equally sized");
  const int n = cfg.partition.subinterval_count();

  double total = static_cast<double>(base_points.size());
  for (int k = 0; k < depth; ++k) total *= n;
  if (total > static_cast<double>(cap))
    throw std::length_error("pushforward would exceed the point cap");

  const AffineMapFamily maps(cfg.partition);
  const auto f_at = [&](double x) {
    return cfg.seed_eval ? cfg.seed_eval(x) : cfg.seed.interpolate(x);
  };
  const auto b_at = [&](double x) {
    return cfg.base_eval ? cfg.base_eval(x) : cfg.base.interpolate(x);
  };

  std::vector<AddressedValue> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> word(static_cast<std::size_t>(depth), 1);
  while (true) {
    for (std::size_t bi = 0; bi < base_points.size(); ++bi) {
      double t = base_points[bi];
      double y = base_values[bi];
      for (int k = depth - 1; k >= 0; --k) {
        const int digit = word[static_cast<std::size_t>(k)];
        const double tn = maps.forward(digit, t);
        y = f_at(tn) + cfg.scale.eval(digit, t) * (y - b_at(t));
        t = tn;
      }
      out.push_back({word, t, y, bi});
    }
    int pos = depth - 1;
    while (pos >= 0 && word[static_cast<std::size_t>(pos)] == n) {
      word[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++word[static_cast<std::size_t>(pos)];
  }
  return out;
}

std::vector<std::optional<double>> pushforward_on_grid(const ConvolutionConfig& cfg, int depth,
                                                       std::span<const std::size_t> base_indices,
                                                       std::span<const double> base_values) {
  if (!cfg.partition.is_uniform())
    throw std::invalid_argument("exact grid pushforward needs a uniform partition");
  if (depth < 0) throw std::invalid_argument("address depth must be nonnegative");
  if (base_indices.empty() || base_indices.size() != base_values.size())
    throw std::invalid_argument("base indices and values must be nonempty and equally sized");

  const int m = cfg.seed.samples_per_cell();
  const int n = cfg.partition.subinterval_count();
  const std::size_t total = static_cast<std::size_t>(n) * m + 1;
  const auto& fv = cfg.seed.values();
  const auto& bv = cfg.base.values();

  std::vector<std::optional<double>> current(total), next(total);
  for (std::size_t k = 0; k < base_indices.size(); ++k) {
    if (base_indices[k] >= total) throw std::out_of_range("base index outside the grid");
    current[base_indices[k]] = base_values[k];
  }

  for (int s = 0; s < depth; ++s) {
    std::fill(next.begin(), next.end(), std::nullopt);
    for (std::size_t j = 0; j < total; ++j) {
      const int sub = cfg.seed.subinterval_of_index(static_cast<int>(j));
      const int i = static_cast<int>(j) - (sub - 1) * m;
      const std::size_t jp = static_cast<std::size_t>(i) * n;  // pullback grid index
      if (!current[jp]) continue;
      const double alpha = cfg.scale.grid_value(sub, i);
      next[j] = fv[j] + alpha * (*current[jp] - bv[jp]);
    }
    std::swap(current, next);
  }
  return current;
}

}  // namespace fconv
