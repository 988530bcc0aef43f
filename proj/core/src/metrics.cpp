#include "fconv/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace fconv {

namespace {

// Composite trapezoid rule over the fine grid: sum of h/2 * (term(j) +
// term(j+1)) over all cells. Equivalently a weighted sum of per-sample
// terms, which is what makes the lp quantities below genuine weighted
// sequence norms: homogeneous, exact triangle inequality, and
// lp_norm(g,2)^2 == inner_product(g,g) to rounding.
template <typename Term>
double trapezoid_sum(const GridFunction& f, Term&& term) {
  const auto& xs = f.partition().nodes();
  const int m = f.samples_per_cell();
  double total = 0.0;
  for (int n = 1; n <= f.partition().subinterval_count(); ++n) {
    const double h = (xs[static_cast<std::size_t>(n)] - xs[static_cast<std::size_t>(n - 1)]) / m;
    const int offset = (n - 1) * m;
    double sub = 0.0;
    for (int i = 0; i < m; ++i) sub += 0.5 * (term(offset + i) + term(offset + i + 1));
    total += h * sub;
  }
  return total;
}

void check_grids(const GridFunction& f, const GridFunction& g) {
  if (!f.same_grid(g)) throw std::invalid_argument("grid functions live on different grids");
}

}  // namespace

NormSpec NormSpec::lp(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("norm exponent must be positive");
  return NormSpec{p};
}

double effective_lambda(double lambda, const NormSpec& spec) {
  return spec.is_metric() ? std::pow(lambda, spec.p) : lambda;
}

double lp_norm(const GridFunction& g, double p) {
  if (std::isinf(p)) return g.max_abs();
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1; use dp_metric below 1");
  const auto& v = g.values();
  const double integral = trapezoid_sum(
      g, [&](int j) { return std::pow(std::abs(v[static_cast<std::size_t>(j)]), p); });
  return std::pow(integral, 1.0 / p);
}

double dp_metric(const GridFunction& f, const GridFunction& g, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("dp_metric needs 0 < p < 1");
  check_grids(f, g);
  const auto& a = f.values();
  const auto& b = g.values();
  return trapezoid_sum(f, [&](int j) {
    const std::size_t k = static_cast<std::size_t>(j);
    return std::pow(std::abs(a[k] - b[k]), p);
  });
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  check_grids(f, g);
  const auto& a = f.values();
  const auto& b = g.values();
  return trapezoid_sum(f, [&](int j) {
    const std::size_t k = static_cast<std::size_t>(j);
    return a[k] * b[k];
  });
}

double distance(const GridFunction& f, const GridFunction& g, const NormSpec& spec) {
  check_grids(f, g);
  if (spec.is_sup()) {
    const auto& a = f.values();
    const auto& b = g.values();
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
  }
  if (spec.is_metric()) return dp_metric(f, g, spec.p);
  const auto& a = f.values();
  const auto& b = g.values();
  const double integral = trapezoid_sum(f, [&](int j) {
    const std::size_t k = static_cast<std::size_t>(j);
    return std::pow(std::abs(a[k] - b[k]), spec.p);
  });
  return std::pow(integral, 1.0 / spec.p);
}

double magnitude(const GridFunction& g, const NormSpec& spec) {
  if (spec.is_sup()) return g.max_abs();
  if (spec.is_metric()) {
    const auto& v = g.values();
    return trapezoid_sum(g, [&](int j) {
      return std::pow(std::abs(v[static_cast<std::size_t>(j)]), spec.p);
    });
  }
  return lp_norm(g, spec.p);
}

namespace {

double directed_hausdorff(const FunctionSet& a, const FunctionSet& b, const NormSpec& spec) {
  double outer = 0.0;
  for (const auto& f : a) {
    double inner = std::numeric_limits<double>::infinity();
    for (const auto& g : b) inner = std::min(inner, distance(f, g, spec));
    outer = std::max(outer, inner);
  }
  return outer;
}

}  // namespace

double set_min_distance(const FunctionSet& a, const FunctionSet& b, const NormSpec& spec) {
  if (a.empty() || b.empty()) throw std::invalid_argument("set distance needs nonempty sets");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : a)
    for (const auto& g : b) best = std::min(best, distance(f, g, spec));
  return best;
}

double hausdorff_distance(const FunctionSet& a, const FunctionSet& b, const NormSpec& spec) {
  if (a.empty() || b.empty()) throw std::invalid_argument("set distance needs nonempty sets");
  return std::max(directed_hausdorff(a, b, spec), directed_hausdorff(b, a, spec));
}

}  // namespace fconv
