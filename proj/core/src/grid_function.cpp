#include "fconv/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fconv {

GridFunction::GridFunction(Partition partition, int samples_per_cell, std::vector<double> values)
    : partition_(std::move(partition)),
      samples_per_cell_(samples_per_cell),
      values_(std::move(values)) {
  if (samples_per_cell_ < 1) throw std::invalid_argument("samples_per_cell must be >= 1");
  const std::size_t expected =
      static_cast<std::size_t>(partition_.subinterval_count()) *
          static_cast<std::size_t>(samples_per_cell_) +
      1;
  if (values_.size() != expected)
    throw std::invalid_argument("value count does not match the grid (need N*M+1 samples)");
  check_finite();
}

void GridFunction::check_finite() const {
  for (const double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("grid values must be finite");
}

GridFunction GridFunction::zero(const Partition& partition, int samples_per_cell) {
  return constant(partition, samples_per_cell, 0.0);
}

GridFunction GridFunction::constant(const Partition& partition, int samples_per_cell,
                                    double value) {
  const std::size_t count = static_cast<std::size_t>(partition.subinterval_count()) *
                                static_cast<std::size_t>(samples_per_cell) +
                            1;
  return GridFunction(partition, samples_per_cell, std::vector<double>(count, value));
}

GridFunction GridFunction::sample(const Partition& partition, int samples_per_cell,
                                  const std::function<double(double)>& fn) {
  const int n = partition.subinterval_count();
  std::vector<double> values(static_cast<std::size_t>(n) * samples_per_cell + 1);
  const auto& xs = partition.nodes();
  for (int k = 1; k <= n; ++k) {
    const double a = xs[static_cast<std::size_t>(k - 1)];
    const double b = xs[static_cast<std::size_t>(k)];
    const int start = k == 1 ? 0 : 1;
    for (int i = start; i <= samples_per_cell; ++i) {
      const double x = i == samples_per_cell
                           ? b
                           : a + (b - a) * (static_cast<double>(i) / samples_per_cell);
      values[static_cast<std::size_t>(k - 1) * samples_per_cell + i] = fn(x);
    }
  }
  return GridFunction(partition, samples_per_cell, std::move(values));
}

GridFunction GridFunction::sample(const Partition& partition, int samples_per_cell,
                                  const Expression& expr) {
  return sample(partition, samples_per_cell, [&expr](double x) { return expr(x); });
}

int GridFunction::subinterval_of_index(int j) const {
  if (j < 0 || j >= size()) throw std::out_of_range("grid index out of range");
  if (j == 0) return 1;
  return (j + samples_per_cell_ - 1) / samples_per_cell_;
}

double GridFunction::abscissa(int j) const {
  if (j < 0 || j >= size()) throw std::out_of_range("grid index out of range");
  const int n = std::min(j / samples_per_cell_ + 1, partition_.subinterval_count());
  const int i = j - (n - 1) * samples_per_cell_;
  const auto& xs = partition_.nodes();
  const double a = xs[static_cast<std::size_t>(n - 1)];
  const double b = xs[static_cast<std::size_t>(n)];
  if (i == 0) return a;
  if (i == samples_per_cell_) return b;
  return a + (b - a) * (static_cast<double>(i) / samples_per_cell_);
}

std::vector<double> GridFunction::abscissae() const {
  std::vector<double> xs(static_cast<std::size_t>(size()));
  for (int j = 0; j < size(); ++j) xs[static_cast<std::size_t>(j)] = abscissa(j);
  return xs;
}

double GridFunction::interpolate(double x) const {
  const int n = partition_.locate(x);
  const auto& xs = partition_.nodes();
  const double a = xs[static_cast<std::size_t>(n - 1)];
  const double b = xs[static_cast<std::size_t>(n)];
  const double theta = (x - a) / (b - a) * samples_per_cell_;
  int i = static_cast<int>(theta);
  i = std::clamp(i, 0, samples_per_cell_ - 1);
  const double w = theta - i;
  const std::size_t j = static_cast<std::size_t>(n - 1) * samples_per_cell_ + i;
  return (1.0 - w) * values_[j] + w * values_[j + 1];
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool GridFunction::same_grid(const GridFunction& other) const {
  return samples_per_cell_ == other.samples_per_cell_ && partition_ == other.partition_;
}

GridFunction GridFunction::coarsen(int factor) const {
  if (factor < 1 || samples_per_cell_ % factor != 0)
    throw std::invalid_argument("coarsening factor must divide samples_per_cell");
  const int m = samples_per_cell_ / factor;
  std::vector<double> out(static_cast<std::size_t>(partition_.subinterval_count()) * m + 1);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = values_[j * factor];
  return GridFunction(partition_, m, std::move(out));
}

void GridFunction::check_compatible(const GridFunction& other) const {
  if (!same_grid(other)) throw std::invalid_argument("grid functions live on different grids");
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  check_compatible(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  check_finite();
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  check_compatible(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  check_finite();
  return *this;
}

GridFunction& GridFunction::operator*=(double scalar) {
  for (double& v : values_) v *= scalar;
  check_finite();
  return *this;
}

namespace {

Partition whole_interval(const Partition& partition) {
  return Partition({partition.lo(), partition.hi()});
}

}  // namespace

ScaleVector::ScaleVector(const Partition& partition, int samples_per_cell,
                         std::vector<GridFunction> coarse,
                         std::vector<std::function<double(double)>> fns)
    : partition_(partition),
      samples_per_cell_(samples_per_cell),
      coarse_(std::move(coarse)),
      fns_(std::move(fns)) {
  if (static_cast<int>(coarse_.size()) != partition_.subinterval_count())
    throw std::invalid_argument("need one scale function per subinterval");
  lambda_ = 0.0;
  for (const auto& g : coarse_) lambda_ = std::max(lambda_, g.max_abs());
  if (!(lambda_ < 1.0))
    throw std::domain_error("scale functions must have sup-norm strictly below 1");
}

ScaleVector ScaleVector::constant(const Partition& partition, int samples_per_cell, double value) {
  return constants(partition, samples_per_cell,
                   std::vector<double>(static_cast<std::size_t>(partition.subinterval_count()),
                                       value));
}

ScaleVector ScaleVector::constants(const Partition& partition, int samples_per_cell,
                                   std::vector<double> values) {
  if (static_cast<int>(values.size()) != partition.subinterval_count())
    throw std::invalid_argument("need one scale constant per subinterval");
  const Partition whole = whole_interval(partition);
  std::vector<GridFunction> coarse;
  std::vector<std::function<double(double)>> fns;
  coarse.reserve(values.size());
  fns.reserve(values.size());
  for (const double c : values) {
    coarse.push_back(GridFunction::constant(whole, samples_per_cell, c));
    fns.emplace_back([c](double) { return c; });
  }
  return ScaleVector(partition, samples_per_cell, std::move(coarse), std::move(fns));
}

ScaleVector ScaleVector::from_functions(const Partition& partition, int samples_per_cell,
                                        std::vector<std::function<double(double)>> fns) {
  const int n = partition.subinterval_count();
  if (fns.size() == 1) fns.resize(static_cast<std::size_t>(n), fns.front());
  if (static_cast<int>(fns.size()) != n)
    throw std::invalid_argument("need one scale function per subinterval (or a single shared one)");
  const Partition whole = whole_interval(partition);
  std::vector<GridFunction> coarse;
  coarse.reserve(fns.size());
  for (const auto& fn : fns) coarse.push_back(GridFunction::sample(whole, samples_per_cell, fn));
  return ScaleVector(partition, samples_per_cell, std::move(coarse), std::move(fns));
}

ScaleVector ScaleVector::from_expressions(const Partition& partition, int samples_per_cell,
                                          const std::vector<Expression>& exprs) {
  std::vector<std::function<double(double)>> fns;
  fns.reserve(exprs.size());
  for (const auto& e : exprs) fns.emplace_back([e](double x) { return e(x); });
  return from_functions(partition, samples_per_cell, std::move(fns));
}

double ScaleVector::grid_value(int n, int i) const {
  return coarse_samples(n)[i];
}

double ScaleVector::eval(int n, double t) const {
  if (n < 1 || n > count()) throw std::out_of_range("scale function index out of range");
  if (!fns_.empty()) return fns_[static_cast<std::size_t>(n - 1)](t);
  return coarse_[static_cast<std::size_t>(n - 1)].interpolate(t);
}

const GridFunction& ScaleVector::coarse_samples(int n) const {
  if (n < 1 || n > count()) throw std::out_of_range("scale function index out of range");
  return coarse_[static_cast<std::size_t>(n - 1)];
}

double compute_lambda(const std::vector<std::function<double(double)>>& alphas,
                      const Partition& partition, int samples_per_cell) {
  if (alphas.empty()) throw std::invalid_argument("need at least one scale function");
  const Partition whole = Partition({partition.lo(), partition.hi()});
  double lambda = 0.0;
  const std::size_t slots =
      alphas.size() == 1 ? static_cast<std::size_t>(partition.subinterval_count()) : alphas.size();
  if (slots != static_cast<std::size_t>(partition.subinterval_count()))
    throw std::invalid_argument("need one scale function per subinterval (or a single shared one)");
  for (std::size_t k = 0; k < alphas.size(); ++k)
    lambda = std::max(lambda, GridFunction::sample(whole, samples_per_cell, alphas[k]).max_abs());
  if (!(lambda < 1.0))
    throw std::domain_error("scale functions must have sup-norm strictly below 1");
  return lambda;
}

}  // namespace fconv
