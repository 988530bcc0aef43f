#include "fconv/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fconv {

namespace {

bool nodes_uniform(const std::vector<double>& nodes) {
  const double lo = nodes.front();
  const double span = nodes.back() - lo;
  const int n = static_cast<int>(nodes.size()) - 1;
  for (int j = 1; j < n; ++j) {
    const double ideal = lo + span * (static_cast<double>(j) / n);
    if (std::abs(nodes[j] - ideal) > 1e-12 * span) return false;
  }
  return true;
}

}  // namespace

Partition::Partition(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("partition needs at least 2 nodes");
  for (const double x : nodes_)
    if (!std::isfinite(x)) throw std::invalid_argument("partition nodes must be finite");
  for (std::size_t j = 1; j < nodes_.size(); ++j)
    if (!(nodes_[j - 1] < nodes_[j]))
      throw std::invalid_argument("partition nodes must be strictly increasing");
  uniform_ = nodes_uniform(nodes_);
}

Partition Partition::uniform(double lo, double hi, int subintervals) {
  if (subintervals < 1) throw std::invalid_argument("need at least one subinterval");
  if (!(lo < hi)) throw std::invalid_argument("interval must satisfy lo < hi");
  std::vector<double> nodes(static_cast<std::size_t>(subintervals) + 1);
  for (int j = 0; j <= subintervals; ++j)
    nodes[static_cast<std::size_t>(j)] = lo + (hi - lo) * (static_cast<double>(j) / subintervals);
  nodes.front() = lo;
  nodes.back() = hi;
  return Partition(std::move(nodes));
}

int Partition::locate(double x) const {
  if (x < lo() || x > hi()) throw std::out_of_range("point outside the partitioned interval");
  if (x <= nodes_[1]) return 1;
  // first node >= x; with x > x_1 this lands in 2..N
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
  return static_cast<int>(it - nodes_.begin());
}

AffineMapFamily::AffineMapFamily(const Partition& partition) : partition_(partition) {
  const auto& xs = partition_.nodes();
  const double span = partition_.length();
  const int n = partition_.subinterval_count();
  slope_.resize(static_cast<std::size_t>(n));
  intercept_.resize(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const double a = (xs[static_cast<std::size_t>(k)] - xs[static_cast<std::size_t>(k - 1)]) / span;
    slope_[static_cast<std::size_t>(k - 1)] = a;
    intercept_[static_cast<std::size_t>(k - 1)] = xs[static_cast<std::size_t>(k - 1)] - a * partition_.lo();
  }
}

void AffineMapFamily::check_index(int n) const {
  if (n < 1 || n > count()) throw std::out_of_range("subinterval index out of range");
}

double AffineMapFamily::slope(int n) const {
  check_index(n);
  return slope_[static_cast<std::size_t>(n - 1)];
}

double AffineMapFamily::intercept(int n) const {
  check_index(n);
  return intercept_[static_cast<std::size_t>(n - 1)];
}

double AffineMapFamily::forward(int n, double t) const {
  check_index(n);
  const double y = slope_[static_cast<std::size_t>(n - 1)] * t + intercept_[static_cast<std::size_t>(n - 1)];
  const auto& xs = partition_.nodes();
  return std::clamp(y, xs[static_cast<std::size_t>(n - 1)], xs[static_cast<std::size_t>(n)]);
}

double AffineMapFamily::inverse(int n, double x) const {
  check_index(n);
  const auto& xs = partition_.nodes();
  const double a = xs[static_cast<std::size_t>(n - 1)];
  const double b = xs[static_cast<std::size_t>(n)];
  const double slack = 16.0 * (b - a) * 2.220446049250313e-16;
  if (x < a - slack || x > b + slack)
    throw std::domain_error("point outside the subinterval of the requested map");
  const double t = (x - intercept_[static_cast<std::size_t>(n - 1)]) / slope_[static_cast<std::size_t>(n - 1)];
  return std::clamp(t, partition_.lo(), partition_.hi());
}

std::vector<AddressedPoint> address_grid(const AffineMapFamily& maps, int depth,
                                         std::span<const double> base, std::size_t cap) {
  if (depth < 0) throw std::invalid_argument("address depth must be nonnegative");
  if (base.empty()) throw std::invalid_argument("address grid needs at least one base point");
  const int n = maps.count();

  double total = static_cast<double>(base.size());
  for (int k = 0; k < depth; ++k) total *= n;
  if (total > static_cast<double>(cap))
    throw std::length_error("address grid would exceed the point cap");

  std::vector<AddressedPoint> out;
  out.reserve(static_cast<std::size_t>(total));

  std::vector<int> word(static_cast<std::size_t>(depth), 1);
  while (true) {
    for (std::size_t b = 0; b < base.size(); ++b) {
      double x = base[b];
      // innermost map first: x -> L_{n_k}(x) -> ... -> L_{n_1}(...)
      for (int k = depth - 1; k >= 0; --k) x = maps.forward(word[static_cast<std::size_t>(k)], x);
      out.push_back({word, x, b});
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

}  // namespace fconv
