#include "fconv/bases.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fconv/convolution.hpp"

namespace fconv {

bool FunctionFamily::uniform_schedule() const {
  if (schedule.empty()) return false;
  for (const double v : schedule)
    if (v != schedule.front()) return false;
  return true;
}

FunctionFamily trig_basis(const Partition& partition, int samples_per_cell, int count) {
  if (count < 1) throw std::invalid_argument("basis needs at least one member");
  const double lo = partition.lo();
  const double len = partition.length();
  const double tau = 2.0 * 3.14159265358979323846;

  FunctionFamily family;
  family.members.reserve(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) {
    if (m == 0) {
      family.members.push_back(
          GridFunction::constant(partition, samples_per_cell, 1.0 / std::sqrt(len)));
      continue;
    }
    const int k = (m + 1) / 2;
    const bool is_cos = m % 2 == 1;
    const double amp = std::sqrt(2.0 / len);
    family.members.push_back(GridFunction::sample(
        partition, samples_per_cell, [=](double x) {
          const double phase = tau * k * (x - lo) / len;
          return amp * (is_cos ? std::cos(phase) : std::sin(phase));
        }));
  }
  return family;
}

namespace {

GridFunction convolve_one(const GridFunction& member, ConvolutionSide side,
                          const ScaleVector& scale, double tol, int max_iter) {
  switch (side) {
    case ConvolutionSide::left_null: return left_null(member, scale, tol, max_iter);
    case ConvolutionSide::right_null: return right_null(member, scale, tol, max_iter);
    case ConvolutionSide::difference: return member - left_null(member, scale, tol, max_iter);
  }
  throw std::invalid_argument("unknown convolution side");
}

}  // namespace

FunctionFamily convolve_family(const FunctionFamily& src, ConvolutionSide side,
                               const ScaleVector& scale, double tol, int max_iter) {
  FunctionFamily out;
  out.side = side;
  out.shared_scale = true;
  out.constant_scales = false;
  out.schedule.assign(src.members.size(), scale.lambda());
  out.members.reserve(src.members.size());
  for (const auto& m : src.members)
    out.members.push_back(convolve_one(m, side, scale, tol, max_iter));
  return out;
}

FunctionFamily convolve_family(const FunctionFamily& src, ConvolutionSide side,
                               std::span<const double> lambda_schedule, double tol, int max_iter) {
  if (lambda_schedule.size() != src.members.size())
    throw std::invalid_argument("schedule length must match the family size");
  FunctionFamily out;
  out.side = side;
  out.constant_scales = true;
  out.schedule.assign(lambda_schedule.begin(), lambda_schedule.end());
  out.shared_scale = out.uniform_schedule();
  out.members.reserve(src.members.size());
  for (std::size_t m = 0; m < src.members.size(); ++m) {
    const auto& g = src.members[m];
    const ScaleVector scale =
        ScaleVector::constant(g.partition(), g.samples_per_cell(), lambda_schedule[m]);
    out.members.push_back(convolve_one(g, side, scale, tol, max_iter));
  }
  return out;
}

FunctionFamily union_family(const FunctionFamily& a, const FunctionFamily& b) {
  if (a.members.empty() || b.members.empty())
    throw std::invalid_argument("union needs two nonempty families");
  for (const auto& m : b.members)
    if (!m.same_grid(a.members.front()))
      throw std::invalid_argument("family union needs a shared grid");
  FunctionFamily out;
  out.members = a.members;
  out.members.insert(out.members.end(), b.members.begin(), b.members.end());
  return out;
}

GramMatrix::GramMatrix(int size) : size_(size) {
  if (size < 1) throw std::invalid_argument("matrix size must be >= 1");
  data_.assign(static_cast<std::size_t>(size) * size, 0.0);
}

std::size_t GramMatrix::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= size_ || j >= size_)
    throw std::out_of_range("matrix index out of range");
  return static_cast<std::size_t>(i) * size_ + j;
}

double GramMatrix::frobenius() const {
  double sum = 0.0;
  for (const double v : data_) sum += v * v;
  return std::sqrt(sum);
}

double GramMatrix::symmetry_error() const {
  double worst = 0.0;
  for (int i = 0; i < size_; ++i)
    for (int j = i + 1; j < size_; ++j) worst = std::max(worst, std::abs(at(i, j) - at(j, i)));
  return worst;
}

GramMatrix gram_matrix(const FunctionFamily& family) {
  if (family.members.empty()) throw std::invalid_argument("gram matrix needs a nonempty family");
  const int n = family.count();
  GramMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = inner_product(family.members[static_cast<std::size_t>(i)],
                                     family.members[static_cast<std::size_t>(j)]);
      g.set(i, j, v);
      g.set(j, i, v);
    }
  return g;
}

std::vector<double> symmetric_eigenvalues(const GramMatrix& g) {
  const int n = g.size();
  const double scale = g.frobenius();
  if (g.symmetry_error() > 1e-12 * std::max(1.0, scale))
    throw std::invalid_argument("eigensolver needs a symmetric matrix");
  if (scale == 0.0) return std::vector<double>(static_cast<std::size_t>(n), 0.0);

  std::vector<double> a = g.data();
  const auto at = [&](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * n + j];
  };
  const auto off_mass = [&] {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) sum += 2.0 * at(i, j) * at(i, j);
    return std::sqrt(sum);
  };

  const double target = 1e-12 * scale;
  bool converged = off_mass() <= target;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        const double app = at(p, p);
        const double aqq = at(q, q);
        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(p, k) = at(k, p);
          at(k, q) = s * akp + c * akq;
          at(q, k) = at(k, q);
        }
      }
    converged = off_mass() <= target;
  }
  if (!converged) throw std::runtime_error("jacobi eigensolver did not converge");

  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

RieszBounds riesz_bounds(const FunctionFamily& family, double envelope_pad) {
  const std::vector<double> eig = symmetric_eigenvalues(gram_matrix(family));
  RieszBounds out;
  out.min_eigenvalue = eig.front();
  out.max_eigenvalue = eig.back();

  // Envelopes hold only when every member went through the same operator,
  // i.e. a single contraction factor across the family.
  if (!family.side || !family.uniform_schedule() || !(family.shared_scale || family.constant_scales))
    return out;
  const double lam = family.schedule.front();
  switch (*family.side) {
    case ConvolutionSide::left_null:
      // lower edge needs member-constant scales; without them only the
      // upper edge is certified
      if (lam <= 0.0) return out;
      out.envelope_hi = std::pow(lam / (1.0 - lam), 2.0);
      if (family.constant_scales) out.envelope_lo = std::pow(lam / (1.0 + lam), 2.0);
      break;
    case ConvolutionSide::right_null:
      out.envelope_lo = std::pow(1.0 / (1.0 + lam), 2.0);
      out.envelope_hi = std::pow(1.0 / (1.0 - lam), 2.0);
      break;
    case ConvolutionSide::difference:
      out.envelope_hi = std::pow(1.0 / (1.0 - lam), 2.0);
      if (family.constant_scales) out.envelope_lo = std::pow(1.0 / (1.0 + lam), 2.0);
      break;
  }
  if (out.envelope_lo && out.min_eigenvalue < *out.envelope_lo - envelope_pad)
    out.within_envelope = false;
  if (out.envelope_hi && out.max_eigenvalue > *out.envelope_hi + envelope_pad)
    out.within_envelope = false;
  return out;
}

PerturbationBudget perturbation_R(const FunctionFamily& src, const FunctionFamily& convolved) {
  if (src.count() != convolved.count())
    throw std::invalid_argument("families must have the same size");
  if (convolved.schedule.size() != convolved.members.size())
    throw std::invalid_argument("convolved family carries no schedule");
  PerturbationBudget out;
  const NormSpec two = NormSpec::lp(2.0);
  for (int m = 0; m < src.count(); ++m) {
    const auto& f = src.members[static_cast<std::size_t>(m)];
    const auto& g = convolved.members[static_cast<std::size_t>(m)];
    const double lam = convolved.schedule[static_cast<std::size_t>(m)];
    const double norm = magnitude(f, two);
    out.bound += std::pow(lam / (1.0 - lam) * norm, 2.0);
    out.empirical += std::pow(distance(f, g, two), 2.0);
  }
  return out;
}

FrameReport frame_perturbation_bounds(double a, double b, double r) {
  if (!(a > 0.0) || !(b >= a)) throw std::invalid_argument("frame bounds need 0 < A <= B");
  if (!(r >= 0.0)) throw std::invalid_argument("perturbation size must be nonnegative");
  FrameReport out;
  out.a = a;
  out.b = b;
  out.r = r;
  out.feasible = r < a;
  if (out.feasible) {
    out.a_new = a * std::pow(1.0 - std::sqrt(r / a), 2.0);
    out.b_new = b * std::pow(1.0 + std::sqrt(r / b), 2.0);
  }
  return out;
}

std::vector<double> lambda_schedule(ScheduleKind kind, double param, int count) {
  if (count < 1) throw std::invalid_argument("schedule needs at least one entry");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int m = 1; m <= count; ++m) {
    const double v = kind == ScheduleKind::constant ? param : param / m;
    if (!(v >= 0.0 && v < 1.0))
      throw std::domain_error("schedule entries must lie in [0, 1)");
    out[static_cast<std::size_t>(m - 1)] = v;
  }
  return out;
}

}  // namespace fconv
