#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fconv/expr.hpp"
#include "fconv/grid_function.hpp"

using fconv::Expression;
using fconv::GridFunction;
using fconv::Partition;
using fconv::ScaleVector;

TEST_CASE("fine grid layout and index conventions") {
  const Partition p = Partition::uniform(0.0, 2.0, 4);
  const GridFunction g = GridFunction::zero(p, 8);
  CHECK(g.size() == 33);
  CHECK(g.samples_per_cell() == 8);
  CHECK(g.abscissa(0) == 0.0);
  CHECK(g.abscissa(32) == 2.0);
  CHECK(g.abscissa(8) == 0.5);   // node sample
  CHECK(g.abscissa(4) == 0.25);  // mid-cell sample
  CHECK(g.subinterval_of_index(0) == 1);
  CHECK(g.subinterval_of_index(8) == 1);  // shared node counts to the left
  CHECK(g.subinterval_of_index(9) == 2);
  CHECK(g.subinterval_of_index(32) == 4);
  CHECK(g.abscissae().size() == 33);
  CHECK(g.abscissae()[8] == 0.5);
}

TEST_CASE("non-uniform grids space samples per cell") {
  const Partition p({0.0, 0.25, 1.0});
  const GridFunction g = GridFunction::zero(p, 4);
  CHECK(g.size() == 9);
  CHECK(g.abscissa(4) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g.abscissa(2) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(g.abscissa(6) == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(g.abscissa(8) == 1.0);
}

TEST_CASE("sampling evaluates pointwise and propagates domain faults") {
  const Partition p = Partition::uniform(0.0, 3.0, 6);
  const GridFunction g = GridFunction::sample(p, 2, Expression::parse("x"));
  for (int j = 0; j < g.size(); ++j) CHECK(g[j] == doctest::Approx(g.abscissa(j)).epsilon(1e-15));

  const GridFunction c = GridFunction::constant(p, 2, 2.5);
  for (int j = 0; j < c.size(); ++j) CHECK(c[j] == 2.5);

  // grid contains x = 0, where 1/x faults
  CHECK_THROWS_AS(GridFunction::sample(p, 2, Expression::parse("1/x")), fconv::EvalError);
}

TEST_CASE("constructor validates shape and finiteness") {
  const Partition p = Partition::uniform(0.0, 1.0, 2);
  CHECK_THROWS_AS(GridFunction(p, 4, std::vector<double>(8, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(p, 0, std::vector<double>{0.0}), std::invalid_argument);
  std::vector<double> bad(9, 0.0);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(GridFunction(p, 4, bad), std::invalid_argument);
  CHECK_NOTHROW(GridFunction(p, 4, std::vector<double>(9, 1.0)));
}

TEST_CASE("linear interpolation is exact for piecewise linear data") {
  const Partition p = Partition::uniform(-1.0, 1.0, 4);
  const GridFunction g = GridFunction::sample(p, 16, [](double x) { return 3.0 * x - 0.5; });
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double x = unif(rng);
    CHECK(std::abs(g.interpolate(x) - (3.0 * x - 0.5)) <= 1e-14);
  }
  CHECK(g.interpolate(-1.0) == g[0]);
  CHECK(g.interpolate(1.0) == g[g.size() - 1]);
  CHECK_THROWS_AS(g.interpolate(1.0001), std::out_of_range);
  CHECK_THROWS_AS(g.interpolate(-1.0001), std::out_of_range);
}

TEST_CASE("arithmetic stays on the shared grid") {
  const Partition p = Partition::uniform(0.0, 1.0, 2);
  const GridFunction f = GridFunction::sample(p, 32, [](double x) { return std::sin(x); });
  const GridFunction g = GridFunction::sample(p, 32, [](double x) { return std::cos(2 * x); });

  const GridFunction sum = f + g;
  const GridFunction back = sum - g;
  for (int j = 0; j < f.size(); ++j) CHECK(std::abs(back[j] - f[j]) <= 1e-15);

  const GridFunction doubled = 2.0 * f;
  const GridFunction also = f * 2.0;
  for (int j = 0; j < f.size(); ++j) {
    CHECK(doubled[j] == also[j]);
    CHECK(doubled[j] == 2.0 * f[j]);
  }

  const GridFunction neg = -f;
  for (int j = 0; j < f.size(); ++j) CHECK(neg[j] == -f[j]);

  CHECK(f.same_grid(g));
  const GridFunction other = GridFunction::zero(p, 16);
  CHECK(!f.same_grid(other));
  CHECK_THROWS_AS(f + other, std::invalid_argument);
  const GridFunction shifted = GridFunction::zero(Partition::uniform(0.0, 2.0, 2), 32);
  CHECK_THROWS_AS(f + shifted, std::invalid_argument);

  CHECK(GridFunction::constant(p, 8, -3.0).max_abs() == 3.0);
}

TEST_CASE("coarsen keeps every k-th sample") {
  const Partition p = Partition::uniform(0.0, 1.0, 2);
  const GridFunction f = GridFunction::sample(p, 8, [](double x) { return x * x; });
  const GridFunction c = f.coarsen(2);
  CHECK(c.samples_per_cell() == 4);
  for (int j = 0; j < c.size(); ++j) CHECK(c[j] == f[2 * j]);
  CHECK_THROWS_AS(f.coarsen(3), std::invalid_argument);
  CHECK_THROWS_AS(f.coarsen(0), std::invalid_argument);
}

TEST_CASE("scale vectors replicate, cap, and evaluate") {
  const Partition p = Partition::uniform(0.0, 3.0, 6);

  const ScaleVector half = ScaleVector::constant(p, 64, 0.5);
  CHECK(half.count() == 6);
  CHECK(half.lambda() == 0.5);
  CHECK(half.grid_value(3, 10) == 0.5);

  const ScaleVector mixed = ScaleVector::constants(p, 64, {0.1, -0.2, 0.3, -0.4, 0.2, 0.0});
  CHECK(mixed.lambda() == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(mixed.grid_value(2, 7) == -0.2);

  CHECK_THROWS_AS(ScaleVector::constant(p, 64, 1.0), std::domain_error);
  CHECK_THROWS_AS(ScaleVector::constants(p, 64, {0.1, 0.2}), std::invalid_argument);

  const ScaleVector ramp =
      ScaleVector::from_expressions(p, 64, {Expression::parse("x/8")});
  CHECK(ramp.count() == 6);  // single function replicated across cells
  CHECK(ramp.lambda() == 0.375);
  CHECK(ramp.exact_eval());
  CHECK(ramp.eval(2, 1.7) == doctest::Approx(1.7 / 8.0).epsilon(1e-15));
  CHECK(ramp.grid_value(4, 0) == 0.0);  // coarse sample at t_0 = 0

  const ScaleVector zeros = ScaleVector::constant(p, 64, 0.0);
  CHECK(zeros.lambda() == 0.0);
}

TEST_CASE("scale coarse samples live on the pullback grid") {
  const Partition p = Partition::uniform(0.0, 3.0, 6);
  const ScaleVector ramp = ScaleVector::from_expressions(p, 8, {Expression::parse("x/8")});
  const GridFunction& c2 = ramp.coarse_samples(2);
  CHECK(c2.partition().subinterval_count() == 1);
  CHECK(c2.partition().lo() == 0.0);
  CHECK(c2.partition().hi() == 3.0);
  CHECK(c2.size() == 9);
  CHECK(c2[8] == 0.375);  // alpha(x_N)
}

TEST_CASE("compute_lambda takes the max over cells and rejects expansion") {
  const Partition p = Partition::uniform(0.0, 3.0, 6);
  std::vector<std::function<double(double)>> fns{[](double x) { return x / 8.0; }};
  CHECK(fconv::compute_lambda(fns, p, 64) == 0.375);

  std::vector<std::function<double(double)>> zero{[](double) { return 0.0; }};
  CHECK(fconv::compute_lambda(zero, p, 64) == 0.0);

  std::vector<std::function<double(double)>> unit{[](double) { return 1.0; }};
  CHECK_THROWS_AS(fconv::compute_lambda(unit, p, 64), std::domain_error);
}
