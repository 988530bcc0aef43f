#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fconv/bases.hpp"
#include "fconv/expr.hpp"
#include "fconv/metrics.hpp"

using fconv::ConvolutionSide;
using fconv::Expression;
using fconv::FunctionFamily;
using fconv::GramMatrix;
using fconv::GridFunction;
using fconv::Partition;
using fconv::ScaleVector;

TEST_CASE("trigonometric basis layout") {
  const Partition p = Partition::uniform(0.0, 3.0, 6);

  const FunctionFamily one = fconv::trig_basis(p, 32, 1);
  REQUIRE(one.count() == 1);
  for (int j = 0; j < one.members[0].size(); ++j)
    CHECK(one.members[0][j] == 1.0 / std::sqrt(3.0));

  const FunctionFamily fam = fconv::trig_basis(p, 32, 5);
  REQUIRE(fam.count() == 5);
  const double amp = std::sqrt(2.0 / 3.0);
  // order: constant, cos k=1, sin k=1, cos k=2, sin k=2
  CHECK(fam.members[1][0] == doctest::Approx(amp).epsilon(1e-14));
  CHECK(fam.members[2][0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(fam.members[3][0] == doctest::Approx(amp).epsilon(1e-14));
  CHECK(fam.members[4][0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(!fam.side.has_value());
  CHECK(fam.schedule.empty());

  CHECK_THROWS_AS(fconv::trig_basis(p, 32, 0), std::invalid_argument);
}

TEST_CASE("trigonometric members are orthonormal on the grid") {
  const Partition p = Partition::uniform(0.0, 3.0, 6);
  const FunctionFamily fam = fconv::trig_basis(p, 64, 9);
  for (const auto& g : fam.members)
    CHECK(fconv::lp_norm(g, 2.0) == doctest::Approx(1.0).epsilon(1e-10));

  const GramMatrix gram = fconv::gram_matrix(fam);
  for (int i = 0; i < gram.size(); ++i)
    for (int j = 0; j < gram.size(); ++j)
      CHECK(std::abs(gram.at(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-12);
}

TEST_CASE("gram matrix basics") {
  const Partition p = Partition::uniform(0.0, 1.0, 2);
  const GridFunction g = GridFunction::sample(p, 64, [](double x) { return x + 0.5; });

  FunctionFamily single;
  single.members.push_back(g);
  const GramMatrix gs = fconv::gram_matrix(single);
  REQUIRE(gs.size() == 1);
  const double n2 = fconv::lp_norm(g, 2.0);
  CHECK(gs.at(0, 0) == doctest::Approx(n2 * n2).epsilon(1e-13));

  FunctionFamily pair;
  pair.members.push_back(g);
  pair.members.push_back(GridFunction::sample(p, 64, [](double x) { return std::sin(3.0 * x); }));
  const GramMatrix g1 = fconv::gram_matrix(pair);

  FunctionFamily doubled;
  for (const auto& m : pair.members) doubled.members.push_back(m * 2.0);
  const GramMatrix g4 = fconv::gram_matrix(doubled);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(g4.at(i, j) == doctest::Approx(4.0 * g1.at(i, j)).epsilon(1e-14));

  CHECK(g1.symmetry_error() == 0.0);
  CHECK_THROWS_AS(fconv::gram_matrix(FunctionFamily{}), std::invalid_argument);
}

TEST_CASE("quadratic form through the gram matrix matches the norm") {
  const Partition p = Partition::uniform(0.0, 1.0, 2);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  FunctionFamily fam = fconv::trig_basis(p, 128, 6);
  // make it non-orthogonal on purpose
  const ScaleVector scale = ScaleVector::constant(p, 128, 0.3);
  fam = fconv::convolve_family(fam, ConvolutionSide::right_null, scale);
  const GramMatrix gram = fconv::gram_matrix(fam);

  for (int t = 0; t < 10; ++t) {
    std::vector<double> c(static_cast<std::size_t>(fam.count()));
    for (double& v : c) v = unif(rng);

    double quad = 0.0;
    for (int i = 0; i < fam.count(); ++i)
      for (int j = 0; j < fam.count(); ++j)
        quad += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j)] * gram.at(i, j);

    GridFunction combo = GridFunction::zero(p, 128);
    for (int i = 0; i < fam.count(); ++i)
      combo += fam.members[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
    const double n = fconv::lp_norm(combo, 2.0);

    // the weighted trapezoid norm makes this an identity up to rounding
    CHECK(std::abs(quad - n * n) <= 1e-12 * std::max(1.0, n * n));
  }
}

TEST_CASE("null scale leaves convolved families trivial") {
  const Partition p = Partition::uniform(0.0, 1.0, 2);
  const FunctionFamily src = fconv::trig_basis(p, 64, 4);
  const ScaleVector zero = ScaleVector::constant(p, 64, 0.0);

  const FunctionFamily left = fconv::convolve_family(src, ConvolutionSide::left_null, zero);
  for (const auto& m : left.members)
    for (int j = 0; j < m.size(); ++j) CHECK(m[j] == 0.0);
  CHECK(left.side == ConvolutionSide::left_null);
  CHECK(left.uniform_schedule());
  CHECK(left.schedule.front() == 0.0);

  const FunctionFamily right = fconv::convolve_family(src, ConvolutionSide::right_null, zero);
  for (std::size_t m = 0; m < src.members.size(); ++m)
    for (int j = 0; j < src.members[m].size(); ++j)
      CHECK(right.members[m][j] == src.members[m][j]);

  const FunctionFamily diff = fconv::convolve_family(src, ConvolutionSide::difference, zero);
  for (std::size_t m = 0; m < src.members.size(); ++m)
    for (int j = 0; j < src.members[m].size(); ++j)
      CHECK(diff.members[m][j] == src.members[m][j]);
}

TEST_CASE("difference members are the seed minus its null-seed part") {
  const Partition p = Partition::uniform(0.0, 1.0, 2);
  const FunctionFamily src = fconv::trig_basis(p, 64, 4);
  const double tol = 1e-10;
  const ScaleVector scale =
      ScaleVector::from_expressions(p, 64, {Expression::parse("x/8")});

  const FunctionFamily diff =
      fconv::convolve_family(src, ConvolutionSide::difference, scale, tol);
  const FunctionFamily left =
      fconv::convolve_family(src, ConvolutionSide::left_null, scale, tol);
  for (std::size_t m = 0; m < src.members.size(); ++m) {
    const GridFunction want = src.members[m] - left.members[m];
    double worst = 0.0;
    for (int j = 0; j < want.size(); ++j)
      worst = std::max(worst, std::abs(diff.members[m][j] - want[j]));
    CHECK(worst <= 3.0 * tol);
  }
}

TEST_CASE("null-seed members obey the sup-norm envelope") {
  const Partition p = Partition::uniform(0.0, 3.0, 6);
  const FunctionFamily src = fconv::trig_basis(p, 64, 16);
  const double tol = 1e-10;
  const ScaleVector scale =
      ScaleVector::from_expressions(p, 64, {Expression::parse("x/8")});
  REQUIRE(scale.lambda() == 0.375);

  const FunctionFamily conv =
      fconv::convolve_family(src, ConvolutionSide::left_null, scale, tol);
  const double ratio = 0.375 / 0.625;  // 0.6
  for (std::size_t m = 0; m < src.members.size(); ++m)
    CHECK(conv.members[m].max_abs() <= ratio * src.members[m].max_abs() + 1e-8);
}

TEST_CASE("eigenvalues of small oracle matrices") {
  GramMatrix ident(3);
  for (int i = 0; i < 3; ++i) ident.set(i, i, 1.0);
  const auto ones = fconv::symmetric_eigenvalues(ident);
  CHECK(ones == std::vector<double>{1.0, 1.0, 1.0});

  GramMatrix diag(2);
  diag.set(0, 0, 1.0);
  diag.set(1, 1, 4.0);
  CHECK(fconv::symmetric_eigenvalues(diag) == std::vector<double>{1.0, 4.0});

  GramMatrix coupled(2);
  coupled.set(0, 0, 2.0);
  coupled.set(1, 1, 2.0);
  coupled.set(0, 1, 1.0);
  coupled.set(1, 0, 1.0);
  const auto eig = fconv::symmetric_eigenvalues(coupled);
  CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig[1] == doctest::Approx(3.0).epsilon(1e-12));

  GramMatrix zero(2);
  CHECK(fconv::symmetric_eigenvalues(zero) == std::vector<double>{0.0, 0.0});

  GramMatrix lopsided(2);
  lopsided.set(0, 1, 1.0);
  lopsided.set(1, 0, 0.5);
  CHECK_THROWS_AS(fconv::symmetric_eigenvalues(lopsided), std::invalid_argument);
}

TEST_CASE("eigenvalues preserve trace and frobenius mass") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  GramMatrix g(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) {
      const double v = unif(rng);
      g.set(i, j, v);
      g.set(j, i, v);
    }
  const auto eig = fconv::symmetric_eigenvalues(g);
  REQUIRE(eig.size() == 6);
  CHECK(std::is_sorted(eig.begin(), eig.end()));

  double trace = 0.0;
  for (int i = 0; i < 6; ++i) trace += g.at(i, i);
  const double eig_sum = std::accumulate(eig.begin(), eig.end(), 0.0);
  CHECK(std::abs(eig_sum - trace) <= 1e-12 * g.frobenius());  // trace may sit near zero

  double sq = 0.0;
  for (const double v : eig) sq += v * v;
  CHECK(std::sqrt(sq) == doctest::Approx(g.frobenius()).epsilon(1e-12));
}

TEST_CASE("spectral envelopes of convolved orthonormal families") {
  const Partition p = Partition::uniform(0.0, 1.0, 2);
  const FunctionFamily src = fconv::trig_basis(p, 256, 6);

  SUBCASE("null-seed with a constant schedule certifies both edges") {
    const std::vector<double> sched(6, 0.3);
    const FunctionFamily conv =
        fconv::convolve_family(src, ConvolutionSide::left_null, sched);
    const auto rb = fconv::riesz_bounds(conv, 5e-3);
    REQUIRE(rb.envelope_lo.has_value());
    REQUIRE(rb.envelope_hi.has_value());
    CHECK(*rb.envelope_lo == doctest::Approx(std::pow(0.3 / 1.3, 2.0)).epsilon(1e-15));
    CHECK(*rb.envelope_hi == doctest::Approx(std::pow(0.3 / 0.7, 2.0)).epsilon(1e-15));
    CHECK(rb.within_envelope);
    CHECK(rb.min_eigenvalue >= *rb.envelope_lo - 5e-3);
    CHECK(rb.max_eigenvalue <= *rb.envelope_hi + 5e-3);
  }

  SUBCASE("a shared non-constant scale only certifies the upper edge") {
    const ScaleVector scale =
        ScaleVector::from_expressions(p, 256, {Expression::parse("0.2*x+0.1")});
    const FunctionFamily conv =
        fconv::convolve_family(src, ConvolutionSide::left_null, scale);
    const auto rb = fconv::riesz_bounds(conv);
    CHECK(!rb.envelope_lo.has_value());
    REQUIRE(rb.envelope_hi.has_value());
    const double lam = scale.lambda();
    CHECK(*rb.envelope_hi == doctest::Approx(std::pow(lam / (1.0 - lam), 2.0)));
    CHECK(rb.within_envelope);
  }

  SUBCASE("a varying schedule certifies nothing") {
    const std::vector<double> sched{0.3, 0.2, 0.1, 0.05, 0.02, 0.01};
    const FunctionFamily conv =
        fconv::convolve_family(src, ConvolutionSide::right_null, sched);
    const auto rb = fconv::riesz_bounds(conv);
    CHECK(!rb.envelope_lo.has_value());
    CHECK(!rb.envelope_hi.has_value());
    CHECK(rb.within_envelope);  // vacuously
  }

  SUBCASE("null-base at zero contraction pins the spectrum at one") {
    const std::vector<double> sched(6, 0.0);
    const FunctionFamily conv =
        fconv::convolve_family(src, ConvolutionSide::right_null, sched);
    const auto rb = fconv::riesz_bounds(conv, 1e-9);
    REQUIRE(rb.envelope_lo.has_value());
    CHECK(*rb.envelope_lo == 1.0);
    CHECK(*rb.envelope_hi == 1.0);
    CHECK(rb.within_envelope);
  }

  SUBCASE("a plain basis has no envelope") {
    const auto rb = fconv::riesz_bounds(src);
    CHECK(!rb.envelope_lo.has_value());
    CHECK(!rb.envelope_hi.has_value());
    CHECK(rb.min_eigenvalue == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("perturbation budget of a null-base family") {
  const Partition p = Partition::uniform(0.0, 1.0, 2);
  const FunctionFamily src = fconv::trig_basis(p, 256, 4);
  const std::vector<double> sched(4, 1.0 / 3.0);
  const FunctionFamily conv =
      fconv::convolve_family(src, ConvolutionSide::right_null, sched);

  const auto budget = fconv::perturbation_R(src, conv);
  // four unit-norm members at lambda/(1-lambda) = 1/2 each
  CHECK(budget.bound == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(budget.empirical <= budget.bound);
  CHECK(budget.empirical > 0.0);

  FunctionFamily short_family;
  short_family.members.push_back(src.members[0]);
  CHECK_THROWS_AS(fconv::perturbation_R(short_family, conv), std::invalid_argument);
  CHECK_THROWS_AS(fconv::perturbation_R(src, src), std::invalid_argument);
}

TEST_CASE("frame bounds after a perturbation") {
  const auto r = fconv::frame_perturbation_bounds(1.0, 1.0, 0.25);
  CHECK(r.feasible);
  CHECK(r.a_new == 0.25);
  CHECK(r.b_new == 2.25);

  const auto same = fconv::frame_perturbation_bounds(2.0, 3.0, 0.0);
  CHECK(same.feasible);
  CHECK(same.a_new == 2.0);
  CHECK(same.b_new == 3.0);

  const auto edge = fconv::frame_perturbation_bounds(1.0, 1.0, 1.0);
  CHECK(!edge.feasible);

  CHECK_THROWS_AS(fconv::frame_perturbation_bounds(0.0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(fconv::frame_perturbation_bounds(2.0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(fconv::frame_perturbation_bounds(1.0, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("contraction factor schedules") {
  const auto rec = fconv::lambda_schedule(fconv::ScheduleKind::reciprocal, 0.3, 3);
  REQUIRE(rec.size() == 3);
  CHECK(rec[0] == 0.3);
  CHECK(rec[1] == 0.15);
  CHECK(rec[2] == 0.3 / 3.0);

  const auto zeros = fconv::lambda_schedule(fconv::ScheduleKind::constant, 0.0, 4);
  for (const double v : zeros) CHECK(v == 0.0);

  CHECK_THROWS_AS(fconv::lambda_schedule(fconv::ScheduleKind::reciprocal, 1.2, 1),
                  std::domain_error);
  CHECK_THROWS_AS(fconv::lambda_schedule(fconv::ScheduleKind::constant, -0.2, 2),
                  std::domain_error);
  CHECK_THROWS_AS(fconv::lambda_schedule(fconv::ScheduleKind::constant, 0.5, 0),
                  std::invalid_argument);
}

TEST_CASE("family unions stack members and drop provenance") {
  const Partition p = Partition::uniform(0.0, 1.0, 2);
  const FunctionFamily src = fconv::trig_basis(p, 128, 4);

  SUBCASE("union with a bitwise copy doubles and annihilates") {
    const std::vector<double> sched(4, 0.0);
    const FunctionFamily copy =
        fconv::convolve_family(src, ConvolutionSide::right_null, sched);
    const FunctionFamily both = fconv::union_family(src, copy);
    REQUIRE(both.count() == 8);
    CHECK(!both.side.has_value());
    CHECK(both.schedule.empty());

    const auto eig = fconv::symmetric_eigenvalues(fconv::gram_matrix(both));
    for (int k = 0; k < 4; ++k) {
      CHECK(std::abs(eig[static_cast<std::size_t>(k)]) <= 1e-12);
      CHECK(std::abs(eig[static_cast<std::size_t>(k + 4)] - 2.0) <= 1e-12);
    }
  }

  SUBCASE("dyadic pullback resonance makes the union redundant") {
    // On two maps the pullback doubles every full-period frequency, so the
    // convolved constant and the convolved first cosine stay inside the
    // source span: the eight-member union has rank exactly six.
    const std::vector<double> sched(4, 0.2);
    const FunctionFamily conv =
        fconv::convolve_family(src, ConvolutionSide::right_null, sched);
    const FunctionFamily both = fconv::union_family(src, conv);
    const auto rb = fconv::riesz_bounds(both);
    CHECK(!rb.envelope_hi.has_value());

    const auto eig = fconv::symmetric_eigenvalues(fconv::gram_matrix(both));
    CHECK(std::abs(eig[0]) <= 1e-10);
    CHECK(std::abs(eig[1]) <= 1e-10);
    CHECK(eig[2] >= 1e-2);
  }

  SUBCASE("unions validate their inputs") {
    CHECK_THROWS_AS(fconv::union_family(src, FunctionFamily{}), std::invalid_argument);
    const FunctionFamily other = fconv::trig_basis(p, 64, 2);
    CHECK_THROWS_AS(fconv::union_family(src, other), std::invalid_argument);
  }
}
