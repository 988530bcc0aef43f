#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fconv/partition.hpp"

using fconv::AddressedPoint;
using fconv::AffineMapFamily;
using fconv::Partition;

TEST_CASE("uniform partition nodes are equally spaced and exact") {
  const Partition p = Partition::uniform(0.0, 3.0, 6);
  REQUIRE(p.subinterval_count() == 6);
  const std::vector<double> want{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  CHECK(p.nodes() == want);
  CHECK(p.lo() == 0.0);
  CHECK(p.hi() == 3.0);
  CHECK(p.length() == 3.0);
  CHECK(p.is_uniform());

  CHECK(Partition::uniform(0.0, 1.0, 2).nodes() == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(Partition::uniform(-1.0, 1.0, 4).nodes() ==
        std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
}

TEST_CASE("partition construction rejects bad node lists") {
  CHECK_THROWS_AS(Partition::uniform(0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(Partition::uniform(1.0, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(Partition::uniform(0.0, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(Partition({0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Partition({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);

  // a single subinterval is legal (the scale functions live on one)
  const Partition whole({0.0, 0.5});
  CHECK(whole.subinterval_count() == 1);
  CHECK(whole.locate(0.25) == 1);
  CHECK_THROWS_AS(Partition({0.0, 0.7, 0.4, 1.0}), std::invalid_argument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Partition({0.0, nan, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Partition::uniform(0.0, std::numeric_limits<double>::infinity(), 2),
                  std::invalid_argument);
}

TEST_CASE("locate uses half-open cells with a closed first cell") {
  const Partition p = Partition::uniform(0.0, 3.0, 6);
  CHECK(p.locate(0.0) == 1);
  CHECK(p.locate(0.5) == 1);  // node belongs to the cell to its left
  CHECK(p.locate(0.500001) == 2);
  CHECK(p.locate(3.0) == 6);
  CHECK_THROWS_AS(p.locate(-0.1), std::out_of_range);
  CHECK_THROWS_AS(p.locate(3.1), std::out_of_range);

  const Partition q({0.0, 0.25, 1.0});
  CHECK(q.locate(0.25) == 1);
  CHECK(q.locate(0.26) == 2);
}

TEST_CASE("affine maps contract the interval onto each cell") {
  const Partition p = Partition::uniform(0.0, 3.0, 6);
  const AffineMapFamily maps(p);
  for (int n = 1; n <= 6; ++n) CHECK(maps.slope(n) == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(maps.forward(1, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(maps.inverse(1, 0.5) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(maps.forward(4, 0.0) == doctest::Approx(1.5).epsilon(1e-15));

  const Partition q({0.0, 0.25, 1.0});
  const AffineMapFamily mq(q);
  CHECK(mq.slope(1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(mq.slope(2) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(mq.intercept(1) == doctest::Approx(0.0));
  CHECK(mq.intercept(2) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("affine map slopes sum to one and endpoints land on nodes") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> nodes{-2.0};
    const int cells = 2 + static_cast<int>(rng() % 7);
    for (int i = 0; i < cells - 1; ++i) nodes.push_back(-2.0 + 5.0 * unif(rng));
    nodes.push_back(3.0);
    std::sort(nodes.begin(), nodes.end());
    bool distinct = true;
    for (std::size_t i = 1; i < nodes.size(); ++i)
      if (nodes[i] - nodes[i - 1] < 1e-3) distinct = false;
    if (!distinct) continue;

    const Partition p(nodes);
    const AffineMapFamily maps(p);
    double total = 0.0;
    for (int n = 1; n <= p.subinterval_count(); ++n) {
      total += maps.slope(n);
      CHECK(maps.slope(n) < 1.0);
      CHECK(std::abs(maps.forward(n, p.lo()) - nodes[static_cast<std::size_t>(n - 1)]) <=
            1e-13 * p.length());
      CHECK(std::abs(maps.forward(n, p.hi()) - nodes[static_cast<std::size_t>(n)]) <=
            1e-13 * p.length());
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("forward and inverse round-trip across random points") {
  const Partition p({0.0, 0.3, 0.45, 1.7, 2.0});
  const AffineMapFamily maps(p);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(p.lo(), p.hi());
  for (int k = 0; k < 10000; ++k) {
    const double t = unif(rng);
    const int n = 1 + static_cast<int>(rng() % 4);
    const double x = maps.forward(n, t);
    CHECK(std::abs(maps.inverse(n, x) - t) <= 1e-12 * p.length());
  }
  // an interior image locates back to its own cell
  for (int n = 1; n <= 4; ++n) {
    const double t = 0.2 + 1.5 * (n / 5.0);
    CHECK(p.locate(maps.forward(n, t)) == n);
  }
}

TEST_CASE("inverse rejects points outside the target cell") {
  const Partition p = Partition::uniform(0.0, 3.0, 6);
  const AffineMapFamily maps(p);
  CHECK_THROWS_AS(maps.inverse(1, 0.7), std::domain_error);  // 0.7 lies in cell 2
  CHECK_THROWS_AS(maps.inverse(6, 0.0), std::domain_error);
  CHECK_NOTHROW(maps.inverse(2, 0.5));  // shared node belongs to both closures
}

TEST_CASE("address grid enumerates map compositions in base-fastest order") {
  const AffineMapFamily maps(Partition::uniform(0.0, 1.0, 2));

  SUBCASE("depth zero returns the base points unchanged") {
    const auto pts = fconv::address_grid(maps, 0, std::vector<double>{0.0, 1.0});
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].address.empty());
    CHECK(pts[0].point == 0.0);
    CHECK(pts[1].point == 1.0);
    CHECK(pts[0].base_index == 0);
    CHECK(pts[1].base_index == 1);
  }

  SUBCASE("depth one splits base points through both maps") {
    const auto pts = fconv::address_grid(maps, 1, std::vector<double>{0.0, 1.0});
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].point == doctest::Approx(0.0));
    CHECK(pts[1].point == doctest::Approx(0.5));
    CHECK(pts[2].point == doctest::Approx(0.5));
    CHECK(pts[3].point == doctest::Approx(1.0));
    CHECK(pts[0].address == std::vector<int>{1});
    CHECK(pts[2].address == std::vector<int>{2});
    CHECK(pts[1].base_index == 1);
    CHECK(pts[2].base_index == 0);
  }

  SUBCASE("depth two from a single point lists the quarter grid") {
    const auto pts = fconv::address_grid(maps, 2, std::vector<double>{0.0});
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].point == doctest::Approx(0.0));
    CHECK(pts[1].point == doctest::Approx(0.25));
    CHECK(pts[2].point == doctest::Approx(0.5));
    CHECK(pts[3].point == doctest::Approx(0.75));
    CHECK(pts[1].address == std::vector<int>{1, 2});
    CHECK(pts[3].address == std::vector<int>{2, 2});
  }
}

TEST_CASE("address grid honors its point cap") {
  const AffineMapFamily maps(Partition::uniform(0.0, 1.0, 2));
  const std::vector<double> base{0.0, 1.0};
  CHECK_NOTHROW(fconv::address_grid(maps, 3, base, 16));
  CHECK_THROWS_AS(fconv::address_grid(maps, 3, base, 15), std::length_error);
}

TEST_CASE("address grid points replay their address word") {
  const AffineMapFamily maps(Partition({0.0, 0.4, 1.0}));
  const auto pts = fconv::address_grid(maps, 3, std::vector<double>{0.3, 0.9});
  for (const AddressedPoint& ap : pts) {
    double t = ap.base_index == 0 ? 0.3 : 0.9;
    for (auto it = ap.address.rbegin(); it != ap.address.rend(); ++it) t = maps.forward(*it, t);
    CHECK(std::abs(t - ap.point) <= 1e-14);
  }
}
