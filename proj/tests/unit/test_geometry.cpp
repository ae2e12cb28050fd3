#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rgc/geometry.hpp"

using namespace rgc;
using namespace rgc::geometry;

TEST_CASE("circumsphere examples") {
  const std::vector<Point> pair{{0, 0}, {1, 0}};
  const auto s = circumsphere(pair);
  CHECK(s.center[0] == doctest::Approx(0.5));
  CHECK(s.center[1] == doctest::Approx(0.0));
  CHECK(s.radius == doctest::Approx(0.5));

  const std::vector<Point> tri{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
  const auto t = circumsphere(tri);
  CHECK(t.radius == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(t.center[0] == doctest::Approx(0.5));
  CHECK(t.center[1] == doctest::Approx(std::sqrt(3.0) / 6));

  const std::vector<Point> line{{0, 0}, {1, 0}, {2, 0}};
  CHECK_THROWS_AS(circumsphere(line), DegenerateError);
}

TEST_CASE("circumsphere of a lower-dimensional simplex lies in its affine hull") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 4;
    const int k = 1 + trial % d;
    std::vector<Point> pts(k + 1, Point(d));
    for (auto& p : pts)
      for (auto& x : p) x = g(rng);
    const auto s = circumsphere(pts);
    for (const auto& p : pts) {
      double dist = 0;
      for (int a = 0; a < d; ++a) dist += (p[a] - s.center[a]) * (p[a] - s.center[a]);
      CHECK(std::abs(std::sqrt(dist) - s.radius) <= kDefaultTol * (1 + s.radius));
    }
    // centre - p0 is in the span of the difference vectors
    Eigen::MatrixXd diff(d, k);
    for (int j = 0; j < k; ++j)
      for (int a = 0; a < d; ++a) diff(a, j) = pts[j + 1][a] - pts[0][a];
    Eigen::VectorXd c(d);
    for (int a = 0; a < d; ++a) c(a) = s.center[a] - pts[0][a];
    const Eigen::VectorXd coef = diff.colPivHouseholderQr().solve(c);
    CHECK((diff * coef - c).norm() <= 1e-9 * (1 + c.norm()));
  }
}

TEST_CASE("open convex hull examples") {
  const std::vector<Point> tri{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
  CHECK(in_open_convex_hull(circumsphere(tri).center, tri));
  const std::vector<Point> obtuse{{0, 0}, {4, 0}, {0.2, 0.6}};
  CHECK_FALSE(in_open_convex_hull(circumsphere(obtuse).center, obtuse));
  const std::vector<Point> pair{{0, 0}, {1, 0}};
  CHECK(in_open_convex_hull({0.5, 0}, pair));
  CHECK_THROWS_AS(in_open_convex_hull({1, 0}, std::vector<Point>{{0, 0}, {1, 0}, {2, 0}}), DegenerateError);
}

TEST_CASE("open convex hull membership is invariant under rigid motions") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 3;
    const int k = 1 + trial % 3;
    std::vector<Point> pts(k + 1, Point(d));
    for (auto& p : pts)
      for (auto& x : p) x = g(rng);
    const auto s = circumsphere(pts);
    const bool before = in_open_convex_hull(s.center, pts);

    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = g(rng);
    const Eigen::MatrixXd q = a.householderQr().householderQ();
    Eigen::VectorXd shift(d);
    for (int i = 0; i < d; ++i) shift(i) = 10 * g(rng);
    auto move = [&](const Point& p) {
      const Eigen::VectorXd v = q * Eigen::Map<const Eigen::VectorXd>(p.data(), d) + shift;
      return Point(v.data(), v.data() + d);
    };
    std::vector<Point> moved;
    for (const auto& p : pts) moved.push_back(move(p));
    CHECK(in_open_convex_hull(move(s.center), moved) == before);
  }
}

TEST_CASE("min enclosing ball examples") {
  CHECK(min_enclosing_ball(std::vector<Point>{{3, 4}}).radius == 0.0);
  const auto b = min_enclosing_ball(std::vector<Point>{{0, 0}, {2, 0}});
  CHECK(b.center[0] == doctest::Approx(1.0));
  CHECK(b.center[1] == doctest::Approx(0.0));
  CHECK(b.radius == doctest::Approx(1.0));
  const std::vector<Point> tri{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
  CHECK(min_enclosing_ball(tri).radius == doctest::Approx(circumsphere(tri).radius).epsilon(1e-12));
}

TEST_CASE("min enclosing ball against circumsphere and containment") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 3;
    const int count = 2 + trial % d;
    std::vector<Point> pts(count, Point(d));
    for (auto& p : pts)
      for (auto& x : p) x = g(rng);
    const auto ball = min_enclosing_ball(pts);
    const auto shuffled = min_enclosing_ball(pts, kDefaultTol, 99);
    CHECK(shuffled.radius == doctest::Approx(ball.radius).epsilon(1e-9));
    for (const auto& p : pts) {
      double dist = 0;
      for (int a = 0; a < d; ++a) dist += (p[a] - ball.center[a]) * (p[a] - ball.center[a]);
      CHECK(std::sqrt(dist) <= ball.radius * (1 + 1e-9) + 1e-12);
    }
    const auto s = circumsphere(pts);
    CHECK(ball.radius <= s.radius * (1 + 1e-9));
    if (in_open_convex_hull(s.center, pts)) CHECK(ball.radius == doctest::Approx(s.radius).epsilon(1e-9));
  }
}

TEST_CASE("distance_to_set examples") {
  const auto cloud = PointCloud::euclidean({{0, 0}, {10, 0}});
  CHECK(distance_to_set(std::vector<double>{4, 0}, cloud) == doctest::Approx(4.0));
  CHECK(distance_to_set(std::vector<double>{10, 0}, cloud) == 0.0);
  const auto torus = PointCloud::from_points(ManifoldSpec::flat_torus(2, 1.0), {{0.05, 0.05}});
  CHECK(distance_to_set(std::vector<double>{0.95, 0.95}, torus) == doctest::Approx(std::sqrt(0.02)));
}

TEST_CASE("distance_to_set is antitone in the cloud") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  const auto spec = ManifoldSpec::flat_torus(2, 1.0);
  const auto big = oracle::uniform_cloud(spec, 60, 8);
  PointCloud small = PointCloud::from_points(spec, {});
  for (std::size_t i = 0; i < 20; ++i) small.push_back(big.point(i));
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> x{u(rng), u(rng)};
    CHECK(distance_to_set(x, big) <= distance_to_set(x, small));
  }
}
