#include <doctest.h>

#include <cmath>
#include <random>

#include "rgc/geometry.hpp"
#include "rgc/sampling.hpp"

using namespace rgc;
using namespace rgc::sampling;

namespace {

PointCloud draw(const ManifoldSpec& spec, SampleMode mode, std::uint64_t seed) {
  return sample(spec, DensitySpec::uniform(spec), mode, seed);
}

}  // namespace

TEST_CASE("binomial sample on the unit square torus") {
  const auto spec = ManifoldSpec::flat_torus(2, 1.0);
  const auto a = draw(spec, SampleMode::binomial(100), 7);
  CHECK(a.size() == 100);
  for (double x : a.coords) CHECK((x >= 0.0 && x < 1.0));
  const auto b = draw(spec, SampleMode::binomial(100), 7);
  CHECK(a.coords == b.coords);
  CHECK(draw(spec, SampleMode::binomial(100), 8).coords != a.coords);
}

TEST_CASE("poisson counts have the right mean") {
  const auto spec = ManifoldSpec::flat_torus(2, 1.0);
  double total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) total += draw(spec, SampleMode::poisson(1000), seed).size();
  CHECK(std::abs(total / 200 - 1000) <= 3 * std::sqrt(1000.0 / 200));
}

TEST_CASE("uniform sphere is centred") {
  const auto cloud = draw(ManifoldSpec::sphere2(1.0), SampleMode::binomial(10000), 3);
  double z = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) z += cloud.point(i)[2];
  CHECK(std::abs(z / 10000) <= 4 / std::sqrt(1e4));
}

TEST_CASE("samples lie on their manifolds") {
  for (const auto& spec : {ManifoldSpec::circle(1.5), ManifoldSpec::sphere2(2.0), ManifoldSpec::embedded_torus(2, 1)}) {
    const auto cloud = draw(spec, SampleMode::binomial(500), 1);
    for (std::size_t i = 0; i < cloud.size(); ++i) CHECK(spec.constraint_residual(cloud.point(i).data()) < 1e-9);
  }
}

TEST_CASE("chi-square fit on a 4x4 partition") {
  const auto spec = ManifoldSpec::flat_torus(2, 1.0);
  // 99th percentile of chi-square with 15 degrees of freedom
  const double critical = 30.578;
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto cloud = draw(spec, SampleMode::binomial(800), 1000 + seed);
    std::vector<double> cells(16, 0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto p = cloud.point(i);
      cells[static_cast<int>(p[0] * 4) * 4 + static_cast<int>(p[1] * 4)] += 1;
    }
    double chi = 0;
    for (double c : cells) chi += (c - 50) * (c - 50) / 50;
    failures += chi > critical;
  }
  CHECK(failures <= 3);
}

TEST_CASE("embedded torus sampling matches the area element") {
  // Area weight is proportional to R + r cos(theta), so E[cos theta] = r / (2R).
  const auto spec = ManifoldSpec::embedded_torus(2.0, 1.0);
  const auto cloud = draw(spec, SampleMode::binomial(40000), 5);
  double mean = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    mean += (std::hypot(p[0], p[1]) - 2.0) / 1.0;
  }
  mean /= 40000;
  CHECK(std::abs(mean - 0.25) < 4 * std::sqrt(0.5 / 40000));
}

TEST_CASE("custom density by rejection") {
  const auto spec = ManifoldSpec::flat_torus(2, 1.0);
  // f(x, y) = 0.5 + x integrates to 1 with range [0.5, 1.5].
  const auto dens = DensitySpec::custom("ramp", [](std::span<const double> p) { return 0.5 + p[0]; }, 0.5, 1.5);
  const auto cloud = sample(spec, dens, SampleMode::binomial(20000), 2);
  std::vector<double> bins(4, 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) bins[static_cast<int>(cloud.point(i)[0] * 4)] += 1;
  for (int b = 0; b < 4; ++b) {
    const double lo = b / 4.0, hi = (b + 1) / 4.0;
    const double p = 0.5 * (hi - lo) + 0.5 * (hi * hi - lo * lo);
    CHECK(std::abs(bins[b] / 20000 - p) <= 3 * std::sqrt(p * (1 - p) / 20000));
  }
  const auto integral = density_integral(spec, dens, 100000, 4);
  CHECK(std::abs(integral.value - 1.0) <= 3 * integral.standard_error + 1e-12);
}

TEST_CASE("badly scaled custom density stalls") {
  const auto spec = ManifoldSpec::flat_torus(2, 1.0);
  const auto dens = DensitySpec::custom("spike", [](std::span<const double>) { return 1e-6; }, 1e-6, 1e3);
  CHECK_THROWS_AS(sample(spec, dens, SampleMode::binomial(10), 1), RejectionStallError);
}

TEST_CASE("coverage nets") {
  const auto grid = coverage_net(ManifoldSpec::flat_torus(1, 1.0), 0.1);
  CHECK(grid.size() == 10);
  const auto circle = coverage_net(ManifoldSpec::circle(1.0), 0.01);
  CHECK(circle.size() == static_cast<std::size_t>(std::ceil(2 * M_PI / 0.01)));

  std::mt19937_64 rng(9);
  for (const auto& [spec, eps] : std::vector<std::pair<ManifoldSpec, double>>{
           {ManifoldSpec::sphere2(1.0), 0.2},
           {ManifoldSpec::flat_torus(2, 1.0), 0.1},
           {ManifoldSpec::flat_torus(3, 1.0), 0.2},
           {ManifoldSpec::embedded_torus(2, 1), 0.3},
           {ManifoldSpec::circle(1.0), 0.05}}) {
    const auto net = PointCloud::from_points(spec, coverage_net(spec, eps));
    std::vector<double> x(spec.ambient_dim);
    double worst = 0;
    for (int t = 0; t < 10000; ++t) {
      uniform_point(spec, rng, x.data());
      worst = std::max(worst, geometry::distance_to_set(x, net));
    }
    CHECK(worst <= eps);
  }
}

TEST_CASE("density power integral") {
  const auto spec = ManifoldSpec::sphere2(1.0);
  const auto v = density_power_integral(spec, DensitySpec::uniform(spec), 3, 0, 0);
  CHECK(v.value == doctest::Approx(std::pow(4 * M_PI, -2.0)));
}
