#pragma once

// Binomial and Poisson point processes on the supported manifolds, plus
// deterministic epsilon-nets used by the coverage probe.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgc/manifold.hpp"

namespace rgc::sampling {

using Rng = std::mt19937_64;

class RejectionStallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DensitySpec {
  enum class Kind { kUniform, kCustom };

  Kind kind = Kind::kUniform;
  double f_min = 0.0;
  double f_max = 0.0;
  std::function<double(std::span<const double>)> evaluator;  // custom only
  std::string label = "uniform";

  static DensitySpec uniform(const ManifoldSpec& spec);
  // f must be a probability density on the manifold with f_min <= f <= f_max.
  static DensitySpec custom(std::string label, std::function<double(std::span<const double>)> f,
                            double f_min, double f_max);

  double operator()(std::span<const double> x) const;
  void validate() const;
};

// splitmix64 finaliser; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Uniform double in [0, 1).
double uniform01(Rng& rng);

// Draws one point from the uniform (normalised volume) measure on the manifold.
void uniform_point(const ManifoldSpec& spec, Rng& rng, double* out);

// Poisson mode draws the count from Poisson(n); binomial mode uses exactly n.
// Custom densities are sampled by rejection against the uniform measure with
// envelope f_max. Throws RejectionStallError when fewer than one in 10^4
// proposals is accepted.
PointCloud sample(const ManifoldSpec& spec, const DensitySpec& density, SampleMode mode,
                  std::uint64_t seed);

// Deterministic eps-net: every point of the manifold lies within eps of some
// net point. Grid in intrinsic coordinates with spacing at most eps/sqrt(m).
std::vector<Point> coverage_net(const ManifoldSpec& spec, double eps);

// Monte Carlo estimate of the integral of f over the manifold (should be 1).
struct IntegralEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};
IntegralEstimate density_integral(const ManifoldSpec& spec, const DensitySpec& density,
                                  std::size_t n_mc, std::uint64_t seed);

// Integral of f^power over the manifold: closed form for uniform densities
// (volume^(1 - power)), Monte Carlo otherwise.
IntegralEstimate density_power_integral(const ManifoldSpec& spec, const DensitySpec& density,
                                        double power, std::size_t n_mc, std::uint64_t seed);

}  // namespace rgc::sampling
