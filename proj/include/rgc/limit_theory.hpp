#pragma once

// Limit constants for critical-point and Betti counts: closed forms for the
// uniform density in dimension 3 and Monte Carlo evaluation of the limiting
// integrals in general.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgc/manifold.hpp"
#include "rgc/sampling.hpp"

namespace rgc::limits {

class UnsupportedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Volume of the unit ball in R^m.
double omega(int m);

// gamma_k(lambda) for m = 3 and uniform density; lambda may be kInfinity.
double gamma_closed_form_m3(int k, double lambda);
// d gamma_k / d lambda for m = 3.
double gamma_rate_m3(int k, double lambda);

struct CurvePoint {
  double lambda = 0.0;
  double value = 0.0;
};

// 1 - gamma_1 + gamma_2 - gamma_3 on the grid.
std::vector<CurvePoint> euler_limit_curve_m3(const std::vector<double>& lambda_grid);
void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve);

enum class Method { kClosedForm, kMonteCarlo };

struct LimitConstants {
  std::string name;  // "gamma", "mu_c", "mu_b"
  int m = 0;
  int k = 0;
  double lambda = 0.0;
  double value = 0.0;
  double standard_error = 0.0;
  Method method = Method::kClosedForm;
  std::size_t n_mc = 0;
  std::uint64_t seed = 0;
};

struct MonteCarloOptions {
  std::size_t batches = 100;  // standard error from the spread of batch means
  unsigned jobs = 1;
};

// Indicator that (0, y_1..y_k) in R^m generates a critical point (CP1) with
// circumradius <= radius. y is row-major k x m.
bool h_crit(const double* y, int k, int m, double radius, double tol = kDefaultTol);
// Indicator that the Čech complex at radius 1 of (0, y_1..y_{k+1}) has
// beta_k = 1.
bool h_betti(const double* y, int k, int m);

// mu_k^c = 1/(k+1)! * (integral of f^{k+1}) * integral of h_crit over
// (R^m)^k with radius 1. `moment` is the integral of f^{k+1}.
LimitConstants mu_c_estimate(int m, int k, std::size_t n_mc, std::uint64_t seed, double moment = 1.0,
                             const MonteCarloOptions& options = {});
// mu_k^b = 1/(k+2)! * (integral of f^{k+2}) * integral of h_betti over
// (R^m)^{k+1}. Needs 1 <= k <= m-1.
LimitConstants mu_b_estimate(int m, int k, std::size_t n_mc, std::uint64_t seed, double moment = 1.0,
                             const MonteCarloOptions& options = {});

// gamma_k(lambda) for a uniform density of value f (1 on a unit-volume
// manifold). lambda may be kInfinity.
LimitConstants gamma_numeric(int m, int k, double lambda, std::size_t n_mc, std::uint64_t seed, double f = 1.0,
                             const MonteCarloOptions& options = {});
// Same with x drawn from a density on a manifold of intrinsic dimension m.
LimitConstants gamma_numeric(const ManifoldSpec& spec, const sampling::DensitySpec& density, int k, double lambda,
                             std::size_t n_mc, std::uint64_t seed, const MonteCarloOptions& options = {});

std::string method_name(Method method);
// Header line plus one row per constant: m,k,lambda,value,stderr,method,n_mc,seed.
void write_constants_csv(std::ostream& os, const std::vector<LimitConstants>& rows);

}  // namespace rgc::limits
