#include "rgc/limit_theory.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <thread>

#include "rgc/geometry.hpp"
#include "rgc/homology.hpp"

namespace rgc::limits {

using std::numbers::pi;

double omega(int m) {
  if (m < 1) throw PreconditionError("omega needs m >= 1");
  return std::pow(pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

namespace {

void check_m3(int k, double lambda) {
  if (k < 1 || k > 3) throw UnsupportedError("closed forms exist for k = 1, 2, 3 only");
  if (!(lambda >= 0.0)) throw PreconditionError("lambda must be nonnegative");
}

double factorial(int k) { return std::tgamma(k + 1.0); }

// Neumaier compensated sum.
struct Accumulator {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Mean and batch-spread standard error of sample(rng) over n_mc draws.
// Batch b uses its own derived seed, so the result does not depend on the
// number of worker threads.
template <class Sample>
// `sample(rng, scratch)` gets a per-worker buffer of `scratch_size` doubles.
std::pair<double, double> monte_carlo(std::size_t n_mc, std::uint64_t seed, const MonteCarloOptions& opts,
                                      std::size_t scratch_size, Sample&& sample) {
  if (n_mc < 2) throw PreconditionError("need at least two Monte Carlo samples");
  const std::size_t batches = std::max<std::size_t>(2, std::min(opts.batches, n_mc / 2));
  std::vector<double> sums(batches, 0.0);
  std::vector<std::size_t> sizes(batches, n_mc / batches);
  for (std::size_t b = 0; b < n_mc % batches; ++b) ++sizes[b];
  auto run = [&](std::size_t first, std::size_t stride) {
    std::vector<double> scratch(scratch_size);
    for (std::size_t b = first; b < batches; b += stride) {
      sampling::Rng rng(sampling::derive_seed(seed, b));
      Accumulator acc;
      for (std::size_t i = 0; i < sizes[b]; ++i) acc.add(sample(rng, scratch.data()));
      sums[b] = acc.value();
    }
  };
  const unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(run, t, jobs);
    for (auto& th : pool) th.join();
  }
  Accumulator total;
  for (double s : sums) total.add(s);
  const double mean = total.value() / static_cast<double>(n_mc);
  double var = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    const double dev = sums[b] / static_cast<double>(sizes[b]) - mean;
    var += dev * dev;
  }
  var /= static_cast<double>(batches - 1);
  return {mean, std::sqrt(var / static_cast<double>(batches))};
}

void uniform_in_ball(sampling::Rng& rng, int m, double radius, double* out) {
  std::normal_distribution<double> gauss;
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int a = 0; a < m; ++a) {
      out[a] = gauss(rng);
      norm2 += out[a] * out[a];
    }
  } while (norm2 == 0.0);
  const double scale = radius * std::pow(sampling::uniform01(rng), 1.0 / m) / std::sqrt(norm2);
  for (int a = 0; a < m; ++a) out[a] *= scale;
}

// Circumradius of (0, y_1..y_k) when its centre lies in the open hull.
std::optional<double> crit_radius(const double* y, int k, int m, double tol) {
  std::array<double, (kMaxDim + 1) * kMaxDim> pts{};
  std::copy_n(y, static_cast<std::size_t>(k) * m, pts.begin() + m);
  const auto fit = geometry::fit_circumsphere(pts.data(), k + 1, m, tol);
  if (!fit) return std::nullopt;
  for (int i = 0; i <= k; ++i)
    if (!(fit->barycentric[i] > tol)) return std::nullopt;
  return fit->radius;
}

void check_config(int m, int k, int k_max) {
  if (m < 1 || m > kMaxDim) throw PreconditionError("m out of range");
  if (k < 1 || k > k_max) throw UnsupportedError("k outside the supported range for this constant");
}

}  // namespace

double gamma_closed_form_m3(int k, double lambda) {
  check_m3(k, lambda);
  const bool inf = std::isinf(lambda);
  const double e = inf ? 0.0 : std::exp(-4.0 * pi * lambda / 3.0);
  const double le = inf ? 0.0 : lambda * e;
  const double l2e = inf ? 0.0 : lambda * le;
  switch (k) {
    case 1:
      return 4.0 * (1.0 - e);
    case 2:
      return (1.0 + pi * pi / 16.0) * (3.0 - 3.0 * e - 4.0 * pi * le);
    default:
      return (pi * pi / 48.0) * (9.0 - 9.0 * e - 12.0 * pi * le - 8.0 * pi * pi * l2e);
  }
}

double gamma_rate_m3(int k, double lambda) {
  check_m3(k, lambda);
  if (std::isinf(lambda)) return 0.0;
  const double e = std::exp(-4.0 * pi * lambda / 3.0);
  switch (k) {
    case 1:
      return 16.0 * pi / 3.0 * e;
    case 2:
      return (16.0 + pi * pi) * (pi * pi / 3.0) * lambda * e;
    default:
      return 2.0 / 9.0 * std::pow(pi, 5) * lambda * lambda * e;
  }
}

std::vector<CurvePoint> euler_limit_curve_m3(const std::vector<double>& lambda_grid) {
  std::vector<CurvePoint> out;
  out.reserve(lambda_grid.size());
  for (double l : lambda_grid)
    out.push_back({l, 1.0 - gamma_closed_form_m3(1, l) + gamma_closed_form_m3(2, l) - gamma_closed_form_m3(3, l)});
  return out;
}

void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve) {
  os << "lambda,value\n" << std::setprecision(17);
  for (const auto& p : curve) os << p.lambda << ',' << p.value << '\n';
}

bool h_crit(const double* y, int k, int m, double radius, double tol) {
  const auto r = crit_radius(y, k, m, tol);
  return r && *r <= radius;
}

bool h_betti(const double* y, int k, int m) {
  // A k-cycle on k+2 vertices is the boundary of the full simplex, so every
  // edge must be present: all pairwise distances at most 2.
  std::array<double, (kMaxDim + 2) * kMaxDim> pts{};
  std::copy_n(y, static_cast<std::size_t>(k + 1) * m, pts.begin() + m);
  for (int i = 0; i < k + 2; ++i)
    for (int j = i + 1; j < k + 2; ++j) {
      double s = 0.0;
      for (int a = 0; a < m; ++a) {
        const double t = pts[i * m + a] - pts[j * m + a];
        s += t * t;
      }
      if (s > 4.0) return false;
    }
  return homology::is_nontrivial_k_cycle(pts.data(), k + 2, m, 1.0);
}

LimitConstants mu_c_estimate(int m, int k, std::size_t n_mc, std::uint64_t seed, double moment,
                             const MonteCarloOptions& options) {
  check_config(m, k, m);
  const double box = std::pow(omega(m) * std::pow(2.0, m), k);
  const auto size = static_cast<std::size_t>(k) * m;
  const auto [mean, se] = monte_carlo(n_mc, seed, options, size, [&](sampling::Rng& rng, double* y) {
    for (int i = 0; i < k; ++i) uniform_in_ball(rng, m, 2.0, y + i * m);
    return h_crit(y, k, m, 1.0) ? 1.0 : 0.0;
  });
  const double scale = box * moment / factorial(k + 1);
  return {"mu_c", m, k, 0.0, mean * scale, se * scale, Method::kMonteCarlo, n_mc, seed};
}

LimitConstants mu_b_estimate(int m, int k, std::size_t n_mc, std::uint64_t seed, double moment,
                             const MonteCarloOptions& options) {
  if (m < 2) throw UnsupportedError("mu_b needs 1 <= k <= m - 1, so m >= 2");
  check_config(m, k, m - 1);
  const double box = std::pow(omega(m) * std::pow(2.0, m), k + 1);
  const auto size = static_cast<std::size_t>(k + 1) * m;
  const auto [mean, se] = monte_carlo(n_mc, seed, options, size, [&](sampling::Rng& rng, double* y) {
    for (int i = 0; i <= k; ++i) uniform_in_ball(rng, m, 2.0, y + i * m);
    return h_betti(y, k, m) ? 1.0 : 0.0;
  });
  const double scale = box * moment / factorial(k + 2);
  return {"mu_b", m, k, 0.0, mean * scale, se * scale, Method::kMonteCarlo, n_mc, seed};
}

namespace {

// One draw of the rescaled integrand for x with density value f. The y_i
// are drawn with radial density proportional to exp(-b |u|^m), b =
// omega_m / (2^m k), truncated to |u|^m <= 2^m lambda f; since the
// circumradius is at least |u_i| / 2 the weight stays bounded.
double gamma_draw(sampling::Rng& rng, int m, int k, double lambda, double f, double* u) {
  const double w = omega(m);
  const double b = w / (std::pow(2.0, m) * k);
  const double limit = std::isinf(lambda) ? kInfinity : std::pow(2.0, m) * lambda * f;
  const double mass = std::isinf(limit) ? 1.0 : -std::expm1(-b * limit);
  std::normal_distribution<double> gauss;
  double log_q = 0.0;
  for (int i = 0; i < k; ++i) {
    const double t = -std::log1p(-sampling::uniform01(rng) * mass) / b;
    double* ui = u + i * m;
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int a = 0; a < m; ++a) {
        ui[a] = gauss(rng);
        norm2 += ui[a] * ui[a];
      }
    } while (norm2 == 0.0);
    const double scale = std::pow(t, 1.0 / m) / std::sqrt(norm2);
    for (int a = 0; a < m; ++a) ui[a] *= scale;
    log_q += std::log(b / (w * mass)) - b * t;
  }
  const auto radius = crit_radius(u, k, m, kDefaultTol);
  if (!radius) return 0.0;
  const double rm = std::pow(*radius, m);
  if (!std::isinf(lambda) && rm > lambda * f) return 0.0;
  return std::exp(-w * rm - log_q);
}

}  // namespace

LimitConstants gamma_numeric(int m, int k, double lambda, std::size_t n_mc, std::uint64_t seed, double f,
                             const MonteCarloOptions& options) {
  check_config(m, k, m);
  if (!(lambda >= 0.0)) throw PreconditionError("lambda must be nonnegative");
  if (!(f > 0.0)) throw PreconditionError("density value must be positive");
  LimitConstants out{"gamma", m, k, lambda, 0.0, 0.0, Method::kMonteCarlo, n_mc, seed};
  if (lambda == 0.0) return out;
  const auto [mean, se] =
      monte_carlo(n_mc, seed, options, static_cast<std::size_t>(k) * m,
                  [&](sampling::Rng& rng, double* u) { return gamma_draw(rng, m, k, lambda, f, u); });
  out.value = mean / factorial(k + 1);
  out.standard_error = se / factorial(k + 1);
  return out;
}

LimitConstants gamma_numeric(const ManifoldSpec& spec, const sampling::DensitySpec& density, int k, double lambda,
                             std::size_t n_mc, std::uint64_t seed, const MonteCarloOptions& options) {
  spec.validate();
  density.validate();
  const int m = spec.intrinsic_dim;
  check_config(m, k, m);
  if (!(lambda >= 0.0)) throw PreconditionError("lambda must be nonnegative");
  if (density.kind == sampling::DensitySpec::Kind::kUniform)
    return gamma_numeric(m, k, lambda, n_mc, seed, density.f_max, options);
  LimitConstants out{"gamma", m, k, lambda, 0.0, 0.0, Method::kMonteCarlo, n_mc, seed};
  if (lambda == 0.0) return out;
  const auto size = static_cast<std::size_t>(k) * m;
  const int d = spec.ambient_dim;
  const auto [mean, se] = monte_carlo(n_mc, seed, options, size + d, [&](sampling::Rng& rng, double* u) {
    // x ~ f by rejection from the uniform measure.
    double* x = u + size;
    double fx;
    do {
      sampling::uniform_point(spec, rng, x);
      fx = density(std::span<const double>(x, static_cast<std::size_t>(d)));
    } while (sampling::uniform01(rng) * density.f_max >= fx);
    return gamma_draw(rng, m, k, lambda, fx, u);
  });
  out.value = mean / factorial(k + 1);
  out.standard_error = se / factorial(k + 1);
  return out;
}

std::string method_name(Method method) { return method == Method::kClosedForm ? "closed_form" : "monte_carlo"; }

void write_constants_csv(std::ostream& os, const std::vector<LimitConstants>& rows) {
  os << "name,m,k,lambda,value,stderr,method,n_mc,seed\n" << std::setprecision(17);
  for (const auto& c : rows)
    os << c.name << ',' << c.m << ',' << c.k << ',' << c.lambda << ',' << c.value << ',' << c.standard_error << ','
       << method_name(c.method) << ',' << c.n_mc << ',' << c.seed << '\n';
}

}  // namespace rgc::limits
