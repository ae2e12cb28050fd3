#include "rgc/sampling.hpp"

#include <cmath>
#include <numbers>

namespace rgc::sampling {

using std::numbers::pi;

DensitySpec DensitySpec::uniform(const ManifoldSpec& spec) {
  DensitySpec d;
  d.kind = Kind::kUniform;
  d.f_min = d.f_max = 1.0 / spec.volume();
  d.label = "uniform";
  return d;
}

DensitySpec DensitySpec::custom(std::string label, std::function<double(std::span<const double>)> f,
                                double f_min, double f_max) {
  DensitySpec d;
  d.kind = Kind::kCustom;
  d.evaluator = std::move(f);
  d.f_min = f_min;
  d.f_max = f_max;
  d.label = std::move(label);
  d.validate();
  return d;
}

double DensitySpec::operator()(std::span<const double> x) const {
  return kind == Kind::kUniform ? f_max : evaluator(x);
}

void DensitySpec::validate() const {
  if (!(f_min > 0.0)) throw PreconditionError("density needs f_min > 0");
  if (!(f_max >= f_min) || !std::isfinite(f_max)) throw PreconditionError("density needs finite f_max >= f_min");
  if (kind == Kind::kCustom && !evaluator) throw PreconditionError("custom density without evaluator");
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

double uniform01(Rng& rng) {
  // 53 random bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void uniform_point(const ManifoldSpec& spec, Rng& rng, double* out) {
  switch (spec.kind) {
    case ManifoldKind::kFlatTorus:
      for (int a = 0; a < spec.ambient_dim; ++a) out[a] = uniform01(rng) * spec.side;
      return;
    case ManifoldKind::kCircle: {
      const double t = 2.0 * pi * uniform01(rng);
      out[0] = spec.radius * std::cos(t);
      out[1] = spec.radius * std::sin(t);
      return;
    }
    case ManifoldKind::kSphere2: {
      // Archimedes: z is uniform on [-R, R] for the uniform surface measure.
      const double z = spec.radius * (2.0 * uniform01(rng) - 1.0);
      const double phi = 2.0 * pi * uniform01(rng);
      const double rho = std::sqrt(std::max(0.0, spec.radius * spec.radius - z * z));
      out[0] = rho * std::cos(phi);
      out[1] = rho * std::sin(phi);
      out[2] = z;
      return;
    }
    case ManifoldKind::kEmbeddedTorus: {
      // The area element is proportional to (R + r cos(theta)); thin the tube
      // angle accordingly.
      double theta;
      do {
        theta = 2.0 * pi * uniform01(rng);
      } while (uniform01(rng) * (spec.major + spec.minor) > spec.major + spec.minor * std::cos(theta));
      const double phi = 2.0 * pi * uniform01(rng);
      const double ring = spec.major + spec.minor * std::cos(theta);
      out[0] = ring * std::cos(phi);
      out[1] = ring * std::sin(phi);
      out[2] = spec.minor * std::sin(theta);
      return;
    }
    case ManifoldKind::kEuclidean:
      break;
  }
  throw PreconditionError("cannot sample from unbounded Euclidean space");
}

PointCloud sample(const ManifoldSpec& spec, const DensitySpec& density, SampleMode mode,
                  std::uint64_t seed) {
  spec.validate();
  density.validate();
  if (spec.kind == ManifoldKind::kEuclidean) throw PreconditionError("cannot sample from Euclidean space");

  Rng rng(seed);
  std::size_t count = mode.n;
  if (mode.kind == SampleKind::kPoisson) {
    std::poisson_distribution<long long> pois(static_cast<double>(mode.n));
    count = mode.n == 0 ? 0 : static_cast<std::size_t>(pois(rng));
  }

  PointCloud cloud;
  cloud.spec = spec;
  cloud.seed = seed;
  cloud.mode = mode;
  cloud.density = density.label;
  const int d = spec.ambient_dim;
  cloud.coords.resize(count * static_cast<std::size_t>(d));

  constexpr std::uint64_t kCheckEvery = 100000;
  std::uint64_t attempts = 0, accepted = 0;
  for (std::size_t i = 0; i < count; ++i) {
    double* x = cloud.coords.data() + i * d;
    if (density.kind == DensitySpec::Kind::kUniform) {
      uniform_point(spec, rng, x);
      continue;
    }
    for (;;) {
      uniform_point(spec, rng, x);
      ++attempts;
      const double u = uniform01(rng);
      if (u * density.f_max < density({x, static_cast<std::size_t>(d)})) {
        ++accepted;
        break;
      }
      if (attempts % kCheckEvery == 0 && static_cast<double>(accepted) < 1e-4 * static_cast<double>(attempts))
        throw RejectionStallError("rejection sampler acceptance rate below 1e-4; check the density scaling");
    }
  }
  return cloud;
}

namespace {

std::vector<Point> flat_torus_net(const ManifoldSpec& spec, double eps) {
  const int m = spec.intrinsic_dim;
  const auto per_axis = static_cast<std::size_t>(std::ceil(spec.side * std::sqrt(static_cast<double>(m)) / eps - 1e-12));
  const double h = spec.side / static_cast<double>(per_axis);
  std::size_t total = 1;
  for (int a = 0; a < m; ++a) total *= per_axis;
  std::vector<Point> net;
  net.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    Point p(m);
    std::size_t rest = code;
    for (int a = 0; a < m; ++a) {
      p[a] = static_cast<double>(rest % per_axis) * h;
      rest /= per_axis;
    }
    net.push_back(std::move(p));
  }
  return net;
}

std::size_t steps_for(double length, double spacing) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / spacing - 1e-12)));
}

}  // namespace

std::vector<Point> coverage_net(const ManifoldSpec& spec, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("coverage_net needs eps > 0");
  const double h = eps / std::sqrt(static_cast<double>(spec.intrinsic_dim));
  std::vector<Point> net;
  switch (spec.kind) {
    case ManifoldKind::kFlatTorus:
      return flat_torus_net(spec, eps);
    case ManifoldKind::kCircle: {
      const std::size_t count = steps_for(2.0 * pi * spec.radius, h);
      for (std::size_t i = 0; i < count; ++i) {
        const double t = 2.0 * pi * static_cast<double>(i) / static_cast<double>(count);
        net.push_back({spec.radius * std::cos(t), spec.radius * std::sin(t)});
      }
      return net;
    }
    case ManifoldKind::kSphere2: {
      // Rings at polar angles (i + 1/2) * dphi. Each ring covers its band;
      // longitude spacing uses the widest parallel within the band.
      const std::size_t rings = steps_for(pi * spec.radius, h);
      const double dphi = pi / static_cast<double>(rings);
      for (std::size_t i = 0; i < rings; ++i) {
        const double polar = (static_cast<double>(i) + 0.5) * dphi;
        const double lo = polar - 0.5 * dphi, hi = polar + 0.5 * dphi;
        const double widest = (lo <= pi / 2 && hi >= pi / 2) ? 1.0 : std::max(std::sin(lo), std::sin(hi));
        const std::size_t count = steps_for(2.0 * pi * spec.radius * widest, h);
        for (std::size_t j = 0; j < count; ++j) {
          const double az = 2.0 * pi * static_cast<double>(j) / static_cast<double>(count);
          net.push_back({spec.radius * std::sin(polar) * std::cos(az),
                         spec.radius * std::sin(polar) * std::sin(az), spec.radius * std::cos(polar)});
        }
      }
      return net;
    }
    case ManifoldKind::kEmbeddedTorus: {
      const std::size_t tube = steps_for(2.0 * pi * spec.minor, h);
      const std::size_t around = steps_for(2.0 * pi * (spec.major + spec.minor), h);
      for (std::size_t i = 0; i < tube; ++i) {
        const double theta = 2.0 * pi * static_cast<double>(i) / static_cast<double>(tube);
        const double ring = spec.major + spec.minor * std::cos(theta);
        for (std::size_t j = 0; j < around; ++j) {
          const double phi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(around);
          net.push_back({ring * std::cos(phi), ring * std::sin(phi), spec.minor * std::sin(theta)});
        }
      }
      return net;
    }
    case ManifoldKind::kEuclidean:
      break;
  }
  throw PreconditionError("no coverage net for Euclidean space");
}

IntegralEstimate density_integral(const ManifoldSpec& spec, const DensitySpec& density,
                                  std::size_t n_mc, std::uint64_t seed) {
  return density_power_integral(spec, density, 1.0, n_mc, seed);
}

IntegralEstimate density_power_integral(const ManifoldSpec& spec, const DensitySpec& density,
                                        double power, std::size_t n_mc, std::uint64_t seed) {
  const double vol = spec.volume();
  if (density.kind == DensitySpec::Kind::kUniform) return {std::pow(vol, 1.0 - power), 0.0};
  if (n_mc < 2) throw PreconditionError("need at least two Monte Carlo samples");
  Rng rng(seed);
  std::vector<double> x(spec.ambient_dim);
  // Welford running mean and variance of vol * f(x)^power for x uniform.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n_mc; ++i) {
    uniform_point(spec, rng, x.data());
    const double v = vol * std::pow(density(x), power);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(n_mc - 1);
  return {mean, std::sqrt(var / static_cast<double>(n_mc))};
}

}  // namespace rgc::sampling
