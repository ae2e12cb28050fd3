#include "rgc/manifold.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rgc {

double Metric::wrap(double delta) const {
  return periodic() ? delta - period * std::nearbyint(delta / period) : delta;
}

void Metric::delta(const double* from, const double* to, double* out, int dim) const {
  for (int a = 0; a < dim; ++a) out[a] = wrap(to[a] - from[a]);
}

double Metric::sq_distance(const double* a, const double* b, int dim) const {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = wrap(b[i] - a[i]);
    s += d * d;
  }
  return s;
}

double Metric::distance(const double* a, const double* b, int dim) const {
  return std::sqrt(sq_distance(a, b, dim));
}

ManifoldSpec ManifoldSpec::flat_torus(int m, double side) {
  ManifoldSpec s;
  s.kind = ManifoldKind::kFlatTorus;
  s.intrinsic_dim = m;
  s.ambient_dim = m;
  s.side = side;
  s.validate();
  return s;
}

ManifoldSpec ManifoldSpec::circle(double radius) {
  ManifoldSpec s;
  s.kind = ManifoldKind::kCircle;
  s.intrinsic_dim = 1;
  s.ambient_dim = 2;
  s.radius = radius;
  s.validate();
  return s;
}

ManifoldSpec ManifoldSpec::sphere2(double radius) {
  ManifoldSpec s;
  s.kind = ManifoldKind::kSphere2;
  s.intrinsic_dim = 2;
  s.ambient_dim = 3;
  s.radius = radius;
  s.validate();
  return s;
}

ManifoldSpec ManifoldSpec::embedded_torus(double major, double minor) {
  ManifoldSpec s;
  s.kind = ManifoldKind::kEmbeddedTorus;
  s.intrinsic_dim = 2;
  s.ambient_dim = 3;
  s.major = major;
  s.minor = minor;
  s.validate();
  return s;
}

ManifoldSpec euclidean_space(int d) {
  ManifoldSpec s;
  s.kind = ManifoldKind::kEuclidean;
  s.intrinsic_dim = d;
  s.ambient_dim = d;
  s.validate();
  return s;
}

void ManifoldSpec::validate() const {
  if (ambient_dim < 1 || ambient_dim > kMaxDim)
    throw PreconditionError("ambient dimension must be in [1, 8]");
  switch (kind) {
    case ManifoldKind::kFlatTorus:
      if (intrinsic_dim != ambient_dim) throw PreconditionError("flat torus has m = d");
      if (!(side > 0.0)) throw PreconditionError("flat torus side must be positive");
      break;
    case ManifoldKind::kCircle:
    case ManifoldKind::kSphere2:
      if (!(radius > 0.0)) throw PreconditionError("radius must be positive");
      break;
    case ManifoldKind::kEmbeddedTorus:
      if (!(minor > 0.0) || !(major > minor))
        throw PreconditionError("embedded torus needs major > minor > 0");
      break;
    case ManifoldKind::kEuclidean:
      break;
  }
}

double ManifoldSpec::volume() const {
  using std::numbers::pi;
  switch (kind) {
    case ManifoldKind::kFlatTorus: return std::pow(side, intrinsic_dim);
    case ManifoldKind::kCircle: return 2.0 * pi * radius;
    case ManifoldKind::kSphere2: return 4.0 * pi * radius * radius;
    case ManifoldKind::kEmbeddedTorus: return 4.0 * pi * pi * major * minor;
    case ManifoldKind::kEuclidean: break;
  }
  throw PreconditionError("Euclidean space has no finite volume");
}

MetricConvention ManifoldSpec::metric_convention() const {
  return kind == ManifoldKind::kFlatTorus ? MetricConvention::kPeriodic : MetricConvention::kEuclidean;
}

Metric ManifoldSpec::metric() const {
  return Metric{kind == ManifoldKind::kFlatTorus ? side : 0.0};
}

double ManifoldSpec::constraint_residual(const double* x) const {
  switch (kind) {
    case ManifoldKind::kFlatTorus: {
      double worst = 0.0;
      for (int a = 0; a < ambient_dim; ++a) {
        if (x[a] < 0.0) worst = std::max(worst, -x[a]);
        if (x[a] >= side) worst = std::max(worst, x[a] - side);
      }
      return worst;
    }
    case ManifoldKind::kCircle: return std::abs(std::hypot(x[0], x[1]) - radius);
    case ManifoldKind::kSphere2: return std::abs(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) - radius);
    case ManifoldKind::kEmbeddedTorus: {
      const double ring = std::hypot(x[0], x[1]) - major;
      return std::abs(std::hypot(ring, x[2]) - minor);
    }
    case ManifoldKind::kEuclidean: return 0.0;
  }
  return 0.0;
}

std::vector<int> ManifoldSpec::betti() const {
  switch (kind) {
    case ManifoldKind::kFlatTorus: {
      std::vector<int> b(intrinsic_dim + 1, 1);
      for (int k = 1; k < intrinsic_dim; ++k) b[k] = b[k - 1] * (intrinsic_dim - k + 1) / k;
      return b;
    }
    case ManifoldKind::kCircle: return {1, 1};
    case ManifoldKind::kSphere2: return {1, 0, 1};
    case ManifoldKind::kEmbeddedTorus: return {1, 2, 1};
    case ManifoldKind::kEuclidean: break;
  }
  throw PreconditionError("no reference Betti numbers for Euclidean space");
}

std::string ManifoldSpec::kind_name() const {
  switch (kind) {
    case ManifoldKind::kFlatTorus: return "flat_torus";
    case ManifoldKind::kCircle: return "circle";
    case ManifoldKind::kSphere2: return "sphere2";
    case ManifoldKind::kEmbeddedTorus: return "embedded_torus";
    case ManifoldKind::kEuclidean: return "euclidean";
  }
  return "unknown";
}

std::string ManifoldSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << kind_name() << "(";
  switch (kind) {
    case ManifoldKind::kFlatTorus: os << "m=" << intrinsic_dim << ",side=" << side; break;
    case ManifoldKind::kCircle:
    case ManifoldKind::kSphere2: os << "radius=" << radius; break;
    case ManifoldKind::kEmbeddedTorus: os << "major=" << major << ",minor=" << minor; break;
    case ManifoldKind::kEuclidean: os << "d=" << ambient_dim; break;
  }
  os << ")";
  return os.str();
}

std::vector<Point> PointCloud::points() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    auto p = point(i);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

void PointCloud::push_back(std::span<const double> p) {
  if (p.size() != static_cast<std::size_t>(dim())) throw PreconditionError("point dimension mismatch");
  coords.insert(coords.end(), p.begin(), p.end());
}

PointCloud PointCloud::from_points(const ManifoldSpec& spec, const std::vector<Point>& pts) {
  PointCloud c;
  c.spec = spec;
  c.density = "explicit";
  c.mode = SampleMode::binomial(pts.size());
  for (const Point& p : pts) {
    for (double x : p)
      if (!std::isfinite(x)) throw PreconditionError("non-finite coordinate");
    c.push_back(p);
  }
  return c;
}

PointCloud PointCloud::euclidean(const std::vector<Point>& pts) {
  if (pts.empty()) throw PreconditionError("need at least one point to infer the dimension");
  return from_points(euclidean_space(static_cast<int>(pts.front().size())), pts);
}

}  // namespace rgc
