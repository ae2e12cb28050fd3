#pragma once

// Manifold descriptions, the ambient metric convention and the point cloud
// container shared by every module.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgc {

using Point = std::vector<double>;

// Largest ambient dimension handled by the fixed-size linear algebra.
inline constexpr int kMaxDim = 8;

// Default relative tolerance for geometric predicates.
inline constexpr double kDefaultTol = 1e-9;

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Squared distances and difference vectors in the ambient space. A positive
// period switches to the minimum-image convention of a flat torus.
struct Metric {
  double period = 0.0;

  bool periodic() const { return period > 0.0; }
  double wrap(double delta) const;
  // out = to - from (minimum image when periodic)
  void delta(const double* from, const double* to, double* out, int dim) const;
  double sq_distance(const double* a, const double* b, int dim) const;
  double distance(const double* a, const double* b, int dim) const;
};

// kEuclidean is plain R^d; it hosts hand-built clouds and cannot be sampled.
enum class ManifoldKind { kFlatTorus, kCircle, kSphere2, kEmbeddedTorus, kEuclidean };
enum class MetricConvention { kEuclidean, kPeriodic };

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::kFlatTorus;
  int intrinsic_dim = 1;
  int ambient_dim = 1;
  double side = 1.0;    // flat torus
  double radius = 1.0;  // circle, sphere
  double major = 2.0;   // embedded torus: distance from axis to tube centre
  double minor = 1.0;   // embedded torus: tube radius

  static ManifoldSpec flat_torus(int m, double side);
  static ManifoldSpec circle(double radius);
  static ManifoldSpec sphere2(double radius);
  static ManifoldSpec embedded_torus(double major, double minor);

  double volume() const;
  MetricConvention metric_convention() const;
  Metric metric() const;
  // |constraint| for x in R^d; zero on the manifold.
  double constraint_residual(const double* x) const;
  // Betti numbers beta_0..beta_m of the manifold itself.
  std::vector<int> betti() const;
  std::string kind_name() const;
  std::string describe() const;
  void validate() const;

  friend bool operator==(const ManifoldSpec&, const ManifoldSpec&) = default;
};

enum class SampleKind { kBinomial, kPoisson };

struct SampleMode {
  SampleKind kind = SampleKind::kBinomial;
  std::size_t n = 0;

  static SampleMode binomial(std::size_t n) { return {SampleKind::kBinomial, n}; }
  static SampleMode poisson(std::size_t n) { return {SampleKind::kPoisson, n}; }
  friend bool operator==(const SampleMode&, const SampleMode&) = default;
};

inline constexpr const char* kGeneratorName = "mt19937_64";

struct PointCloud {
  ManifoldSpec spec;
  std::uint64_t seed = 0;
  SampleMode mode;
  std::string density = "uniform";
  std::string generator = kGeneratorName;
  std::vector<double> coords;  // row-major, size() * dim()

  int dim() const { return spec.ambient_dim; }
  std::size_t size() const { return dim() == 0 ? 0 : coords.size() / static_cast<std::size_t>(dim()); }
  bool empty() const { return coords.empty(); }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim())};
  }
  Metric metric() const { return spec.metric(); }
  std::vector<Point> points() const;
  void push_back(std::span<const double> p);

  // A cloud with explicit coordinates, used for hand-built configurations.
  static PointCloud from_points(const ManifoldSpec& spec, const std::vector<Point>& pts);
  // Points in plain Euclidean R^d.
  static PointCloud euclidean(const std::vector<Point>& pts);
};

ManifoldSpec euclidean_space(int d);

}  // namespace rgc
