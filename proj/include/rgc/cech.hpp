#pragma once

// Čech complex of a point cloud at radius eps: a simplex for every subset
// whose eps-balls share a point, i.e. whose smallest enclosing ball has
// radius <= eps. Built level by level from the 2*eps neighbour graph.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgc/manifold.hpp"

namespace rgc {

class MetricRangeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Simplices of each dimension stored as sorted vertex tuples in
// lexicographic order, with the smallest-enclosing-ball radius of each.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  explicit SimplicialComplex(int max_dim, double epsilon = 0.0, std::string cloud_ref = {});

  // Highest dimension that was requested at construction. Dimensions up to
  // built_dim() are complete even when they hold no simplices.
  int built_dim() const { return static_cast<int>(flat_.size()) - 1; }
  double epsilon() const { return epsilon_; }
  const std::string& cloud_ref() const { return cloud_ref_; }

  std::size_t count(int k) const;
  std::span<const std::uint32_t> simplex(int k, std::size_t i) const;
  double radius(int k, std::size_t i) const { return radii_[k][i]; }
  const std::vector<double>& radii(int k) const { return radii_[k]; }

  // Appends; callers keep lexicographic order within each dimension.
  void add(std::span<const std::uint32_t> vertices, double radius);

  // Index of the simplex with these (sorted) vertices, or -1.
  std::int64_t find(std::span<const std::uint32_t> vertices) const;
  bool contains(std::span<const std::uint32_t> vertices) const { return find(vertices) >= 0; }

  // Every facet of every simplex is present.
  bool face_closed() const;

  // Optional smallest-enclosing-ball centres, row-major with the ambient
  // dimension as stride, unwrapped around each simplex's first vertex.
  bool has_centers(int k) const { return k >= 0 && k < static_cast<int>(has_centers_.size()) && has_centers_[k]; }
  const double* center(int k, std::size_t i, int dim) const { return centers_[k].data() + i * dim; }
  void set_centers(int k, std::vector<double> centers);

 private:
  std::vector<std::vector<std::uint32_t>> flat_;
  std::vector<std::vector<double>> radii_;
  std::vector<std::vector<double>> centers_;
  std::vector<char> has_centers_;
  double epsilon_ = 0.0;
  std::string cloud_ref_;
};

struct CechOptions {
  double tol = kDefaultTol;
  // Keep ball centres of the top dimension (needed by the implicit
  // cohomology route).
  bool keep_centers = false;
};

// Simplices up to dimension max_dim. Periodic clouds need eps < side / 4.
SimplicialComplex build_cech(const PointCloud& cloud, double eps, int max_dim,
                             const CechOptions& options = {});

// Number of simplices per dimension 0..built_dim.
std::vector<std::size_t> face_counts(const SimplicialComplex& complex);

// Default build dimension: one above the intrinsic dimension.
int default_cech_dim(const ManifoldSpec& spec);

// JSON lines {"dim":k,"vertices":[...]} in (dimension, lexicographic) order.
void write_complex_jsonl(std::ostream& os, const SimplicialComplex& complex);
SimplicialComplex read_complex_jsonl(std::istream& is);

// Coordinates of `count` cloud points unwrapped around the first one
// (minimum image), written row-major to out.
void unwrap_points(const PointCloud& cloud, const std::uint32_t* ids, int count, double* out);

}  // namespace rgc
