#pragma once

// Voronoi cell of one site clipped to an axis-aligned cube around it, kept
// as labelled vertices (double description). A vertex carries the labels of
// the d constraints that meet there: cloud indices for bisectors, negative
// values for cube faces. Two vertices span an edge iff they share d-1
// labels, which holds for simple polytopes (the generic case).

#include <array>
#include <cstdint>
#include <vector>

#include "rgc/manifold.hpp"

namespace rgc::voronoi {

struct CellVertex {
  std::array<double, kMaxDim> x{};  // relative to the site
  std::array<std::int64_t, kMaxDim> labels{};  // sorted, first dim entries used
};

class LocalCell {
 public:
  LocalCell(int dim, double half_width);

  // Intersects with {x : u.x <= |u|^2 / 2}, the half-space of points closer
  // to the site than to site + u. Returns whether anything was cut.
  bool clip(const double* u, std::int64_t label, double tol = kDefaultTol);

  // Largest squared distance from the site to a vertex; a bisector whose
  // plane lies farther out cannot cut the cell.
  double max_sq_radius() const;

  int dim() const { return dim_; }
  const std::vector<CellVertex>& vertices() const { return vertices_; }

  static bool is_box_label(std::int64_t label) { return label < 0; }

 private:
  int dim_;
  std::vector<CellVertex> vertices_, scratch_;
  std::vector<double> values_;
};

}  // namespace rgc::voronoi
