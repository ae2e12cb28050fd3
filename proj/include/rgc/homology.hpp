#pragma once

// Z/2 homology of simplicial complexes: boundary matrices, Betti numbers by
// column reduction, Euler characteristics.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rgc/cech.hpp"

namespace rgc::homology {

class InsufficientDimensionError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Sparse mod-2 matrix of the k-th boundary map. Column j lists the indices
// (in the complex's order of (k-1)-simplices) of the facets of k-simplex j.
struct BoundaryMatrix {
  int k = 0;
  std::size_t rows = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> entries;

  std::size_t cols() const { return offsets.size() - 1; }
  std::span<const std::uint32_t> column(std::size_t j) const {
    return {entries.data() + offsets[j], offsets[j + 1] - offsets[j]};
  }
};

BoundaryMatrix boundary_matrix(const SimplicialComplex& complex, int k);

// Product of two mod-2 sparse matrices given column-wise, returned as sorted
// row lists per column; used to check that consecutive boundaries compose to
// zero.
std::vector<std::vector<std::uint32_t>> compose(const BoundaryMatrix& outer, const BoundaryMatrix& inner);

// Rank over Z/2 of every boundary map 1..built_dim. Entry k is rank(d_k);
// entry 0 is 0.
std::vector<std::size_t> boundary_ranks(const SimplicialComplex& complex);

// beta_0..beta_max_k. Needs the complex built through dimension max_k + 1.
std::vector<std::size_t> betti_numbers(const SimplicialComplex& complex, int max_k);

struct CohomologyStats {
  std::size_t columns = 0;   // columns visited after clearing
  std::size_t apparent = 0;  // settled by the apparent-pair shortcut
  std::size_t reduced = 0;   // needed at least one column addition
  std::size_t zero = 0;      // reduced to zero (cocycles)
};

// beta_0..beta_max_k of the Čech complex of `cloud` at radius eps, computed
// by cohomology with clearing. Dimension max_k + 1 is never stored: its
// simplices are enumerated on demand as cofaces of the top stored level.
std::vector<std::size_t> cech_betti(const PointCloud& cloud, double eps, int max_k,
                                    const CechOptions& options = {}, CohomologyStats* stats = nullptr);

// Same on a prebuilt complex of `cloud`. Either built through max_k + 1, or
// through max_k (>= 1) with centres kept at max_k.
std::vector<std::size_t> cech_betti(const SimplicialComplex& complex, const PointCloud& cloud, int max_k,
                                    double tol = kDefaultTol, CohomologyStats* stats = nullptr);

// Alternating face count.
std::int64_t euler_characteristic(const SimplicialComplex& complex);

// Alternating sum of Betti numbers.
std::int64_t alternating_sum(const std::vector<std::size_t>& values);

// Whether the Čech complex of k+2 points at radius eps carries a nontrivial
// k-cycle (beta_k == 1).
bool is_nontrivial_k_cycle(const std::vector<Point>& points, double eps);

// Same predicate on row-major coordinates in Euclidean R^dim.
bool is_nontrivial_k_cycle(const double* pts, int count, int dim, double eps);

}  // namespace rgc::homology
