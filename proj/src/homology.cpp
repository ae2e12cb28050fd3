#include "rgc/homology.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace rgc::homology {
namespace {

constexpr std::uint32_t kNone = 0xffffffffu;

// Positions of the simplices of dimension k when sorted by (radius, index).
std::vector<std::uint32_t> filtration_order(const SimplicialComplex& complex, int k) {
  std::vector<std::uint32_t> order(complex.count(k));
  std::iota(order.begin(), order.end(), 0u);
  const auto& radii = complex.radii(k);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return radii[a] < radii[b]; });
  return order;
}

void facets_of(const SimplicialComplex& complex, int k, std::size_t j, std::vector<std::uint32_t>& out) {
  out.clear();
  const auto s = complex.simplex(k, j);
  std::array<std::uint32_t, 64> facet{};
  for (int drop = 0; drop <= k; ++drop) {
    int w = 0;
    for (int v = 0; v <= k; ++v)
      if (v != drop) facet[w++] = s[v];
    const std::int64_t idx = complex.find({facet.data(), static_cast<std::size_t>(k)});
    if (idx < 0) throw PreconditionError("complex is not closed under faces");
    out.push_back(static_cast<std::uint32_t>(idx));
  }
}

// a <- a + b over Z/2 for sorted index lists.
void add_columns(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                 std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
  a.swap(scratch);
}

// Ranks of d_k for k = 1..top, reducing from the top down so that pivots of
// d_{k+1} clear the matching columns of d_k.
std::vector<std::size_t> ranks_through(const SimplicialComplex& complex, int top) {
  std::vector<std::size_t> ranks(static_cast<std::size_t>(top) + 1, 0);
  std::vector<char> cleared(complex.count(top), 0);
  std::vector<std::uint32_t> facets, column, scratch;
  for (int k = top; k >= 1; --k) {
    const std::size_t rows = complex.count(k - 1);
    const auto col_order = filtration_order(complex, k);
    const auto row_order = filtration_order(complex, k - 1);
    std::vector<std::uint32_t> row_pos(rows);
    for (std::uint32_t p = 0; p < rows; ++p) row_pos[row_order[p]] = p;

    std::vector<std::uint32_t> owner(rows, kNone);
    std::vector<std::vector<std::uint32_t>> reduced;
    std::vector<char> next_cleared(rows, 0);
    for (std::uint32_t j : col_order) {
      if (cleared[j]) continue;
      facets_of(complex, k, j, facets);
      column.clear();
      for (std::uint32_t f : facets) column.push_back(row_pos[f]);
      std::sort(column.begin(), column.end());
      while (!column.empty()) {
        const std::uint32_t pivot = column.back();
        if (owner[pivot] == kNone) {
          owner[pivot] = static_cast<std::uint32_t>(reduced.size());
          reduced.push_back(column);
          next_cleared[row_order[pivot]] = 1;
          break;
        }
        add_columns(column, reduced[owner[pivot]], scratch);
      }
    }
    ranks[k] = reduced.size();
    cleared.swap(next_cleared);
  }
  return ranks;
}

}  // namespace

BoundaryMatrix boundary_matrix(const SimplicialComplex& complex, int k) {
  if (k < 1 || k > complex.built_dim()) throw InsufficientDimensionError("boundary dimension out of range");
  BoundaryMatrix m;
  m.k = k;
  m.rows = complex.count(k - 1);
  std::vector<std::uint32_t> facets;
  for (std::size_t j = 0; j < complex.count(k); ++j) {
    facets_of(complex, k, j, facets);
    std::sort(facets.begin(), facets.end());
    m.entries.insert(m.entries.end(), facets.begin(), facets.end());
    m.offsets.push_back(m.entries.size());
  }
  return m;
}

std::vector<std::vector<std::uint32_t>> compose(const BoundaryMatrix& outer, const BoundaryMatrix& inner) {
  if (outer.cols() != inner.rows) throw PreconditionError("boundary matrices do not compose");
  std::vector<std::vector<std::uint32_t>> out(inner.cols());
  std::vector<std::uint32_t> scratch;
  for (std::size_t j = 0; j < inner.cols(); ++j) {
    std::vector<std::uint32_t> acc;
    for (std::uint32_t mid : inner.column(j)) {
      const auto col = outer.column(mid);
      std::vector<std::uint32_t> rhs(col.begin(), col.end());
      add_columns(acc, rhs, scratch);
    }
    out[j] = std::move(acc);
  }
  return out;
}

std::vector<std::size_t> boundary_ranks(const SimplicialComplex& complex) {
  if (complex.built_dim() < 1) return {0};
  return ranks_through(complex, complex.built_dim());
}

std::vector<std::size_t> betti_numbers(const SimplicialComplex& complex, int max_k) {
  if (max_k < 0) throw PreconditionError("max_k must be nonnegative");
  if (max_k + 1 > complex.built_dim())
    throw InsufficientDimensionError("complex must be built through dimension max_k + 1");
  const auto ranks = ranks_through(complex, max_k + 1);
  std::vector<std::size_t> betti(static_cast<std::size_t>(max_k) + 1);
  for (int k = 0; k <= max_k; ++k) betti[k] = complex.count(k) - ranks[k] - ranks[k + 1];
  return betti;
}

std::int64_t euler_characteristic(const SimplicialComplex& complex) {
  std::int64_t chi = 0;
  for (int k = 0; k <= complex.built_dim(); ++k)
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(complex.count(k));
  return chi;
}

std::int64_t alternating_sum(const std::vector<std::size_t>& values) {
  std::int64_t s = 0;
  for (std::size_t k = 0; k < values.size(); ++k)
    s += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(values[k]);
  return s;
}

bool is_nontrivial_k_cycle(const double* pts, int count, int dim, double eps) {
  if (count < 3) throw PreconditionError("a k-cycle test needs k + 2 >= 3 points");
  PointCloud cloud;
  cloud.spec = euclidean_space(dim);
  cloud.coords.assign(pts, pts + static_cast<std::size_t>(count) * dim);
  const int k = count - 2;
  const SimplicialComplex complex = build_cech(cloud, eps, k + 1);
  return betti_numbers(complex, k)[k] == 1;
}

bool is_nontrivial_k_cycle(const std::vector<Point>& points, double eps) {
  if (points.empty()) throw PreconditionError("empty point list");
  const int dim = static_cast<int>(points.front().size());
  std::vector<double> flat;
  for (const Point& p : points) {
    if (static_cast<int>(p.size()) != dim) throw PreconditionError("points have inconsistent dimensions");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return is_nontrivial_k_cycle(flat.data(), static_cast<int>(points.size()), dim, eps);
}

}  // namespace rgc::homology
