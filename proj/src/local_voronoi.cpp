#include "rgc/local_voronoi.hpp"

#include <algorithm>

namespace rgc::voronoi {

LocalCell::LocalCell(int dim, double half_width) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("cell dimension out of range");
  if (!(half_width > 0.0)) throw PreconditionError("cell half width must be positive");
  // Cube corners; face label -(2a+1) for the lower face along axis a,
  // -(2a+2) for the upper one.
  for (unsigned code = 0; code < (1u << dim); ++code) {
    CellVertex v;
    for (int a = 0; a < dim; ++a) {
      const bool upper = (code >> a) & 1u;
      v.x[a] = upper ? half_width : -half_width;
      v.labels[a] = -(2 * a + (upper ? 2 : 1));
    }
    std::sort(v.labels.begin(), v.labels.begin() + dim);
    vertices_.push_back(v);
  }
}

double LocalCell::max_sq_radius() const {
  double best = 0.0;
  for (const auto& v : vertices_) {
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) s += v.x[a] * v.x[a];
    best = std::max(best, s);
  }
  return best;
}

namespace {

int shared_labels(const CellVertex& a, const CellVertex& b, int dim, std::int64_t* out) {
  int i = 0, j = 0, n = 0;
  while (i < dim && j < dim) {
    if (a.labels[i] < b.labels[j]) {
      ++i;
    } else if (b.labels[j] < a.labels[i]) {
      ++j;
    } else {
      out[n++] = a.labels[i];
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

bool LocalCell::clip(const double* u, std::int64_t label, double tol) {
  double uu = 0.0;
  for (int a = 0; a < dim_; ++a) uu += u[a] * u[a];
  const double offset = 0.5 * uu;
  const double slack = tol * (1.0 + uu);
  values_.resize(vertices_.size());
  bool any_out = false;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    double s = -offset;
    for (int a = 0; a < dim_; ++a) s += u[a] * vertices_[i].x[a];
    values_[i] = s;
    any_out |= s > slack;
  }
  if (!any_out) return false;

  scratch_.clear();
  std::array<std::int64_t, kMaxDim> common{};
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (values_[i] > slack) continue;
    scratch_.push_back(vertices_[i]);
    for (std::size_t o = 0; o < vertices_.size(); ++o) {
      if (values_[o] <= slack) continue;
      if (shared_labels(vertices_[i], vertices_[o], dim_, common.data()) != dim_ - 1) continue;
      const double t = values_[i] / (values_[i] - values_[o]);
      CellVertex v;
      for (int a = 0; a < dim_; ++a) v.x[a] = vertices_[i].x[a] + t * (vertices_[o].x[a] - vertices_[i].x[a]);
      std::copy_n(common.begin(), dim_ - 1, v.labels.begin());
      v.labels[dim_ - 1] = label;
      std::sort(v.labels.begin(), v.labels.begin() + dim_);
      scratch_.push_back(v);
    }
  }
  vertices_.swap(scratch_);
  return true;
}

}  // namespace rgc::voronoi
