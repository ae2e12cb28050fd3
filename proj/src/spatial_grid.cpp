#include "rgc/spatial_grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace rgc {

namespace {
constexpr double kMaxCells = 4.0e18;
}

SpatialGrid::SpatialGrid(const PointCloud& cloud, double cell_size)
    : dim_(cloud.dim()), metric_(cloud.metric()), cell_size_(cell_size) {
  if (!(cell_size > 0.0)) throw PreconditionError("grid cell size must be positive");
  const std::size_t n = cloud.size();
  if (n > std::numeric_limits<std::uint32_t>::max()) throw PreconditionError("cloud too large");

  if (metric_.periodic()) {
    for (int a = 0; a < dim_; ++a) {
      cells_per_axis_[a] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(metric_.period / cell_size)));
      width_[a] = metric_.period / static_cast<double>(cells_per_axis_[a]);
      origin_[a] = 0.0;
    }
  } else {
    std::array<double, kMaxDim> lo{}, hi{};
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
      for (int a = 0; a < dim_; ++a) {
        lo[a] = std::min(lo[a], cloud.coords[i * dim_ + a]);
        hi[a] = std::max(hi[a], cloud.coords[i * dim_ + a]);
      }
    if (n == 0) lo.fill(0.0), hi.fill(0.0);
    // Grow the cell until the lattice index fits in 64 bits.
    double width = cell_size;
    for (;;) {
      double total = 1.0;
      for (int a = 0; a < dim_; ++a) total *= std::floor((hi[a] - lo[a]) / width) + 3.0;
      if (total < kMaxCells) break;
      width *= 2.0;
    }
    for (int a = 0; a < dim_; ++a) {
      width_[a] = width;
      // One spare cell on each side so queries next to the hull stay in range.
      origin_[a] = lo[a] - width;
      cells_per_axis_[a] = static_cast<std::int64_t>(std::floor((hi[a] - lo[a]) / width)) + 3;
    }
  }

  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
  std::array<std::int64_t, kMaxDim> cell{};
  for (std::size_t i = 0; i < n; ++i) {
    cell_of(cloud.coords.data() + i * dim_, cell.data());
    keyed[i] = {key_of(cell.data()), static_cast<std::uint32_t>(i)};
  }
  std::sort(keyed.begin(), keyed.end());

  ids_.resize(n);
  soa_.resize(n * static_cast<std::size_t>(dim_));
  for (std::size_t slot = 0; slot < n; ++slot) {
    const std::uint32_t id = keyed[slot].second;
    ids_[slot] = id;
    for (int a = 0; a < dim_; ++a) soa_[a * n + slot] = cloud.coords[id * dim_ + a];
  }
  for (std::size_t begin = 0; begin < n;) {
    std::size_t end = begin;
    while (end < n && keyed[end].first == keyed[begin].first) ++end;
    ranges_.emplace(keyed[begin].first, std::make_pair(static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end)));
    begin = end;
  }
}

bool SpatialGrid::cell_of(const double* x, std::int64_t* cell) const {
  bool inside = true;
  for (int a = 0; a < dim_; ++a) {
    std::int64_t c = static_cast<std::int64_t>(std::floor((x[a] - origin_[a]) / width_[a]));
    if (metric_.periodic()) {
      c %= cells_per_axis_[a];
      if (c < 0) c += cells_per_axis_[a];
    } else if (c < 0 || c >= cells_per_axis_[a]) {
      inside = false;
    }
    cell[a] = c;
  }
  return inside;
}

std::uint64_t SpatialGrid::key_of(const std::int64_t* cell) const {
  std::uint64_t key = 0;
  for (int a = dim_ - 1; a >= 0; --a)
    key = key * static_cast<std::uint64_t>(cells_per_axis_[a]) + static_cast<std::uint64_t>(cell[a]);
  return key;
}

int SpatialGrid::nearby_keys(const double* x, std::uint64_t* out) const {
  std::array<std::int64_t, kMaxDim> base{};
  cell_of(x, base.data());
  int total = 1;
  for (int a = 0; a < dim_; ++a) total *= 3;
  int count = 0;
  std::array<std::int64_t, kMaxDim> cell{};
  for (int code = 0; code < total; ++code) {
    int rest = code;
    bool valid = true;
    for (int a = 0; a < dim_; ++a) {
      std::int64_t c = base[a] + (rest % 3) - 1;
      rest /= 3;
      if (metric_.periodic()) {
        c %= cells_per_axis_[a];
        if (c < 0) c += cells_per_axis_[a];
      } else if (c < 0 || c >= cells_per_axis_[a]) {
        valid = false;
        break;
      }
      cell[a] = c;
    }
    if (valid) out[count++] = key_of(cell.data());
  }
  if (metric_.periodic()) {
    // Fewer than three cells along an axis wraps several offsets onto one cell.
    std::sort(out, out + count);
    count = static_cast<int>(std::unique(out, out + count) - out);
  }
  return count;
}

std::vector<std::uint32_t> SpatialGrid::neighbors_within(const double* x, double radius) const {
  if (radius > cell_size_ * (1.0 + 1e-12)) throw PreconditionError("query radius exceeds grid cell size");
  std::vector<std::uint32_t> out;
  std::vector<double> dist;
  const double r2 = radius * radius;
  const auto& k = kernels::active();
  for_each_nearby_block(x, [&](const kernels::SoaBlock& block, const std::uint32_t* ids) {
    dist.resize(block.count);
    k.sq_distances(block, x, metric_.period, dist.data());
    for (std::size_t i = 0; i < block.count; ++i)
      if (dist[i] <= r2) out.push_back(ids[i]);
  });
  std::sort(out.begin(), out.end());
  return out;
}

kernels::BallCounts SpatialGrid::classify_ball(const double* center, double inner, double outer) const {
  if (outer > cell_size_ * (1.0 + 1e-12)) throw PreconditionError("query radius exceeds grid cell size");
  kernels::BallCounts total;
  const double inner_sq = inner > 0.0 ? inner * inner : 0.0;
  const double outer_sq = outer * outer;
  const auto& k = kernels::active();
  for_each_nearby_block(center, [&](const kernels::SoaBlock& block, const std::uint32_t*) {
    const auto c = k.classify_ball(block, center, inner_sq, outer_sq, metric_.period);
    total.inside += c.inside;
    total.band += c.band;
  });
  return total;
}

bool SpatialGrid::any_within(const double* x, double radius) const {
  if (radius > cell_size_ * (1.0 + 1e-12)) throw PreconditionError("query radius exceeds grid cell size");
  const double r2 = radius * radius;
  bool found = false;
  const auto& k = kernels::active();
  for_each_nearby_block(x, [&](const kernels::SoaBlock& block, const std::uint32_t*) {
    if (!found && k.min_sq_distance(block, x, metric_.period) <= r2) found = true;
  });
  return found;
}

}  // namespace rgc
