#pragma once

// Uniform bucket grid for fixed-radius queries. Points are stored cell by
// cell in structure-of-arrays order so that a cell is one contiguous block
// for the distance kernels.

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rgc/kernels.hpp"
#include "rgc/manifold.hpp"

namespace rgc {

class SpatialGrid {
 public:
  // Every query radius must be <= cell_size.
  SpatialGrid(const PointCloud& cloud, double cell_size);

  double cell_size() const { return cell_size_; }
  std::size_t size() const { return ids_.size(); }
  const Metric& metric() const { return metric_; }
  int dim() const { return dim_; }

  // Visits every occupied cell adjacent to (or containing) the cell of x.
  // f(const kernels::SoaBlock&, const std::uint32_t* ids)
  template <class F>
  void for_each_nearby_block(const double* x, F&& f) const {
    std::array<std::uint64_t, 6561> keys;  // 3^8
    const int count = nearby_keys(x, keys.data());
    for (int i = 0; i < count; ++i) {
      auto it = ranges_.find(keys[i]);
      if (it == ranges_.end()) continue;
      const auto [begin, end] = it->second;
      const kernels::SoaBlock block{soa_.data() + begin, ids_.size(), end - begin, dim_};
      f(block, ids_.data() + begin);
    }
  }

  // Indices of points within `radius` of x (inclusive), sorted ascending.
  std::vector<std::uint32_t> neighbors_within(const double* x, double radius) const;

  // Points strictly inside `inner` and within the closed band [inner, outer].
  kernels::BallCounts classify_ball(const double* center, double inner, double outer) const;

  bool any_within(const double* x, double radius) const;

 private:
  int nearby_keys(const double* x, std::uint64_t* out) const;
  bool cell_of(const double* x, std::int64_t* cell) const;
  std::uint64_t key_of(const std::int64_t* cell) const;

  int dim_ = 0;
  Metric metric_;
  double cell_size_ = 0.0;
  std::array<std::int64_t, kMaxDim> cells_per_axis_{};
  std::array<double, kMaxDim> origin_{};
  std::array<double, kMaxDim> width_{};
  std::vector<double> soa_;
  std::vector<std::uint32_t> ids_;
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> ranges_;
};

}  // namespace rgc
