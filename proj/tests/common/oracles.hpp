#pragma once

// Exhaustive reference implementations shared by the unit and acceptance
// tests. Everything here walks all subsets and scans all points, so it is
// only usable on small clouds.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rgc/cech.hpp"
#include "rgc/critical_points.hpp"
#include "rgc/geometry.hpp"
#include "rgc/manifold.hpp"
#include "rgc/sampling.hpp"

namespace rgc::oracle {

using Simplex = std::vector<std::uint32_t>;

// Calls f(subset) for every sorted subset of {0..n-1} of the given size.
template <class F>
void for_each_subset(std::uint32_t n, int size, F&& f) {
  if (size <= 0 || static_cast<std::uint32_t>(size) > n) return;
  Simplex s(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) s[i] = static_cast<std::uint32_t>(i);
  for (;;) {
    f(s);
    int i = size - 1;
    while (i >= 0 && s[i] == n - static_cast<std::uint32_t>(size - i)) --i;
    if (i < 0) return;
    ++s[i];
    for (int j = i + 1; j < size; ++j) s[j] = s[j - 1] + 1;
  }
}

// Coordinates of the subset, minimum-image unwrapped around its first point.
inline std::vector<Point> unwrapped(const PointCloud& cloud, const Simplex& s) {
  const int d = cloud.dim();
  const Metric metric = cloud.metric();
  std::vector<Point> out;
  const double* base = cloud.coords.data() + static_cast<std::size_t>(s[0]) * d;
  for (auto id : s) {
    Point p(d);
    metric.delta(base, cloud.coords.data() + static_cast<std::size_t>(id) * d, p.data(), d);
    for (int a = 0; a < d; ++a) p[a] += base[a];
    out.push_back(std::move(p));
  }
  return out;
}

// Simplices of each dimension 0..max_dim, lexicographic within a dimension.
inline std::vector<std::vector<Simplex>> cech(const PointCloud& cloud, double eps, int max_dim) {
  std::vector<std::vector<Simplex>> out(static_cast<std::size_t>(max_dim) + 1);
  const auto n = static_cast<std::uint32_t>(cloud.size());
  for (int k = 0; k <= max_dim; ++k)
    for_each_subset(n, k + 1, [&](const Simplex& s) {
      if (geometry::min_enclosing_ball(unwrapped(cloud, s)).radius <= eps) out[k].push_back(s);
    });
  return out;
}

inline std::vector<std::vector<Simplex>> simplices(const SimplicialComplex& complex) {
  std::vector<std::vector<Simplex>> out(static_cast<std::size_t>(complex.built_dim()) + 1);
  for (int k = 0; k <= complex.built_dim(); ++k)
    for (std::size_t i = 0; i < complex.count(k); ++i) {
      const auto s = complex.simplex(k, i);
      out[k].emplace_back(s.begin(), s.end());
    }
  return out;
}

// Generator sets of all critical points with value <= r and index 1..max_index.
inline std::vector<Simplex> critical_generators(const PointCloud& cloud, double r, int max_index,
                                                double tol = kDefaultTol) {
  std::vector<Simplex> out;
  const auto n = static_cast<std::uint32_t>(cloud.size());
  const int d = cloud.dim();
  const Metric metric = cloud.metric();
  for (int k = 1; k <= max_index; ++k)
    for_each_subset(n, k + 1, [&](const Simplex& s) {
      const auto pts = unwrapped(cloud, s);
      geometry::Circumsphere sphere;
      try {
        sphere = geometry::circumsphere(pts, tol);
        if (sphere.radius > r || !geometry::in_open_convex_hull(sphere.center, pts, tol)) return;
      } catch (const geometry::DegenerateError&) {
        return;
      }
      for (std::uint32_t q = 0; q < n; ++q) {
        if (std::find(s.begin(), s.end(), q) != s.end()) continue;
        if (metric.distance(sphere.center.data(), cloud.coords.data() + static_cast<std::size_t>(q) * d, d) <
            sphere.radius)
          return;
      }
      out.push_back(s);
    });
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Simplex> generators_of(const std::vector<critical::CriticalPoint>& points) {
  std::vector<Simplex> out;
  for (const auto& p : points) out.push_back(p.generators);
  std::sort(out.begin(), out.end());
  return out;
}

inline PointCloud uniform_cloud(const ManifoldSpec& spec, std::size_t n, std::uint64_t seed) {
  return sampling::sample(spec, sampling::DensitySpec::uniform(spec), SampleMode::binomial(n), seed);
}

// Number of connected components of the 1-skeleton (union-find).
inline std::size_t components(const SimplicialComplex& complex) {
  std::vector<std::size_t> parent(complex.count(0));
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t count = parent.size();
  if (complex.built_dim() >= 1)
    for (std::size_t e = 0; e < complex.count(1); ++e) {
      const auto s = complex.simplex(1, e);
      const auto a = find(s[0]), b = find(s[1]);
      if (a != b) parent[a] = b, --count;
    }
  return count;
}

}  // namespace rgc::oracle
