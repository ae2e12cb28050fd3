#include "rgc/critical_points.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>

#include "rgc/cech.hpp"
#include "rgc/geometry.hpp"
#include "rgc/local_voronoi.hpp"
#include "rgc/spatial_grid.hpp"

namespace rgc::critical {
namespace {

void check_preconditions(const PointCloud& cloud, double r, int max_index) {
  if (!(r > 0.0)) throw PreconditionError("critical point enumeration needs r > 0");
  if (max_index < 1 || max_index > cloud.dim())
    throw PreconditionError("max_index must lie in 1..ambient dimension");
  const Metric metric = cloud.metric();
  if (metric.periodic() && !(r < metric.period / 4.0))
    throw MetricRangeError("periodic metric requires r < side/4");
}

// CP2 by a linear scan or by the grid.
template <class Classify>
bool test_with(const PointCloud& cloud, std::span<const std::uint32_t> ids, double r, double tol,
               Classify&& classify, CriticalPoint* out, CriticalDiagnostics* diag) {
  const int d = cloud.dim();
  const int count = static_cast<int>(ids.size());
  if (diag) ++diag->candidates;
  std::array<double, (kMaxDim + 1) * kMaxDim> pts{};
  unwrap_points(cloud, ids.data(), count, pts.data());
  const auto fit = geometry::fit_circumsphere(pts.data(), count, d, tol);
  if (!fit) {
    if (diag) ++diag->degenerate;
    return false;
  }
  const double radius = fit->radius;
  if (radius > r) return false;  // CP3
  for (int i = 0; i < count; ++i)
    if (!(fit->barycentric[i] > tol)) return false;  // CP1
  const double band = tol * (1.0 + radius);
  const kernels::BallCounts c = classify(fit->center.data(), radius - band, radius + band);
  if (c.inside > 0) return false;  // CP2
  if (c.band != static_cast<std::size_t>(count)) {
    if (diag) ++diag->boundary;
    return false;
  }
  if (out) {
    out->k = count - 1;
    out->value = radius;
    out->generators.assign(ids.begin(), ids.end());
    out->center.assign(fit->center.begin(), fit->center.begin() + d);
    const Metric metric = cloud.metric();
    if (metric.periodic())
      for (double& x : out->center) x -= metric.period * std::floor(x / metric.period);
  }
  return true;
}

struct Enumerator {
  const PointCloud& cloud;
  double r;
  int max_index;
  double tol;
  CriticalDiagnostics* diag;
  SpatialGrid grid;
  std::vector<CriticalPoint> found;

  Enumerator(const PointCloud& c, double radius, int mi, double t, CriticalDiagnostics* dg)
      : cloud(c), r(radius), max_index(mi), tol(t), diag(dg), grid(c, 2.0 * radius * (1.0 + 1e-9)) {}

  void test(std::span<const std::uint32_t> ids) {
    CriticalPoint cp;
    auto classify = [&](const double* centre, double inner, double outer) {
      return grid.classify_ball(centre, inner, outer);
    };
    if (test_with(cloud, ids, r, tol, classify, &cp, diag)) found.push_back(std::move(cp));
  }

  // Neighbours of p within 2r (excluding p) with their minimum-image offsets.
  void neighbours(std::uint32_t p, std::vector<std::uint32_t>& ids, std::vector<double>& offsets) const {
    const int d = cloud.dim();
    const double* x = cloud.coords.data() + static_cast<std::size_t>(p) * d;
    ids = grid.neighbors_within(x, 2.0 * r);
    ids.erase(std::remove(ids.begin(), ids.end(), p), ids.end());
    offsets.resize(ids.size() * d);
    const Metric metric = cloud.metric();
    for (std::size_t i = 0; i < ids.size(); ++i)
      metric.delta(x, cloud.coords.data() + static_cast<std::size_t>(ids[i]) * d, offsets.data() + i * d, d);
  }

  void voronoi(std::uint32_t p) {
    const int d = cloud.dim();
    std::vector<std::uint32_t> ids;
    std::vector<double> offsets;
    neighbours(p, ids, offsets);
    std::vector<std::pair<double, std::size_t>> by_distance(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) s += offsets[i * d + a] * offsets[i * d + a];
      by_distance[i] = {s, i};
    }
    std::sort(by_distance.begin(), by_distance.end());

    voronoi::LocalCell cell(d, r);
    for (const auto& [sq, i] : by_distance) {
      // The bisector sits at distance |u|/2 from the site.
      if (0.25 * sq > cell.max_sq_radius() * (1.0 + 1e-9)) break;
      cell.clip(offsets.data() + i * d, ids[i], tol);
    }

    // Subsets of bisector labels at each vertex, keeping only those whose
    // smallest index exceeds p so that each subset is found once.
    std::vector<std::array<std::uint32_t, kMaxDim + 1>> subsets;
    std::array<std::uint32_t, kMaxDim> labels{};
    for (const auto& v : cell.vertices()) {
      int n = 0;
      for (int a = 0; a < d; ++a)
        if (!voronoi::LocalCell::is_box_label(v.labels[a]) && v.labels[a] > static_cast<std::int64_t>(p))
          labels[n++] = static_cast<std::uint32_t>(v.labels[a]);
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        const int size = std::popcount(mask);
        if (size > max_index) continue;
        std::array<std::uint32_t, kMaxDim + 1> s{};
        s.fill(0xffffffffu);
        s[0] = p;
        int w = 1;
        for (int b = 0; b < n; ++b)
          if ((mask >> b) & 1u) s[w++] = labels[b];
        std::sort(s.begin() + 1, s.begin() + w);
        subsets.push_back(s);
      }
    }
    std::sort(subsets.begin(), subsets.end());
    subsets.erase(std::unique(subsets.begin(), subsets.end()), subsets.end());
    for (const auto& s : subsets) {
      const auto size = static_cast<std::size_t>(std::find(s.begin(), s.end(), 0xffffffffu) - s.begin());
      test({s.data(), size});
    }
  }

  void cliques(std::uint32_t p) {
    const int d = cloud.dim();
    std::vector<std::uint32_t> ids;
    std::vector<double> offsets;
    neighbours(p, ids, offsets);
    std::vector<std::size_t> forward;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] > p) forward.push_back(i);
    const double limit = 4.0 * r * r;
    auto close = [&](std::size_t i, std::size_t j) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) {
        const double t = offsets[i * d + a] - offsets[j * d + a];
        s += t * t;
      }
      return s <= limit;
    };
    std::vector<std::size_t> chosen;
    std::vector<std::uint32_t> generators;
    auto extend = [&](auto&& self, std::size_t start) -> void {
      generators.assign(1, p);
      for (std::size_t c : chosen) generators.push_back(ids[c]);
      test(generators);
      if (static_cast<int>(chosen.size()) == max_index) return;
      for (std::size_t f = start; f < forward.size(); ++f) {
        const std::size_t i = forward[f];
        if (!std::all_of(chosen.begin(), chosen.end(), [&](std::size_t c) { return close(c, i); })) continue;
        chosen.push_back(i);
        self(self, f + 1);
        chosen.pop_back();
      }
    };
    for (std::size_t f = 0; f < forward.size(); ++f) {
      chosen.assign(1, forward[f]);
      extend(extend, f + 1);
    }
  }
};

}  // namespace

bool test_generators(const PointCloud& cloud, std::span<const std::uint32_t> generators, double r, double tol,
                     CriticalPoint* out, CriticalDiagnostics* diagnostics) {
  if (generators.size() < 2 || static_cast<int>(generators.size()) > cloud.dim() + 1)
    throw PreconditionError("a generator set has 2..d+1 points");
  if (!std::is_sorted(generators.begin(), generators.end())) throw PreconditionError("generators must be sorted");
  const int d = cloud.dim();
  const Metric metric = cloud.metric();
  auto classify = [&](const double* centre, double inner, double outer) {
    kernels::BallCounts c;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double dist = metric.distance(centre, cloud.coords.data() + i * d, d);
      if (dist < inner) ++c.inside;
      else if (dist <= outer) ++c.band;
    }
    return c;
  };
  return test_with(cloud, generators, r, tol, classify, out, diagnostics);
}

std::vector<CriticalPoint> enumerate_critical_points(const PointCloud& cloud, double r, int max_index,
                                                     const CriticalOptions& options,
                                                     CriticalDiagnostics* diagnostics) {
  check_preconditions(cloud, r, max_index);
  if (cloud.empty()) return {};
  Enumerator e(cloud, r, max_index, options.tol, diagnostics);
  for (std::uint32_t p = 0; p < cloud.size(); ++p) {
    if (options.strategy == Strategy::kVoronoi) e.voronoi(p);
    else e.cliques(p);
  }
  auto& out = e.found;
  std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.k != b.k) return a.k < b.k;
    if (a.value != b.value) return a.value < b.value;
    return a.generators < b.generators;
  });
  return std::move(out);
}

CriticalCounts critical_counts(const PointCloud& cloud, double r, int max_index, const CriticalOptions& options,
                               CriticalDiagnostics* diagnostics) {
  const auto points = enumerate_critical_points(cloud, r, max_index, options, diagnostics);
  CriticalCounts c;
  c.r = r;
  c.counts.assign(static_cast<std::size_t>(max_index) + 1, 0);
  c.counts[0] = cloud.size();
  for (const auto& cp : points) ++c.counts[cp.k];
  return c;
}

std::int64_t morse_euler(const CriticalCounts& counts) {
  std::int64_t chi = 0;
  for (std::size_t k = 0; k < counts.counts.size(); ++k)
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(counts.counts[k]);
  return chi;
}

std::int64_t morse_euler(const PointCloud& cloud, double r, int max_index, const CriticalOptions& options) {
  return morse_euler(critical_counts(cloud, r, max_index, options));
}

void write_critical_jsonl(std::ostream& os, const std::vector<CriticalPoint>& points) {
  for (const auto& cp : points) {
    nlohmann::json rec{{"k", cp.k}, {"center", cp.center}, {"value", cp.value}, {"generators", cp.generators}};
    os << rec.dump() << '\n';
  }
}

}  // namespace rgc::critical
