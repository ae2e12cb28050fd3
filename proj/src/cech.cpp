#include "rgc/cech.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "rgc/geometry.hpp"
#include "rgc/spatial_grid.hpp"

namespace rgc {

SimplicialComplex::SimplicialComplex(int max_dim, double epsilon, std::string cloud_ref)
    : flat_(static_cast<std::size_t>(max_dim + 1)),
      radii_(static_cast<std::size_t>(max_dim + 1)),
      epsilon_(epsilon),
      cloud_ref_(std::move(cloud_ref)) {
  if (max_dim < 0) throw PreconditionError("max_dim must be nonnegative");
}

std::size_t SimplicialComplex::count(int k) const {
  if (k < 0 || k > built_dim()) return 0;
  return radii_[k].size();
}

std::span<const std::uint32_t> SimplicialComplex::simplex(int k, std::size_t i) const {
  const std::size_t width = static_cast<std::size_t>(k) + 1;
  return {flat_[k].data() + i * width, width};
}

void SimplicialComplex::add(std::span<const std::uint32_t> vertices, double radius) {
  const int k = static_cast<int>(vertices.size()) - 1;
  if (k < 0 || k > built_dim()) throw PreconditionError("simplex dimension outside the complex");
  flat_[k].insert(flat_[k].end(), vertices.begin(), vertices.end());
  radii_[k].push_back(radius);
}

std::int64_t SimplicialComplex::find(std::span<const std::uint32_t> vertices) const {
  const int k = static_cast<int>(vertices.size()) - 1;
  if (k < 0 || k > built_dim()) return -1;
  std::size_t lo = 0, hi = count(k);
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto s = simplex(k, mid);
    if (std::lexicographical_compare(s.begin(), s.end(), vertices.begin(), vertices.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < count(k)) {
    const auto s = simplex(k, lo);
    if (std::equal(s.begin(), s.end(), vertices.begin())) return static_cast<std::int64_t>(lo);
  }
  return -1;
}

void SimplicialComplex::set_centers(int k, std::vector<double> centers) {
  if (k < 0 || k > built_dim()) throw PreconditionError("centre dimension outside the complex");
  if (centers_.size() < flat_.size()) {
    centers_.resize(flat_.size());
    has_centers_.resize(flat_.size(), 0);
  }
  centers_[k] = std::move(centers);
  has_centers_[k] = 1;
}

bool SimplicialComplex::face_closed() const {
  std::array<std::uint32_t, 64> facet{};
  for (int k = 1; k <= built_dim(); ++k) {
    for (std::size_t i = 0; i < count(k); ++i) {
      const auto s = simplex(k, i);
      for (int drop = 0; drop <= k; ++drop) {
        int w = 0;
        for (int j = 0; j <= k; ++j)
          if (j != drop) facet[w++] = s[j];
        if (find({facet.data(), static_cast<std::size_t>(k)}) < 0) return false;
      }
    }
  }
  return true;
}

int default_cech_dim(const ManifoldSpec& spec) { return spec.intrinsic_dim + 1; }

void unwrap_points(const PointCloud& cloud, const std::uint32_t* ids, int count, double* out) {
  const int d = cloud.dim();
  const Metric metric = cloud.metric();
  const double* base = cloud.coords.data() + static_cast<std::size_t>(ids[0]) * d;
  std::copy_n(base, d, out);
  for (int i = 1; i < count; ++i) {
    const double* p = cloud.coords.data() + static_cast<std::size_t>(ids[i]) * d;
    for (int a = 0; a < d; ++a) out[i * d + a] = base[a] + metric.wrap(p[a] - base[a]);
  }
}

namespace {

// Sorted intersection of `a` with the sorted list `b`, in place into a.
void intersect_into(std::vector<std::uint32_t>& a, std::span<const std::uint32_t> b) {
  std::size_t w = 0, j = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    while (j < b.size() && b[j] < a[i]) ++j;
    if (j == b.size()) break;
    if (b[j] == a[i]) a[w++] = a[i];
  }
  a.resize(w);
}

}  // namespace

SimplicialComplex build_cech(const PointCloud& cloud, double eps, int max_dim, const CechOptions& options) {
  if (!(eps > 0.0)) throw PreconditionError("build_cech needs eps > 0");
  if (max_dim < 0) throw PreconditionError("build_cech needs max_dim >= 0");
  if (max_dim > 63) throw PreconditionError("build_cech supports max_dim <= 63");
  const Metric metric = cloud.metric();
  if (metric.periodic() && !(eps < metric.period / 4.0))
    throw MetricRangeError("periodic metric requires eps < side/4");

  const int d = cloud.dim();
  const std::size_t n = cloud.size();
  SimplicialComplex complex(max_dim, eps, cloud.spec.describe() + "#seed=" + std::to_string(cloud.seed));

  for (std::uint32_t i = 0; i < n; ++i) complex.add(std::span<const std::uint32_t>(&i, 1), 0.0);
  if (options.keep_centers && max_dim == 0) complex.set_centers(0, cloud.coords);
  if (max_dim == 0 || n == 0) return complex;

  // Forward adjacency: neighbours j > i within 2 eps, sorted (CSR).
  const SpatialGrid grid(cloud, 2.0 * eps);
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::uint32_t> adjacency;
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = grid.neighbors_within(cloud.coords.data() + i * d, 2.0 * eps);
    for (std::uint32_t j : nb)
      if (j > i) adjacency.push_back(j);
    offsets[i + 1] = adjacency.size();
  }
  auto forward = [&](std::uint32_t v) {
    return std::span<const std::uint32_t>(adjacency.data() + offsets[v], offsets[v + 1] - offsets[v]);
  };

  // Ball centres of the previous level, unwrapped around each simplex's
  // first vertex.
  std::vector<double> centers, next_centers;
  std::array<std::uint32_t, 64> ids{};
  std::vector<double> buffer(static_cast<std::size_t>(64) * d);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t j : forward(static_cast<std::uint32_t>(i))) {
      ids[0] = static_cast<std::uint32_t>(i);
      ids[1] = j;
      unwrap_points(cloud, ids.data(), 2, buffer.data());
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double t = buffer[d + a] - buffer[a];
        r2 += t * t;
      }
      const double radius = 0.5 * std::sqrt(r2);
      if (radius > eps) continue;
      complex.add({ids.data(), 2}, radius);
      if (max_dim > 1 || options.keep_centers)
        for (int a = 0; a < d; ++a) centers.push_back(0.5 * (buffer[a] + buffer[d + a]));
    }
  }
  if (max_dim == 1 && options.keep_centers) complex.set_centers(1, std::move(centers));

  std::vector<std::uint32_t> candidates;
  std::vector<double> point_w(d);
  for (int k = 2; k <= max_dim; ++k) {
    next_centers.clear();
    const std::size_t parents = complex.count(k - 1);
    for (std::size_t s = 0; s < parents; ++s) {
      const auto face = complex.simplex(k - 1, s);
      const double face_radius = complex.radius(k - 1, s);
      const double* face_center = centers.data() + s * d;
      const auto last = forward(face.back());
      candidates.assign(last.begin(), last.end());
      for (int v = 0; v < k - 1 && !candidates.empty(); ++v) intersect_into(candidates, forward(face[v]));
      if (candidates.empty()) continue;

      std::copy(face.begin(), face.end(), ids.begin());
      const double* base = cloud.coords.data() + static_cast<std::size_t>(face[0]) * d;
      for (std::uint32_t w : candidates) {
        const double* pw = cloud.coords.data() + static_cast<std::size_t>(w) * d;
        double dist2 = 0.0;
        for (int a = 0; a < d; ++a) {
          point_w[a] = base[a] + metric.wrap(pw[a] - base[a]);
          const double t = point_w[a] - face_center[a];
          dist2 += t * t;
        }
        ids[k] = w;
        double radius;
        std::array<double, kMaxDim> center{};
        if (dist2 <= face_radius * face_radius) {
          radius = face_radius;
          std::copy_n(face_center, d, center.begin());
        } else {
          unwrap_points(cloud, ids.data(), k + 1, buffer.data());
          radius = geometry::min_enclosing_radius(buffer.data(), k + 1, d, options.tol, center.data());
        }
        if (radius > eps) continue;
        complex.add({ids.data(), static_cast<std::size_t>(k + 1)}, radius);
        if (k < max_dim || options.keep_centers) next_centers.insert(next_centers.end(), center.begin(), center.begin() + d);
      }
    }
    centers.swap(next_centers);
  }
  if (max_dim >= 2 && options.keep_centers) complex.set_centers(max_dim, std::move(centers));
  return complex;
}

std::vector<std::size_t> face_counts(const SimplicialComplex& complex) {
  std::vector<std::size_t> out;
  for (int k = 0; k <= complex.built_dim(); ++k) out.push_back(complex.count(k));
  return out;
}

void write_complex_jsonl(std::ostream& os, const SimplicialComplex& complex) {
  for (int k = 0; k <= complex.built_dim(); ++k) {
    for (std::size_t i = 0; i < complex.count(k); ++i) {
      const auto s = complex.simplex(k, i);
      nlohmann::json rec{{"dim", k}, {"vertices", std::vector<std::uint32_t>(s.begin(), s.end())}};
      os << rec.dump() << '\n';
    }
  }
}

SimplicialComplex read_complex_jsonl(std::istream& is) {
  std::vector<std::vector<std::uint32_t>> simplices;
  int top = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto rec = nlohmann::json::parse(line);
    if (rec.contains("meta")) continue;
    auto v = rec.at("vertices").get<std::vector<std::uint32_t>>();
    if (static_cast<int>(v.size()) - 1 != rec.at("dim").get<int>())
      throw PreconditionError("simplex record dimension does not match its vertex count");
    if (!std::is_sorted(v.begin(), v.end())) throw PreconditionError("simplex vertices must be sorted");
    top = std::max(top, static_cast<int>(v.size()) - 1);
    simplices.push_back(std::move(v));
  }
  std::stable_sort(simplices.begin(), simplices.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  SimplicialComplex complex(top);
  for (const auto& s : simplices) complex.add(s, 0.0);
  return complex;
}

}  // namespace rgc
