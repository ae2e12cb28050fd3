#include "rgc/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rgc/kernels.hpp"

namespace rgc::geometry {
namespace {

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using SmallQR = Eigen::ColPivHouseholderQR<SmallMatrix>;

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("ambient dimension must be in [1, 8]");
}

// Difference vectors p_i - p_0 as columns.
SmallMatrix difference_matrix(const double* pts, int count, int dim) {
  SmallMatrix v(dim, count - 1);
  for (int i = 1; i < count; ++i)
    for (int a = 0; a < dim; ++a) v(a, i - 1) = pts[i * dim + a] - pts[a];
  return v;
}

bool well_conditioned(const SmallQR& qr, int k, double tol) {
  const auto& r = qr.matrixQR();
  const double first = std::abs(r(0, 0));
  if (!(first > 0.0)) return false;
  return std::abs(r(k - 1, k - 1)) >= tol * first;
}

std::vector<double> flatten(std::span<const Point> points) {
  if (points.empty()) throw PreconditionError("empty point list");
  const std::size_t dim = points.front().size();
  check_dim(static_cast<int>(dim));
  std::vector<double> flat;
  flat.reserve(points.size() * dim);
  for (const Point& p : points) {
    if (p.size() != dim) throw PreconditionError("points have inconsistent dimensions");
    for (double x : p) {
      if (!std::isfinite(x)) throw PreconditionError("non-finite coordinate");
      flat.push_back(x);
    }
  }
  return flat;
}

struct RawBall {
  std::array<double, kMaxDim> center{};
  double radius = -1.0;  // negative: empty ball
};

bool ball_contains(const RawBall& b, const double* p, int dim, double tol) {
  if (b.radius < 0.0) return false;
  double s = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double d = p[a] - b.center[a];
    s += d * d;
  }
  const double limit = b.radius + tol * (1.0 + b.radius);
  return s <= limit * limit;
}

RawBall ball_through(const double* pts, int dim, const int* support, int s, double tol) {
  RawBall b;
  if (s == 0) return b;
  std::array<double, (kMaxDim + 1) * kMaxDim> gathered{};
  for (int i = 0; i < s; ++i)
    std::copy_n(pts + support[i] * dim, dim, gathered.begin() + i * dim);
  if (auto fit = fit_circumsphere(gathered.data(), s, dim, tol)) {
    b.center = fit->center;
    b.radius = fit->radius;
    return b;
  }
  // Affinely dependent support (only reachable on degenerate input): fall
  // back to the centroid ball, which encloses the support.
  for (int i = 0; i < s; ++i)
    for (int a = 0; a < dim; ++a) b.center[a] += gathered[i * dim + a] / s;
  double r2 = 0.0;
  for (int i = 0; i < s; ++i) {
    double t = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double d = gathered[i * dim + a] - b.center[a];
      t += d * d;
    }
    r2 = std::max(r2, t);
  }
  b.radius = std::sqrt(r2);
  return b;
}

// Welzl's recursion over the first n entries of `order` with boundary set
// `support` of size s.
RawBall welzl(const double* pts, int dim, double tol, const int* order, int n, int* support, int s) {
  if (n == 0 || s == dim + 1) return ball_through(pts, dim, support, s, tol);
  const int p = order[n - 1];
  RawBall b = welzl(pts, dim, tol, order, n - 1, support, s);
  if (ball_contains(b, pts + p * dim, dim, tol)) return b;
  support[s] = p;
  return welzl(pts, dim, tol, order, n - 1, support, s + 1);
}

}  // namespace

std::optional<SphereFit> fit_circumsphere(const double* pts, int count, int dim, double tol) {
  if (count < 1 || count > dim + 1) return std::nullopt;
  SphereFit out;
  const int k = count - 1;
  if (k == 0) {
    std::copy_n(pts, dim, out.center.begin());
    out.barycentric[0] = 1.0;
    return out;
  }
  const SmallMatrix v = difference_matrix(pts, count, dim);
  const SmallQR qr(v);
  if (!well_conditioned(qr, k, tol)) return std::nullopt;

  // Centre = p_0 + V a with (V^T V) a = diag(V^T V) / 2. With V P = Q R this
  // is R^T R (P^T a) = P^T b.
  const auto& perm = qr.colsPermutation().indices();
  SmallVector rhs(k);
  for (int j = 0; j < k; ++j) rhs(j) = 0.5 * v.col(perm(j)).squaredNorm();
  const auto r = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  SmallVector w = r.transpose().solve(rhs);
  SmallVector y = r.solve(w);
  SmallVector a(k);
  for (int j = 0; j < k; ++j) a(perm(j)) = y(j);

  const SmallVector offset = v * a;
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    out.barycentric[i + 1] = a(i);
    sum += a(i);
  }
  out.barycentric[0] = 1.0 - sum;
  for (int c = 0; c < dim; ++c) out.center[c] = pts[c] + offset(c);
  out.radius = offset.norm();

  const double slack = tol * (1.0 + out.radius);
  for (int i = 1; i < count; ++i) {
    double s = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double d = pts[i * dim + c] - out.center[c];
      s += d * d;
    }
    if (std::abs(std::sqrt(s) - out.radius) > slack) return std::nullopt;
  }
  return out;
}

Circumsphere circumsphere(std::span<const Point> points, double tol) {
  const std::vector<double> flat = flatten(points);
  const int dim = static_cast<int>(points.front().size());
  const int count = static_cast<int>(points.size());
  if (count > dim + 1)
    throw PreconditionError("circumsphere needs at most d+1 points");
  auto fit = fit_circumsphere(flat.data(), count, dim, tol);
  if (!fit) throw DegenerateError("points are not in general position");
  Circumsphere out;
  out.center.assign(fit->center.begin(), fit->center.begin() + dim);
  out.radius = fit->radius;
  out.defining_subset.resize(points.size());
  std::iota(out.defining_subset.begin(), out.defining_subset.end(), std::size_t{0});
  return out;
}

bool in_open_convex_hull(const Point& center, std::span<const Point> points, double tol) {
  const std::vector<double> flat = flatten(points);
  const int dim = static_cast<int>(points.front().size());
  const int count = static_cast<int>(points.size());
  if (center.size() != static_cast<std::size_t>(dim))
    throw PreconditionError("centre dimension mismatch");
  if (count > dim + 1) throw PreconditionError("at most d+1 points");
  if (count == 1) return false;  // the open hull of a single point is empty
  const int k = count - 1;
  const SmallMatrix v = difference_matrix(flat.data(), count, dim);
  const SmallQR qr(v);
  if (!well_conditioned(qr, k, tol)) throw DegenerateError("points are not affinely independent");
  SmallVector rhs(dim);
  for (int a = 0; a < dim; ++a) rhs(a) = center[a] - flat[a];
  const SmallVector coeff = qr.solve(rhs);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    if (!(coeff(i) > tol)) return false;
    sum += coeff(i);
  }
  return 1.0 - sum > tol;
}

double min_enclosing_radius(const double* pts, int count, int dim, double tol, double* center) {
  if (count < 1) throw PreconditionError("min_enclosing_ball needs a nonempty point list");
  std::array<int, 64> small_order{};
  std::vector<int> big_order;
  int* order = small_order.data();
  if (count > 64) {
    big_order.resize(count);
    order = big_order.data();
  }
  // Welzl consumes from the back; reverse so the input order is honoured.
  for (int i = 0; i < count; ++i) order[i] = count - 1 - i;
  std::array<int, kMaxDim + 1> support{};
  const RawBall b = welzl(pts, dim, tol, order, count, support.data(), 0);
  if (center) std::copy_n(b.center.begin(), dim, center);
  return b.radius;
}

Ball min_enclosing_ball(std::span<const Point> points, double tol, std::uint64_t shuffle_seed) {
  std::vector<double> flat = flatten(points);
  const int dim = static_cast<int>(points.front().size());
  const int count = static_cast<int>(points.size());
  if (shuffle_seed != 0) {
    std::vector<int> perm(count);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(shuffle_seed);
    for (int i = count - 1; i > 0; --i) {
      std::uniform_int_distribution<int> pick(0, i);
      std::swap(perm[i], perm[pick(rng)]);
    }
    std::vector<double> shuffled(flat.size());
    for (int i = 0; i < count; ++i)
      std::copy_n(flat.begin() + perm[i] * dim, dim, shuffled.begin() + i * dim);
    flat.swap(shuffled);
  }
  Ball out;
  out.center.resize(dim);
  out.radius = min_enclosing_radius(flat.data(), count, dim, tol, out.center.data());
  return out;
}

double distance_to_set(std::span<const double> x, const PointCloud& cloud) {
  if (cloud.empty()) throw PreconditionError("distance_to_set needs a nonempty cloud");
  if (x.size() != static_cast<std::size_t>(cloud.dim()))
    throw PreconditionError("query dimension mismatch");
  const std::size_t n = cloud.size();
  const std::vector<double> soa = kernels::to_soa(cloud.coords, n, cloud.dim());
  const kernels::SoaBlock block{soa.data(), n, n, cloud.dim()};
  return std::sqrt(kernels::active().min_sq_distance(block, x.data(), cloud.metric().period));
}

}  // namespace rgc::geometry
