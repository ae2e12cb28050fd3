#pragma once

// Geometric predicates and constructions in ambient R^d: circumspheres of
// affinely independent subsets, open convex hull membership, smallest
// enclosing balls and point-to-cloud distances.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rgc/manifold.hpp"

namespace rgc::geometry {

class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Circumsphere {
  Point center;
  double radius = 0.0;
  std::vector<std::size_t> defining_subset;
};

struct Ball {
  Point center;
  double radius = 0.0;
};

// Fixed-capacity result of the circumsphere solve. barycentric[i] is the
// weight of input point i in the representation of the centre.
struct SphereFit {
  std::array<double, kMaxDim> center{};
  double radius = 0.0;
  std::array<double, kMaxDim + 1> barycentric{};
};

// Circumsphere of `count` points (row-major, `dim` coordinates each) within
// their affine hull. Returns nullopt when the points are not affinely
// independent at tolerance `tol` (pivot ratio of the QR factorisation of the
// difference vectors below tol) or when the fitted sphere misses a defining
// point by more than tol * (1 + radius).
std::optional<SphereFit> fit_circumsphere(const double* pts, int count, int dim, double tol);

// Throws DegenerateError when the points are not in general position.
Circumsphere circumsphere(std::span<const Point> points, double tol = kDefaultTol);

// True iff every barycentric coordinate of `center` with respect to `points`
// exceeds tol. Throws DegenerateError for affinely dependent points.
bool in_open_convex_hull(const Point& center, std::span<const Point> points,
                         double tol = kDefaultTol);

// Radius of the smallest ball enclosing `count` row-major points. Writes the
// centre to `center` when non-null. Processes points in the given order.
double min_enclosing_radius(const double* pts, int count, int dim, double tol,
                            double* center = nullptr);

// Smallest enclosing ball. A non-zero seed shuffles the processing order
// deterministically; zero keeps the input order.
Ball min_enclosing_ball(std::span<const Point> points, double tol = kDefaultTol,
                        std::uint64_t shuffle_seed = 0);

// min over cloud points of the metric distance to x.
double distance_to_set(std::span<const double> x, const PointCloud& cloud);

}  // namespace rgc::geometry
