#include "rgc/kernels.hpp"

#include <cmath>
#include <limits>

namespace rgc::kernels {
namespace {

inline double wrap(double delta, double period) {
  return period > 0.0 ? delta - period * std::nearbyint(delta / period) : delta;
}

inline double sq_distance_at(const SoaBlock& b, std::size_t i, const double* q, double period) {
  double acc = 0.0;
  for (int a = 0; a < b.dim; ++a) {
    const double d = wrap(b.data[a * b.stride + i] - q[a], period);
    acc += d * d;
  }
  return acc;
}

void sq_distances(const SoaBlock& b, const double* q, double period, double* out) {
  for (std::size_t i = 0; i < b.count; ++i) out[i] = sq_distance_at(b, i, q, period);
}

double min_sq_distance(const SoaBlock& b, const double* q, double period) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.count; ++i) {
    const double d = sq_distance_at(b, i, q, period);
    if (d < best) best = d;
  }
  return best;
}

BallCounts classify_ball(const SoaBlock& b, const double* q, double inner_sq, double outer_sq,
                         double period) {
  BallCounts c;
  for (std::size_t i = 0; i < b.count; ++i) {
    const double d = sq_distance_at(b, i, q, period);
    if (d < inner_sq)
      ++c.inside;
    else if (d <= outer_sq)
      ++c.band;
  }
  return c;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &sq_distances, &min_sq_distance, &classify_ball};
  return table;
}

}  // namespace rgc::kernels
