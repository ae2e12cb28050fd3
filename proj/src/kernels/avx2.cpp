// AVX2 variants of the distance kernels. Compiled with -mavx2 and without FMA
// contraction; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "rgc/kernels.hpp"

namespace rgc::kernels {
namespace detail {

namespace {

inline double wrap1(double delta, double period) {
  return period > 0.0 ? delta - period * std::nearbyint(delta / period) : delta;
}

inline double tail_sq_distance(const SoaBlock& b, std::size_t i, const double* q, double period) {
  double acc = 0.0;
  for (int a = 0; a < b.dim; ++a) {
    const double d = wrap1(b.data[a * b.stride + i] - q[a], period);
    acc += d * d;
  }
  return acc;
}

// Squared distances of points [i, i+4) to q. Accumulates axis by axis in the
// same order as the scalar kernel.
inline __m256d sq_distance4(const SoaBlock& b, std::size_t i, const double* q, double period) {
  __m256d acc = _mm256_setzero_pd();
  if (period > 0.0) {
    const __m256d per = _mm256_set1_pd(period);
    for (int a = 0; a < b.dim; ++a) {
      __m256d d = _mm256_sub_pd(_mm256_loadu_pd(b.data + a * b.stride + i), _mm256_set1_pd(q[a]));
      const __m256d k = _mm256_round_pd(_mm256_div_pd(d, per),
                                        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
      d = _mm256_sub_pd(d, _mm256_mul_pd(per, k));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
  } else {
    for (int a = 0; a < b.dim; ++a) {
      const __m256d d =
          _mm256_sub_pd(_mm256_loadu_pd(b.data + a * b.stride + i), _mm256_set1_pd(q[a]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
  }
  return acc;
}

void sq_distances(const SoaBlock& b, const double* q, double period, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= b.count; i += 4) _mm256_storeu_pd(out + i, sq_distance4(b, i, q, period));
  for (; i < b.count; ++i) out[i] = tail_sq_distance(b, i, q, period);
}

double min_sq_distance(const SoaBlock& b, const double* q, double period) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (b.count >= 4) {
    __m256d m = _mm256_set1_pd(best);
    for (; i + 4 <= b.count; i += 4) m = _mm256_min_pd(m, sq_distance4(b, i, q, period));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    for (double v : lanes) best = v < best ? v : best;
  }
  for (; i < b.count; ++i) {
    const double d = tail_sq_distance(b, i, q, period);
    if (d < best) best = d;
  }
  return best;
}

BallCounts classify_ball(const SoaBlock& b, const double* q, double inner_sq, double outer_sq,
                         double period) {
  BallCounts c;
  std::size_t i = 0;
  const __m256d inner = _mm256_set1_pd(inner_sq);
  const __m256d outer = _mm256_set1_pd(outer_sq);
  for (; i + 4 <= b.count; i += 4) {
    const __m256d d = sq_distance4(b, i, q, period);
    const int in_mask = _mm256_movemask_pd(_mm256_cmp_pd(d, inner, _CMP_LT_OQ));
    const int le_mask = _mm256_movemask_pd(_mm256_cmp_pd(d, outer, _CMP_LE_OQ));
    c.inside += static_cast<std::size_t>(__builtin_popcount(in_mask));
    c.band += static_cast<std::size_t>(__builtin_popcount(le_mask & ~in_mask));
  }
  for (; i < b.count; ++i) {
    const double d = tail_sq_distance(b, i, q, period);
    if (d < inner_sq)
      ++c.inside;
    else if (d <= outer_sq)
      ++c.band;
  }
  return c;
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{"avx2", &sq_distances, &min_sq_distance, &classify_ball};
  return table;
}

}  // namespace detail
}  // namespace rgc::kernels
