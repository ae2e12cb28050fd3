#pragma once

// Data-parallel distance kernels.
//
// Every kernel has a scalar reference implementation and, when compiled in,
// an AVX2 variant. The variant is chosen once at startup from the CPU feature
// set and can be overridden with the RGC_KERNELS environment variable
// ("scalar" or "avx2"). Both variants produce bit-identical results; the unit
// tests hold them to that.

#include <cstddef>
#include <string_view>
#include <vector>

namespace rgc::kernels {

// Structure-of-arrays block of points: coordinate `a` of point `i` lives at
// data[a * stride + i], for i in [0, count).
struct SoaBlock {
  const double* data = nullptr;
  std::size_t stride = 0;
  std::size_t count = 0;
  int dim = 0;
};

struct BallCounts {
  std::size_t inside = 0;  // squared distance < inner_sq
  std::size_t band = 0;    // inner_sq <= squared distance <= outer_sq
};

// `period` > 0 selects the minimum-image convention on a flat torus with that
// side length; 0 means plain Euclidean differences.
struct KernelTable {
  const char* name;
  void (*sq_distances)(const SoaBlock& block, const double* query, double period, double* out);
  double (*min_sq_distance)(const SoaBlock& block, const double* query, double period);
  BallCounts (*classify_ball)(const SoaBlock& block, const double* query, double inner_sq,
                              double outer_sq, double period);
};

const KernelTable& scalar_table();

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table();

// Table used by the library. Resolved on first use.
const KernelTable& active();

// Forces a variant by name. Returns false if it is unavailable.
bool select(std::string_view name);

std::vector<std::string_view> available();

// Row-major (n x dim) to SoA with stride n.
std::vector<double> to_soa(const std::vector<double>& row_major, std::size_t n, int dim);

}  // namespace rgc::kernels
