#pragma once

// Critical points of the distance function to a finite cloud. A subset Y of
// k+1 points generates an index-k critical point iff the centre C(Y) of its
// smallest circumsphere lies in the open convex hull of Y (CP1) and no cloud
// point lies strictly inside the ball B(C(Y), R(Y)) (CP2). Enumeration is
// bounded by R(Y) <= r (CP3).

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rgc/manifold.hpp"

namespace rgc::critical {

struct CriticalPoint {
  int k = 0;
  Point center;
  double value = 0.0;
  std::vector<std::uint32_t> generators;  // sorted cloud indices, k+1 of them
};

struct CriticalCounts {
  double r = 0.0;
  std::vector<std::size_t> counts;  // N_0 .. N_max_index
};

enum class Strategy {
  // Candidates read off local Voronoi cells: a critical centre lies on the
  // Voronoi face dual to its generators, within r of each of them.
  kVoronoi,
  // Every (k+1)-clique of the 2r neighbour graph is tested.
  kCliques,
};

struct CriticalOptions {
  double tol = kDefaultTol;
  Strategy strategy = Strategy::kVoronoi;
};

struct CriticalDiagnostics {
  std::size_t candidates = 0;  // subsets passed to the exact test
  std::size_t degenerate = 0;  // no circumsphere at tolerance
  std::size_t boundary = 0;    // extra cloud point within tolerance of the sphere
};

// Sorted by (k, value, generators). Needs r > 0, 1 <= max_index <= ambient
// dimension, and r < side/4 on the flat torus.
std::vector<CriticalPoint> enumerate_critical_points(const PointCloud& cloud, double r, int max_index,
                                                     const CriticalOptions& options = {},
                                                     CriticalDiagnostics* diagnostics = nullptr);

CriticalCounts critical_counts(const PointCloud& cloud, double r, int max_index,
                               const CriticalOptions& options = {},
                               CriticalDiagnostics* diagnostics = nullptr);

// Alternating sum of the counts.
std::int64_t morse_euler(const CriticalCounts& counts);
std::int64_t morse_euler(const PointCloud& cloud, double r, int max_index, const CriticalOptions& options = {});

// Exact CP1-CP3 test of one generator set (sorted indices). Returns false
// and bumps the tally for degenerate or boundary cases.
bool test_generators(const PointCloud& cloud, std::span<const std::uint32_t> generators, double r,
                     double tol, CriticalPoint* out = nullptr, CriticalDiagnostics* diagnostics = nullptr);

// JSON lines {"k","center","value","generators"}.
void write_critical_jsonl(std::ostream& os, const std::vector<CriticalPoint>& points);

}  // namespace rgc::critical
