#pragma once

// Plain-text regime configuration, one `key = value` per line, `#` starts a
// comment. The first setting must be `format_version = 1`.
//
//   manifold       flat_torus | circle | sphere2 | embedded_torus
//   m, side        flat torus dimension and side length
//   radius         circle / sphere radius
//   major, minor   embedded torus radii
//   density        uniform
//   n_values       comma-separated sample sizes
//   rule           power_law | lambda | coverage
//   c, alpha       power law r = c n^-alpha
//   lambda         critical rule r = (lambda / n)^(1/m)
//   C              coverage rule r = (C log n / n)^(1/m)
//   C_units        C as a multiple of 1 / (omega_m f_min); overrides C
//   radius_scale   multiplies the radius (default 1)
//   replicates, base_seed, max_index
//   sample_mode    poisson | binomial
//   compute_critical, compute_betti, coverage_probe, timing   true | false

#include <iosfwd>
#include <string>

#include "rgc/experiments.hpp"

namespace rgc::config {

inline constexpr int kFormatVersion = 1;

experiments::RegimeConfig parse(std::istream& is);
experiments::RegimeConfig parse_file(const std::string& path);

// Canonical text; parse(write(c)) reproduces c.
std::string write(const experiments::RegimeConfig& config);

// Hex FNV-1a of the canonical text.
std::string hash(const experiments::RegimeConfig& config);

}  // namespace rgc::config
