#pragma once

// Replicated runs over regimes of the connectivity radius: sample, count
// critical points, compute Betti numbers and both Euler characteristics,
// then normalise and summarise.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rgc/manifold.hpp"
#include "rgc/sampling.hpp"

namespace rgc::experiments {

enum class RuleKind { kPowerLaw, kLambda, kCoverage };
enum class Regime { kSubcritical, kCritical, kSupercritical };

// r = c n^-alpha, r = (lambda / n)^(1/m) or r = (C log n / n)^(1/m).
struct RadiusRule {
  RuleKind kind = RuleKind::kLambda;
  double c = 1.0;
  double alpha = 1.0;
  double lambda = 1.0;
  double coverage = 1.0;  // C

  static RadiusRule power_law(double c, double alpha) { return {RuleKind::kPowerLaw, c, alpha, 1.0, 1.0}; }
  static RadiusRule critical(double lambda) { return {RuleKind::kLambda, 1.0, 1.0, lambda, 1.0}; }
  static RadiusRule coverage_rule(double C) { return {RuleKind::kCoverage, 1.0, 1.0, 1.0, C}; }

  double radius(std::size_t n, int m) const;
  Regime regime(int m) const;
  std::string describe() const;
};

std::string regime_name(Regime regime);

struct RegimeConfig {
  ManifoldSpec manifold = ManifoldSpec::flat_torus(2, 1.0);
  sampling::DensitySpec density = sampling::DensitySpec::uniform(ManifoldSpec::flat_torus(2, 1.0));
  std::vector<std::size_t> n_values;
  RadiusRule rule;
  double radius_scale = 1.0;  // multiplies the rule's radius (diagnostics)
  std::size_t replicates = 0;
  std::uint64_t base_seed = 0;
  int max_index = -1;  // -1: intrinsic dimension
  SampleKind sample_kind = SampleKind::kPoisson;
  bool compute_critical = true;
  bool compute_betti = true;
  bool probe_coverage = true;  // only under the coverage rule
  bool record_timing = false;
  unsigned jobs = 1;

  double radius(std::size_t n) const { return radius_scale * rule.radius(n, manifold.intrinsic_dim); }
  int effective_max_index() const { return max_index < 0 ? manifold.intrinsic_dim : max_index; }
  void validate() const;
};

struct ExperimentRecord {
  std::size_t n = 0;
  std::size_t replicate = 0;
  double r = 0.0;
  std::uint64_t seed = 0;
  int m = 0;
  Regime regime = Regime::kCritical;
  std::size_t cloud_size = 0;
  std::vector<std::size_t> counts;  // N_0..N_max_index, empty if not computed
  std::vector<std::size_t> betti;   // beta_0..beta_m, empty if not computed
  std::optional<std::int64_t> chi_cech, chi_morse;
  std::optional<bool> covered;
  std::optional<double> wall_time;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

// Seed of replicate `rep` at sample size n.
std::uint64_t record_seed(std::uint64_t base_seed, std::size_t n, std::size_t rep);

// One record per (n, replicate), ordered by n_values then replicate.
std::vector<ExperimentRecord> run_regime(const RegimeConfig& config);

// Records whose Čech and Morse Euler characteristics disagree.
std::size_t euler_mismatches(const std::vector<ExperimentRecord>& records);

enum class Statistic { kCritical, kBetti, kEuler };
enum class NormKind { kNone, kPerN, kSubcriticalCrit, kSubcriticalBetti };

struct SummaryRow {
  std::size_t n = 0;
  double r = 0.0;
  std::string statistic;
  std::size_t count = 0;
  double mean = 0.0;            // of the normalised statistic
  double variance = 0.0;        // sample variance of the normalised statistic
  double se = 0.0;              // standard error of the mean
  double raw_mean = 0.0;        // of the unnormalised statistic
  double raw_variance = 0.0;
  double dispersion = 0.0;      // raw_variance / raw_mean
  double skewness = 0.0;        // of the standardised statistic
  double excess_kurtosis = 0.0;
  std::size_t failures = 0;     // records skipped for errors
};

// Groups records by n. Normalisations: per_n divides by n; subcritical_crit
// by n^{k+1} r^{mk}; subcritical_betti by n^{k+2} r^{m(k+1)}. Throws when
// the normalisation does not fit the records' regime.
std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records, Statistic statistic, int k,
                                  NormKind normalization);

NormKind parse_normalization(const std::string& name);

// Every point of an eps_net-dense net lies within r - eps_net of the cloud.
bool coverage_probe(const PointCloud& cloud, double r, double eps_net);

struct RecoveryRow {
  std::size_t n = 0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  double r = 0.0;
  std::vector<std::size_t> betti;
  bool success = false;
  std::string error;
};

struct RecoveryTable {
  std::vector<int> expected;
  std::vector<RecoveryRow> rows;
  double success_rate() const;
};

// Needs a coverage rule and a manifold with known Betti numbers.
RecoveryTable recovery_experiment(const RegimeConfig& config);

}  // namespace rgc::experiments
