#include "rgc/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "rgc/critical_points.hpp"
#include "rgc/homology.hpp"
#include "rgc/spatial_grid.hpp"

namespace rgc::experiments {

double RadiusRule::radius(std::size_t n, int m) const {
  if (n == 0) throw PreconditionError("radius rule needs n >= 1");
  if (m < 1) throw PreconditionError("radius rule needs m >= 1");
  const double nn = static_cast<double>(n);
  switch (kind) {
    case RuleKind::kPowerLaw:
      return c * std::pow(nn, -alpha);
    case RuleKind::kLambda:
      return std::pow(lambda / nn, 1.0 / m);
    case RuleKind::kCoverage:
      return std::pow(coverage * std::log(nn) / nn, 1.0 / m);
  }
  return 0.0;
}

Regime RadiusRule::regime(int m) const {
  switch (kind) {
    case RuleKind::kPowerLaw: {
      const double critical = 1.0 / m;
      if (std::abs(alpha - critical) <= 1e-12) return Regime::kCritical;
      return alpha > critical ? Regime::kSubcritical : Regime::kSupercritical;
    }
    case RuleKind::kLambda:
      return Regime::kCritical;
    case RuleKind::kCoverage:
      return Regime::kSupercritical;
  }
  return Regime::kCritical;
}

std::string RadiusRule::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case RuleKind::kPowerLaw:
      os << "power_law(c=" << c << ",alpha=" << alpha << ")";
      break;
    case RuleKind::kLambda:
      os << "lambda(" << lambda << ")";
      break;
    case RuleKind::kCoverage:
      os << "coverage(C=" << coverage << ")";
      break;
  }
  return os.str();
}

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::kSubcritical:
      return "subcritical";
    case Regime::kCritical:
      return "critical";
    case Regime::kSupercritical:
      return "supercritical";
  }
  return "?";
}

void RegimeConfig::validate() const {
  manifold.validate();
  density.validate();
  if (!(radius_scale > 0.0)) throw PreconditionError("radius_scale must be positive");
  if (rule.kind == RuleKind::kPowerLaw && !(rule.c > 0.0 && rule.alpha > 0.0))
    throw PreconditionError("power law needs c > 0 and alpha > 0");
  if (rule.kind == RuleKind::kLambda && !(rule.lambda > 0.0)) throw PreconditionError("lambda must be positive");
  if (rule.kind == RuleKind::kCoverage && !(rule.coverage > 0.0)) throw PreconditionError("C must be positive");
  const int mi = effective_max_index();
  if (mi < 1 || mi > manifold.ambient_dim) throw PreconditionError("max_index must lie in 1..ambient dimension");
  const Metric metric = manifold.metric();
  for (std::size_t n : n_values) {
    if (n < 2) throw PreconditionError("n values must be at least 2");
    if (metric.periodic() && !(radius(n) < metric.period / 4.0))
      throw MetricRangeError("radius rule gives r >= side/4 at n = " + std::to_string(n));
  }
}

std::uint64_t record_seed(std::uint64_t base_seed, std::size_t n, std::size_t rep) {
  return sampling::derive_seed(sampling::derive_seed(base_seed, n), rep);
}

namespace {

ExperimentRecord run_one(const RegimeConfig& config, std::size_t n, std::size_t rep) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentRecord rec;
  rec.n = n;
  rec.replicate = rep;
  rec.m = config.manifold.intrinsic_dim;
  rec.r = config.radius(n);
  rec.seed = record_seed(config.base_seed, n, rep);
  rec.regime = config.rule.regime(rec.m);
  try {
    const SampleMode mode{config.sample_kind, n};
    const PointCloud cloud = sampling::sample(config.manifold, config.density, mode, rec.seed);
    rec.cloud_size = cloud.size();
    if (config.compute_critical) {
      rec.counts = critical::critical_counts(cloud, rec.r, config.effective_max_index()).counts;
      rec.chi_morse = critical::morse_euler(critical::CriticalCounts{rec.r, rec.counts});
    }
    if (config.compute_betti) {
      // Homology of a union of balls in a space of dimension d vanishes above
      // d; above m it also vanishes for the embedded surfaces used here.
      rec.betti = homology::cech_betti(cloud, rec.r, rec.m);
      rec.chi_cech = homology::alternating_sum(rec.betti);
    }
    if (config.probe_coverage && config.rule.kind == RuleKind::kCoverage)
      rec.covered = coverage_probe(cloud, rec.r, rec.r / 4.0);
    if (rec.chi_cech && rec.chi_morse && *rec.chi_cech != *rec.chi_morse)
      rec.error = "morse-euler mismatch";
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  if (config.record_timing)
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

std::vector<ExperimentRecord> run_regime(const RegimeConfig& config) {
  config.validate();
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t n : config.n_values)
    for (std::size_t rep = 0; rep < config.replicates; ++rep) tasks.emplace_back(n, rep);
  std::vector<ExperimentRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();)
      records[i] = run_one(config, tasks[i].first, tasks[i].second);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(tasks.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return records;
}

std::size_t euler_mismatches(const std::vector<ExperimentRecord>& records) {
  std::size_t bad = 0;
  for (const auto& r : records)
    if (r.chi_cech && r.chi_morse && *r.chi_cech != *r.chi_morse) ++bad;
  return bad;
}

NormKind parse_normalization(const std::string& name) {
  if (name == "none") return NormKind::kNone;
  if (name == "per_n") return NormKind::kPerN;
  if (name == "subcritical_crit") return NormKind::kSubcriticalCrit;
  if (name == "subcritical_betti") return NormKind::kSubcriticalBetti;
  throw PreconditionError("unknown normalization '" + name + "'");
}

namespace {

std::optional<double> statistic_of(const ExperimentRecord& r, Statistic s, int k) {
  switch (s) {
    case Statistic::kCritical:
      if (k < 0 || static_cast<std::size_t>(k) >= r.counts.size()) return std::nullopt;
      return static_cast<double>(r.counts[k]);
    case Statistic::kBetti:
      if (k < 0 || static_cast<std::size_t>(k) >= r.betti.size()) return std::nullopt;
      return static_cast<double>(r.betti[k]);
    case Statistic::kEuler:
      if (r.chi_morse) return static_cast<double>(*r.chi_morse);
      if (r.chi_cech) return static_cast<double>(*r.chi_cech);
      return std::nullopt;
  }
  return std::nullopt;
}

std::string statistic_label(Statistic s, int k) {
  switch (s) {
    case Statistic::kCritical:
      return "N_" + std::to_string(k);
    case Statistic::kBetti:
      return "beta_" + std::to_string(k);
    case Statistic::kEuler:
      return "chi";
  }
  return "?";
}

}  // namespace

std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records, Statistic statistic, int k,
                                  NormKind normalization) {
  std::vector<SummaryRow> rows;
  for (const auto& rec : records) {
    if (normalization == NormKind::kSubcriticalCrit || normalization == NormKind::kSubcriticalBetti) {
      if (rec.regime != Regime::kSubcritical)
        throw PreconditionError("sub-critical normalisation applied to " + regime_name(rec.regime) + " records");
      if ((normalization == NormKind::kSubcriticalCrit) != (statistic == Statistic::kCritical) ||
          statistic == Statistic::kEuler)
        throw PreconditionError("normalisation does not match the statistic");
    }
    if (normalization == NormKind::kPerN && rec.regime == Regime::kSubcritical && !(statistic == Statistic::kCritical && k == 0))
      throw PreconditionError("per_n normalisation of this statistic needs critical or super-critical records");
  }

  std::vector<std::size_t> ns;
  for (const auto& rec : records)
    if (std::find(ns.begin(), ns.end(), rec.n) == ns.end()) ns.push_back(rec.n);
  for (std::size_t n : ns) {
    SummaryRow row;
    row.n = n;
    row.statistic = statistic_label(statistic, k);
    std::vector<double> raw, norm;
    for (const auto& rec : records) {
      if (rec.n != n) continue;
      const auto v = rec.ok() ? statistic_of(rec, statistic, k) : std::nullopt;
      if (!v) {
        ++row.failures;
        continue;
      }
      row.r = rec.r;
      const double nn = static_cast<double>(n);
      double scale = 1.0;
      switch (normalization) {
        case NormKind::kNone:
          break;
        case NormKind::kPerN:
          scale = nn;
          break;
        case NormKind::kSubcriticalCrit:
          scale = std::pow(nn, k + 1) * std::pow(rec.r, rec.m * k);
          break;
        case NormKind::kSubcriticalBetti:
          scale = std::pow(nn, k + 2) * std::pow(rec.r, rec.m * (k + 1));
          break;
      }
      raw.push_back(*v);
      norm.push_back(*v / scale);
    }
    row.count = norm.size();
    if (row.count == 0) {
      rows.push_back(row);
      continue;
    }
    auto moments = [](const std::vector<double>& xs, double& mean, double& var) {
      mean = 0.0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      var = 0.0;
      for (double x : xs) var += (x - mean) * (x - mean);
      var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
    };
    moments(norm, row.mean, row.variance);
    moments(raw, row.raw_mean, row.raw_variance);
    row.se = std::sqrt(row.variance / static_cast<double>(row.count));
    row.dispersion = row.raw_mean != 0.0 ? row.raw_variance / row.raw_mean : 0.0;
    if (row.variance > 0.0) {
      double m3 = 0.0, m4 = 0.0;
      const double sd = std::sqrt(row.variance);
      for (double x : norm) {
        const double z = (x - row.mean) / sd;
        m3 += z * z * z;
        m4 += z * z * z * z;
      }
      row.skewness = m3 / static_cast<double>(row.count);
      row.excess_kurtosis = m4 / static_cast<double>(row.count) - 3.0;
    }
    rows.push_back(row);
  }
  return rows;
}

bool coverage_probe(const PointCloud& cloud, double r, double eps_net) {
  if (!(eps_net > 0.0) || !(eps_net < r)) throw PreconditionError("coverage probe needs 0 < eps_net < r");
  if (cloud.empty()) return false;
  const double reach = r - eps_net;
  const SpatialGrid grid(cloud, reach);
  for (const Point& s : sampling::coverage_net(cloud.spec, eps_net))
    if (!grid.any_within(s.data(), reach)) return false;
  return true;
}

double RecoveryTable::success_rate() const {
  if (rows.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& r : rows) ok += r.success ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(rows.size());
}

RecoveryTable recovery_experiment(const RegimeConfig& config) {
  if (config.rule.kind != RuleKind::kCoverage) throw PreconditionError("recovery needs a coverage radius rule");
  RegimeConfig run = config;
  run.compute_critical = false;
  run.compute_betti = true;
  run.probe_coverage = false;
  RecoveryTable table;
  table.expected = config.manifold.betti();
  for (const auto& rec : run_regime(run)) {
    RecoveryRow row{rec.n, rec.replicate, rec.seed, rec.r, rec.betti, false, rec.error};
    if (rec.ok() && rec.betti.size() == table.expected.size()) {
      row.success = true;
      for (std::size_t k = 0; k < rec.betti.size(); ++k)
        row.success &= static_cast<int>(rec.betti[k]) == table.expected[k];
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace rgc::experiments
