// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Pass criterion numbers as arguments to run a
// subset, e.g. `acceptance 2 9`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "rgc/experiments.hpp"
#include "rgc/homology.hpp"
#include "rgc/limit_theory.hpp"

using namespace rgc;
using namespace rgc::experiments;

namespace {

const double pi = std::acos(-1.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

RegimeConfig torus3(double lambda_or_c, RuleKind kind, std::size_t n, std::uint64_t seed) {
  RegimeConfig c;
  c.manifold = ManifoldSpec::flat_torus(3, 1.0);
  c.density = sampling::DensitySpec::uniform(c.manifold);
  c.rule = kind == RuleKind::kLambda ? RadiusRule::critical(lambda_or_c) : RadiusRule::coverage_rule(lambda_or_c);
  c.n_values = {n};
  c.replicates = 20;
  c.base_seed = seed;
  c.compute_betti = false;
  c.probe_coverage = false;
  return c;
}

double mean_per_n(const std::vector<ExperimentRecord>& recs, int k, double* se) {
  const auto row = aggregate(recs, Statistic::kCritical, k, NormKind::kPerN).at(0);
  if (se) *se = row.se;
  return row.mean;
}

// 1. Morse-Euler identity on 120 random torus clouds.
Outcome morse_euler_identity() {
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<int> size(20, 200);
  std::uniform_real_distribution<double> radius(0.03, 0.15);
  const auto spec = ManifoldSpec::flat_torus(2, 1.0);
  int agree = 0, total = 120;
  for (int t = 0; t < total; ++t) {
    const auto cloud = oracle::uniform_cloud(spec, static_cast<std::size_t>(size(rng)), rng());
    double r = radius(rng);
    // Redraw r until no critical value lies within tolerance of it.
    for (;;) {
      bool near = false;
      for (const auto& p : critical::enumerate_critical_points(cloud, r * (1 + 1e-6), 2))
        near |= std::abs(p.value - r) <= 1e-6 * r;
      if (!near) break;
      r = radius(rng);
    }
    const auto chi_cech = homology::alternating_sum(homology::cech_betti(cloud, r, 2));
    agree += chi_cech == critical::morse_euler(cloud, r, 2);
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " clouds agree exactly"};
}

// 2. mean(N_k)/n against gamma_k(lambda) at n = 2000.
Outcome critical_regime() {
  bool ok = true;
  std::ostringstream os;
  for (double lambda : {0.25, 0.5, 1.0, 2.0}) {
    const auto recs = run_regime(torus3(lambda, RuleKind::kLambda, 2000, 7000 + static_cast<int>(lambda * 100)));
    os << "lambda=" << lambda << ":";
    for (int k = 1; k <= 3; ++k) {
      double se = 0;
      const double got = mean_per_n(recs, k, &se);
      const double want = limits::gamma_closed_form_m3(k, lambda);
      const bool good = std::abs(got - want) <= std::max(0.1 * want, 3 * se);
      ok &= good;
      os << " g" << k << " " << fmt("%.4f", got) << "/" << fmt("%.4f", want) << (good ? "" : "!");
    }
    os << "; ";
  }
  return {ok, os.str()};
}

// 3. Coverage-scale radius: mean(N_k)/n within 10% of gamma_k(infinity).
Outcome supercritical() {
  // n r^3 = 5 log n with r below a quarter side needs n >= 2750 or so.
  const std::size_t n = 3000;
  const auto recs = run_regime(torus3(5.0, RuleKind::kCoverage, n, 8100));
  bool ok = true;
  std::ostringstream os;
  os << "n=" << n << " r=" << fmt("%.4f", recs.at(0).r) << ":";
  const double limit[] = {0, 4.0, 3 * (1 + pi * pi / 16), 3 * pi * pi / 16};
  for (int k = 1; k <= 3; ++k) {
    const double got = mean_per_n(recs, k, nullptr);
    const bool good = std::abs(got - limit[k]) <= 0.1 * limit[k];
    ok &= good;
    os << " g" << k << " " << fmt("%.4f", got) << "/" << fmt("%.4f", limit[k]) << (good ? "" : "!");
  }
  return {ok, os.str()};
}

// 4. mean(chi)/n against 1 - gamma_1 + gamma_2 - gamma_3 within 3 SE.
Outcome euler_curve() {
  const std::vector<double> grid{0.1, 0.3, 0.6, 1.0, 1.5, 2.5};
  const auto curve = limits::euler_limit_curve_m3(grid);
  bool ok = true;
  std::ostringstream os;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto config = torus3(grid[i], RuleKind::kLambda, 1000, 9000 + i);
    const auto row = aggregate(run_regime(config), Statistic::kEuler, 0, NormKind::kPerN).at(0);
    const bool good = std::abs(row.mean - curve[i].value) <= 3 * row.se;
    ok &= good;
    os << grid[i] << ": " << fmt("%.4f", row.mean) << "/" << fmt("%.4f", curve[i].value) << " (se "
       << fmt("%.4f", row.se) << ")" << (good ? "" : "!") << "; ";
  }
  return {ok, os.str()};
}

// 5. Sub-critical Poisson limit for N_1 on the 2-torus.
Outcome subcritical_poisson() {
  const auto mu = limits::mu_c_estimate(2, 1, 1000000, 5151);
  const double alpha = 2.0 / mu.value;
  const std::size_t n = 1000;
  RegimeConfig c;
  c.manifold = ManifoldSpec::flat_torus(2, 1.0);
  c.density = sampling::DensitySpec::uniform(c.manifold);
  // n^2 r^2 = alpha
  c.rule = RadiusRule::power_law(std::sqrt(alpha), 1.0);
  c.n_values = {n};
  c.replicates = 200;
  c.base_seed = 5252;
  c.compute_betti = false;
  c.max_index = 1;
  const auto row = aggregate(run_regime(c), Statistic::kCritical, 1, NormKind::kNone).at(0);
  const double target = alpha * mu.value;
  const bool mean_ok = std::abs(row.raw_mean - target) <= 0.15 * target;
  const bool disp_ok = row.dispersion >= 0.85 && row.dispersion <= 1.15;
  std::ostringstream os;
  os << "mu_1^c=" << fmt("%.4f", mu.value) << " alpha=" << fmt("%.4f", alpha) << " mean N_1=" << fmt("%.3f", row.raw_mean)
     << "/" << fmt("%.3f", target) << (mean_ok ? "" : "!") << " var/mean=" << fmt("%.3f", row.dispersion)
     << (disp_ok ? "" : "!");
  return {mean_ok && disp_ok, os.str()};
}

// 6. Betti recovery on the embedded torus and the sphere.
Outcome betti_recovery() {
  bool ok = true;
  std::ostringstream os;
  for (const auto& spec : {ManifoldSpec::embedded_torus(2.0, 1.0), ManifoldSpec::sphere2(1.0)}) {
    RegimeConfig c;
    c.manifold = spec;
    c.density = sampling::DensitySpec::uniform(spec);
    c.rule = RadiusRule::coverage_rule(2.5 / (limits::omega(2) * c.density.f_min));
    c.n_values = {3000};
    c.replicates = 20;
    c.base_seed = 6000 + static_cast<int>(spec.kind);
    const auto table = recovery_experiment(c);
    std::size_t hits = 0;
    for (const auto& row : table.rows) hits += row.success;
    ok &= hits >= 18;
    os << spec.kind_name() << " r=" << fmt("%.4f", table.rows.at(0).r) << " " << hits << "/20" << (hits >= 18 ? "" : "!")
       << "; ";
  }
  return {ok, os.str()};
}

// 7. Dust regime: N_0 > N_1 > N_2 and beta_0 > 10 beta_1.
Outcome dust_ordering() {
  RegimeConfig c;
  c.manifold = ManifoldSpec::flat_torus(2, 1.0);
  c.density = sampling::DensitySpec::uniform(c.manifold);
  c.rule = RadiusRule::power_law(1.0, 0.7);
  c.n_values = {5000};
  c.replicates = 20;
  c.base_seed = 7070;
  const auto recs = run_regime(c);
  auto mean = [&](Statistic s, int k) { return aggregate(recs, s, k, NormKind::kNone).at(0).mean; };
  const double n0 = mean(Statistic::kCritical, 0), n1 = mean(Statistic::kCritical, 1), n2 = mean(Statistic::kCritical, 2);
  const double b0 = mean(Statistic::kBetti, 0), b1 = mean(Statistic::kBetti, 1);
  std::ostringstream os;
  os << "N=(" << n0 << ", " << n1 << ", " << n2 << ") beta=(" << b0 << ", " << b1 << ") euler mismatches "
     << euler_mismatches(recs);
  return {n0 > n1 && n1 > n2 && b0 > 10 * b1 && euler_mismatches(recs) == 0, os.str()};
}

// 8. Grid-accelerated enumeration against exhaustive enumeration.
Outcome oracle_equivalence() {
  const std::vector<ManifoldSpec> specs{ManifoldSpec::flat_torus(2, 1.0), ManifoldSpec::flat_torus(3, 1.0),
                                        ManifoldSpec::sphere2(1.0), ManifoldSpec::embedded_torus(2.0, 1.0),
                                        ManifoldSpec::circle(1.0)};
  std::mt19937_64 rng(8888);
  std::uniform_int_distribution<int> size(3, 12);
  int cech_ok = 0, crit_ok = 0;
  for (int t = 0; t < 50; ++t) {
    const auto& spec = specs[t % specs.size()];
    const auto cloud = oracle::uniform_cloud(spec, static_cast<std::size_t>(size(rng)), rng());
    const bool flat = spec.kind == ManifoldKind::kFlatTorus;
    // On the sphere stay below the radius, where every four points are cospherical.
    const double eps = std::uniform_real_distribution<double>(flat ? 0.05 : 0.2, flat ? 0.24 : 0.95)(rng);
    const int top = spec.ambient_dim + 1;
    cech_ok += oracle::simplices(build_cech(cloud, eps, top)) == oracle::cech(cloud, eps, top);
    crit_ok += oracle::generators_of(critical::enumerate_critical_points(cloud, eps, spec.ambient_dim)) ==
               oracle::critical_generators(cloud, eps, spec.ambient_dim);
  }
  return {cech_ok == 50 && crit_ok == 50,
          "cech " + std::to_string(cech_ok) + "/50, critical points " + std::to_string(crit_ok) + "/50"};
}

// 9. gamma_numeric against the closed forms with 10^6 samples.
Outcome numeric_cross_check() {
  bool ok = true;
  std::ostringstream os;
  for (int k = 1; k <= 3; ++k)
    for (double lambda : {0.5, 1.0, 2.0, limits::kInfinity}) {
      const auto g = limits::gamma_numeric(3, k, lambda, 1000000, 900 + k);
      const double want = limits::gamma_closed_form_m3(k, lambda);
      // The k = 1 estimator has zero variance; its spread is roundoff.
      const double z = std::abs(g.value - want) / std::max(g.standard_error, 1e-9 * want);
      ok &= z <= 3.0;
      os << "k" << k << "@" << lambda << " z=" << fmt("%.2f", z) << (z <= 3.0 ? "" : "!") << " ";
    }
  return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Morse-Euler identity", morse_euler_identity},
      {"critical-regime gamma_k", critical_regime},
      {"super-critical limits", supercritical},
      {"Euler limit curve", euler_curve},
      {"sub-critical Poisson limit", subcritical_poisson},
      {"Betti recovery", betti_recovery},
      {"dust-regime ordering", dust_ordering},
      {"oracle equivalences", oracle_equivalence},
      {"numeric cross-check", numeric_cross_check},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::cout << "[" << (o.pass ? "PASS" : "FAIL") << "] " << id << ". " << criteria[i].first << " (" << fmt("%.1f", secs)
              << " s): " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
