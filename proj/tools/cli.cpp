#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "rgc/cech.hpp"
#include "rgc/config.hpp"
#include "rgc/critical_points.hpp"
#include "rgc/experiments.hpp"
#include "rgc/homology.hpp"
#include "rgc/io.hpp"
#include "rgc/limit_theory.hpp"
#include "rgc/sampling.hpp"

namespace rgc::cli {
namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  unsigned jobs = 1;
  std::string config;
  bool verbose = false;
};

class Timer {
 public:
  Timer(std::ostream& err, bool on) : err_(err), on_(on), last_(std::chrono::steady_clock::now()) {}
  void stage(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    if (on_)
      err_ << "[time] " << name << ": " << std::fixed << std::setprecision(3)
           << std::chrono::duration<double>(now - last_).count() << " s\n";
    last_ = now;
  }

 private:
  std::ostream& err_;
  bool on_;
  std::chrono::steady_clock::time_point last_;
};

// Hash of the arguments that determine the output (everything except the
// output path, verbosity and worker count).
std::string args_hash(int argc, const char* const* argv) {
  std::string text;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" || a == "--jobs") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--jobs=", 0) == 0 || a == "--verbose" || a == "-v") continue;
    text += a;
    text += '\x1f';
  }
  return io::hex64(io::fnv1a64(text));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
  return f;
}

std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

double parse_lambda(const std::string& s) {
  if (s == "inf" || s == "infinity") return limits::kInfinity;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || !(v >= 0.0)) throw PreconditionError("lambda must be a nonnegative number or 'inf'");
  return v;
}

ManifoldSpec manifold_from_flags(const std::string& kind, int m, double side, double radius, double major,
                                 double minor) {
  ManifoldSpec spec;
  if (kind == "flat_torus") spec = ManifoldSpec::flat_torus(m, side);
  else if (kind == "circle") spec = ManifoldSpec::circle(radius);
  else if (kind == "sphere2") spec = ManifoldSpec::sphere2(radius);
  else if (kind == "embedded_torus") spec = ManifoldSpec::embedded_torus(major, minor);
  else throw PreconditionError("unknown manifold '" + kind + "'");
  spec.validate();
  return spec;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random geometric complexes: sampling, Čech homology, critical points and limit constants", "rgc"};
  app.require_subcommand(1, 1);
  Common common;
  app.add_option("--seed", common.seed, "Random seed")->capture_default_str();
  app.add_option("--out", common.out, "Output path");
  app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--config", common.config, "Regime config file (regime, recover)");
  app.add_flag("--verbose,-v", common.verbose, "Per-stage timing on stderr");
  app.fallthrough();

  // sample
  auto* sample = app.add_subcommand("sample", "Sample a point cloud from a manifold");
  std::string manifold = "flat_torus", mode = "binomial";
  int m = 2;
  double side = 1.0, radius = 1.0, major = 2.0, minor = 1.0;
  std::size_t n = 100;
  sample->add_option("--manifold", manifold, "flat_torus | circle | sphere2 | embedded_torus")->capture_default_str();
  sample->add_option("--m", m, "Flat torus dimension")->capture_default_str();
  sample->add_option("--side", side, "Flat torus side")->capture_default_str();
  sample->add_option("--radius", radius, "Circle / sphere radius")->capture_default_str();
  sample->add_option("--major", major, "Embedded torus major radius")->capture_default_str();
  sample->add_option("--minor", minor, "Embedded torus minor radius")->capture_default_str();
  sample->add_option("--n", n, "Sample size (Poisson mean in poisson mode)")->capture_default_str();
  sample->add_option("--mode", mode, "binomial | poisson")->check(CLI::IsMember({"binomial", "poisson"}))->capture_default_str();

  // verbs reading a cloud
  std::string cloud_path;
  double eps = 0.0, r = 0.0, eps_net = 0.0;
  int max_dim = -1, max_k = -1, max_index = -1;
  bool explicit_route = false, list_points = false;
  auto* cech = app.add_subcommand("cech", "Build the Čech complex of a cloud");
  cech->add_option("--cloud", cloud_path, "Cloud JSON")->required();
  cech->add_option("--eps", eps, "Radius")->required();
  cech->add_option("--max-dim", max_dim, "Top simplex dimension (default m+1)");
  auto* betti = app.add_subcommand("betti", "Betti numbers of the Čech complex");
  betti->add_option("--cloud", cloud_path, "Cloud JSON")->required();
  betti->add_option("--eps", eps, "Radius")->required();
  betti->add_option("--max-k", max_k, "Highest Betti number (default m)");
  betti->add_flag("--explicit", explicit_route, "Reduce stored boundary matrices instead of the implicit route");
  auto* crit = app.add_subcommand("crit", "Critical points of the distance function");
  crit->add_option("--cloud", cloud_path, "Cloud JSON")->required();
  crit->add_option("--r", r, "Radius bound")->required();
  crit->add_option("--max-index", max_index, "Highest index (default m)");
  crit->add_flag("--list", list_points, "Print the critical points");
  auto* euler = app.add_subcommand("euler", "Euler characteristic from critical points and from Betti numbers");
  euler->add_option("--cloud", cloud_path, "Cloud JSON")->required();
  euler->add_option("--r", r, "Radius")->required();
  euler->add_option("--max-index", max_index, "Highest index (default m)");
  auto* coverage = app.add_subcommand("coverage", "Conservative coverage test");
  coverage->add_option("--cloud", cloud_path, "Cloud JSON")->required();
  coverage->add_option("--r", r, "Ball radius")->required();
  coverage->add_option("--eps-net", eps_net, "Net spacing (default r/4)");

  // limits
  auto* lim = app.add_subcommand("limits", "Limit constants");
  int k = 1;
  std::string lambda_text = "1", curve, mu;
  std::size_t n_mc = 0;
  lim->add_option("--m", m, "Dimension")->capture_default_str();
  lim->add_option("--k", k, "Index")->capture_default_str();
  lim->add_option("--lambda", lambda_text, "lambda >= 0 or inf")->capture_default_str();
  lim->add_option("--n-mc", n_mc, "Monte Carlo samples (0: closed form)")->capture_default_str();
  lim->add_option("--curve", curve, "Euler limit curve on a grid start:stop:step (m = 3)");
  lim->add_option("--mu", mu, "Estimate mu_k^c or mu_k^b instead of gamma")->check(CLI::IsMember({"c", "b"}));

  // config-driven verbs
  auto* regime = app.add_subcommand("regime", "Run a regime sweep from a config file");
  std::string statistic = "N", norm = "per_n";
  int stat_k = 1;
  regime->add_option("--statistic", statistic, "N | beta | chi")->check(CLI::IsMember({"N", "beta", "chi"}))->capture_default_str();
  regime->add_option("--k", stat_k, "Index of the summarised statistic")->capture_default_str();
  regime->add_option("--norm", norm, "none | per_n | subcritical_crit | subcritical_betti")->capture_default_str();
  auto* recover = app.add_subcommand("recover", "Betti recovery experiment from a config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const std::string hash = args_hash(argc, argv);
  Timer timer(err, common.verbose);
  auto meta = [&](const nlohmann::json& extra = {}) { return io::meta_block(hash, common.seed, extra); };
  auto load = [&] {
    PointCloud c = io::read_cloud_file(cloud_path);
    timer.stage("load cloud");
    return c;
  };

  try {
    if (*sample) {
      const ManifoldSpec spec = manifold_from_flags(manifold, m, side, radius, major, minor);
      const SampleMode sm = mode == "poisson" ? SampleMode::poisson(n) : SampleMode::binomial(n);
      const PointCloud cloud = sampling::sample(spec, sampling::DensitySpec::uniform(spec), sm, common.seed);
      timer.stage("sample");
      if (common.out.empty()) {
        io::write_cloud_json(out, cloud, meta());
      } else {
        auto f = open_out(common.out);
        io::write_cloud_json(f, cloud, meta());
        out << "wrote " << cloud.size() << " points to " << common.out << '\n';
      }
    } else if (*cech) {
      const PointCloud cloud = load();
      const int dim = max_dim >= 0 ? max_dim : default_cech_dim(cloud.spec);
      const SimplicialComplex complex = build_cech(cloud, eps, dim);
      timer.stage("build");
      out << "faces " << join(face_counts(complex)) << '\n';
      if (!common.out.empty()) {
        auto f = open_out(common.out);
        f << meta({{"eps", eps}, {"max_dim", dim}}).dump() << '\n';
        write_complex_jsonl(f, complex);
      }
    } else if (*betti) {
      const PointCloud cloud = load();
      const int top = max_k >= 0 ? max_k : cloud.spec.intrinsic_dim;
      std::vector<std::size_t> b;
      if (explicit_route) {
        const SimplicialComplex complex = build_cech(cloud, eps, top + 1);
        timer.stage("build");
        b = homology::betti_numbers(complex, top);
      } else {
        b = homology::cech_betti(cloud, eps, top);
      }
      timer.stage("homology");
      out << "betti " << join(b) << '\n';
    } else if (*crit) {
      const PointCloud cloud = load();
      const int mi = max_index >= 0 ? max_index : cloud.spec.intrinsic_dim;
      critical::CriticalDiagnostics diag;
      const auto points = critical::enumerate_critical_points(cloud, r, mi, {}, &diag);
      timer.stage("enumerate");
      std::vector<std::size_t> counts(static_cast<std::size_t>(mi) + 1, 0);
      counts[0] = cloud.size();
      for (const auto& cp : points) ++counts[cp.k];
      out << "N=(" << join(counts) << ")\n";
      if (diag.degenerate + diag.boundary > 0)
        err << "skipped " << diag.degenerate << " degenerate and " << diag.boundary << " boundary candidates\n";
      if (list_points) critical::write_critical_jsonl(out, points);
      if (!common.out.empty()) {
        auto f = open_out(common.out);
        f << meta({{"r", r}, {"max_index", mi}}).dump() << '\n';
        critical::write_critical_jsonl(f, points);
      }
    } else if (*euler) {
      const PointCloud cloud = load();
      const int mi = max_index >= 0 ? max_index : cloud.spec.intrinsic_dim;
      const auto counts = critical::critical_counts(cloud, r, mi);
      timer.stage("critical points");
      const int top = std::max(1, cloud.dim() == cloud.spec.intrinsic_dim ? cloud.dim() : cloud.dim() - 1);
      const auto b = homology::cech_betti(cloud, r, top);
      timer.stage("homology");
      out << "chi_morse " << critical::morse_euler(counts) << "\nchi_cech " << homology::alternating_sum(b) << '\n';
    } else if (*coverage) {
      const PointCloud cloud = load();
      const double net = eps_net > 0.0 ? eps_net : r / 4.0;
      const bool covered = experiments::coverage_probe(cloud, r, net);
      timer.stage("probe");
      out << "covered " << (covered ? "true" : "false") << '\n';
    } else if (*lim) {
      std::vector<limits::LimitConstants> rows;
      if (!curve.empty()) {
        std::vector<double> grid;
        double a = 0, b = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(curve);
        if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a)
          throw PreconditionError("--curve expects start:stop:step with step > 0");
        for (std::size_t i = 0; a + static_cast<double>(i) * step <= b + 1e-12; ++i)
          grid.push_back(a + static_cast<double>(i) * step);
        const auto values = limits::euler_limit_curve_m3(grid);
        if (common.out.empty()) {
          limits::write_curve_csv(out, values);
        } else {
          auto f = open_out(common.out);
          f << "# " << meta().dump() << '\n';
          limits::write_curve_csv(f, values);
        }
        return 0;
      }
      const double lambda = parse_lambda(lambda_text);
      limits::MonteCarloOptions mc;
      mc.jobs = common.jobs;
      limits::LimitConstants c;
      if (mu == "c") {
        c = limits::mu_c_estimate(m, k, n_mc ? n_mc : 1000000, common.seed, 1.0, mc);
      } else if (mu == "b") {
        c = limits::mu_b_estimate(m, k, n_mc ? n_mc : 1000000, common.seed, 1.0, mc);
      } else if (n_mc > 0) {
        c = limits::gamma_numeric(m, k, lambda, n_mc, common.seed, 1.0, mc);
      } else {
        if (m != 3) throw limits::UnsupportedError("closed forms exist for m = 3; pass --n-mc for a Monte Carlo value");
        c = {"gamma", m, k, lambda, limits::gamma_closed_form_m3(k, lambda), 0.0, limits::Method::kClosedForm, 0, 0};
      }
      timer.stage("evaluate");
      out << std::fixed << std::setprecision(4) << c.value;
      if (c.method == limits::Method::kMonteCarlo) out << " +/- " << c.standard_error;
      out << '\n';
      if (!common.out.empty()) {
        auto f = open_out(common.out);
        f << "# " << meta().dump() << '\n';
        limits::write_constants_csv(f, {c});
      }
    } else if (*regime || *recover) {
      if (common.config.empty()) throw PreconditionError("--config is required");
      experiments::RegimeConfig config = config::parse_file(common.config);
      config.jobs = common.jobs;
      const std::string chash = config::hash(config);
      const auto fmeta = io::meta_block(chash, config.base_seed);
      const std::string base = "rgc-" + chash + "-" + std::to_string(config.base_seed);
      if (*recover) {
        const auto table = experiments::recovery_experiment(config);
        timer.stage("recover");
        auto f = open_out(common.out.empty() ? base + "-recovery.csv" : common.out);
        f << "# " << fmeta.dump() << "\nn,replicate,seed,r,betti,success\n" << std::setprecision(17);
        for (const auto& row : table.rows) {
          f << row.n << ',' << row.replicate << ',' << row.seed << ',' << row.r << ",\"" << join(row.betti) << "\","
            << (row.success ? 1 : 0) << '\n';
          out << "n=" << row.n << " rep=" << row.replicate << " betti=(" << join(row.betti) << ") "
              << (row.success ? "ok" : "miss") << (row.error.empty() ? "" : " error: " + row.error) << '\n';
        }
        out << "success_rate " << table.success_rate() << '\n';
        return 0;
      }
      const auto records = experiments::run_regime(config);
      timer.stage("run");
      {
        auto f = open_out(common.out.empty() ? base + ".jsonl" : common.out);
        f << fmeta.dump() << '\n';
        for (const auto& rec : records) f << io::record_to_json(rec).dump() << '\n';
      }
      const auto stat = statistic == "N"      ? experiments::Statistic::kCritical
                        : statistic == "beta" ? experiments::Statistic::kBetti
                                              : experiments::Statistic::kEuler;
      const auto rows = experiments::aggregate(records, stat, stat_k, experiments::parse_normalization(norm));
      {
        auto f = open_out((common.out.empty() ? base : common.out) + ".summary.csv");
        f << "# " << fmeta.dump() << "\nn,r,statistic,count,mean,variance,se,raw_mean,raw_variance,dispersion,skewness,"
          << "excess_kurtosis,failures\n" << std::setprecision(17);
        for (const auto& s : rows)
          f << s.n << ',' << s.r << ',' << s.statistic << ',' << s.count << ',' << s.mean << ',' << s.variance << ','
            << s.se << ',' << s.raw_mean << ',' << s.raw_variance << ',' << s.dispersion << ',' << s.skewness << ','
            << s.excess_kurtosis << ',' << s.failures << '\n';
      }
      out << std::setprecision(6);
      for (const auto& s : rows)
        out << "n=" << s.n << " r=" << s.r << ' ' << s.statistic << " mean=" << s.mean << " se=" << s.se
            << " dispersion=" << s.dispersion << " failures=" << s.failures << '\n';
      std::size_t failed = 0;
      for (const auto& rec : records) failed += rec.ok() ? 0 : 1;
      if (const auto bad = experiments::euler_mismatches(records)) {
        err << "error: " << bad << " records violate the Morse-Euler identity\n";
        return 1;
      }
      if (failed > 0) err << "warning: " << failed << " records failed\n";
    }
  } catch (const PreconditionError& e) {
    err << "error: precondition violated: " << e.what() << '\n';
    return 2;
  } catch (const MetricRangeError& e) {
    err << "error: precondition violated: " << e.what() << '\n';
    return 2;
  } catch (const limits::UnsupportedError& e) {
    err << "error: unsupported: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace rgc::cli
