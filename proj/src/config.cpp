#include "rgc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "rgc/io.hpp"
#include "rgc/limit_theory.hpp"

namespace rgc::config {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Settings {
 public:
  explicit Settings(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string text(const std::string& key, const std::string& fallback) {
    used_.push_back(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double number(const std::string& key, double fallback) {
    const std::string v = text(key, "");
    if (v.empty()) return fallback;
    std::size_t pos = 0;
    double out = 0.0;
    try {
      out = std::stod(v, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != v.size()) throw PreconditionError("config key '" + key + "' expects a number, got '" + v + "'");
    return out;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
    const std::string v = text(key, "");
    if (v.empty()) return fallback;
    if (!std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw PreconditionError("config key '" + key + "' expects a nonnegative integer, got '" + v + "'");
    return std::stoull(v);
  }

  bool flag(const std::string& key, bool fallback) {
    const std::string v = text(key, "");
    if (v.empty()) return fallback;
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw PreconditionError("config key '" + key + "' expects true or false, got '" + v + "'");
  }

  void reject_unknown() const {
    for (const auto& [key, value] : values_)
      if (std::find(used_.begin(), used_.end(), key) == used_.end())
        throw PreconditionError("unknown config key '" + key + "'");
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> used_;
};

}  // namespace

experiments::RegimeConfig parse(std::istream& is) {
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  bool first = true;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw PreconditionError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (first) {
      if (key != "format_version" || value != std::to_string(kFormatVersion))
        throw PreconditionError("config must start with format_version = " + std::to_string(kFormatVersion));
      first = false;
      continue;
    }
    if (!values.emplace(key, value).second) throw PreconditionError("duplicate config key '" + key + "'");
  }
  if (first) throw PreconditionError("empty config");

  Settings s(std::move(values));
  experiments::RegimeConfig c;
  const std::string kind = s.text("manifold", "flat_torus");
  if (kind == "flat_torus") c.manifold = ManifoldSpec::flat_torus(static_cast<int>(s.integer("m", 2)), s.number("side", 1.0));
  else if (kind == "circle") c.manifold = ManifoldSpec::circle(s.number("radius", 1.0));
  else if (kind == "sphere2") c.manifold = ManifoldSpec::sphere2(s.number("radius", 1.0));
  else if (kind == "embedded_torus") c.manifold = ManifoldSpec::embedded_torus(s.number("major", 2.0), s.number("minor", 1.0));
  else throw PreconditionError("unknown manifold '" + kind + "'");
  c.manifold.validate();

  const std::string density = s.text("density", "uniform");
  if (density != "uniform") throw PreconditionError("config files support density = uniform only");
  c.density = sampling::DensitySpec::uniform(c.manifold);

  std::stringstream ns(s.text("n_values", ""));
  for (std::string item; std::getline(ns, item, ',');) {
    item = trim(item);
    if (item.empty()) continue;
    if (!std::all_of(item.begin(), item.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      throw PreconditionError("n_values must be comma-separated integers");
    c.n_values.push_back(std::stoull(item));
  }

  const std::string rule = s.text("rule", "lambda");
  if (rule == "power_law") {
    c.rule = experiments::RadiusRule::power_law(s.number("c", 1.0), s.number("alpha", 1.0));
  } else if (rule == "lambda") {
    c.rule = experiments::RadiusRule::critical(s.number("lambda", 1.0));
  } else if (rule == "coverage") {
    double C = s.number("C", 1.0);
    if (s.has("C_units"))
      C = s.number("C_units", 1.0) / (limits::omega(c.manifold.intrinsic_dim) * c.density.f_min);
    c.rule = experiments::RadiusRule::coverage_rule(C);
  } else {
    throw PreconditionError("unknown rule '" + rule + "'");
  }
  c.radius_scale = s.number("radius_scale", 1.0);
  c.replicates = s.integer("replicates", 0);
  c.base_seed = s.integer("base_seed", 0);
  c.max_index = s.has("max_index") ? static_cast<int>(s.integer("max_index", 0)) : -1;
  const std::string mode = s.text("sample_mode", "poisson");
  if (mode == "poisson") c.sample_kind = SampleKind::kPoisson;
  else if (mode == "binomial") c.sample_kind = SampleKind::kBinomial;
  else throw PreconditionError("sample_mode must be poisson or binomial");
  c.compute_critical = s.flag("compute_critical", true);
  c.compute_betti = s.flag("compute_betti", true);
  c.probe_coverage = s.flag("coverage_probe", true);
  c.record_timing = s.flag("timing", false);
  s.reject_unknown();
  c.validate();
  return c;
}

experiments::RegimeConfig parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return parse(in);
}

std::string write(const experiments::RegimeConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "format_version = " << kFormatVersion << '\n';
  os << "manifold = " << c.manifold.kind_name() << '\n';
  switch (c.manifold.kind) {
    case ManifoldKind::kFlatTorus:
      os << "m = " << c.manifold.intrinsic_dim << "\nside = " << c.manifold.side << '\n';
      break;
    case ManifoldKind::kCircle:
    case ManifoldKind::kSphere2:
      os << "radius = " << c.manifold.radius << '\n';
      break;
    case ManifoldKind::kEmbeddedTorus:
      os << "major = " << c.manifold.major << "\nminor = " << c.manifold.minor << '\n';
      break;
    case ManifoldKind::kEuclidean:
      throw PreconditionError("Euclidean space cannot be written to a config");
  }
  os << "density = " << c.density.label << '\n';
  os << "n_values = ";
  for (std::size_t i = 0; i < c.n_values.size(); ++i) os << (i ? "," : "") << c.n_values[i];
  os << '\n';
  switch (c.rule.kind) {
    case experiments::RuleKind::kPowerLaw:
      os << "rule = power_law\nc = " << c.rule.c << "\nalpha = " << c.rule.alpha << '\n';
      break;
    case experiments::RuleKind::kLambda:
      os << "rule = lambda\nlambda = " << c.rule.lambda << '\n';
      break;
    case experiments::RuleKind::kCoverage:
      os << "rule = coverage\nC = " << c.rule.coverage << '\n';
      break;
  }
  os << "radius_scale = " << c.radius_scale << '\n';
  os << "replicates = " << c.replicates << "\nbase_seed = " << c.base_seed << '\n';
  if (c.max_index >= 0) os << "max_index = " << c.max_index << '\n';
  os << "sample_mode = " << (c.sample_kind == SampleKind::kPoisson ? "poisson" : "binomial") << '\n';
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "compute_critical = " << b(c.compute_critical) << "\ncompute_betti = " << b(c.compute_betti)
     << "\ncoverage_probe = " << b(c.probe_coverage) << "\ntiming = " << b(c.record_timing) << '\n';
  return os.str();
}

std::string hash(const experiments::RegimeConfig& config) { return io::hex64(io::fnv1a64(write(config))); }

}  // namespace rgc::config
