#include "rgc/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace rgc::io {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

nlohmann::json meta_block(const std::string& config_hash, std::uint64_t seed, const nlohmann::json& extra) {
  nlohmann::json meta{{"tool", kToolName}, {"version", kToolVersion}, {"config_hash", config_hash}, {"seed", seed}};
  if (extra.is_object())
    for (const auto& [key, value] : extra.items()) meta[key] = value;
  return {{"meta", meta}};
}

nlohmann::json manifold_to_json(const ManifoldSpec& spec) {
  nlohmann::json j{{"kind", spec.kind_name()}, {"m", spec.intrinsic_dim}, {"d", spec.ambient_dim}};
  switch (spec.kind) {
    case ManifoldKind::kFlatTorus:
      j["side"] = spec.side;
      break;
    case ManifoldKind::kCircle:
    case ManifoldKind::kSphere2:
      j["radius"] = spec.radius;
      break;
    case ManifoldKind::kEmbeddedTorus:
      j["major"] = spec.major;
      j["minor"] = spec.minor;
      break;
    case ManifoldKind::kEuclidean:
      break;
  }
  return j;
}

ManifoldSpec manifold_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  ManifoldSpec spec;
  if (kind == "flat_torus") spec = ManifoldSpec::flat_torus(j.at("m").get<int>(), j.value("side", 1.0));
  else if (kind == "circle") spec = ManifoldSpec::circle(j.value("radius", 1.0));
  else if (kind == "sphere2") spec = ManifoldSpec::sphere2(j.value("radius", 1.0));
  else if (kind == "embedded_torus") spec = ManifoldSpec::embedded_torus(j.value("major", 2.0), j.value("minor", 1.0));
  else if (kind == "euclidean") spec = euclidean_space(j.at("d").get<int>());
  else throw PreconditionError("unknown manifold kind '" + kind + "'");
  spec.validate();
  return spec;
}

void write_cloud_json(std::ostream& os, const PointCloud& cloud, const nlohmann::json& meta) {
  nlohmann::json j = meta;
  j["manifold"] = manifold_to_json(cloud.spec);
  j["seed"] = cloud.seed;
  j["mode"] = cloud.mode.kind == SampleKind::kPoisson ? "poisson" : "binomial";
  j["n"] = cloud.mode.n;
  j["density"] = cloud.density;
  j["generator"] = cloud.generator;
  j["points"] = cloud.points();
  os << j.dump() << '\n';
}

PointCloud read_cloud_json(std::istream& is) {
  const nlohmann::json j = nlohmann::json::parse(is);
  if (j.is_array()) return PointCloud::euclidean(j.get<std::vector<Point>>());
  const auto points = j.at("points").get<std::vector<Point>>();
  if (!j.contains("manifold")) return PointCloud::euclidean(points);
  PointCloud cloud = PointCloud::from_points(manifold_from_json(j.at("manifold")), points);
  cloud.seed = j.value("seed", std::uint64_t{0});
  cloud.density = j.value("density", std::string("uniform"));
  const std::string mode = j.value("mode", std::string("binomial"));
  cloud.mode = SampleMode{mode == "poisson" ? SampleKind::kPoisson : SampleKind::kBinomial,
                          j.value("n", points.size())};
  return cloud;
}

PointCloud read_cloud_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cloud file '" + path + "'");
  return read_cloud_json(in);
}

nlohmann::json record_to_json(const experiments::ExperimentRecord& r) {
  nlohmann::json j{{"n", r.n},
                   {"replicate", r.replicate},
                   {"r", r.r},
                   {"seed", r.seed},
                   {"regime", experiments::regime_name(r.regime)},
                   {"cloud_size", r.cloud_size}};
  if (!r.counts.empty()) j["counts"] = r.counts;
  if (!r.betti.empty()) j["betti"] = r.betti;
  if (r.chi_cech) j["chi_cech"] = *r.chi_cech;
  if (r.chi_morse) j["chi_morse"] = *r.chi_morse;
  if (r.covered) j["coverage_flag"] = *r.covered;
  if (r.wall_time) j["wall_time"] = *r.wall_time;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace rgc::io
