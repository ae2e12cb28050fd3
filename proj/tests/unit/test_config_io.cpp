#include <doctest.h>

#include <sstream>

#include "rgc/config.hpp"
#include "rgc/io.hpp"
#include "rgc/limit_theory.hpp"
#include "rgc/sampling.hpp"

using namespace rgc;

namespace {

experiments::RegimeConfig parse(const std::string& text) {
  std::istringstream is(text);
  return config::parse(is);
}

const char* kBasic = R"(# sweep
format_version = 1
manifold = flat_torus
m = 3
side = 1
n_values = 500, 1000
rule = lambda
lambda = 0.5
replicates = 4
base_seed = 99
)";

}  // namespace

TEST_CASE("parse a basic config") {
  const auto c = parse(kBasic);
  CHECK(c.manifold == ManifoldSpec::flat_torus(3, 1.0));
  CHECK(c.n_values == std::vector<std::size_t>{500, 1000});
  CHECK(c.rule.kind == experiments::RuleKind::kLambda);
  CHECK(c.rule.lambda == 0.5);
  CHECK(c.replicates == 4);
  CHECK(c.base_seed == 99);
  CHECK(c.sample_kind == SampleKind::kPoisson);
  CHECK(c.effective_max_index() == 3);
  CHECK_FALSE(c.record_timing);
}

TEST_CASE("round trip and hash") {
  const auto c = parse(kBasic);
  const auto text = config::write(c);
  const auto back = parse(text);
  CHECK(config::write(back) == text);
  CHECK(config::hash(back) == config::hash(c));
  CHECK(config::hash(c).size() == 16);
  auto other = c;
  other.base_seed = 100;
  CHECK(config::hash(other) != config::hash(c));

  experiments::RegimeConfig sphere;
  sphere.manifold = ManifoldSpec::embedded_torus(2.5, 0.75);
  sphere.density = sampling::DensitySpec::uniform(sphere.manifold);
  sphere.rule = experiments::RadiusRule::coverage_rule(0.4);
  sphere.n_values = {3000};
  sphere.replicates = 2;
  sphere.sample_kind = SampleKind::kBinomial;
  sphere.radius_scale = 0.5;
  sphere.record_timing = true;
  const auto again = parse(config::write(sphere));
  CHECK(again.manifold == sphere.manifold);
  CHECK(again.rule.coverage == sphere.rule.coverage);
  CHECK(again.radius_scale == 0.5);
  CHECK(again.sample_kind == SampleKind::kBinomial);
  CHECK(again.record_timing);
}

TEST_CASE("coverage constant in units of 1 / (omega_m f_min)") {
  const auto c = parse("format_version = 1\nmanifold = sphere2\nradius = 1\nn_values = 100\nrule = coverage\nC_units = 2.5\n");
  CHECK(c.rule.coverage == doctest::Approx(2.5 * 4 * M_PI / M_PI));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("manifold = circle\n"), PreconditionError);
  CHECK_THROWS_AS(parse("format_version = 2\n"), PreconditionError);
  CHECK_THROWS_AS(parse(""), PreconditionError);
  CHECK_THROWS_AS(parse(std::string(kBasic) + "colour = blue\n"), PreconditionError);
  CHECK_THROWS_AS(parse(std::string(kBasic) + "lambda = 2\n"), PreconditionError);
  CHECK_THROWS_AS(parse(std::string(kBasic) + "timing = maybe\n"), PreconditionError);
  CHECK_THROWS_AS(parse("format_version = 1\nmanifold = klein\n"), PreconditionError);
  CHECK_THROWS_AS(parse("format_version = 1\nn_values = 1,x\n"), PreconditionError);
  CHECK_THROWS_AS(parse("format_version = 1\nreplicates = -3\n"), PreconditionError);
  CHECK_THROWS_AS(parse("format_version = 1\nnonsense\n"), PreconditionError);
  CHECK_THROWS_AS(config::parse_file("/nonexistent/config"), std::runtime_error);
}

TEST_CASE("cloud json round trip is exact") {
  const auto spec = ManifoldSpec::sphere2(1.0);
  const auto cloud = sampling::sample(spec, sampling::DensitySpec::uniform(spec), SampleMode::poisson(50), 3);
  std::stringstream ss;
  io::write_cloud_json(ss, cloud, io::meta_block("abc", 3));
  const auto back = io::read_cloud_json(ss);
  CHECK(back.coords == cloud.coords);
  CHECK(back.spec == spec);
  CHECK(back.seed == 3);
  CHECK(back.mode == cloud.mode);
}

TEST_CASE("bare arrays are Euclidean clouds") {
  std::istringstream is("[[0,0],[1,0],[0.5,0.8]]");
  const auto c = io::read_cloud_json(is);
  CHECK(c.size() == 3);
  CHECK(c.dim() == 2);
  CHECK(c.spec.kind == ManifoldKind::kEuclidean);
  std::istringstream ragged("[[0,0],[1]]");
  CHECK_THROWS(io::read_cloud_json(ragged));
}

TEST_CASE("metadata block") {
  const auto j = io::meta_block("0123", 17, {{"r", 0.5}});
  CHECK(j["meta"]["tool"] == "rgc");
  CHECK(j["meta"]["version"] == io::kToolVersion);
  CHECK(j["meta"]["config_hash"] == "0123");
  CHECK(j["meta"]["seed"] == 17);
  CHECK(j["meta"]["r"] == 0.5);
  CHECK(io::hex64(io::fnv1a64("")) == "cbf29ce484222325");
}

TEST_CASE("manifold json") {
  for (const auto& s : {ManifoldSpec::flat_torus(2, 3.0), ManifoldSpec::circle(2.0), ManifoldSpec::sphere2(0.5),
                        ManifoldSpec::embedded_torus(3, 1)})
    CHECK(io::manifold_from_json(io::manifold_to_json(s)) == s);
}

TEST_CASE("record json") {
  experiments::ExperimentRecord r;
  r.n = 10;
  r.counts = {10, 4};
  r.chi_cech = 6;
  r.covered = true;
  const auto j = io::record_to_json(r);
  CHECK(j["counts"] == std::vector<int>{10, 4});
  CHECK(j["chi_cech"] == 6);
  CHECK(j["coverage_flag"] == true);
  CHECK_FALSE(j.contains("wall_time"));
  CHECK_FALSE(j.contains("betti"));
}
