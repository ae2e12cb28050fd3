#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rgc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rgc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "rgc_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string triangle_file() {
  const auto path = scratch() / "triangle.json";
  std::ofstream(path) << "[[0,0],[1,0],[0.5,0.8660254037844386]]";
  return path.string();
}

}  // namespace

TEST_CASE("crit on the equilateral triangle") {
  const auto r = invoke({"crit", "--cloud", triangle_file(), "--r", "0.6", "--max-index", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "N=(3,3,1)\n");
  CHECK(invoke({"crit", "--cloud", triangle_file(), "--r", "0.55"}).out == "N=(3,3,0)\n");
}

TEST_CASE("limits closed form") {
  const auto r = invoke({"limits", "--m", "3", "--k", "1", "--lambda", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "3.9393\n");
  CHECK(invoke({"limits", "--m", "3", "--k", "3", "--lambda", "inf"}).out == "1.8506\n");
  CHECK(invoke({"limits", "--m", "4", "--k", "1"}).code == 2);
  CHECK(invoke({"limits", "--m", "3", "--k", "4"}).code == 2);
  CHECK(invoke({"limits", "--lambda", "-1"}).code == 2);
  CHECK(invoke({"limits", "--m", "1", "--k", "1", "--mu", "b", "--n-mc", "100"}).code == 2);
}

TEST_CASE("limits monte carlo and curve") {
  const auto r = invoke({"limits", "--m", "3", "--k", "2", "--lambda", "1", "--n-mc", "20000", "--seed", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("+/-") != std::string::npos);
  const auto curve = scratch() / "curve.csv";
  CHECK(invoke({"limits", "--curve", "0:2:0.5", "--out", curve.string()}).code == 0);
  const auto text = slurp(curve);
  CHECK(text.rfind("# {\"meta\":", 0) == 0);
  CHECK(text.find("lambda,value\n0,1\n") != std::string::npos);
  CHECK(invoke({"limits", "--curve", "2:0:0.5"}).code == 2);
}

TEST_CASE("argument errors exit with 2 and usage") {
  const auto unknown = invoke({"frobnicate"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"crit", "--cloud", triangle_file()}).code == 2);
  CHECK(invoke({"crit", "--cloud", triangle_file(), "--r", "abc"}).code == 2);
  CHECK(invoke({"sample", "--mode", "lottery"}).code == 2);
}

TEST_CASE("precondition violations exit with 2 and name the precondition") {
  const auto cloud = scratch() / "torus.json";
  REQUIRE(invoke({"sample", "--n", "30", "--seed", "1", "--out", cloud.string()}).code == 0);
  const auto r = invoke({"crit", "--cloud", cloud.string(), "--r", "0.3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("side/4") != std::string::npos);
  CHECK(invoke({"cech", "--cloud", cloud.string(), "--eps", "-1"}).code == 2);
  CHECK(invoke({"sample", "--manifold", "sphere2", "--radius", "-1"}).code == 2);
}

TEST_CASE("runtime failures exit with 1") {
  CHECK(invoke({"crit", "--cloud", (scratch() / "missing.json").string(), "--r", "0.1"}).code == 1);
  const auto bad = scratch() / "bad.json";
  std::ofstream(bad) << "{not json";
  CHECK(invoke({"betti", "--cloud", bad.string(), "--eps", "0.1"}).code == 1);
}

TEST_CASE("sample output is reproducible and carries metadata") {
  const auto a = scratch() / "a.json", b = scratch() / "b.json";
  for (const auto& p : {a, b})
    REQUIRE(invoke({"sample", "--manifold", "embedded_torus", "--n", "200", "--mode", "poisson", "--seed", "9", "--out",
                 p.string()})
                .code == 0);
  const auto text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.find("\"meta\":{\"config_hash\":") != std::string::npos);
  CHECK(text.find("\"seed\":9") != std::string::npos);
  CHECK(text.find("\"version\":\"1.0.0\"") != std::string::npos);
}

TEST_CASE("cech, betti, euler and coverage") {
  const auto tri = triangle_file();
  const auto c = scratch() / "complex.jsonl";
  const auto cech = invoke({"cech", "--cloud", tri, "--eps", "0.55", "--max-dim", "2", "--out", c.string()});
  CHECK(cech.out == "faces 3,3,0\n");
  CHECK(slurp(c).rfind("{\"meta\":", 0) == 0);
  CHECK(invoke({"betti", "--cloud", tri, "--eps", "0.55"}).out == "betti 1,1,0\n");
  CHECK(invoke({"betti", "--cloud", tri, "--eps", "0.6", "--explicit"}).out == "betti 1,0,0\n");
  CHECK(invoke({"euler", "--cloud", tri, "--r", "0.6"}).out == "chi_morse 1\nchi_cech 1\n");
  CHECK(invoke({"betti", "--cloud", tri, "--eps", "0.55", "--max-k", "1"}).out == "betti 1,1\n");
  // Euclidean space has no coverage net.
  CHECK(invoke({"coverage", "--cloud", tri, "--r", "0.6"}).code == 2);
  const auto dense = scratch() / "dense.json";
  REQUIRE(invoke({"sample", "--n", "3000", "--seed", "2", "--out", dense.string()}).code == 0);
  CHECK(invoke({"coverage", "--cloud", dense.string(), "--r", "0.08"}).out == "covered true\n");
  CHECK(invoke({"coverage", "--cloud", dense.string(), "--r", "0.01"}).out == "covered false\n");
  const auto verbose = invoke({"--verbose", "betti", "--cloud", tri, "--eps", "0.55"});
  CHECK(verbose.err.find("[time] homology") != std::string::npos);
}

TEST_CASE("regime and recover from a config") {
  const auto cfg = scratch() / "sweep.cfg";
  std::ofstream(cfg) << "format_version = 1\nmanifold = flat_torus\nm = 2\nn_values = 200\nrule = lambda\n"
                        "lambda = 1\nreplicates = 3\nbase_seed = 5\n";
  const auto out = scratch() / "sweep.jsonl";
  const auto r = invoke({"--config", cfg.string(), "regime", "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("n=200") != std::string::npos);
  const auto first = slurp(out);
  CHECK(first.rfind("{\"meta\":", 0) == 0);
  CHECK(slurp(out.string() + ".summary.csv").find("n,r,statistic,count,mean") != std::string::npos);
  REQUIRE(invoke({"--config", cfg.string(), "regime", "--out", out.string(), "--jobs", "2"}).code == 0);
  CHECK(slurp(out) == first);
  CHECK(invoke({"regime"}).code == 2);
  CHECK(invoke({"--config", cfg.string(), "recover"}).code == 2);

  const auto cov = scratch() / "cover.cfg";
  std::ofstream(cov) << "format_version = 1\nmanifold = circle\nn_values = 300\nrule = coverage\nC_units = 4\n"
                        "replicates = 2\n";
  const auto table = scratch() / "recovery.csv";
  const auto rec = invoke({"--config", cov.string(), "recover", "--out", table.string()});
  CHECK(rec.code == 0);
  CHECK(rec.out.find("success_rate 1") != std::string::npos);
  CHECK(slurp(table).find("n,replicate,seed,r,betti,success") != std::string::npos);
}

TEST_CASE("default regime output names embed the config hash and seed") {
  const auto dir = scratch() / "defaults";
  fs::create_directories(dir);
  const auto cfg = dir / "s.cfg";
  std::ofstream(cfg) << "format_version = 1\nn_values = 50\nreplicates = 1\nbase_seed = 77\n";
  const auto cwd = fs::current_path();
  fs::current_path(dir);
  const auto r = invoke({"--config", cfg.string(), "regime"});
  fs::current_path(cwd);
  CHECK(r.code == 0);
  bool found = false;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    found |= name.rfind("rgc-", 0) == 0 && name.find("-77.jsonl") != std::string::npos;
  }
  CHECK(found);
}
