#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hypwave/cli.hpp"
#include "hypwave/config.hpp"
#include "hypwave/errors.hpp"

using namespace hypwave;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hypwave_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.toml";
  std::ofstream(p) << text;
  return p;
}

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kSmall = R"(h_list = [0.05]
seed = 3

[ensemble]
n_omega = 40
n_x = 3
grid_points = 4

[meanphase]
draws = 100
points = 2

[diagnostics]
n_probes = 40
)";

}  // namespace

TEST_CASE("digests") {
  CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config parsing") {
  const ExperimentConfig d = parse_config("");
  CHECK(config_hash(d) == config_hash(ExperimentConfig{}));
  const ExperimentConfig c = parse_config("h_list = [0.02]\njobs = 3\nout_dir = \"x\"\n[model]\ndelta = 0.001\n");
  CHECK(c.h_list == std::vector<double>{0.02});
  CHECK(c.model.delta == 0.001);
  ExperimentConfig same = c;
  same.jobs = 7;
  same.out_dir = "elsewhere";
  CHECK(config_hash(same) == config_hash(c));
  same.seed = 2;
  CHECK(config_hash(same) != config_hash(c));
  CHECK_THROWS_AS(parse_config("[model]\nbeta_typo = 0.3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("colour = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nalpha = 0.8\ndelta = 0.001\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[ensemble]\nn_x = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[ensemble]\nn_x = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("h_list = [\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nbump = \"square\"\n"), ConfigError);
}

TEST_CASE("inadmissible beta exits with the config status") {
  const fs::path dir = scratch("beta");
  const auto cfg = write_config(dir, "[model]\nbeta = 0.6\n");
  const Result r = run({"net", "--config", cfg.string(), "--out", (dir / "out").string()});
  CHECK(r.code == kExitConfig);
  const Json e = Json::parse(r.err);
  CHECK(e["error"] == "admissibility");
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("usage errors exit with the config status") {
  CHECK(run({}).code == kExitConfig);
  CHECK(run({"simulate"}).code == kExitConfig);
  CHECK(run({"oracle", "--jobs", "many"}).code == kExitConfig);
  const fs::path dir = scratch("usage");
  const auto small = write_config(dir, "[ensemble]\nn_omega = 10\nn_x = 9\n");
  const Result few = run({"gaussianity", "--config", small.string()});
  CHECK(few.code == kExitConfig);
  CHECK(Json::parse(few.err)["error"] == "config");
  const Result missing = run({"oracle", "--config", "/nonexistent/config.toml"});
  CHECK(missing.code == kExitConfig);
  CHECK(Json::parse(missing.err)["error"] == "config");
}

TEST_CASE("oracle with defaults passes") {
  const fs::path dir = scratch("oracle");
  const Result r = run({"--subcommand", "oracle", "--out", dir.string()});
  CHECK(r.code == kExitOk);
  const Json doc = Json::parse(slurp(dir / "oracle.json"));
  CHECK(doc["pass"] == true);
  CHECK(doc["config_sha256"] == config_hash(ExperimentConfig{}));
  const std::string csv = slurp(dir / "oracle.csv");
  CHECK(csv.rfind("# config_sha256=" + config_hash(ExperimentConfig{}) + "\nr,re,im,stderr,kernel_reference\n", 0) == 0);
}

TEST_CASE("repeated runs give byte-identical files for any worker count") {
  const fs::path dir = scratch("repeat");
  const auto cfg = write_config(dir, kSmall);
  for (const std::string sub : {"sample", "covariance", "meanphase", "diagnose", "propagate"}) {
    const fs::path a = dir / (sub + "_a"), b = dir / (sub + "_b");
    const Result ra = run({sub, "--config", cfg.string(), "--out", a.string(), "--jobs", "1"});
    const Result rb = run({sub, "--config", cfg.string(), "--out", b.string(), "--jobs", "4"});
    REQUIRE(ra.code == kExitOk);
    REQUIRE(rb.code == kExitOk);
    CHECK(ra.out == rb.out);
    const Json manifest = Json::parse(slurp(a / "manifest.json"));
    CHECK(manifest["subcommand"] == sub);
    CHECK(!manifest["files"].empty());
    for (const auto& f : manifest["files"]) {
      const std::string name = f["name"];
      const std::string content = slurp(a / name);
      CHECK(content == slurp(b / name));
      CHECK(f["git_blob_sha1"] == git_blob_sha1(content));
      CHECK(content.find(manifest["config_sha256"].get<std::string>()) != std::string::npos);
    }
  }
}

TEST_CASE("seed flag overrides the config and changes the hash") {
  const fs::path dir = scratch("seed");
  const auto cfg = write_config(dir, kSmall);
  run({"diagnose", "--config", cfg.string(), "--out", (dir / "a").string()});
  run({"diagnose", "--config", cfg.string(), "--out", (dir / "b").string(), "--seed", "4"});
  const Json a = Json::parse(slurp(dir / "a" / "manifest.json"));
  const Json b = Json::parse(slurp(dir / "b" / "manifest.json"));
  CHECK(a["config"]["seed"] == 3);
  CHECK(b["config"]["seed"] == 4);
  CHECK(a["config_sha256"] != b["config_sha256"]);
}
