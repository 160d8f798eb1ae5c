#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twave/cli.hpp"

namespace fs = std::filesystem;
using twave::cli::run;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("twave_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "twave");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("wave writes profile and report") {
  const auto dir = fresh_dir("wave");
  CHECK(invoke({"wave", "--out", dir.string()}) == 0);
  REQUIRE(fs::exists(dir / "wave.json"));
  REQUIRE(fs::exists(dir / "profile.csv"));
  const auto j = read_json(dir / "wave.json");
  CHECK(j["functionals"]["T"]["value"].get<double>() == doctest::Approx(8.913430876988732).epsilon(1e-10));
  CHECK(line_count(dir / "profile.csv") == 2050);
}

TEST_CASE("input outside Omega exits 2 and writes nothing") {
  const auto dir = fresh_dir("omega");
  CHECK(invoke({"wave", "-E", "0.5", "--out", dir.string()}) == 2);
  CHECK(fs::is_empty(dir));
  CHECK(invoke({"indices", "--family", "gxyz", "--out", dir.string()}) == 2);
  CHECK(fs::is_empty(dir));
}

TEST_CASE("oracle waves go through the same report") {
  const auto dir = fresh_dir("oracle");
  CHECK(invoke({"wave", "--oracle", "cnoidal", "--gamma", "0.5", "--out", dir.string()}) == 0);
  const auto j = read_json(dir / "wave.json");
  CHECK(j["functionals"]["T"]["value"].get<double>() ==
        doctest::Approx(2.0 * twave::elliptic_K(0.5)).epsilon(1e-10));
}

TEST_CASE("indices report carries verdicts") {
  const auto dir = fresh_dir("indices");
  CHECK(invoke({"indices", "--out", dir.string()}) == 0);
  const auto j = read_json(dir / "indices.json");
  CHECK(j["indices"]["verdict_transverse"] == "UNSTABLE_LONGWAVE");
  CHECK(j["indices"]["J3"]["value"].get<double>() > 0.0);
}

TEST_CASE("scan with an empty Omega set writes a header") {
  const auto dir = fresh_dir("scan");
  CHECK(invoke({"scan", "--E-min", "1", "--E-max", "2", "--E-n", "2", "--a-n", "2", "--out",
                dir.string()}) == 0);
  CHECK(line_count(dir / "scan.csv") == 1);
}

TEST_CASE("verify honours the noise floor") {
  const auto dir = fresh_dir("verify");
  CHECK(invoke({"verify", "--only", "2", "--out", dir.string()}) == 0);
  CHECK(invoke({"verify", "--only", "3", "--noise-tol", "1e-20", "--out", dir.string()}) == 1);
}

TEST_CASE("config hash ignores jobs and output directory") {
  twave::cli::RunConfig a;
  a.command = "wave";
  auto b = a;
  b.jobs = 8;
  b.out_dir = "/elsewhere";
  CHECK(twave::cli::config_hash(a) == twave::cli::config_hash(b));
  b.E = -0.02;
  CHECK(twave::cli::config_hash(a) != twave::cli::config_hash(b));
}
