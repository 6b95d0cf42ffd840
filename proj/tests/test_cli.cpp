#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "holocycle/bundled_scenarios.hpp"
#include "holocycle/scenario.hpp"

using namespace holocycle;
namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* p = std::getenv("HOLOCYCLE_BIN");
  REQUIRE(p != nullptr);
  return p;
}

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = binary() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  std::array<char, 4096> buf;
  while (size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path fresh_dir(const std::string& leaf) {
  fs::path d = fs::temp_directory_path() / leaf;
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("list-scenarios prints the whole catalogue") {
  auto r = run_cli("list-scenarios");
  CHECK(r.exit_code == 0);
  for (const auto& sc : bundled_scenarios()) {
    CHECK(r.output.find(sc.name) != std::string::npos);
  }
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("run --help").exit_code == 0);
}

TEST_CASE("running a bundled scenario writes a report") {
  fs::path dir = fresh_dir("holocycle_cli_run");
  auto r = run_cli("run catmap_abelian_poc --output-dir " + dir.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::is_regular_file(dir / "report.json"));
  std::ifstream in(dir / "report.json");
  Json report = Json::parse(in);
  CHECK(report.at("summary").at("all_expected") == true);
  REQUIRE(report.at("scenarios").size() == 1);
  const Json& sc = report.at("scenarios").at(0);
  CHECK(sc.at("name") == "catmap_abelian_poc");
  CHECK(sc.at("verdict") == "pass");
  // every advertised artifact exists on disk
  for (const auto& a : sc.at("artifacts")) {
    CHECK(fs::is_regular_file(dir / a.get<std::string>()));
  }
  fs::remove_all(dir);
}

TEST_CASE("overrides reach the scenario echo") {
  fs::path dir = fresh_dir("holocycle_cli_override");
  auto r = run_cli("run catmap_abelian_poc --override seed=41 --override pipeline.max_period=2" +
                   std::string(" --output-dir ") + dir.string());
  CHECK(r.exit_code == 0);
  std::ifstream in(dir / "report.json");
  Json report = Json::parse(in);
  const Json& echo = report.at("scenarios").at(0).at("scenario_echo");
  CHECK(echo.at("seed") == 41);
  CHECK(echo.at("pipeline").at("max_period") == 2);
  fs::remove_all(dir);
}

TEST_CASE("config problems exit with code 2 and write nothing") {
  fs::path dir = fresh_dir("holocycle_cli_bad");

  auto missing = run_cli("run /no/such/file.json --output-dir " + dir.string());
  CHECK(missing.exit_code == 2);
  CHECK(!fs::exists(dir / "report.json"));

  fs::path garbage = fs::temp_directory_path() / "holocycle_garbage.json";
  {
    std::ofstream out(garbage);
    out << "{ not json";
  }
  auto bad = run_cli("run " + garbage.string() + " --output-dir " + dir.string());
  CHECK(bad.exit_code == 2);
  CHECK(!fs::exists(dir / "report.json"));
  fs::remove(garbage);

  auto unknown = run_cli("run totally_unknown_scenario");
  CHECK(unknown.exit_code == 2);

  auto badkey = run_cli("run catmap_abelian_poc --override fiber.grid_size=100 --output-dir " +
                        dir.string());
  CHECK(badkey.exit_code == 2);
  CHECK(!fs::exists(dir / "report.json"));

  CHECK(run_cli("run catmap_abelian_poc --max-workers 0").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);  // a subcommand is required
  fs::remove_all(dir);
}

TEST_CASE("an unmet expectation exits with code 1 but still reports") {
  // flip a scenario built to show a mismatch into one that demands a pass
  const ScenarioConfig* sc = find_bundled_scenario("catmap_su_poc_counterexample");
  REQUIRE(sc != nullptr);
  Json doc = sc->to_json();
  doc["name"] = "counterexample_demanding_pass";
  doc["expect"] = "pass";
  doc["fiber"]["grid_size"] = 128;
  doc["fiber"]["jet_order"] = 1;
  fs::path cfg = fs::temp_directory_path() / "holocycle_flip.json";
  {
    std::ofstream out(cfg);
    out << doc.dump(2);
  }
  fs::path dir = fresh_dir("holocycle_cli_fail");
  auto r = run_cli("run " + cfg.string() + " --output-dir " + dir.string());
  CHECK(r.exit_code == 1);
  REQUIRE(fs::is_regular_file(dir / "report.json"));
  std::ifstream in(dir / "report.json");
  Json report = Json::parse(in);
  CHECK(report.at("scenarios").at(0).at("verdict") == "fail");
  CHECK(report.at("scenarios").at(0).at("pipeline_results").at("observed") == "mismatch");
  fs::remove(cfg);
  fs::remove_all(dir);
}

TEST_CASE("dump-scenarios writes one file per bundled entry") {
  fs::path dir = fresh_dir("holocycle_cli_dump");
  auto r = run_cli("dump-scenarios " + dir.string());
  CHECK(r.exit_code == 0);
  size_t count = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    ++count;
    std::ifstream in(e.path());
    Json j = Json::parse(in);
    CHECK(find_bundled_scenario(j.at("name").get<std::string>()) != nullptr);
  }
  CHECK(count == bundled_scenarios().size());
  fs::remove_all(dir);
}
