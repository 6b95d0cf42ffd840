#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "holocycle/bundled_scenarios.hpp"
#include "holocycle/errors.hpp"
#include "holocycle/pipelines.hpp"
#include "holocycle/scenario.hpp"

using namespace holocycle;
namespace fs = std::filesystem;

namespace {

Json base_config() {
  const ScenarioConfig* sc = find_bundled_scenario("catmap_abelian_poc");
  REQUIRE(sc != nullptr);
  return sc->to_json();
}

}  // namespace

TEST_CASE("the bundled catalogue is stable and self describing") {
  const auto& all = bundled_scenarios();
  CHECK(all.size() == 13);
  std::set<std::string> names;
  for (const auto& sc : all) {
    CHECK(!sc.name.empty());
    CHECK(!sc.title.empty());
    CHECK(names.insert(sc.name).second);
    CHECK(find_bundled_scenario(sc.name) != nullptr);
    // serialization roundtrip is lossless
    Json j = sc.to_json();
    CHECK(ScenarioConfig::from_json(j).to_json() == j);
  }
  CHECK(find_bundled_scenario("no_such_scenario") == nullptr);
}

TEST_CASE("the checked in scenario files match the bundled catalogue") {
  fs::path dir = fs::path(HOLOCYCLE_SOURCE_DIR) / "scenarios";
  REQUIRE(fs::is_directory(dir));
  size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    std::ifstream in(entry.path());
    REQUIRE(in.good());
    Json j = Json::parse(in);
    const ScenarioConfig* sc = find_bundled_scenario(j.at("name").get<std::string>());
    REQUIRE(sc != nullptr);
    CHECK(j == sc->to_json());
  }
  CHECK(seen == bundled_scenarios().size());
}

TEST_CASE("overrides follow dotted paths and parse JSON when they can") {
  Json j = base_config();
  apply_override(j, "pipeline.samples", "25");
  CHECK(j["pipeline"]["samples"] == 25);
  apply_override(j, "expect", "mismatch");
  CHECK(j["expect"] == "mismatch");
  apply_override(j, "fiber.grid_size", "256");
  CHECK(j["fiber"]["grid_size"] == 256);
  apply_override(j, "alpha.params.angle", "[0.25, 0.1]");
  CHECK(j["alpha"]["params"]["angle"] == Json::array({0.25, 0.1}));
  apply_override(j, "pipeline.note", "not json at all");
  CHECK(j["pipeline"]["note"] == "not json at all");
  apply_override(j, "fresh.nested.flag", "true");
  CHECK(j["fresh"]["nested"]["flag"] == true);
}

TEST_CASE("malformed configs are rejected with a config error") {
  auto rejects = [](Json j) { CHECK_THROWS_AS(ScenarioConfig::from_json(j), ConfigInvalid); };

  Json j = base_config();
  j["surprise"] = 1;
  rejects(j);

  j = base_config();
  j["pipeline"]["name"] = "no-such-pipeline";
  rejects(j);

  j = base_config();
  j["pipeline"] = Json::object();  // object without a name
  rejects(j);

  j = base_config();
  j.erase("alpha");
  rejects(j);

  j = base_config();
  j.erase("base");
  rejects(j);

  j = base_config();
  j["expect"] = "sideways";
  rejects(j);

  j = base_config();
  j["name"] = "Bad Name";
  rejects(j);

  j = base_config();
  j["fiber"]["grid_size"] = 100;  // not a power of two
  rejects(j);

  j = base_config();
  j["fiber"]["grid_size"] = 4;  // too small
  rejects(j);

  j = base_config();
  j["fiber"]["jet_order"] = 0;
  rejects(j);

  j = base_config();
  j["fiber"]["jet_order"] = 7;
  rejects(j);

  j = base_config();
  j["pipeline"]["samples"] = 0;
  rejects(j);

  j = base_config();
  j["pipeline"]["tol_poc"] = -1e-9;
  rejects(j);

  j = base_config();
  j["budget_seconds"] = 0.0;
  rejects(j);

  j = base_config();
  j["seed"] = -3;
  rejects(j);
}

TEST_CASE("system and generator specs are validated when built") {
  Json toral = {{"type", "toral"}, {"matrix", {{2, 1}, {1, 1}}}};
  BaseSystem sys = make_system(toral);
  CHECK(sys.is_toral());

  CHECK_THROWS_AS(make_system(Json{{"type", "toral"}, {"matrix", {{1, 1}, {0, 1}}}}), Error);
  CHECK_THROWS_AS(make_system(Json{{"type", "toral"}, {"matrix", {{2, 0}, {0, 2}}}}), Error);
  CHECK_THROWS_AS(make_system(Json{{"type", "nonsense"}}), ConfigInvalid);

  Json fat = {{"family", "shear"}, {"params", {{"angle", {0.1}}, {"amp", {0.2}}}}};
  CHECK_THROWS_AS(
      [&] {
        Cocycle c = make_cocycle(fat, sys, 64, 1);
        (void)c.at(sys.sample_point(0));
      }(),
      ConfigInvalid);

  Json unknown = {{"family", "warp"}, {"params", Json::object()}};
  CHECK_THROWS_AS(make_cocycle(unknown, sys, 64, 1), ConfigInvalid);
}

TEST_CASE("reports are deterministic outside the meta block") {
  const ScenarioConfig* sc = find_bundled_scenario("catmap_abelian_poc");
  REQUIRE(sc != nullptr);
  auto r1 = run_scenario(*sc, 1);
  auto r2 = run_scenario(*sc, 1);
  CHECK(r1.verdict == "pass");
  Json a = make_report({r1}, 1);
  Json b = make_report({r2}, 1);
  a.erase("meta");
  b.erase("meta");
  CHECK(a == b);
}

TEST_CASE("outputs land as one report plus per scenario series") {
  const ScenarioConfig* sc = find_bundled_scenario("catmap_abelian_poc");
  REQUIRE(sc != nullptr);
  auto run = run_scenario(*sc, 1);
  Json report = make_report({run}, 1);
  fs::path dir = fs::temp_directory_path() / "holocycle_test_outputs";
  fs::remove_all(dir);
  write_outputs({run}, report, dir.string());
  CHECK(fs::is_regular_file(dir / "report.json"));
  REQUIRE(!run.artifacts.empty());
  for (const auto& art : run.artifacts) {
    CHECK(fs::is_regular_file(dir / run.name / art.filename));
  }
  std::ifstream in(dir / "report.json");
  Json back = Json::parse(in);
  CHECK(back.at("scenarios").size() == 1);
  CHECK(back.at("scenarios").at(0).at("name") == sc->name);
  fs::remove_all(dir);
}
