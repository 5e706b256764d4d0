#include <doctest.h>

#include "vv/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vv;

namespace {
std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}
}  // namespace

TEST_CASE("csv output") {
  ResultTable t;
  t.columns = {"x", "y", "name"};
  CHECK_THROWS_AS(csvText(t), Error);
  t.add({0.1, 2LL, std::string("a,b")});
  CHECK(csvText(t) == "x,y,name\n0.10000000000000001,2,\"a,b\"\n");
  CHECK_THROWS_AS(t.add({1.0}), Error);
}

TEST_CASE("svg is well formed") {
  ResultTable t;
  t.columns = {"x", "y"};
  for (int i = 0; i < 5; ++i) t.add({double(i), double(i * i)});
  std::string s = svgText(t, {"squares", "x", {"y"}, ""});
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("viewBox=") != std::string::npos);
  CHECK(s.find("</svg>") == s.size() - 7);
  CHECK(s.find("<svg", 1) == std::string::npos);
  ResultTable empty;
  empty.columns = {"x", "y"};
  CHECK_THROWS_AS(svgText(empty, {"", "x", {"y"}, ""}), Error);
}

TEST_CASE("scenario runs are byte reproducible") {
  auto dir = std::filesystem::temp_directory_path() / "vv_exp_test";
  std::filesystem::remove_all(dir);
  ScenarioConfig cfg;
  cfg.name = "box-rotation-bias";
  cfg.outDir = (dir / "one").string();
  ScenarioResult r1 = runScenario(cfg);
  cfg.outDir = (dir / "two").string();
  ScenarioResult r2 = runScenario(cfg);
  CHECK(r1.passed());
  CHECK(slurp((dir / "one" / "box-rotation-bias.csv").string()) == slurp((dir / "two" / "box-rotation-bias.csv").string()));
  CHECK(std::filesystem::exists(dir / "one" / "box-rotation-bias.svg"));
  cfg.seed = 77;
  cfg.outDir.clear();
  CHECK(csvText(runScenario(cfg).table) != csvText(r1.table));
  std::filesystem::remove_all(dir);
}

TEST_CASE("scenario catalogue and overrides") {
  for (auto& n : {"euler-exactness", "euler-blowup", "count-validate", "volume-unbiased", "kr-crosscheck",
                  "box-rotation-bias", "meancurv-crosscheck", "musthold-residual", "symmetrize-check"})
    CHECK(std::find(scenarioNames().begin(), scenarioNames().end(), n) != scenarioNames().end());
  ScenarioConfig cfg;
  cfg.name = "no-such";
  CHECK_THROWS_AS(runScenario(cfg), Error);
  cfg.name = "count-validate";
  cfg.settings.set("cases", "5");
  ScenarioResult r = runScenario(cfg);
  CHECK(r.passed());
  CHECK(r.table.rows.size() == 5);
  cfg.name = "volume-unbiased";
  cfg.settings = KeyValue::parse("phases = 50\na = 0.1\n[shape]\nkind = disk\nradius = 0.5\n");
  r = runScenario(cfg);
  CHECK(r.table.number(0, "numPhases") == 50);
  CHECK(r.table.number(0, "volume") == doctest::Approx(kPi / 4));
}

TEST_CASE("lattice settings") {
  Lattice L = latticeFromConfig({{"dim", "2"}, {"basis", "1,0.5,0,1"}, {"spacing", "0.1"}});
  CHECK(L.basis(0, 1) == 0.5);
  CHECK(L.spacing == 0.1);
  Lattice R = latticeFromConfig({{"dim", "3"}, {"euler_deg", "10,20,30"}});
  CHECK(unitCellVolume(R) == doctest::Approx(1));
  CHECK_THROWS_AS(latticeFromConfig({{"dim", "4"}}), Error);
}
