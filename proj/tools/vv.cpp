// vv: command-line front end for counting, estimation, sweeps, analytic
// limits, weight tables and the experiment scenarios.

#include "vv/analytic.hpp"
#include "vv/estimator.hpp"
#include "vv/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

using namespace vv;

namespace {

struct Common {
  std::string config, outDir;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::string> sets;  ///< key=value overrides

  KeyValue settings() const {
    KeyValue kv = config.empty() ? KeyValue() : KeyValue::load(config);
    for (auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw Error("--set expects key=value, got '" + s + "'");
      kv.set(s.substr(0, eq), s.substr(eq + 1));
    }
    return kv;
  }
};

void addCommon(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "key-value settings file");
  app->add_option("--seed", c.seed, "random seed (0: default)");
  app->add_option("--out-dir", c.outDir, "directory for output files");
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--set", c.sets, "override a setting, key=value");
}

/// Writes to out-dir/<name> when an output directory is given, else stdout.
void emit(const Common& c, const std::string& name, const std::string& text) {
  if (c.outDir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(c.outDir);
  std::string path = c.outDir + "/" + name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  std::cerr << "wrote " << path << "\n";
}

Lattice latticeOf(const KeyValue& kv, int dim) {
  auto sec = kv.section("lattice");
  Lattice L = sec.empty() ? Lattice::standard(dim) : latticeFromConfig(sec, dim);
  return L;
}

Shape shapeOf(const KeyValue& kv) {
  auto sec = kv.section("shape");
  if (!sec.count("kind")) throw Error("settings need a [shape] section with a kind");
  return shapeFromConfig(sec);
}

/// Image from `image = path` or by digitizing [shape] on [lattice] at a.
BinaryImage imageOf(const KeyValue& kv, const Common& c) {
  if (kv.has("image")) return readImage(kv.getString("image"));
  Shape S = shapeOf(kv);
  Lattice L = latticeOf(kv, shapeDim(S)).withSpacing(kv.getDouble("a", 0.05));
  if (kv.has("phase")) L = L.withPhase(kv.getVec("phase", Vec3::Zero()));
  else if (c.seed) L = phaseFor(L, c.seed, 0);
  DigitizeOptions o;
  o.threads = c.threads;
  BinaryImage img = digitize(S, L, o);
  img.id = shapeKind(S);
  return img;
}

std::string countsText(const CountVector& cv) {
  std::string tmp = (std::filesystem::temp_directory_path() / "vv_counts.csv").string();
  writeCountsCsv(cv, tmp);
  std::ifstream f(tmp);
  std::string text((std::istreambuf_iterator<char>(f)), {});
  std::filesystem::remove(tmp);
  return text;
}

std::string echo(const KeyValue& kv) {
  std::string s;
  std::istringstream is(kv.serialize());
  for (std::string line; std::getline(is, line);)
    if (!line.empty()) s += "# " + line + "\n";
  return s;
}

int cmdCount(const Common& c, int n) {
  KeyValue kv = c.settings();
  if (n == 0) n = int(kv.getInt("n", 2));
  BinaryImage img = imageOf(kv, c);
  if (kv.has("write_image") && !c.outDir.empty()) {
    std::filesystem::create_directories(c.outDir);
    writeImage(img, c.outDir + "/" + kv.getString("write_image"));
  }
  emit(c, "counts.csv", countsText(countConfigs(img, n, c.threads)));
  return 0;
}

int cmdEstimate(const Common& c, std::string table) {
  KeyValue kv = c.settings();
  if (table.empty()) table = kv.getString("table", "euler:2");
  WeightTable T = resolveTable(table);
  BinaryImage img = imageOf(kv, c);
  EstimateRecord r = estimate(img, T, c.threads);
  const Vec3& p = img.lattice().phase;
  std::string out = echo(kv) + "shape,table,a,phase,exact_sum,value\n" + img.id + "," + T.id + "," +
                    fmt17(img.lattice().spacing) + ",\"" + fmt17(p[0]) + " " + fmt17(p[1]) + " " + fmt17(p[2]) +
                    "\"," + formatRational(r.exactSum) + "," + fmt17(r.value) + "\n";
  emit(c, "estimate.csv", out);
  return 0;
}

int cmdSweep(const Common& c) {
  KeyValue kv = c.settings();
  Shape S = shapeOf(kv);
  Lattice L = latticeOf(kv, shapeDim(S));
  std::string spec = kv.getString("table", "volume");
  WeightTable T;
  if (spec != "volume") T = resolveTable(spec);
  std::vector<double> as = kv.has("a") ? kv.getDoubles("a")
                                       : geometricSequence(kv.getDouble("a0", 0.1), int(kv.getInt("levels", 4)),
                                                           kv.getDouble("factor", 0.5));
  DesignOptions o;
  o.numPhases = int(kv.getInt("phases", 100));
  o.seed = c.seed ? c.seed : std::uint64_t(kv.getInt("seed", 1));
  o.threads = c.threads;
  o.fixedPhase = kv.getBool("fixed_phase", false);
  SweepResult r = multigridSweep(S, spec == "volume" ? nullptr : &T, L, as, o);
  r.shapeId = kv.getString("shape.id", shapeKind(S));
  std::string tmp = (std::filesystem::temp_directory_path() / "vv_sweep.csv").string();
  writeSweepCsv(r, tmp);
  std::ifstream f(tmp);
  std::string text((std::istreambuf_iterator<char>(f)), {});
  std::filesystem::remove(tmp);
  Extrapolation ex = r.linearExtrapolation();
  text += "# linear extrapolation to a=0: " + fmt17(ex.intercept) + " +- " + fmt17(ex.stderr_) + "\n";
  emit(c, "sweep.csv", text);
  return 0;
}

int cmdAnalytic(const Common& c, std::string kind) {
  KeyValue kv = c.settings();
  if (kind.empty()) kind = kv.getString("kind");
  static const std::set<std::string> kinds = {"polygon-expected", "parallelogram", "surface-polytope", "surface-regular",
                                              "meancurv-revolution", "meancurv-regular", "musthold"};
  if (!kinds.count(kind)) throw Error("unknown analytic kind '" + kind + "'");
  WeightTable T = resolveTable(kv.getString("table", "euler:2"));
  Lattice L = latticeOf(kv, T.dim);
  LimitReport r;
  if (kind == "parallelogram") {
    r = parallelogramLimit(T, deg(kv.getDouble("phi_deg")), deg(kv.getDouble("psi_deg")), L,
                           kv.getDouble("s1", 1), kv.getDouble("s2", 1));
  } else if (kind == "musthold") {
    int N = int(kv.getInt("grid", 32));
    std::vector<double> grid;
    for (int k = 0; k < N; ++k) grid.push_back((k + 0.5) * kPi / N);
    std::string out = echo(kv) + "theta,lhs,rhs,residual,error_bound\n";
    for (auto& p : mustholdResidual(T, L, grid))
      out += fmt17(p.theta) + "," + fmt17(p.lhs) + "," + fmt17(p.rhs) + "," + fmt17(p.residual) + "," +
             fmt17(p.errorBound) + "\n";
    emit(c, "analytic.csv", out);
    return 0;
  } else {
    Shape S = shapeOf(kv);
    auto* P = std::get_if<HalfspacePolytope>(&S);
    if (kind == "polygon-expected") {
      if (!P) throw Error("polygon-expected needs a polygon shape");
      double a = kv.getDouble("a");
      if (kv.getBool("regions", false) || !T.homogeneous) {
        PolygonOptions po{kv.getBool("allow_any_a", false)};
        RegionVolumeTable rv = polygonRegionVolumes(*P, T.n, L, a, po);
        auto EN = rv.expectedCounts();
        r.value = expectedEstimate(EN, T, a);
        r.terms = {{"regions", r.value}};
        r.coefficients = {{"a_max", rv.aMax}, {"band_area", rv.bandArea()}};
      } else {
        r = polygonExpectedEstimate(*P, T, L, a);
      }
    } else if (kind == "surface-polytope") {
      if (!P) throw Error("surface-polytope needs a polytope shape");
      r = surfaceAreaLimitPolytope(*P, T, L);
    } else if (kind == "surface-regular") {
      r = surfaceAreaLimitRegular(S, T, L);
    } else if (kind == "meancurv-revolution") {
      auto* X = std::get_if<RevolutionBody>(&S);
      if (!X) throw Error("meancurv-revolution needs a revolution shape");
      r = meanCurvatureLimitRevolution(*X, T, L);
    } else if (kind == "meancurv-regular") {
      r = meanCurvatureLimitRegular(S, T, L);
    } else {
      throw Error("unknown analytic kind '" + kind + "'");
    }
  }
  std::string out = echo(kv) + "name,value\nvalue," + fmt17(r.value) + "\n";
  for (auto& [k, v] : r.terms) out += "term:" + k + "," + fmt17(v) + "\n";
  for (auto& [k, v] : r.coefficients) out += "coef:" + k + "," + fmt17(v) + "\n";
  out += "quadrature_error," + fmt17(r.quadratureError) + "\n";
  emit(c, "analytic.csv", out);
  return 0;
}

int cmdWeights(const Common& c, const std::string& action, const std::string& spec, int n) {
  if (action == "standard") {
    std::string dir = c.outDir.empty() ? dataDir() + "/tables" : c.outDir;
    std::filesystem::create_directories(dir);
    for (auto& name : standardTableNames()) {
      saveTable(buildStandardTable(name), dir + "/" + name + ".vvwt");
      std::cerr << "wrote " << dir << "/" << name << ".vvwt\n";
    }
    return 0;
  }
  if (action == "euler") {
    WeightTable T = eulerWeights(n ? n : 2, Lattice::standard(2));
    emit(c, T.id + ".vvwt", serializeTable(T));
    return 0;
  }
  if (spec.empty()) throw Error("weights " + action + " needs a table spec");
  WeightTable T = resolveTable(spec);
  SymmetryGroup G = latticeSymmetries(Lattice::standard(T.dim), true);
  if (action == "show") {
    emit(c, T.id + ".vvwt", serializeTable(T));
  } else if (action == "symmetrize") {
    WeightTable S = symmetrize(T, G);
    S.id = T.id + "_sym";
    emit(c, S.id + ".vvwt", serializeTable(S));
  } else if (action == "check") {
    InvarianceReport rep = checkInvariance(T, G);
    if (rep.invariant) {
      std::cout << T.id << ": invariant under " << G.elements.size() << " lattice symmetries\n";
      return 0;
    }
    std::cout << T.id << ": not invariant; orbit";
    for (auto l : rep.orbit) std::cout << ' ' << l;
    std::cout << "\n";
    return 1;
  } else {
    throw Error("unknown weights action '" + action + "'");
  }
  return 0;
}

int cmdExperiment(const Common& c, const std::string& name, bool noSvg) {
  KeyValue kv = c.settings();
  std::vector<std::string> names;
  if (name == "all") names = scenarioNames();
  else names = {name};
  bool ok = true;
  for (auto& nm : names) {
    ScenarioConfig cfg;
    cfg.name = nm;
    cfg.seed = c.seed;
    cfg.threads = c.threads;
    cfg.outDir = c.outDir;
    cfg.svg = !noSvg;
    // Settings under [<scenario>] apply to that scenario only.
    KeyValue own(kv.section(nm));
    for (auto& [k, v] : kv.raw())
      if (k.find('.') == std::string::npos || names.size() == 1) own.set(k, v);
    cfg.settings = own;
    ScenarioResult r = runScenario(cfg);
    for (auto& ch : r.checks) {
      std::printf("%s %s: %s%s%s\n", ch.pass ? "PASS" : "FAIL", nm.c_str(), ch.name.c_str(),
                  ch.detail.empty() ? "" : " | ", ch.detail.c_str());
    }
    std::printf("%s %s (%.1f s)\n", r.passed() ? "PASSED" : "FAILED", nm.c_str(), r.seconds);
    std::fflush(stdout);
    ok = ok && r.passed();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local estimators of intrinsic volumes on binary lattice images"};
  app.require_subcommand(1);
  Common common;

  auto* count = app.add_subcommand("count", "count window configurations of an image or digitized shape");
  int countN = 0;
  addCommon(count, common);
  count->add_option("--n", countN, "window size");

  auto* est = app.add_subcommand("estimate", "evaluate a weight table on one image");
  std::string estTable;
  addCommon(est, common);
  est->add_option("--table", estTable, "table: euler:<n>, zero:<n,d,q>, a standard name, or a path");

  auto* sweep = app.add_subcommand("sweep", "design means over a decreasing sequence of spacings");
  addCommon(sweep, common);

  auto* an = app.add_subcommand("analytic", "exact expectations and asymptotic limits");
  std::string anKind;
  addCommon(an, common);
  an->add_option("kind", anKind,
                 "polygon-expected | parallelogram | surface-polytope | surface-regular | meancurv-revolution | "
                 "meancurv-regular | musthold");

  auto* wt = app.add_subcommand("weights", "build, show, symmetrize and check weight tables");
  std::string wAction, wSpec;
  int wN = 0;
  addCommon(wt, common);
  wt->add_option("action", wAction, "standard | euler | show | symmetrize | check")->required();
  wt->add_option("table", wSpec, "table spec");
  wt->add_option("--n", wN, "window size for euler");

  auto* ex = app.add_subcommand("experiment", "run a scenario or all of them");
  std::string exName;
  bool noSvg = false;
  addCommon(ex, common);
  ex->add_option("name", exName, "scenario name or 'all'")->required();
  ex->add_flag("--no-svg", noSvg, "skip SVG plots");
  auto* list = app.add_subcommand("list", "list scenarios and standard tables");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*count) return cmdCount(common, countN);
    if (*est) return cmdEstimate(common, estTable);
    if (*sweep) return cmdSweep(common);
    if (*an) return cmdAnalytic(common, anKind);
    if (*wt) return cmdWeights(common, wAction, wSpec, wN);
    if (*ex) return cmdExperiment(common, exName, noSvg);
    if (*list) {
      for (auto& s : scenarioNames()) std::cout << "scenario " << s << "\n";
      for (auto& s : standardTableNames()) std::cout << "table " << s << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "vv: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
