#pragma once

/// Scenario runner: each scenario builds shapes, tables and lattices from
/// settings (with pinned defaults), writes a CSV (and optionally an SVG),
/// and reports named pass/fail checks.

#include "vv/keyvalue.hpp"
#include "vv/lattice.hpp"

#include <string>
#include <variant>
#include <vector>

namespace vv {

using Cell = std::variant<double, long long, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  double number(std::size_t row, const std::string& column) const;
};

/// Header plus rows, doubles with 17 significant digits. Throws on an empty table.
std::string csvText(const ResultTable& t);
void emitCsv(const ResultTable& t, const std::string& path);

struct PlotSpec {
  std::string title, x;
  std::vector<std::string> y;  ///< numeric columns drawn as polylines
  std::string error;           ///< optional column with ±error bars for y[0]
};
std::string svgText(const ResultTable& t, const PlotSpec& p);
void emitSvg(const ResultTable& t, const PlotSpec& p, const std::string& path);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ScenarioConfig {
  std::string name;
  std::uint64_t seed = 0;  ///< 0 picks the scenario's documented default
  int threads = 1;
  std::string outDir;      ///< empty: no files
  bool svg = true;
  KeyValue settings;       ///< overrides, see README
};

struct ScenarioResult {
  std::string name;
  std::vector<Check> checks;
  ResultTable table;
  PlotSpec plot;         ///< no SVG when plot.y is empty
  ResultTable plotData;  ///< plotted rows; the main table when empty
  double seconds = 0;
  bool passed() const;
};

const std::vector<std::string>& scenarioNames();
std::uint64_t defaultSeed(const std::string& scenario);

/// Runs one scenario; files go to cfg.outDir/<name>.csv and .svg.
ScenarioResult runScenario(const ScenarioConfig& cfg);

/// Lattice from settings: dim, basis (row-major), rotate_deg (d = 2) or
/// euler_deg (d = 3) applied to the basis, spacing.
Lattice latticeFromConfig(const std::map<std::string, std::string>& kv, int defaultDim = 2);

}  // namespace vv
