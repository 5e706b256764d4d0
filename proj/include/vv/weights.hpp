#pragma once

/// Weight tables of local estimators Σ_l w_l(a) N_l.

#include "vv/configs.hpp"
#include "vv/lattice.hpp"

#include <string>
#include <vector>

namespace vv {

struct WeightTable {
  int n = 2, dim = 2, q = 0;
  bool homogeneous = true;  ///< w_l(a) = a^q w_l
  std::vector<Rational> w;
  std::string id = "table";
  std::vector<std::string> comments;

  static WeightTable zeros(int n, int dim, int q, std::string id = "zero");
  std::uint32_t size() const { return std::uint32_t(w.size()); }
  const Rational& operator[](std::uint32_t l) const { return w[l]; }
  std::vector<double> asDouble() const;
  bool operator==(const WeightTable& o) const {
    return n == o.n && dim == o.dim && q == o.q && homogeneous == o.homogeneous && w == o.w;
  }
};

/// n_l^k for k = 0 … n²−1: number of k-subsets S of neighbour windows with
/// B_l ∩ ∩_{z∈S} C^n_{z,0} ≠ ∅. Indexed [l][k].
std::vector<std::vector<long long>> eulerNeighbourCounts(int n);

/// w_l = Σ_{k=1}^{n²} (−1)^{k+1} (1/k) n_l^{k−1}; d = 2, n ∈ {2,3,4}.
/// The construction lives in lattice coordinates, so only L.dim is used.
WeightTable eulerWeights(int n, const Lattice& L);

/// Orbit average under the window-preserving part of G.
WeightTable symmetrize(const WeightTable& T, const SymmetryGroup& G);

struct InvarianceReport {
  bool invariant = true;
  std::vector<std::uint32_t> orbit;  ///< first violating orbit, sorted
};
InvarianceReport checkInvariance(const WeightTable& T, const SymmetryGroup& G);

WeightTable parseTable(const std::string& text, const std::string& id = "table");
std::string serializeTable(const WeightTable& T);
WeightTable loadTable(const std::string& path);
void saveTable(const WeightTable& T, const std::string& path);

/// Names of the shipped tables (data/tables/<name>.vvwt).
const std::vector<std::string>& standardTableNames();
/// Regenerates a shipped table from its construction.
WeightTable buildStandardTable(const std::string& name);
/// Loads a shipped table file.
WeightTable standardTable(const std::string& name);
/// Directory holding shipped data; VV_DATA_DIR in the environment wins.
std::string dataDir();

/// "euler:<n>", "zero:<n>,<d>,<q>", a standard table name, or a file path.
WeightTable resolveTable(const std::string& spec);

/// Exact rational for a real constant: its 17-significant-digit decimal.
Rational decimalRational(double x);

}  // namespace vv
