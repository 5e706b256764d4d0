#include "vv/weights.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace vv {

WeightTable WeightTable::zeros(int n, int dim, int q, std::string id) {
  WeightTable T;
  T.n = n;
  T.dim = dim;
  T.q = q;
  T.w.assign(makeWindow(n, dim).numConfigs(), Rational(0));
  T.id = std::move(id);
  return T;
}

std::vector<double> WeightTable::asDouble() const {
  std::vector<double> out;
  for (auto& x : w) out.push_back(toDouble(x));
  return out;
}

namespace {

struct Rect {
  int x0, x1, y0, y1;
  bool empty() const { return x0 > x1 || y0 > y1; }
  Rect meet(const Rect& o) const {
    return {std::max(x0, o.x0), std::min(x1, o.x1), std::max(y0, o.y0), std::min(y1, o.y1)};
  }
  std::uint32_t mask(int n) const {
    std::uint32_t m = 0;
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) m |= 1u << (x + n * y);
    return m;
  }
};

// hist[mask][k]: number of k-subsets whose windows meet C_0 exactly in `mask`.
void enumerateSubsets(const std::vector<Rect>& nb, std::size_t start, const Rect& cur, int k, int n,
                      std::map<std::uint32_t, std::vector<long long>>& hist) {
  auto& row = hist[cur.mask(n)];
  if (row.empty()) row.assign(n * n, 0);
  ++row[k];
  for (std::size_t i = start; i < nb.size(); ++i) {
    Rect r = cur.meet(nb[i]);
    if (!r.empty()) enumerateSubsets(nb, i + 1, r, k + 1, n, hist);
  }
}

}  // namespace

std::vector<std::vector<long long>> eulerNeighbourCounts(int n) {
  if (n < 2 || n > 4) throw Error("eulerWeights supports n in {2,3,4}");
  std::vector<Rect> nb;
  for (int zy = -(n - 1); zy <= n - 1; ++zy)
    for (int zx = -(n - 1); zx <= n - 1; ++zx)
      if (zx || zy) nb.push_back(Rect{zx, zx + n - 1, zy, zy + n - 1}.meet({0, n - 1, 0, n - 1}));
  std::map<std::uint32_t, std::vector<long long>> hist;
  enumerateSubsets(nb, 0, {0, n - 1, 0, n - 1}, 0, n, hist);
  const std::uint32_t configs = 1u << (n * n);
  std::vector<std::vector<long long>> out(configs, std::vector<long long>(n * n, 0));
  for (std::uint32_t l = 1; l < configs; ++l)
    for (auto& [mask, row] : hist)
      if (l & mask)
        for (int k = 0; k < n * n; ++k) out[l][k] += row[k];
  return out;
}

WeightTable eulerWeights(int n, const Lattice& L) {
  if (L.dim != 2) throw Error("eulerWeights is defined for d = 2");
  auto nk = eulerNeighbourCounts(n);
  long long lcm = 1;
  for (int k = 1; k <= n * n; ++k) lcm = std::lcm(lcm, (long long)k);
  WeightTable T = WeightTable::zeros(n, 2, 0, "euler2d_n" + std::to_string(n));
  for (std::uint32_t l = 1; l < T.size(); ++l) {
    BigInt num = 0;
    for (int k = 1; k <= n * n; ++k) {
      BigInt term = BigInt(lcm / k) * nk[l][k - 1];
      num += (k % 2 == 1) ? term : BigInt(-term);
    }
    T.w[l] = Rational(num, BigInt(lcm));
  }
  T.comments.push_back("Euler characteristic weights from the neighbour-window inclusion-exclusion");
  return T;
}

WeightTable symmetrize(const WeightTable& T, const SymmetryGroup& G) {
  if (G.dim != T.dim) throw Error("symmetry group and table dimensions differ");
  auto acts = windowActions(G, T.n);
  WeightTable out = T;
  for (std::uint32_t l = 0; l < T.size(); ++l) {
    Rational s = 0;
    for (auto& p : acts) s += T.w[applyAction(l, p)];
    out.w[l] = s / Rational(long(acts.size()));
  }
  return out;
}

InvarianceReport checkInvariance(const WeightTable& T, const SymmetryGroup& G) {
  auto acts = windowActions(G, T.n);
  for (std::uint32_t l = 0; l < T.size(); ++l)
    for (auto& p : acts)
      if (T.w[applyAction(l, p)] != T.w[l]) return {false, orbitOf(l, T.n, G)};
  return {};
}

WeightTable parseTable(const std::string& text, const std::string& id) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty weight table");
  std::istringstream hs(line);
  std::string tag;
  hs >> tag;
  if (tag != "VVWT") throw Error("malformed weight-table header (expected VVWT)");
  std::map<std::string, std::string> kv;
  for (std::string tok; hs >> tok;) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error("malformed weight-table header field '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* k : {"n", "d", "q", "homogeneous"})
    if (!kv.count(k)) throw Error(std::string("weight-table header lacks '") + k + "'");
  int n, d, q, h;
  try {
    n = std::stoi(kv["n"]);
    d = std::stoi(kv["d"]);
    q = std::stoi(kv["q"]);
    h = std::stoi(kv["homogeneous"]);
  } catch (const std::exception&) {
    throw Error("malformed weight-table header values");
  }
  if (h != 0 && h != 1) throw Error("homogeneous must be 0 or 1");
  if (q < 0 || q > d) throw Error("q must lie in [0, d]");
  WeightTable T = WeightTable::zeros(n, d, q, id);
  T.homogeneous = h == 1;
  std::vector<bool> seen(T.size(), false);
  int lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    if (line[b] == '#') {
      auto c = line.find_first_not_of(" \t#", b);
      T.comments.push_back(c == std::string::npos ? "" : line.substr(c));
      continue;
    }
    std::istringstream ls(line);
    std::string ls1, ls2, extra;
    ls >> ls1 >> ls2;
    if (ls2.empty() || (ls >> extra))
      throw Error("line " + std::to_string(lineNo) + ": expected '<l> <rational>'");
    long long l;
    try {
      std::size_t used;
      l = std::stoll(ls1, &used);
      if (used != ls1.size()) throw Error("");
    } catch (const std::exception&) {
      throw Error("line " + std::to_string(lineNo) + ": bad configuration index '" + ls1 + "'");
    }
    if (l < 0 || l >= (long long)T.size())
      throw Error("line " + std::to_string(lineNo) + ": configuration index out of range");
    if (seen[l]) throw Error("line " + std::to_string(lineNo) + ": duplicate configuration index");
    seen[l] = true;
    Rational v = parseRational(ls2);
    if (l == 0 && v != 0) throw Error("weight for l=0 must be zero (w0 != 0 rejected)");
    T.w[l] = v;
  }
  return T;
}

std::string serializeTable(const WeightTable& T) {
  std::ostringstream out;
  out << "VVWT n=" << T.n << " d=" << T.dim << " q=" << T.q << " homogeneous=" << (T.homogeneous ? 1 : 0)
      << "\n";
  for (auto& c : T.comments) out << "# " << c << "\n";
  for (std::uint32_t l = 1; l < T.size(); ++l)
    if (T.w[l] != 0) out << l << " " << formatRational(T.w[l]) << "\n";
  return out.str();
}

WeightTable loadTable(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open weight table '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parseTable(ss.str(), std::filesystem::path(path).stem().string());
}

void saveTable(const WeightTable& T, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write weight table '" + path + "'");
  f << serializeTable(T);
  if (!f) throw Error("error writing weight table '" + path + "'");
}

std::string dataDir() {
  if (const char* e = std::getenv("VV_DATA_DIR")) return e;
  return VV_DATA_DIR;
}

WeightTable standardTable(const std::string& name) {
  const auto& names = standardTableNames();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw Error("unknown standard table '" + name + "'");
  WeightTable T = loadTable(dataDir() + "/tables/" + name + ".vvwt");
  T.id = name;
  return T;
}

WeightTable resolveTable(const std::string& spec) {
  if (spec.rfind("euler:", 0) == 0) return eulerWeights(std::stoi(spec.substr(6)), Lattice::standard(2));
  if (spec.rfind("zero:", 0) == 0) {
    auto parts = spec.substr(5);
    int n, d, q;
    if (std::sscanf(parts.c_str(), "%d,%d,%d", &n, &d, &q) != 3) throw Error("zero table spec is zero:n,d,q");
    return WeightTable::zeros(n, d, q);
  }
  const auto& names = standardTableNames();
  if (std::find(names.begin(), names.end(), spec) != names.end()) return standardTable(spec);
  return loadTable(spec);
}

Rational decimalRational(double x) { return parseRational(fmt17(x)); }

}  // namespace vv
