#include "vv/configs.hpp"

#include <bit>
#include <climits>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace vv {

Window makeWindow(int n, int dim) {
  if (dim == 2 ? (n < 1 || n > 4) : dim == 3 ? (n < 1 || n > 2) : true)
    throw Error("unsupported window: n=" + std::to_string(n) + " d=" + std::to_string(dim));
  Window w;
  w.n = n;
  w.dim = dim;
  int total = dim == 2 ? n * n : n * n * n;
  for (int j = 0; j < total; ++j)
    w.lambdas.emplace_back(j % n, (j / n) % n, dim == 3 ? j / (n * n) : 0);
  return w;
}

std::vector<Vec3> Window::worldPoints(const Lattice& L) const {
  std::vector<Vec3> out;
  for (auto& l : lambdas) out.push_back(L.vec(l.cast<double>()));
  return out;
}

int pixelIndex(const std::vector<int>& lambda, int n) {
  int j = 0, p = 1;
  for (int v : lambda) {
    if (v < 0 || v >= n) throw Error("window coordinate out of range");
    j += p * v;
    p *= n;
  }
  return j;
}

std::uint32_t configOfWindow(const BinaryImage& img, const std::array<long long, 3>& z, int n) {
  Window w = makeWindow(n, img.dim());
  const auto& e = img.extent();
  const auto& o = img.origin();
  for (int i = 0; i < img.dim(); ++i)
    if (z[i] < o[i] || z[i] + n > o[i] + e[i]) throw Error("window out of image bounds");
  std::uint32_t l = 0;
  for (int j = 0; j < w.points(); ++j) {
    const auto& lam = w.lambdas[j];
    if (img.get(int(z[0] - o[0]) + lam[0], int(z[1] - o[1]) + lam[1], int(z[2] - o[2]) + lam[2]))
      l |= 1u << j;
  }
  return l;
}

std::uint64_t CountVector::nonzeroTotal() const {
  std::uint64_t s = 0;
  for (std::size_t l = 1; l < counts.size(); ++l) s += counts[l];
  return s;
}

namespace {

void checkMargin(const BinaryImage& img, int n) {
  if (img.foregroundMargin() < n - 1)
    throw Error("insufficient background margin for n=" + std::to_string(n) + " windows");
}

CountVector emptyCounts(const BinaryImage& img, int n) {
  CountVector c;
  c.n = n;
  c.dim = img.dim();
  c.counts.assign(makeWindow(n, img.dim()).numConfigs(), 0);
  c.imageId = img.id;
  return c;
}

inline std::uint64_t shifted(const std::uint64_t* row, int w, int s) {
  return s ? (row[w] >> s) | (row[w + 1] << (64 - s)) : row[w];
}

}  // namespace

CountVector countConfigs(const BinaryImage& img, int n, int threads) {
  checkMargin(img, n);
  CountVector out = emptyCounts(img, n);
  const Window win = makeWindow(n, img.dim());
  const int P = win.points();
  const auto& e = img.extent();
  const int d = img.dim();
  const int ax = e[0] - n + 1, ay = e[1] - n + 1, az = d == 3 ? e[2] - n + 1 : 1;
  if (ax <= 0 || ay <= 0 || az <= 0) return out;
  const int words = (ax + 63) / 64;
  const std::uint64_t lastMask = (ax % 64) ? (std::uint64_t(1) << (ax % 64)) - 1 : ~std::uint64_t(0);
  const std::uint32_t full = win.fullConfig();

  // Chunks of anchor rows, each with a private histogram merged by addition.
  const std::size_t anchorRows = std::size_t(ay) * az;
  const std::size_t chunks = std::min<std::size_t>(anchorRows, std::size_t(std::max(threads, 1)) * 4);
  std::vector<std::vector<std::uint64_t>> hist(chunks, std::vector<std::uint64_t>(out.counts.size(), 0));
  parallelFor(chunks, threads, [&](std::size_t c) {
    auto& h = hist[c];
    std::size_t r0 = anchorRows * c / chunks, r1 = anchorRows * (c + 1) / chunks;
    std::vector<const std::uint64_t*> rows(P);
    std::uint64_t plane[64];
    for (std::size_t r = r0; r < r1; ++r) {
      int y = int(r % ay), z = int(r / ay);
      for (int j = 0; j < P; ++j) rows[j] = img.rowPtr(y + win.lambdas[j][1], z + win.lambdas[j][2]);
      for (int w = 0; w < words; ++w) {
        std::uint64_t any = 0, all = ~std::uint64_t(0);
        for (int j = 0; j < P; ++j) {
          plane[j] = shifted(rows[j], w, win.lambdas[j][0]);
          any |= plane[j];
          all &= plane[j];
        }
        std::uint64_t valid = w == words - 1 ? lastMask : ~std::uint64_t(0);
        any &= valid;
        if (!any) continue;
        all &= valid;
        h[full] += std::popcount(all);
        for (std::uint64_t b = any & ~all; b; b &= b - 1) {
          int k = std::countr_zero(b);
          std::uint32_t l = 0;
          for (int j = 0; j < P; ++j) l |= std::uint32_t((plane[j] >> k) & 1) << j;
          ++h[l];
        }
      }
    }
  });
  for (auto& h : hist)
    for (std::size_t l = 1; l < h.size(); ++l) out.counts[l] += h[l];
  out.counts[0] = 0;
  return out;
}

CountVector countConfigsNaive(const BinaryImage& img, int n) {
  checkMargin(img, n);
  CountVector out = emptyCounts(img, n);
  const auto& e = img.extent();
  const auto& o = img.origin();
  const int d = img.dim();
  for (int z = 0; z <= (d == 3 ? e[2] - n : 0); ++z)
    for (int y = 0; y <= e[1] - n; ++y)
      for (int x = 0; x <= e[0] - n; ++x) {
        std::uint32_t l = configOfWindow(img, {o[0] + x, o[1] + y, o[2] + z}, n);
        if (l) ++out.counts[l];
      }
  return out;
}

namespace {

// Lattice-coordinate anchor range whose windows can meet S.
void anchorRange(const Shape& S, const Lattice& L, int n, std::array<long long, 3>& lo,
                 std::array<long long, 3>& hi, bool& empty) {
  BoundingBox bb = boundingBox(S);
  empty = bb.empty;
  lo = hi = {0, 0, 0};
  if (empty) return;
  const int d = L.dim;
  Vec3 mn = Vec3::Constant(INFINITY), mx = -mn;
  for (int c = 0; c < (1 << d); ++c) {
    Vec3 p;
    for (int i = 0; i < 3; ++i) p[i] = (c >> i) & 1 ? bb.hi[i] : bb.lo[i];
    if (d == 2) p[2] = 0;
    Vec3 z = L.coords(p);
    mn = mn.cwiseMin(z);
    mx = mx.cwiseMax(z);
  }
  for (int i = 0; i < d; ++i) {
    lo[i] = (long long)std::floor(mn[i]) - n;
    hi[i] = (long long)std::ceil(mx[i]) + 1;
  }
}

}  // namespace

CountVector hitOrMissCounts(const Shape& S, const Lattice& L, int n) {
  const Window win = makeWindow(n, L.dim);
  CountVector out;
  out.n = n;
  out.dim = L.dim;
  out.counts.assign(win.numConfigs(), 0);
  out.imageId = "hit-or-miss";
  std::array<long long, 3> lo, hi;
  bool empty;
  anchorRange(S, L, n, lo, hi, empty);
  if (empty) return out;
  for (long long z = lo[2]; z <= hi[2]; ++z)
    for (long long y = lo[1]; y <= hi[1]; ++y)
      for (long long x = lo[0]; x <= hi[0]; ++x) {
        std::uint32_t l = 0;
        for (int j = 0; j < win.points(); ++j) {
          Vec3 p = Vec3(double(x), double(y), double(z)) + win.lambdas[j].cast<double>();
          if (contains(S, L.sample(p))) l |= 1u << j;
        }
        if (l) ++out.counts[l];
      }
  return out;
}

std::uint64_t hitOrMissCount(const Shape& S, const Lattice& L, int n, std::uint32_t l) {
  if (l == 0) throw Error("hit-or-miss count of l = 0 is infinite");
  const Window win = makeWindow(n, L.dim);
  if (l >= win.numConfigs()) throw Error("configuration index out of range");
  std::array<long long, 3> lo, hi;
  bool empty;
  anchorRange(S, L, n, lo, hi, empty);
  if (empty) return 0;
  std::uint64_t count = 0;
  for (long long z = lo[2]; z <= hi[2]; ++z)
    for (long long y = lo[1]; y <= hi[1]; ++y)
      for (long long x = lo[0]; x <= hi[0]; ++x) {
        bool ok = true;
        for (int j = 0; j < win.points() && ok; ++j) {
          Vec3 p = Vec3(double(x), double(y), double(z)) + win.lambdas[j].cast<double>();
          ok = contains(S, L.sample(p)) == bool((l >> j) & 1);
        }
        count += ok;
      }
  return count;
}

std::uint64_t touchedWindowCount(const BinaryImage& img, int n) {
  const Window win = makeWindow(n, img.dim());
  const auto& e = img.extent();
  const auto& o = img.origin();
  std::unordered_set<std::uint64_t> anchors;
  auto key = [](long long x, long long y, long long z) {
    return (std::uint64_t(x + (1 << 20)) << 42) ^ (std::uint64_t(y + (1 << 20)) << 21) ^
           std::uint64_t(z + (1 << 20));
  };
  for (int z = 0; z < e[2]; ++z)
    for (int y = 0; y < e[1]; ++y)
      for (int x = 0; x < e[0]; ++x)
        if (img.get(x, y, z))
          for (auto& lam : win.lambdas)
            anchors.insert(key(o[0] + x - lam[0], o[1] + y - lam[1], o[2] + z - lam[2]));
  return anchors.size();
}

std::vector<std::vector<int>> windowActions(const SymmetryGroup& G, int n) {
  const Window win = makeWindow(n, G.dim);
  std::vector<std::vector<int>> out;
  const double c = 0.5 * (n - 1);
  for (const IMat& M : G.elements) {
    std::vector<int> perm(win.points());
    bool ok = true;
    for (int j = 0; j < win.points() && ok; ++j) {
      Vec3 lam = win.lambdas[j].cast<double>() - Vec3(c, c, G.dim == 3 ? c : 0);
      Vec3 img = M.cast<double>() * lam + Vec3(c, c, G.dim == 3 ? c : 0);
      std::vector<int> coords;
      for (int i = 0; i < G.dim; ++i) {
        double r = std::round(img[i]);
        if (std::abs(r - img[i]) > 1e-9 || r < 0 || r >= n) ok = false;
        coords.push_back(int(r));
      }
      if (ok) perm[j] = pixelIndex(coords, n);
    }
    if (ok) out.push_back(perm);
  }
  return out;
}

std::uint32_t applyAction(std::uint32_t l, const std::vector<int>& perm) {
  std::uint32_t out = 0;
  for (std::size_t j = 0; j < perm.size(); ++j)
    if ((l >> j) & 1) out |= 1u << perm[j];
  return out;
}

std::vector<std::uint32_t> orbitOf(std::uint32_t l, int n, const SymmetryGroup& G) {
  std::vector<std::uint32_t> orbit;
  for (auto& p : windowActions(G, n)) orbit.push_back(applyAction(l, p));
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  return orbit;
}

CountVector permuteCounts(const CountVector& c, const std::vector<int>& perm) {
  CountVector out = c;
  std::fill(out.counts.begin(), out.counts.end(), 0);
  for (std::uint32_t l = 1; l < c.counts.size(); ++l) out.counts[applyAction(l, perm)] += c.counts[l];
  return out;
}

void writeCountsCsv(const CountVector& c, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write counts '" + path + "'");
  f << "# n=" << c.n << " d=" << c.dim << " image=" << c.imageId << "\n";
  f << "l,count\n";
  for (std::size_t l = 1; l < c.counts.size(); ++l)
    if (c.counts[l]) f << l << "," << c.counts[l] << "\n";
}

CountVector readCountsCsv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open counts '" + path + "'");
  std::string line;
  CountVector c;
  bool header = false;
  while (std::getline(f, line)) {
    if (line.rfind("#", 0) == 0) {
      std::istringstream hs(line.substr(1));
      for (std::string tok; hs >> tok;) {
        if (tok.rfind("n=", 0) == 0) c.n = std::stoi(tok.substr(2));
        else if (tok.rfind("d=", 0) == 0) c.dim = std::stoi(tok.substr(2));
        else if (tok.rfind("image=", 0) == 0) c.imageId = tok.substr(6);
      }
      c.counts.assign(makeWindow(c.n, c.dim).numConfigs(), 0);
      header = true;
      continue;
    }
    if (line == "l,count" || line.empty()) continue;
    if (!header) throw Error("counts file lacks the header comment");
    auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("malformed counts row '" + line + "'");
    unsigned long l = std::stoul(line.substr(0, comma));
    if (l == 0 || l >= c.counts.size()) throw Error("configuration index out of range in counts file");
    c.counts[l] = std::stoull(line.substr(comma + 1));
  }
  if (!header) throw Error("counts file lacks the header comment");
  return c;
}

}  // namespace vv
