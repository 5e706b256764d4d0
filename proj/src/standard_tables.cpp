#include "vv/weights.hpp"

#include <bit>
#include <cmath>

namespace vv {

namespace {

bool bit(std::uint32_t l, int j) { return (l >> j) & 1; }

// 2×2 configuration of a cube face given its four 3D pixel indices in
// (0,0), (1,0), (0,1), (1,1) order.
std::uint32_t face(std::uint32_t l, int a, int b, int c, int d) {
  return std::uint32_t(bit(l, a)) | bit(l, b) << 1 | bit(l, c) << 2 | bit(l, d) << 3;
}

const int kFaces[6][4] = {{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 2, 4, 6},
                          {1, 3, 5, 7}, {0, 1, 4, 5}, {2, 3, 6, 7}};

WeightTable euler4adj() {
  // Cubical complex with 4-adjacent foreground: V/4 − E/2 + F per window.
  WeightTable T = WeightTable::zeros(2, 2, 0, "euler2d_4adj");
  for (std::uint32_t l = 1; l < 16; ++l) {
    int V = std::popcount(l);
    int E = (bit(l, 0) && bit(l, 1)) + (bit(l, 2) && bit(l, 3)) + (bit(l, 0) && bit(l, 2)) +
            (bit(l, 1) && bit(l, 3));
    int F = l == 15;
    T.w[l] = Rational(V, 4) - Rational(E, 2) + Rational(F);
  }
  T.comments = {"Euler characteristic of the 4-adjacency cubical complex, V/4 - E/2 + F"};
  return T;
}

WeightTable area2d() {
  WeightTable T = WeightTable::zeros(2, 2, 2, "area2d");
  for (std::uint32_t l = 1; l < 16; ++l) T.w[l] = Rational(std::popcount(l), 4);
  T.comments = {"area as the point count: |B|/4 per 2x2 window"};
  return T;
}

WeightTable perimeter2d() {
  // Crofton with 4 equally weighted directions. A horizontal or vertical
  // pair lies in two windows, a diagonal pair in one.
  WeightTable T = WeightTable::zeros(2, 2, 1, "perimeter2d");
  for (std::uint32_t l = 1; l < 15; ++l) {
    int hv = (bit(l, 0) != bit(l, 1)) + (bit(l, 2) != bit(l, 3)) + (bit(l, 0) != bit(l, 2)) +
             (bit(l, 1) != bit(l, 3));
    int dg = (bit(l, 0) != bit(l, 3)) + (bit(l, 1) != bit(l, 2));
    T.w[l] = decimalRational(kPi / 4 * (hv / 4.0 + dg / (2 * std::sqrt(2.0))));
  }
  T.comments = {"perimeter (2 V_1) by a 4-direction Crofton formula over 2x2 windows",
                "irrational weights stored as 17-significant-digit decimals"};
  return T;
}

WeightTable euler3d() {
  // Cubical complex with 6-adjacent foreground: V/8 − E/4 + F/2 − C.
  WeightTable T = WeightTable::zeros(2, 3, 0, "euler3d");
  const int edges[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3},
                            {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  for (std::uint32_t l = 1; l < 256; ++l) {
    int E = 0, F = 0;
    for (auto& e : edges) E += bit(l, e[0]) && bit(l, e[1]);
    for (auto& f : kFaces) F += face(l, f[0], f[1], f[2], f[3]) == 15;
    T.w[l] = Rational(std::popcount(l), 8) - Rational(E, 4) + Rational(F, 2) - Rational(l == 255);
  }
  T.comments = {"Euler characteristic of the 6-adjacency cubical complex, V/8 - E/4 + F/2 - C"};
  return T;
}

// Fractions of the sphere closest to each of the 26 neighbour directions,
// averaged over the three direction classes (axis, face diagonal, space
// diagonal). Deterministic Fibonacci grid.
std::array<double, 3> directionClassFractions() {
  std::vector<Vec3> dirs;
  std::vector<int> cls;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      for (int z = -1; z <= 1; ++z)
        if (x || y || z) {
          dirs.push_back(Vec3(x, y, z).normalized());
          cls.push_back(std::abs(x) + std::abs(y) + std::abs(z) - 1);
        }
  const int N = 400000;
  std::array<double, 3> hits{0, 0, 0};
  const double golden = kPi * (3 - std::sqrt(5.0));
  for (int i = 0; i < N; ++i) {
    double z = 1 - (2 * i + 1.0) / N, r = std::sqrt(1 - z * z), t = golden * i;
    Vec3 p(r * std::cos(t), r * std::sin(t), z);
    int best = 0;
    for (int k = 1; k < 26; ++k)
      if (p.dot(dirs[k]) > p.dot(dirs[best])) best = k;
    hits[cls[best]] += 1;
  }
  const double members[3] = {6, 12, 8};
  for (int c = 0; c < 3; ++c) hits[c] = std::round(1e6 * hits[c] / N / members[c]) / 1e6;
  return hits;
}

WeightTable surface3d() {
  // Surface area (2 V_2) by Crofton over 13 lattice directions v: each line
  // direction contributes c_v·T_v/(|v|·m_v), T_v = differing pairs along v
  // in the window, m_v = windows sharing such a pair, c_v its sphere share
  // (both signs).
  auto frac = directionClassFractions();
  WeightTable T = WeightTable::zeros(2, 3, 2, "surface3d");
  struct Dir {
    int a, b, cls;
  };
  std::vector<Dir> pairs;
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) pairs.push_back({a, b, std::popcount(unsigned(a ^ b)) - 1});
  const double mult[3] = {4, 2, 1}, len[3] = {1, std::sqrt(2.0), std::sqrt(3.0)};
  for (std::uint32_t l = 1; l < 255; ++l) {
    // Per-class counts first, so every orbit member sees identical arithmetic.
    int cnt[3] = {0, 0, 0};
    for (auto& p : pairs) cnt[p.cls] += bit(l, p.a) != bit(l, p.b);
    double s = 0;
    for (int c = 0; c < 3; ++c) s += cnt[c] * (4 * frac[c] / (len[c] * mult[c]));
    T.w[l] = decimalRational(s);
  }
  T.comments = {"surface area (2 V_2) by a 13-direction Crofton formula over 2x2x2 windows",
                "direction weights are Voronoi shares of the sphere, rounded to 1e-6",
                "irrational weights stored as 17-significant-digit decimals"};
  return T;
}

WeightTable meancurv3d(const WeightTable& planar) {
  // V_1 ≈ (2/3)·Σ_axes width, width ≈ a·Σ_sections χ. Each 2×2 face lies in
  // two windows, so w_l = (1/3)·Σ_faces w_planar(face).
  WeightTable T = WeightTable::zeros(2, 3, 1, "meancurv3d");
  for (std::uint32_t l = 1; l < 256; ++l) {
    Rational s = 0;
    for (auto& f : kFaces) s += planar.w[face(l, f[0], f[1], f[2], f[3])];
    T.w[l] = s / 3;
  }
  T.comments = {"mean breadth from planar Euler weights on the three axis-parallel plane families"};
  return T;
}

}  // namespace

const std::vector<std::string>& standardTableNames() {
  static const std::vector<std::string> names = {"euler2d_n2", "euler2d_n3", "euler2d_4adj", "area2d",
                                                 "perimeter2d", "euler3d", "surface3d", "meancurv3d"};
  return names;
}

WeightTable buildStandardTable(const std::string& name) {
  WeightTable T;
  if (name == "euler2d_n2") T = eulerWeights(2, Lattice::standard(2));
  else if (name == "euler2d_n3") T = eulerWeights(3, Lattice::standard(2));
  else if (name == "euler2d_4adj") T = euler4adj();
  else if (name == "area2d") T = area2d();
  else if (name == "perimeter2d") T = perimeter2d();
  else if (name == "euler3d") T = euler3d();
  else if (name == "surface3d") T = surface3d();
  else if (name == "meancurv3d") T = meancurv3d(eulerWeights(2, Lattice::standard(2)));
  else throw Error("unknown standard table '" + name + "'");
  T.id = name;
  T.comments.insert(T.comments.begin(), "provenance: invented - artifact plumbing; generated by `vv weights standard`");
  return T;
}

}  // namespace vv
