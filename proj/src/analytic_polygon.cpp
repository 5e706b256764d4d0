#include "vv/analytic.hpp"

#include <cmath>
#include <numeric>

namespace vv {

ThresholdSplit thresholdConfigs(const std::vector<Vec3>& pts, const Vec3& u, double tol) {
  const std::size_t m = pts.size();
  std::vector<double> proj(m);
  double scale = 1;
  for (std::size_t j = 0; j < m; ++j) {
    proj[j] = pts[j].dot(u);
    scale = std::max(scale, std::abs(proj[j]));
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return proj[a] < proj[b]; });
  // Groups of (near-)equal projection.
  std::vector<std::vector<int>> groups;
  for (int j : order) {
    if (!groups.empty() && proj[j] - proj[groups.back().back()] <= tol * scale) groups.back().push_back(j);
    else groups.push_back({j});
  }
  ThresholdSplit out;
  out.top = proj[order.back()];
  std::uint32_t mask = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() > 1) out.tie = true;
    for (int j : groups[g]) mask |= 1u << j;
    if (g + 1 == groups.size()) break;
    ThresholdConfig c;
    c.mask = mask;
    c.low = proj[groups[g].front()];
    c.high = proj[groups[g + 1].front()];
    c.width = c.high - c.low;
    c.beta = groups[g].size() == 1 ? groups[g][0] : -1;
    c.omega = groups[g + 1].size() == 1 ? groups[g + 1][0] : -1;
    out.partial.push_back(c);
  }
  return out;
}

double hitWidth(std::uint32_t l, const std::vector<Vec3>& pts, const Vec3& u) {
  double hb = -INFINITY, lw = INFINITY;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    double p = pts[j].dot(u);
    if ((l >> j) & 1) hb = std::max(hb, p);
    else lw = std::min(lw, p);
  }
  if (!std::isfinite(hb) || !std::isfinite(lw)) return 0;
  return std::max(0.0, lw - hb);
}

double LimitReport::term(const std::string& name) const {
  for (auto& [k, v] : terms)
    if (k == name) return v;
  for (auto& [k, v] : coefficients)
    if (k == name) return v;
  throw Error("no term '" + name + "' in report");
}

namespace {

using Real = long double;
struct P2 {
  Real x, y;
};
using Poly = std::vector<P2>;

// Keeps {⟨p,u⟩ ≤ c} (or ≥ c when `below` is false).
Poly clip(const Poly& in, Real ux, Real uy, Real c, bool below) {
  Poly out;
  const std::size_t n = in.size();
  auto side = [&](const P2& p) {
    Real s = ux * p.x + uy * p.y - c;
    return below ? -s : s;  // ≥ 0 means kept
  };
  for (std::size_t i = 0; i < n; ++i) {
    const P2 &A = in[i], &B = in[(i + 1) % n];
    Real sa = side(A), sb = side(B);
    if (sa >= 0) out.push_back(A);
    if ((sa >= 0) != (sb >= 0)) {
      Real t = sa / (sa - sb);
      out.push_back({A.x + t * (B.x - A.x), A.y + t * (B.y - A.y)});
    }
  }
  return out;
}

Real area(const Poly& p) {
  if (p.size() < 3) return 0;
  Real s = 0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i)
    s += (p[i].x - p[0].x) * (p[i + 1].y - p[0].y) - (p[i + 1].x - p[0].x) * (p[i].y - p[0].y);
  return s / 2;
}

struct Strip {
  Real lo, hi;  // s-interval (lo, hi]; lo = −∞ for the full configuration
  std::uint32_t mask;
  bool partial;
};

struct Clipper {
  const std::vector<Vec3>* normals;
  std::vector<std::vector<Strip>> strips;
  RegionVolumeTable* out;
  Real cellEps;

  void run(std::size_t i, const Poly& region, std::uint32_t mask, int cut) {
    if (i == strips.size()) {
      if (!mask) return;
      double A = double(area(region));
      if (!(A > 0)) return;
      RegionEntry& e = out->regions[mask];
      e.total += A;
      (cut == 0 ? e.interior : cut == 1 ? e.edge : cut == 2 ? e.corner : e.other) += A;
      return;
    }
    const Vec3& u = (*normals)[i];
    Real ux = u[0], uy = u[1];
    Real smin = INFINITY, smax = -INFINITY;
    for (auto& p : region) {
      Real s = ux * p.x + uy * p.y;
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    }
    for (const Strip& st : strips[i]) {
      if (st.hi <= smin || st.lo >= smax) continue;
      Poly sub = region;
      if (st.hi < smax) sub = clip(sub, ux, uy, st.hi, true);
      if (st.lo > smin && sub.size() >= 3) sub = clip(sub, ux, uy, st.lo, false);
      if (sub.size() < 3 || area(sub) <= cellEps) continue;
      run(i + 1, sub, mask & st.mask, cut + st.partial);
    }
  }
};

void requirePolygon(const HalfspacePolytope& P, const Lattice& L) {
  if (P.dim != 2 || L.dim != 2) throw Error("polygon expectations need d = 2");
}

}  // namespace

double polygonValidityThreshold(const HalfspacePolytope& P, int n, const Lattice& L) {
  requirePolygon(P, L);
  auto pts = makeWindow(n, 2).worldPoints(L);
  double ext = 0;
  for (auto& p : pts) ext = std::max(ext, p.norm());
  if (ext == 0) ext = 1;
  const std::size_t N = P.vertices.size();
  double feature = *std::min_element(P.facetMeasures.begin(), P.facetMeasures.end());
  double minAngle = kPi;
  for (std::size_t v = 0; v < N; ++v) {
    minAngle = std::min(minAngle, P.interiorAngle(v));
    for (std::size_t e = 0; e < N; ++e) {
      if (e == v || (e + 1) % N == v) continue;  // edges incident to v
      const Vec3 &A = P.vertices[e], &B = P.vertices[(e + 1) % N];
      Vec3 ab = B - A;
      double t = std::clamp((P.vertices[v] - A).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
      feature = std::min(feature, (P.vertices[v] - (A + t * ab)).norm());
    }
  }
  double csc = 1 / std::sin(minAngle);
  return feature / (4 * ext * std::max(1.0, csc));
}

std::vector<double> RegionVolumeTable::expectedCounts() const {
  std::vector<double> out(regions.size(), 0);
  for (std::size_t m = 1; m < regions.size(); ++m) out[m] = regions[m].total / (a * a * det);
  return out;
}

double RegionVolumeTable::bandArea() const {
  double s = 0;
  for (std::size_t m = 1; m + 1 < regions.size(); ++m) s += regions[m].total;
  return s;
}

RegionVolumeTable polygonRegionVolumes(const HalfspacePolytope& P, int n, const Lattice& L, double a,
                                       const PolygonOptions& opt) {
  requirePolygon(P, L);
  if (!(a > 0)) throw Error("a must be positive");
  const Window win = makeWindow(n, 2);
  auto pts = win.worldPoints(L);
  RegionVolumeTable out;
  out.n = n;
  out.a = a;
  out.det = unitCellVolume(L);
  out.aMax = polygonValidityThreshold(P, n, L);
  if (!opt.allowAnyA && !(a < out.aMax))
    throw Error("a = " + fmt17(a) + " is not below the validity threshold a_max = " + fmt17(out.aMax));
  out.regions.assign(win.numConfigs(), {});

  Clipper c;
  c.normals = &P.normals;
  c.out = &out;
  for (std::size_t i = 0; i < P.size(); ++i) {
    ThresholdSplit sp = thresholdConfigs(pts, P.normals[i]);
    if (sp.tie) out.tieNormals.push_back(i);
    const Real t = P.offsets[i], A = a;
    std::vector<Strip> st;
    st.push_back({-INFINITY, t - A * sp.top, win.fullConfig(), false});
    for (auto& k : sp.partial) st.push_back({t - A * k.high, t - A * k.low, k.mask, true});
    c.strips.push_back(st);
  }
  // Anchor box: windows meeting the bounding box of P.
  Vec3 lo = P.vertices[0], hi = P.vertices[0];
  for (auto& v : P.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  Vec3 plo = pts[0], phi = pts[0];
  for (auto& p : pts) {
    plo = plo.cwiseMin(p);
    phi = phi.cwiseMax(p);
  }
  Real x0 = lo[0] - a * phi[0] - a, x1 = hi[0] - a * plo[0] + a;
  Real y0 = lo[1] - a * phi[1] - a, y1 = hi[1] - a * plo[1] + a;
  Poly box = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  c.cellEps = 0;
  c.run(0, box, win.fullConfig(), 0);
  return out;
}

std::vector<double> polygonExpectedCounts(const HalfspacePolytope& P, int n, const Lattice& L, double a,
                                          const PolygonOptions& opt) {
  return polygonRegionVolumes(P, n, L, a, opt).expectedCounts();
}

double expectedEstimate(const std::vector<double>& EN, const WeightTable& T, double a) {
  if (EN.size() != T.size()) throw Error("expected counts and table sizes differ");
  double s = 0;
  for (std::uint32_t m = 1; m < T.size(); ++m)
    if (T.w[m] != 0 && EN[m] != 0) s += toDouble(T.w[m]) * EN[m];
  return s * (T.homogeneous ? std::pow(a, T.q) : 1.0);
}

namespace {

// Shifted polygon {⟨x,u_i⟩ ≤ t_i − a h_i} via consecutive line intersections.
Real shiftedArea(const HalfspacePolytope& P, const std::vector<double>& h, double a) {
  const std::size_t N = P.size();
  Poly v;
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t j = (i + N - 1) % N;
    Real a1 = P.normals[j][0], b1 = P.normals[j][1], c1 = P.offsets[j] - (Real)a * h[j];
    Real a2 = P.normals[i][0], b2 = P.normals[i][1], c2 = P.offsets[i] - (Real)a * h[i];
    Real det = a1 * b2 - a2 * b1;
    v.push_back({(c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det});
  }
  return area(v);
}

struct EdgeData {
  std::vector<ThresholdSplit> split;
  std::vector<double> angle;  // interior angle at vertex i (between edges i−1, i)
};

EdgeData edgeData(const HalfspacePolytope& P, const std::vector<Vec3>& pts) {
  EdgeData d;
  for (std::size_t i = 0; i < P.size(); ++i) {
    d.split.push_back(thresholdConfigs(pts, P.normals[i]));
    d.angle.push_back(P.interiorAngle(i));
  }
  return d;
}

double cotan(double x) { return std::cos(x) / std::sin(x); }

}  // namespace

LimitReport polygonExpectedEstimate(const HalfspacePolytope& P, const WeightTable& T, const Lattice& L,
                                    double a) {
  requirePolygon(P, L);
  if (T.dim != 2) throw Error("table dimension must be 2");
  if (!T.homogeneous) throw Error("closed-form polygon expectation needs a homogeneous table");
  double aMax = polygonValidityThreshold(P, T.n, L);
  if (!(a > 0 && a < aMax))
    throw Error("a = " + fmt17(a) + " is not below the validity threshold a_max = " + fmt17(aMax));
  const Window win = makeWindow(T.n, 2);
  auto pts = win.worldPoints(L);
  auto w = T.asDouble();
  const std::size_t N = P.size();
  EdgeData ed = edgeData(P, pts);
  std::vector<double> h(N);
  for (std::size_t i = 0; i < N; ++i) h[i] = ed.split[i].top;

  Real interior = (Real)w[win.fullConfig()] * shiftedArea(P, h, a);
  Real lead = 0, corr = 0, corner = 0;
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t prev = (i + N - 1) % N, next = (i + 1) % N;
    double th0 = ed.angle[i], th1 = ed.angle[next];
    double cots = cotan(th0) + cotan(th1);
    double hcsc = h[prev] / std::sin(th0) + h[next] / std::sin(th1);
    for (auto& k : ed.split[i].partial) {
      double wk = w[k.mask];
      if (wk == 0) continue;
      lead += (Real)wk * a * k.width * P.facetMeasures[i];
      corr += (Real)wk * a * a * (0.5 * (k.low * k.low - k.high * k.high) * cots - k.width * hcsc);
    }
    // Corner at vertex i, between edges prev and i.
    double csc = 1 / std::sin(th0);
    for (auto& k1 : ed.split[prev].partial)
      for (auto& k2 : ed.split[i].partial) {
        double wk = w[k1.mask & k2.mask];
        if (wk != 0) corner += (Real)wk * a * a * csc * k1.width * k2.width;
      }
  }
  const double scale = std::pow(a, T.q - 2) / unitCellVolume(L);
  LimitReport r;
  r.terms = {{"interior", double(interior * scale)},
             {"edge_leading", double(lead * scale)},
             {"edge_correction", double(corr * scale)},
             {"corner", double(corner * scale)}};
  r.value = double((interior + lead + corr + corner) * scale);
  r.coefficients = {{"a_max", aMax}};
  return r;
}

double polygonExpectedEuler(const HalfspacePolytope& P, const WeightTable& T, const Lattice& L, double a) {
  if (T.q != 0) throw Error("polygonExpectedEuler needs a q = 0 table");
  return polygonExpectedEstimate(P, T, L, a).value;
}

LimitReport parallelogramLimit(const WeightTable& T, double phi, double psi, const Lattice& L, double s1,
                               double s2) {
  if (T.dim != 2 || L.dim != 2) throw Error("parallelogramLimit needs d = 2");
  if (T.q != 0 || !T.homogeneous) throw Error("parallelogramLimit needs a homogeneous q = 0 table");
  if (!(psi > 0 && psi < kPi)) throw Error("psi must lie in (0, pi)");
  const Window win = makeWindow(T.n, 2);
  auto w = T.asDouble();
  if (w[win.fullConfig()] != 0) throw Error("no finite limit: all-black weight is nonzero");

  // v1 and v2 must lie in one component of S¹ \ D.
  for (double d : dSetAngles(L, T.n)) {
    double rel = std::fmod(d - phi + 8 * kPi, 2 * kPi);
    if (rel <= psi + 1e-12 || rel >= 2 * kPi - 1e-12)
      throw Error("direction in D: v1 and v2 are not in one component of S^1 minus D");
  }
  Parallelogram2D par{phi, psi, s1, s2, Vec3::Zero()};
  HalfspacePolytope P = par.toPolytope();
  auto pts = win.worldPoints(L);
  EdgeData ed = edgeData(P, pts);
  const std::size_t N = P.size();  // 4
  for (auto& sp : ed.split)
    if (sp.tie) throw Error("direction in D: an edge normal has tied support points");

  std::vector<double> c(N, 0);
  double mag = 0;
  for (std::size_t i = 0; i < N; ++i)
    for (auto& k : ed.split[i].partial) {
      c[i] += w[k.mask] * k.width;
      mag += std::abs(w[k.mask] * k.width);
    }
  for (std::size_t i = 0; i < 2; ++i)
    if (std::abs(c[i] + c[i + 2]) > 1e-9 * (1 + mag))
      throw Error("no finite limit: the a^-1 edge term does not vanish");

  const double det = unitCellVolume(L);
  Real edge0 = 0, corner = 0;
  const Vec3 u1(-std::sin(phi), std::cos(phi), 0), u2(-std::sin(phi + psi), std::cos(phi + psi), 0);
  Real A = 0, B = 0, C = 0, D = 0;
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t prev = (i + N - 1) % N, next = (i + 1) % N;
    double th0 = ed.angle[i], th1 = ed.angle[next];
    double cots = cotan(th0) + cotan(th1);
    double hcsc = ed.split[prev].top / std::sin(th0) + ed.split[next].top / std::sin(th1);
    for (auto& k : ed.split[i].partial)
      edge0 += (Real)w[k.mask] * (0.5 * (k.low * k.low - k.high * k.high) * cots - k.width * hcsc);
    double csc = 1 / std::sin(th0);
    // Which of ±u1, ±u2 each incident edge normal is.
    auto classify = [&](std::size_t e, int& which, double& sign) {
      const Vec3& u = P.normals[e];
      if (std::abs(std::abs(u.dot(u1)) - 1) < 1e-9) {
        which = 1;
        sign = u.dot(u1) > 0 ? 1 : -1;
      } else {
        which = 2;
        sign = u.dot(u2) > 0 ? 1 : -1;
      }
    };
    int wa, wb;
    double sa, sb;
    classify(prev, wa, sa);
    classify(i, wb, sb);
    bool prevIsU1 = wa == 1;
    for (auto& k1 : ed.split[prev].partial)
      for (auto& k2 : ed.split[i].partial) {
        double wk = w[k1.mask & k2.mask];
        if (wk == 0) continue;
        corner += (Real)wk * csc * k1.width * k2.width;
        const ThresholdConfig& X = prevIsU1 ? k1 : k2;  // u1-type
        const ThresholdConfig& Y = prevIsU1 ? k2 : k1;  // u2-type
        Vec3 dX = pts[X.omega] - pts[X.beta], dY = pts[Y.omega] - pts[Y.beta];
        Real W = (Real)wk * sa * sb / det;
        A += W * dX[1] * dY[1];
        B += W * dX[0] * dY[0];
        C += -W * dX[0] * dY[1];
        D += -W * dX[1] * dY[0];
      }
  }
  const double S1 = std::sin(phi), C1 = std::cos(phi), S2 = std::sin(phi + psi), C2 = std::cos(phi + psi);
  const double csc = 1 / std::sin(psi);
  LimitReport r;
  r.terms = {{"corner", double(corner / det)}, {"edge_a0", double(edge0 / det)}};
  r.value = double((corner + edge0) / det);
  double F1 = C1 * C2 * csc, F2 = S1 * S2 * csc, F3 = std::sin(2 * phi + psi) * csc;
  r.coefficients = {{"alpha1", double(A)},
                    {"alpha2", double(B)},
                    {"alpha3", double((C + D) / 2)},
                    {"alpha0", double((D - C) / 2)},
                    {"F1", F1},
                    {"F2", F2},
                    {"F3", F3},
                    {"corner_from_alpha", double(A * F1 + B * F2 + (C + D) / 2 * F3 + (D - C) / 2)}};
  return r;
}

LimitReport surfaceAreaLimitPolytope(const HalfspacePolytope& P, const WeightTable& T, const Lattice& L) {
  if (T.dim != P.dim || L.dim != P.dim) throw Error("dimension mismatch");
  if (!T.homogeneous || T.q != P.dim - 1) throw Error("surface-area limit needs a homogeneous q = d-1 table");
  const Window win = makeWindow(T.n, T.dim);
  if (T.w[win.fullConfig()] != 0) throw Error("nonzero all-black weight");
  auto pts = win.worldPoints(L);
  auto w = T.asDouble();
  const double det = unitCellVolume(L);
  LimitReport r;
  for (std::size_t i = 0; i < P.size(); ++i) {
    double c = 0;
    for (auto& k : thresholdConfigs(pts, P.normals[i]).partial) c += w[k.mask] * k.width;
    double t = P.facetMeasures[i] * c / det;
    r.terms.push_back({"facet" + std::to_string(i), t});
    r.value += t;
  }
  return r;
}

WeightTable patternTable(int n, int dim, int q, const std::vector<int>& B, const std::vector<int>& W,
                         const Rational& w) {
  WeightTable T = WeightTable::zeros(n, dim, q, "pattern");
  std::uint32_t bm = 0, wm = 0;
  for (int j : B) bm |= 1u << j;
  for (int j : W) wm |= 1u << j;
  if (bm & wm) throw Error("pattern foreground and background overlap");
  if (wm >= T.size() || bm >= T.size()) throw Error("pattern pixel index out of range");
  for (std::uint32_t l = 1; l < T.size(); ++l)
    if ((l & bm) == bm && (l & wm) == 0) T.w[l] = w;
  return T;
}

}  // namespace vv
